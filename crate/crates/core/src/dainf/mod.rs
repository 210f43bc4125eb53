//! Derived A-infinity algebras, their morphisms and `r`-homotopies, twisted
//! dgas acting by tensor product, and totalization to filtered A-infinity
//! algebras.

mod eval;
mod filtered;
mod homotopy;
mod path;
pub mod signs;
mod solve;
mod tensor;

pub use filtered::{check_filtered_ainf, tot_dainf, FilteredAInf, TotalOperation};
pub use homotopy::{
    assemble_homotopy_dainf, check_r_homotopy_dainf, check_r_homotopy_dainf_assembled, check_r_homotopy_dainf_direct,
    homotopy_dainf_operator, homotopy_dainf_residual, homotopy_from_path_morphism, solve_r_homotopy_dainf,
    DAInfHomotopy,
};
pub use path::{lambda_to_path, path_dainf, path_dainf_morphism, path_via_tensor, DAInfPath};
pub use solve::{solve_affine, MapUnknowns};

pub use tensor::{
    diagonal_delta, iterated_mu, lambda_r_dga, strict_tensor_right, tensor_dga_morphism, tensor_twisted_dga, LambdaR,
    TwistedDga,
};

use std::collections::BTreeMap;

use crate::bigraded::{extend_tensor, Bideg, BigradedMap, BigradedModule, Factor, LinComb, TensorLayout, TensorVector, Vector};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtered::{is_er_quasi_iso, spectral_page};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::twisted::{TwistedComplex, TwistedMorphism};

use eval::{eval_composite, padded, sequences, Accumulator, OpTable, Powers};

/// Bidegree `(-i, 2-i-j)` of the structure map `m_{ij}`.
pub fn structure_bideg(i: usize, j: usize) -> Bideg {
    Bideg(-(i as i32), 2 - i as i32 - j as i32)
}

/// Bidegree `(-i, 1-i-j)` of a morphism component `f_{ij}`.
pub fn morphism_bideg(i: usize, j: usize) -> Bideg {
    Bideg(-(i as i32), 1 - i as i32 - j as i32)
}

/// Validates and prunes an indexed family of maps `M^{⊗j} -> N`.
fn collect_maps<F: Field>(
    src: &BigradedModule,
    dst: &BigradedModule,
    maps: impl IntoIterator<Item = ((usize, usize), BigradedMap<F>)>,
    bideg: impl Fn(usize, usize) -> Bideg,
) -> Result<BTreeMap<(usize, usize), BigradedMap<F>>> {
    let mut powers = Powers::new(src);
    let mut out = BTreeMap::new();
    for ((i, j), m) in maps {
        if j == 0 {
            return Err(Error::Invalid(format!("component ({i},{j}) has arity zero")));
        }
        let expected = bideg(i, j);
        if m.bideg() != expected {
            return Err(Error::Bidegree {
                expected,
                found: m.bideg(),
            });
        }
        if m.src() != powers.get(j).module() {
            return Err(Error::ModuleMismatch(format!("component ({i},{j}) has the wrong source")));
        }
        if m.dst() != dst {
            return Err(Error::ModuleMismatch(format!("component ({i},{j}) has the wrong target")));
        }
        if out.contains_key(&(i, j)) {
            return Err(Error::Invalid(format!("component ({i},{j}) given twice")));
        }
        if !m.is_zero() {
            out.insert((i, j), m);
        }
    }
    Ok(out)
}

/// A bigraded module with maps `m_{ij}: A^{⊗j} -> A` of bidegree
/// `(-i, 2-i-j)`; only nonzero maps are stored.
#[derive(Clone, Debug)]
pub struct DAInfAlgebra<F> {
    module: BigradedModule,
    maps: BTreeMap<(usize, usize), BigradedMap<F>>,
}

impl_field_eq!(DAInfAlgebra { module, maps });

impl<F: Field> DAInfAlgebra<F> {
    /// Checks shapes only; the relations are checked by [`check_dainf`].
    pub fn new(
        module: BigradedModule,
        maps: impl IntoIterator<Item = ((usize, usize), BigradedMap<F>)>,
    ) -> Result<Self> {
        let maps = collect_maps(&module, &module, maps, structure_bideg)?;
        Ok(DAInfAlgebra { module, maps })
    }

    /// All products zero: the twisted complex `(A, d_i)` as `m_{i1} = d_i`.
    pub fn from_twisted(a: &TwistedComplex<F>) -> Self {
        DAInfAlgebra {
            module: a.module().clone(),
            maps: a.d().members().filter(|(_, d)| !d.is_zero()).map(|(i, d)| ((i, 1), d.clone())).collect(),
        }
    }

    pub fn trivial(module: BigradedModule) -> Self {
        DAInfAlgebra {
            module,
            maps: BTreeMap::new(),
        }
    }

    /// The ground field with no operations.
    pub fn unit() -> Self {
        Self::trivial(BigradedModule::unit())
    }

    pub fn module(&self) -> &BigradedModule {
        &self.module
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), BigradedMap<F>> {
        &self.maps
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&BigradedMap<F>> {
        self.maps.get(&(i, j))
    }

    /// `m_{ij}`, zero when not stored.
    pub fn m(&self, i: usize, j: usize) -> BigradedMap<F> {
        self.maps.get(&(i, j)).cloned().unwrap_or_else(|| {
            BigradedMap::zero(TensorLayout::power(&self.module, j).module(), &self.module, structure_bideg(i, j))
        })
    }

    pub fn max_arity(&self) -> usize {
        self.maps.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// True when `m_{ij} = 0` for all `j >= 2`.
    pub fn has_zero_products(&self) -> bool {
        self.maps.keys().all(|k| k.1 == 1)
    }
}

/// A family `f_{ij}: A^{⊗j} -> B` of bidegree `(-i, 1-i-j)`.
#[derive(Clone, Debug)]
pub struct DAInfMorphism<F> {
    src: DAInfAlgebra<F>,
    dst: DAInfAlgebra<F>,
    maps: BTreeMap<(usize, usize), BigradedMap<F>>,
}

impl_field_eq!(DAInfMorphism { src, dst, maps });

impl<F: Field> DAInfMorphism<F> {
    /// Checks shapes only; the relations are checked by [`check_dainf_morphism`].
    pub fn new(
        src: &DAInfAlgebra<F>,
        dst: &DAInfAlgebra<F>,
        maps: impl IntoIterator<Item = ((usize, usize), BigradedMap<F>)>,
    ) -> Result<Self> {
        let maps = collect_maps(src.module(), dst.module(), maps, morphism_bideg)?;
        Ok(DAInfMorphism {
            src: src.clone(),
            dst: dst.clone(),
            maps,
        })
    }

    /// The morphism with `f_{01} = f` and nothing else.
    pub fn strict(src: &DAInfAlgebra<F>, dst: &DAInfAlgebra<F>, f: BigradedMap<F>) -> Result<Self> {
        Self::new(src, dst, [((0, 1), f)])
    }

    pub fn identity(a: &DAInfAlgebra<F>) -> Self {
        Self::strict(a, a, BigradedMap::identity(a.module())).expect("identity")
    }

    pub fn src(&self) -> &DAInfAlgebra<F> {
        &self.src
    }

    pub fn dst(&self) -> &DAInfAlgebra<F> {
        &self.dst
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), BigradedMap<F>> {
        &self.maps
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&BigradedMap<F>> {
        self.maps.get(&(i, j))
    }

    /// `f_{ij}`, zero when not stored.
    pub fn f(&self, i: usize, j: usize) -> BigradedMap<F> {
        self.maps.get(&(i, j)).cloned().unwrap_or_else(|| {
            BigradedMap::zero(
                TensorLayout::power(self.src.module(), j).module(),
                self.dst.module(),
                morphism_bideg(i, j),
            )
        })
    }

    pub fn is_strict(&self) -> bool {
        self.maps.keys().all(|&k| k == (0, 1))
    }

    pub fn max_arity(&self) -> usize {
        self.maps.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Components of arity at most `n`.
    pub fn truncated(&self, n: usize) -> Self {
        DAInfMorphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            maps: self.maps.iter().filter(|(k, _)| k.1 <= n).map(|(&k, m)| (k, m.clone())).collect(),
        }
    }
}

/// Left side of `(A_{uv})` for every `(u, v)` reached by a pair of stored
/// maps; only nonzero entries are returned. Entry `(u, v)` has bidegree
/// `(-u, 3-u-v)`.
pub fn dainf_residual<F: Field>(a: &DAInfAlgebra<F>) -> BTreeMap<(usize, usize), BigradedMap<F>> {
    let mut powers = Powers::new(a.module());
    let ops = OpTable::new(&a.maps, &mut powers);
    let mut acc = Accumulator::new();
    let keys: Vec<(usize, usize)> = ops.keys().collect();
    let max_v = 2 * ops.max_arity();
    for v in 1..max_v {
        let basis = powers.basis(v);
        for &(i, j) in &keys {
            for &(p, q) in &keys {
                if j + q - 1 != v {
                    continue;
                }
                let outer = ops.get(i, j).unwrap();
                let inner = ops.get(p, q).unwrap();
                for r in 0..j {
                    let t = j - 1 - r;
                    let c = F::sign(signs::relation(r, q, t, p, j));
                    let factors = padded(r, inner, t);
                    for (e, x) in &basis {
                        acc.add((i + p, v), *e, &c, &eval_composite(outer, &factors, x));
                    }
                }
            }
        }
    }
    acc.into_maps(&mut powers, a.module(), |(u, v)| Bideg(-(u as i32), 3 - u as i32 - v as i32))
}

fn report_residual<F: Field>(rep: &mut Report, name: &str, res: &BTreeMap<(usize, usize), BigradedMap<F>>) {
    for (&(u, v), m) in res {
        for s in m.nonzero_sources() {
            rep.fail(format!("{name}_{{{u},{v}}}"), Some(s), "");
        }
    }
}

/// Relations `(A_{uv})`; every failing `(u, v)` and source bidegree is listed.
pub fn check_dainf<F: Field>(a: &DAInfAlgebra<F>) -> Report {
    let mut rep = Report::new("dA-infinity relations");
    report_residual(&mut rep, "A", &dainf_residual(a));
    rep
}

/// Left minus right side of `(B_{uv})`. Entry `(u, v)` has bidegree `(-u, 2-u-v)`.
pub fn dainf_morphism_residual<F: Field>(f: &DAInfMorphism<F>) -> BTreeMap<(usize, usize), BigradedMap<F>> {
    let (a, b) = (f.src(), f.dst());
    let mut pa = Powers::new(a.module());
    let mut pb = Powers::new(b.module());
    let ma = OpTable::new(&a.maps, &mut pa);
    let mb = OpTable::new(&b.maps, &mut pb);
    let fo = OpTable::new(&f.maps, &mut pa);
    let fkeys: Vec<(usize, usize)> = fo.keys().collect();
    let akeys: Vec<(usize, usize)> = ma.keys().collect();
    let mut acc = Accumulator::new();
    let max_v = (fo.max_arity() + ma.max_arity()).max(mb.max_arity() * fo.max_arity());
    let minus = -F::one();
    for v in 1..=max_v {
        let basis = pa.basis(v);
        // f_{ij}(1^r ⊗ m_{pq} ⊗ 1^t)
        for &(i, j) in &fkeys {
            for &(p, q) in &akeys {
                if j + q - 1 != v {
                    continue;
                }
                let (outer, inner) = (fo.get(i, j).unwrap(), ma.get(p, q).unwrap());
                for r in 0..j {
                    let t = j - 1 - r;
                    let c = F::sign(signs::relation(r, q, t, p, j));
                    let factors = padded(r, inner, t);
                    for (e, x) in &basis {
                        acc.add((i + p, v), *e, &c, &eval_composite(outer, &factors, x));
                    }
                }
            }
        }
        // m^B_{ij}(f ⊗ ... ⊗ f)
        for (i, j) in mb.keys() {
            let outer = mb.get(i, j).unwrap();
            for seq in sequences(&fkeys, j, v) {
                let u = i + seq.iter().map(|x| x.0).sum::<usize>();
                let c = minus.clone() * F::sign(signs::morphism(u, &seq));
                let factors: Vec<Factor<'_, F>> = seq.iter().map(|&(p, q)| Factor::Op(fo.get(p, q).unwrap())).collect();
                for (e, x) in &basis {
                    acc.add((u, v), *e, &c, &eval_composite(outer, &factors, x));
                }
            }
        }
    }
    acc.into_maps(&mut pa, b.module(), |(u, v)| Bideg(-(u as i32), 2 - u as i32 - v as i32))
}

/// Relations `(B_{uv})`.
pub fn check_dainf_morphism<F: Field>(f: &DAInfMorphism<F>) -> Report {
    let mut rep = Report::new("dA-infinity morphism relations");
    report_residual(&mut rep, "B", &dainf_morphism_residual(f));
    rep
}

/// Components `(u, k)` of `f ∘ g` selected by `keep`.
fn composite_components<F: Field>(
    f: &DAInfMorphism<F>,
    g: &BTreeMap<(usize, usize), BigradedMap<F>>,
    src: &BigradedModule,
    keep: impl Fn(usize, usize) -> bool,
) -> BTreeMap<(usize, usize), BigradedMap<F>> {
    let mut pa = Powers::new(src);
    let mut pb = Powers::new(f.src().module());
    let go = OpTable::new(g, &mut pa);
    let fo = OpTable::new(&f.maps, &mut pb);
    let gkeys: Vec<(usize, usize)> = go.keys().collect();
    let mut acc = Accumulator::new();
    for k in 1..=fo.max_arity() * go.max_arity() {
        let basis = pa.basis(k);
        for (i, r) in fo.keys() {
            let outer = fo.get(i, r).unwrap();
            for seq in sequences(&gkeys, r, k) {
                let u = i + seq.iter().map(|x| x.0).sum::<usize>();
                if !keep(u, k) {
                    continue;
                }
                let c = F::sign(signs::composition(&seq));
                let factors: Vec<Factor<'_, F>> = seq.iter().map(|&(p, q)| Factor::Op(go.get(p, q).unwrap())).collect();
                for (e, x) in &basis {
                    acc.add((u, k), *e, &c, &eval_composite(outer, &factors, x));
                }
            }
        }
    }
    acc.into_maps(&mut pa, f.dst().module(), |(u, k)| morphism_bideg(u, k))
}

/// `f ∘ g`.
pub fn compose_dainf<F: Field>(f: &DAInfMorphism<F>, g: &DAInfMorphism<F>) -> Result<DAInfMorphism<F>> {
    if g.dst() != f.src() {
        return Err(Error::ModuleMismatch("compose: target of g is not the source of f".into()));
    }
    Ok(DAInfMorphism {
        src: g.src.clone(),
        dst: f.dst.clone(),
        maps: composite_components(f, &g.maps, g.src().module(), |_, _| true),
    })
}

/// Blockwise inverse of a bidegree `(0,0)` map, if every block is invertible.
fn invert_blocks<F: Field>(f: &BigradedMap<F>) -> Option<BigradedMap<F>> {
    if f.src().dims() != f.dst().dims() {
        return None;
    }
    let mut blocks = Vec::new();
    for (&s, &n) in f.src().dims() {
        let inv = f.block(s).map_or_else(|| Matrix::zeros(n, n), |m| m.clone()).inverse()?;
        blocks.push((s, inv));
    }
    Some(BigradedMap::new(f.dst(), f.src(), Bideg::ZERO, blocks).expect("inverse blocks"))
}

/// The inverse `g` of `f`, solved component by component from the top term
/// `f_{01} g_{uk}` of `(fg)_{uk}`. Components of arity up to `max_arity` are
/// computed; when `f` has only arity-one components the inverse has too and
/// is exact. `None` when `f_{01}` is not invertible.
pub fn invert_dainf<F: Field>(f: &DAInfMorphism<F>, max_arity: usize) -> Option<DAInfMorphism<F>> {
    let f01 = f.get(0, 1).cloned().unwrap_or_else(|| f.f(0, 1));
    let inv = invert_blocks(&f01)?;
    let (a, b) = (f.src(), f.dst());
    let cap = if f.maps.keys().all(|k| k.1 == 1) { 1 } else { max_arity.max(1) };
    let mut g: BTreeMap<(usize, usize), BigradedMap<F>> = BTreeMap::new();
    g.insert((0, 1), inv.clone());
    let (Some((_, hi)), Some((lo, _))) = (b.module().horizontal_range(), a.module().horizontal_range()) else {
        return Some(DAInfMorphism { src: b.clone(), dst: a.clone(), maps: g });
    };
    // ascending (k, u): every other term of (fg)_{uk} only involves components already solved
    for k in 1..=cap {
        for u in 0..=(k as i32 * hi - lo).max(0) as usize {
            if (u, k) == (0, 1) {
                continue;
            }
            let comp = composite_components(f, &g, b.module(), |x, y| (x, y) == (u, k));
            let Some(rest) = comp.get(&(u, k)) else { continue };
            let guk = inv.compose(rest).neg();
            if !guk.is_zero() {
                g.insert((u, k), guk);
            }
        }
    }
    Some(DAInfMorphism {
        src: b.clone(),
        dst: a.clone(),
        maps: g,
    })
}

/// `U(A) = (A, m_{i1})`.
pub fn underlying_twisted<F: Field>(a: &DAInfAlgebra<F>) -> TwistedComplex<F> {
    let d = a.maps.iter().filter(|(k, _)| k.1 == 1).map(|(k, m)| (k.0, m.clone()));
    TwistedComplex::new(a.module().clone(), d).expect("arity-one maps form a family")
}

/// `U(f) = {f_{i1}}`.
pub fn underlying_twisted_morphism<F: Field>(f: &DAInfMorphism<F>) -> TwistedMorphism<F> {
    let parts = f.maps.iter().filter(|(k, _)| k.1 == 1).map(|(k, m)| (k.0, m.clone()));
    TwistedMorphism::new(&underlying_twisted(f.src()), &underlying_twisted(f.dst()), parts)
        .expect("arity-one components form a family")
}

/// `U(f)` is an `E_r`-quasi-isomorphism.
pub fn is_er_quasi_iso_dainf<F: Field>(f: &DAInfMorphism<F>, r: usize) -> Result<bool> {
    is_er_quasi_iso(&underlying_twisted_morphism(f), r)
}

/// `E_r` of the underlying twisted complex, as nonzero dimensions.
pub fn page_dims_dainf<F: Field>(a: &DAInfAlgebra<F>, r: usize) -> BTreeMap<Bideg, usize> {
    spectral_page(&underlying_twisted(a), r).dims()
}

/// Transports an algebra along a bidegree `(0,0)` isomorphism `φ: A -> A'`:
/// `m'_{ij} = φ m_{ij} (φ^{-1})^{⊗j}`.
pub fn transport_algebra<F: Field>(a: &DAInfAlgebra<F>, phi: &BigradedMap<F>, phi_inv: &BigradedMap<F>) -> DAInfAlgebra<F> {
    let target = phi.dst().clone();
    let mut ps = Powers::new(a.module());
    let mut pt = Powers::new(&target);
    let mut maps = BTreeMap::new();
    for (&(i, j), m) in &a.maps {
        let src_lay = pt.get(j).clone();
        let in_lay = ps.get(j).clone();
        let moved = BigradedMap::from_fn(src_lay.module(), &target, m.bideg(), |e| {
            let mut x: TensorVector<F> = LinComb::single(Vec::new(), F::one());
            for y in src_lay.tuple(e) {
                x = extend_tensor(&x, &phi_inv.apply_basis(*y));
            }
            let v: Vector<F> = in_lay.flatten(&x);
            phi.apply(&m.apply(&v))
        });
        if !moved.is_zero() {
            maps.insert((i, j), moved);
        }
    }
    DAInfAlgebra { module: target, maps }
}

#[cfg(test)]
mod tests;
