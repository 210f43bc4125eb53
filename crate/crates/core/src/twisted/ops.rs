use std::collections::BTreeMap;

use crate::bigraded::{tensor_maps, BasisElem, Bideg, BigradedMap, BigradedModule, SumLayout, TensorLayout, Vector};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::twisted::{Family, TwistedComplex, TwistedMorphism, DIFFERENTIAL};

/// `g ∘ f` with `(g∘f)_m = Σ_{i+j=m} g_i f_j`.
pub fn compose<F: Field>(g: &TwistedMorphism<F>, f: &TwistedMorphism<F>) -> Result<TwistedMorphism<F>> {
    if f.dst() != g.src() {
        return Err(Error::ModuleMismatch("target of f is not the source of g".into()));
    }
    TwistedMorphism::from_family(f.src(), g.dst(), f.family().then(g.family()))
}

/// Two-sided inverse, or `None` when some block of `f_0` is not invertible.
pub fn invert<F: Field>(f: &TwistedMorphism<F>) -> Option<TwistedMorphism<F>> {
    let (a, b) = (f.src().module(), f.dst().module());
    if a.dims() != b.dims() {
        return None;
    }
    let f0 = f.fm(0);
    let mut blocks = BTreeMap::new();
    for (&s, &n) in a.dims() {
        let inv = f0.block_or_zero(s).inverse()?;
        debug_assert_eq!(inv.rows(), n);
        blocks.insert(s, inv);
    }
    let g0 = BigradedMap::new(b, a, Bideg::ZERO, blocks).ok()?;
    let mut g = Family::zero(b, a, Bideg::ZERO);
    g.set(0, g0.clone());
    let bound = Family::<F>::index_bound(b, a, Bideg::ZERO).unwrap_or(0);
    // f∘g = id: f_0 g_m = -Σ_{i>0} f_i g_{m-i}
    for m in 1..=bound {
        let mut acc = BigradedMap::zero(b, b, Family::<F>::bideg_of(Bideg::ZERO, m));
        for (i, fi) in f.family().members() {
            if i == 0 || i > m {
                continue;
            }
            if let Some(gj) = g.get(m - i) {
                acc.add_assign(&fi.compose(gj));
            }
        }
        g.set(m, g0.compose(&acc).neg());
    }
    TwistedMorphism::from_family(f.dst(), f.src(), g).ok()
}

/// `A ⊗ B` with `d_m = d^A_m ⊗ 1 + 1 ⊗ d^B_m`.
pub fn tensor<F: Field>(a: &TwistedComplex<F>, b: &TwistedComplex<F>) -> TwistedComplex<F> {
    let l = TensorLayout::new(vec![a.module().clone(), b.module().clone()]);
    let ia = BigradedMap::identity(a.module());
    let ib = BigradedMap::identity(b.module());
    let top = a.d().max_index().max(b.d().max_index());
    let mut d = Family::zero(l.module(), l.module(), DIFFERENTIAL);
    if let Some(top) = top {
        for m in 0..=top {
            let x = tensor_maps(&[&a.dm(m), &ib], &l, &l).add(&tensor_maps(&[&ia, &b.dm(m)], &l, &l));
            d.set(m, x);
        }
    }
    TwistedComplex::from_family(d).expect("tensor differential")
}

/// `(f ⊗ g)_m = Σ_{i+j=m} f_i ⊗ g_j`.
pub fn tensor_morphisms<F: Field>(f: &TwistedMorphism<F>, g: &TwistedMorphism<F>) -> TwistedMorphism<F> {
    let src = tensor(f.src(), g.src());
    let dst = tensor(f.dst(), g.dst());
    let ls = TensorLayout::new(vec![f.src().module().clone(), g.src().module().clone()]);
    let ld = TensorLayout::new(vec![f.dst().module().clone(), g.dst().module().clone()]);
    let mut out = Family::zero(src.module(), dst.module(), Bideg::ZERO);
    for (i, fi) in f.family().members() {
        for (j, gj) in g.family().members() {
            out.add_to_member(i + j, &F::one(), &tensor_maps(&[fi, gj], &ls, &ld));
        }
    }
    TwistedMorphism::from_family(&src, &dst, out).expect("tensor morphism")
}

/// `A ⊕ B` with the slot layout (`A` first).
pub fn direct_sum<F: Field>(a: &TwistedComplex<F>, b: &TwistedComplex<F>) -> (TwistedComplex<F>, SumLayout) {
    let l = SumLayout::new(vec![(a.module().clone(), Bideg::ZERO), (b.module().clone(), Bideg::ZERO)]);
    let top = a.d().max_index().max(b.d().max_index());
    let mut d = Family::zero(l.module(), l.module(), DIFFERENTIAL);
    if let Some(top) = top {
        for m in 0..=top {
            d.set(m, l.place(0, 0, &a.dm(m)).add(&l.place(1, 1, &b.dm(m))));
        }
    }
    (TwistedComplex::from_family(d).expect("sum differential"), l)
}

/// Basis of the internal hom `[A,B]`: the piece of bidegree `(u,v)` has one
/// basis vector per matrix entry of the maps `A_s -> B_{s+(u,v)}`, ordered by
/// source bidegree `s`, then row, then column.
#[derive(Clone, Debug)]
pub struct HomLayout {
    src: BigradedModule,
    dst: BigradedModule,
    module: BigradedModule,
    /// For each `(u,v)`: `(s, offset, rows, cols)` per nonzero block.
    pieces: BTreeMap<Bideg, Vec<(Bideg, usize, usize, usize)>>,
}

impl HomLayout {
    pub fn new(src: &BigradedModule, dst: &BigradedModule) -> Self {
        let mut pieces: BTreeMap<Bideg, Vec<(Bideg, usize, usize, usize)>> = BTreeMap::new();
        for (&s, &c) in src.dims() {
            for (&t, &r) in dst.dims() {
                pieces.entry(t - s).or_default().push((s, 0, r, c));
            }
        }
        for list in pieces.values_mut() {
            list.sort_by_key(|x| x.0);
            let mut off = 0;
            for x in list.iter_mut() {
                x.1 = off;
                off += x.2 * x.3;
            }
        }
        let module = BigradedModule::from_dims(
            pieces
                .iter()
                .map(|(&b, l)| (b, l.iter().map(|x| x.2 * x.3).sum())),
        );
        HomLayout {
            src: src.clone(),
            dst: dst.clone(),
            module,
            pieces,
        }
    }

    pub fn module(&self) -> &BigradedModule {
        &self.module
    }

    /// The map of bidegree `e.deg` that a basis vector stands for.
    pub fn map_of<F: Field>(&self, e: BasisElem) -> BigradedMap<F> {
        let mut f = BigradedMap::zero(&self.src, &self.dst, e.deg);
        for &(s, off, r, c) in &self.pieces[&e.deg] {
            if e.idx >= off && e.idx < off + r * c {
                let k = e.idx - off;
                let mut m = Matrix::zeros(r, c);
                m[(k / c, k % c)] = F::one();
                f.set_block(s, m);
            }
        }
        f
    }

    /// Coordinates of a homogeneous map.
    pub fn vector_of<F: Field>(&self, f: &BigradedMap<F>) -> Vector<F> {
        let mut v = Vector::new();
        let Some(list) = self.pieces.get(&f.bideg()) else {
            assert!(f.is_zero(), "map outside the hom window");
            return v;
        };
        for &(s, off, r, c) in list {
            if let Some(m) = f.block(s) {
                for i in 0..r {
                    for j in 0..c {
                        v.add_term(BasisElem::new(f.bideg(), off + i * c + j), m[(i, j)].clone());
                    }
                }
            }
        }
        v
    }
}

/// The internal hom `[A,B]` with `d_i f = d_i^B f - (-1)^{v + i(u+v)} f d_i^A`
/// for `f` of bidegree `(u,v)`.
pub fn internal_hom<F: Field>(a: &TwistedComplex<F>, b: &TwistedComplex<F>) -> (TwistedComplex<F>, HomLayout) {
    let l = HomLayout::new(a.module(), b.module());
    let top = a.d().max_index().max(b.d().max_index());
    let mut d = Family::zero(l.module(), l.module(), DIFFERENTIAL);
    if let Some(top) = top {
        for i in 0..=top {
            let (da, db) = (a.dm(i), b.dm(i));
            let x = BigradedMap::from_fn(l.module(), l.module(), Family::<F>::bideg_of(DIFFERENTIAL, i), |e| {
                let f = l.map_of::<F>(e);
                let (u, v) = (e.deg.h() as i64, e.deg.v() as i64);
                let odd = (v + i as i64 * (u + v)).rem_euclid(2) == 1;
                let mut y = db.compose(&f);
                y.add_scaled_assign(&-F::sign(odd), &f.compose(&da));
                l.vector_of(&y)
            });
            d.set(i, x);
        }
    }
    (TwistedComplex::from_family(d).expect("hom differential"), l)
}
