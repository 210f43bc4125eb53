use std::collections::BTreeMap;

use crate::bigraded::{BasisElem, Bideg, BigradedMap, BigradedModule, Operation, TensorLayout, Vector};
use crate::error::{Error, Result};
use crate::field::Field;

use super::eval::Powers;
use super::{DAInfAlgebra, DAInfMorphism};

/// A dA-infinity algebra whose only structure maps are `μ_{i1}` and `μ_{02}`.
#[derive(Clone, Debug)]
pub struct TwistedDga<F> {
    algebra: DAInfAlgebra<F>,
}

impl_field_eq!(TwistedDga { algebra });

impl<F: Field> TwistedDga<F> {
    pub fn new(algebra: DAInfAlgebra<F>) -> Result<Self> {
        if let Some(&(i, j)) = algebra.maps().keys().find(|&&(i, j)| j > 2 || (j == 2 && i > 0)) {
            return Err(Error::Invalid(format!("a twisted dga has no structure map ({i},{j})")));
        }
        Ok(TwistedDga { algebra })
    }

    /// The ground field with `μ_{02}(1,1) = 1`.
    pub fn unit() -> Self {
        let m = BigradedModule::unit();
        let mu = BigradedMap::from_fn(TensorLayout::power(&m, 2).module(), &m, Bideg::ZERO, |_| {
            Vector::single(BasisElem::new(Bideg::ZERO, 0), F::one())
        });
        TwistedDga::new(DAInfAlgebra::new(m, [((0, 2), mu)]).expect("unit")).expect("unit")
    }

    pub fn algebra(&self) -> &DAInfAlgebra<F> {
        &self.algebra
    }

    pub fn module(&self) -> &BigradedModule {
        self.algebra.module()
    }

    pub fn product(&self) -> BigradedMap<F> {
        self.algebra.m(0, 2)
    }
}

/// `μ_n` on a pure tensor, by left-associated multiplication.
fn multiply<F: Field>(mu: &Operation<F>, xs: &[BasisElem]) -> Vector<F> {
    let mut acc = Vector::single(xs[0], F::one());
    for &y in &xs[1..] {
        let mut next = Vector::new();
        for (x, c) in acc.iter() {
            for (e, v) in mu.eval(&[*x, y]) {
                next.add_term(*e, c.clone() * v.clone());
            }
        }
        if next.is_zero() {
            return next;
        }
        acc = next;
    }
    acc
}

/// `μ_n = μ_{02}(μ_{n-1} ⊗ 1)` as a map `Λ^{⊗n} -> Λ`.
pub fn iterated_mu<F: Field>(l: &TwistedDga<F>, n: usize) -> Result<BigradedMap<F>> {
    if n < 2 {
        return Err(Error::Invalid(format!("μ_n needs n >= 2, got {n}")));
    }
    let mut powers = Powers::new(l.module());
    let mu = Operation::from_map(&l.product(), powers.get(2));
    let lay = powers.get(n);
    Ok(BigradedMap::from_fn(lay.module(), l.module(), Bideg::ZERO, |e| multiply(&mu, lay.tuple(e))))
}

/// Splits pure tensors of `(Λ ⊗ A)^{⊗j}` into `(λ_1..λ_j, a_1..a_j)` and
/// returns the sign of `τ_j`: `Σ_{s<t} <a_s, λ_t>`.
fn shuffle(pair: &TensorLayout, xs: &[BasisElem]) -> (Vec<BasisElem>, Vec<BasisElem>, bool) {
    let mut lam = Vec::with_capacity(xs.len());
    let mut a: Vec<BasisElem> = Vec::with_capacity(xs.len());
    let mut odd = false;
    for x in xs {
        let t = pair.tuple(*x);
        for prev in &a {
            odd ^= t[0].deg.dot_odd(prev.deg);
        }
        lam.push(t[0]);
        a.push(t[1]);
    }
    (lam, a, odd)
}

/// `(μ_j ⊗ φ)τ_j` on one pure tensor, for `φ` given by its values on pure
/// tensors of `A` and of bidegree `deg`; `μ_1 = id`.
fn twisted_product<F: Field>(
    pair_src: &TensorLayout,
    pair_dst: &TensorLayout,
    mu: &Operation<F>,
    deg: Bideg,
    phi: impl Fn(&[BasisElem]) -> Vector<F>,
    xs: &[BasisElem],
) -> Vector<F> {
    let (lam, a, odd) = shuffle(pair_src, xs);
    let lam_deg: Bideg = lam.iter().map(|e| e.deg).sum();
    let sign = F::sign(odd ^ deg.dot_odd(lam_deg));
    let left = if lam.len() == 1 { Vector::single(lam[0], F::one()) } else { multiply(mu, &lam) };
    if left.is_zero() {
        return left;
    }
    let right = phi(&a);
    let mut out = Vector::new();
    for (x, c) in left.iter() {
        for (y, d) in right.iter() {
            out.add_term(pair_dst.elem(&[*x, *y]), sign.clone() * c.clone() * d.clone());
        }
    }
    out
}

/// `Λ ⊗ A` with `m̂_{i1} = μ_{i1} ⊗ 1 + 1 ⊗ m_{i1}` and
/// `m̂_{ij} = (μ_j ⊗ m_{ij})τ_j` for `j >= 2`.
pub fn tensor_twisted_dga<F: Field>(l: &TwistedDga<F>, a: &DAInfAlgebra<F>) -> (DAInfAlgebra<F>, TensorLayout) {
    let pair = TensorLayout::new(vec![l.module().clone(), a.module().clone()]);
    let module = pair.module().clone();
    let mut lp = Powers::new(l.module());
    let mut ap = Powers::new(a.module());
    let mut tp = Powers::new(&module);
    let mu = Operation::from_map(&l.product(), lp.get(2));
    let mut maps: BTreeMap<(usize, usize), BigradedMap<F>> = BTreeMap::new();
    for (&(i, j), m) in a.maps() {
        let op = Operation::from_map(m, ap.get(j));
        let lay = tp.get(j);
        let hat = BigradedMap::from_fn(lay.module(), &module, m.bideg(), |e| {
            twisted_product(&pair, &pair, &mu, m.bideg(), |xs| op.eval(xs).iter().cloned().collect(), lay.tuple(e))
        });
        maps.insert((i, j), hat);
    }
    for (&(i, j), d) in l.algebra().maps() {
        if j != 1 {
            continue;
        }
        let lam_part = BigradedMap::from_fn(&module, &module, d.bideg(), |e| {
            let t = pair.tuple(e);
            let mut out = Vector::new();
            for (x, c) in d.apply_basis(t[0]).iter() {
                out.add_term(pair.elem(&[*x, t[1]]), c.clone());
            }
            out
        });
        maps.entry((i, 1))
            .and_modify(|m| m.add_assign(&lam_part))
            .or_insert(lam_part);
    }
    (DAInfAlgebra::new(module, maps).expect("tensor structure maps"), pair)
}

/// `f̂_{ij} = (μ_j ⊗ f_{ij})τ_j`, with `f̂_{i1} = 1 ⊗ f_{i1}`.
pub fn tensor_dga_morphism<F: Field>(l: &TwistedDga<F>, f: &DAInfMorphism<F>) -> DAInfMorphism<F> {
    let (src, ls) = tensor_twisted_dga(l, f.src());
    let (dst, ld) = tensor_twisted_dga(l, f.dst());
    let mut lp = Powers::new(l.module());
    let mut ap = Powers::new(f.src().module());
    let mut tp = Powers::new(src.module());
    let mu = Operation::from_map(&l.product(), lp.get(2));
    let mut maps = BTreeMap::new();
    for (&(i, j), m) in f.maps() {
        let op = Operation::from_map(m, ap.get(j));
        let lay = tp.get(j);
        let hat = BigradedMap::from_fn(lay.module(), dst.module(), m.bideg(), |e| {
            twisted_product(&ls, &ld, &mu, m.bideg(), |xs| op.eval(xs).iter().cloned().collect(), lay.tuple(e))
        });
        maps.insert((i, j), hat);
    }
    DAInfMorphism::new(&src, &dst, maps).expect("tensor morphism components")
}

/// `φ ⊗ 1_A: Λ ⊗ A -> Λ' ⊗ A` for a strict morphism `φ` of twisted dgas.
pub fn strict_tensor_right<F: Field>(
    phi: &DAInfMorphism<F>,
    l: &TwistedDga<F>,
    l2: &TwistedDga<F>,
    a: &DAInfAlgebra<F>,
) -> Result<DAInfMorphism<F>> {
    if !phi.is_strict() {
        return Err(Error::Invalid("φ ⊗ 1 needs a strict φ".into()));
    }
    if phi.src() != l.algebra() || phi.dst() != l2.algebra() {
        return Err(Error::ModuleMismatch("φ does not run between the given dgas".into()));
    }
    let (src, ls) = tensor_twisted_dga(l, a);
    let (dst, ld) = tensor_twisted_dga(l2, a);
    let p = phi.f(0, 1);
    let map = BigradedMap::from_fn(src.module(), dst.module(), Bideg::ZERO, |e| {
        let t = ls.tuple(e);
        p.apply_basis(t[0]).iter().map(|(x, c)| (ld.elem(&[*x, t[1]]), c.clone())).collect()
    });
    DAInfMorphism::strict(&src, &dst, map)
}

/// `Λ_r` with its strict morphisms `ι: R -> Λ_r` and `∂^±: Λ_r -> R`.
#[derive(Clone, Debug)]
pub struct LambdaR<F> {
    pub r: usize,
    pub dga: TwistedDga<F>,
    pub minus: DAInfMorphism<F>,
    pub plus: DAInfMorphism<F>,
    pub iota: DAInfMorphism<F>,
}

impl<F: Field> LambdaR<F> {
    pub fn e_minus() -> BasisElem {
        BasisElem::new(Bideg::ZERO, 0)
    }

    pub fn e_plus() -> BasisElem {
        BasisElem::new(Bideg::ZERO, 1)
    }

    pub fn u(&self) -> BasisElem {
        BasisElem::new(lambda_u_deg(self.r), 0)
    }
}

fn lambda_u_deg(r: usize) -> Bideg {
    Bideg(-(r as i32), 1 - r as i32)
}

/// `Λ_r`: `e_-, e_+` in bidegree `(0,0)`, `u` in `(-r, 1-r)`,
/// `μ_{r1}(e_∓) = ∓u` and `e_-e_- = e_-`, `e_+e_+ = e_+`, `e_-u = ue_+ = u`.
pub fn lambda_r_dga<F: Field>(r: usize) -> LambdaR<F> {
    let ud = lambda_u_deg(r);
    let m = BigradedModule::from_dims([(Bideg::ZERO, 2), (ud, 1)]);
    let (em, ep, u) = (LambdaR::<F>::e_minus(), LambdaR::<F>::e_plus(), BasisElem::new(ud, 0));
    let d = BigradedMap::from_fn(&m, &m, Bideg(-(r as i32), 1 - r as i32), |x| {
        if x == em {
            Vector::single(u, -F::one())
        } else if x == ep {
            Vector::single(u, F::one())
        } else {
            Vector::new()
        }
    });
    let sq = TensorLayout::power(&m, 2);
    let mu = BigradedMap::from_fn(sq.module(), &m, Bideg::ZERO, |x| {
        let t = sq.tuple(x);
        let v = match (t[0], t[1]) {
            (a, b) if a == em && b == em => Some(em),
            (a, b) if a == ep && b == ep => Some(ep),
            (a, b) if a == em && b == u => Some(u),
            (a, b) if a == u && b == ep => Some(u),
            _ => None,
        };
        v.map_or_else(Vector::new, |e| Vector::single(e, F::one()))
    });
    let alg = DAInfAlgebra::new(m.clone(), [((r, 1), d), ((0, 2), mu)]).expect("Λ_r shapes");
    let unit = TwistedDga::<F>::unit();
    let one = BasisElem::new(Bideg::ZERO, 0);
    let proj = |keep: BasisElem| {
        BigradedMap::from_fn(&m, unit.module(), Bideg::ZERO, move |x| {
            if x == keep {
                Vector::single(one, F::one())
            } else {
                Vector::new()
            }
        })
    };
    let iota = BigradedMap::from_fn(unit.module(), &m, Bideg::ZERO, |_| {
        [(em, F::one()), (ep, F::one())].into_iter().collect()
    });
    LambdaR {
        r,
        minus: DAInfMorphism::strict(&alg, unit.algebra(), proj(em)).expect("∂⁻"),
        plus: DAInfMorphism::strict(&alg, unit.algebra(), proj(ep)).expect("∂⁺"),
        iota: DAInfMorphism::strict(unit.algebra(), &alg, iota).expect("ι"),
        dga: TwistedDga::new(alg).expect("Λ_r"),
    }
}

/// `Δ: Λ_r -> Λ_r ⊗ Λ_r`, `Δ(e_-) = e_-⊗(e_-+e_+) + e_+⊗e_-`,
/// `Δ(e_+) = e_+⊗e_+`, `Δ(u) = u⊗e_+ + e_+⊗u`.
pub fn diagonal_delta<F: Field>(r: usize) -> (DAInfMorphism<F>, TensorLayout) {
    let l = lambda_r_dga::<F>(r);
    let (dst, lay) = tensor_twisted_dga(&l.dga, l.dga.algebra());
    let (em, ep, u) = (LambdaR::<F>::e_minus(), LambdaR::<F>::e_plus(), l.u());
    let map = BigradedMap::from_fn(l.dga.module(), dst.module(), Bideg::ZERO, |x| {
        let terms: Vec<(BasisElem, BasisElem)> = if x == em {
            vec![(em, em), (em, ep), (ep, em)]
        } else if x == ep {
            vec![(ep, ep)]
        } else {
            vec![(u, ep), (ep, u)]
        };
        terms.into_iter().map(|(a, b)| (lay.elem(&[a, b]), F::one())).collect()
    });
    (DAInfMorphism::strict(l.dga.algebra(), &dst, map).expect("Δ"), lay)
}
