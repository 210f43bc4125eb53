//! Totalization of bounded dA∞-algebras into filtered A∞-algebras.

use std::collections::{BTreeMap, HashMap};

use crate::bigraded::{BasisElem, BigradedModule, TensorLayout};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtered::TotalMap;
use crate::report::Report;

use super::DAInfAlgebra;

/// A k-ary operation `Tot(A)^{⊗k} -> Tot(A)`, stored on the basis of
/// `A^{⊗k}`; its shift records how far it may raise the column sum.
pub type TotalOperation<F> = TotalMap<F>;

/// A graded module with the column filtration of a bigraded one, and
/// operations `m_k` of degree `2 - k`.
#[derive(Clone, Debug)]
pub struct FilteredAInf<F> {
    module: BigradedModule,
    ops: BTreeMap<usize, TotalOperation<F>>,
}

impl<F: Field> PartialEq for FilteredAInf<F> {
    fn eq(&self, o: &Self) -> bool {
        self.module == o.module && self.ops == o.ops
    }
}

impl<F: Field> Eq for FilteredAInf<F> {}

impl<F: Field> FilteredAInf<F> {
    pub fn new(module: BigradedModule, ops: impl IntoIterator<Item = (usize, TotalOperation<F>)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (k, m) in ops {
            if k == 0 {
                return Err(Error::Invalid("operations have arity at least 1".into()));
            }
            if m.degree() != 2 - k as i32 {
                return Err(Error::Invalid(format!("m_{k} has degree {}, expected {}", m.degree(), 2 - k as i32)));
            }
            if m.dst() != &module || m.src() != TensorLayout::power(&module, k).module() {
                return Err(Error::ModuleMismatch(format!("m_{k} does not act on the module")));
            }
            if out.contains_key(&k) {
                return Err(Error::Invalid(format!("m_{k} given twice")));
            }
            if !m.is_zero() {
                out.insert(k, m);
            }
        }
        Ok(FilteredAInf { module, ops: out })
    }

    pub fn module(&self) -> &BigradedModule {
        &self.module
    }

    pub fn ops(&self) -> &BTreeMap<usize, TotalOperation<F>> {
        &self.ops
    }

    pub fn m(&self, k: usize) -> TotalOperation<F> {
        self.ops.get(&k).cloned().unwrap_or_else(|| {
            TotalMap::zero(TensorLayout::power(&self.module, k).module(), &self.module, 2 - k as i32, 0)
        })
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().last().copied().unwrap_or(0)
    }
}

/// `μ_k: Tot(A)^{⊗k} -> Tot(A^{⊗k})`, iterated from the left; on a pure
/// tensor it is the sign `Π_j (-1)^{(p_1+..+p_{j-1}) n_j}`.
fn mu_sign(xs: &[BasisElem]) -> bool {
    let mut col = 0i64;
    let mut odd = false;
    for x in xs {
        odd ^= (col * x.deg.total() as i64).rem_euclid(2) == 1;
        col += x.deg.h() as i64;
    }
    odd
}

/// `m_k = Tot(M_k) ∘ μ_k`, where `Tot(M_k) = Σ_i (-1)^{i n} m_{ik}` on
/// inputs of total degree `n`.
pub fn tot_dainf<F: Field>(a: &DAInfAlgebra<F>) -> FilteredAInf<F> {
    let m = a.module();
    let mut layouts: HashMap<usize, TensorLayout> = HashMap::new();
    let mut ops: BTreeMap<usize, TotalMap<F>> = BTreeMap::new();
    for (&(i, k), mik) in a.maps() {
        let lay = layouts.entry(k).or_insert_with(|| TensorLayout::power(m, k));
        let part = TotalMap::from_fn(lay.module(), m, 2 - k as i32, 0, |e| {
            let odd = mu_sign(lay.tuple(e)) ^ ((i as i64 * e.deg.total() as i64).rem_euclid(2) == 1);
            let c = F::sign(odd);
            mik.apply_basis(e).iter().map(|(t, v)| (*t, c.clone() * v.clone())).collect()
        })
        .expect("m_ik lowers the column index");
        let slot = ops.entry(k).or_insert_with(|| TotalMap::zero(lay.module(), m, 2 - k as i32, 0));
        *slot = slot.add(&part);
    }
    FilteredAInf::new(m.clone(), ops).expect("totalized operations")
}

/// `Σ (-1)^{rs+t} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) = 0` with Koszul signs in the
/// total degree, and `m_k(F_{p_1} ⊗ .. ⊗ F_{p_k}) ⊆ F_{p_1+..+p_k}`.
pub fn check_filtered_ainf<F: Field>(k: &FilteredAInf<F>) -> Report {
    let mut rep = Report::new("filtered A-infinity algebra");
    let m = &k.module;
    for (&a, op) in &k.ops {
        for (&(s, t), _) in op.blocks() {
            if t.h() > s.h() {
                rep.fail(format!("filtration m_{a}"), Some(s), format!("column sum {} reaches column {}", s.h(), t.h()));
            }
        }
    }
    let top = k.max_arity();
    if top == 0 {
        return rep;
    }
    let mut layouts: HashMap<usize, TensorLayout> = HashMap::new();
    for n in 1..=2 * top - 1 {
        layouts.entry(n).or_insert_with(|| TensorLayout::power(m, n));
    }
    for n in 1..=2 * top - 1 {
        let lay = &layouts[&n];
        for e in lay.module().basis() {
            let xs = lay.tuple(e);
            let mut acc: BTreeMap<BasisElem, F> = BTreeMap::new();
            for s in 1..=n {
                let Some(inner) = k.ops.get(&s) else { continue };
                let Some(outer) = k.ops.get(&(n - s + 1)) else { continue };
                for r in 0..=n - s {
                    let t = n - s - r;
                    let pre: i64 = xs[..r].iter().map(|x| x.deg.total() as i64).sum();
                    let odd = ((r * s + t) as i64 + s as i64 * pre).rem_euclid(2) == 1;
                    let c = F::sign(odd);
                    for (y, v) in inner.apply_basis(layouts[&s].elem(&xs[r..r + s])) {
                        let mut args = xs[..r].to_vec();
                        args.push(y);
                        args.extend_from_slice(&xs[r + s..]);
                        for (z, w) in outer.apply_basis(layouts[&(n - s + 1)].elem(&args)) {
                            *acc.entry(z).or_insert_with(F::zero) += c.clone() * v.clone() * w;
                        }
                    }
                }
            }
            if acc.values().any(|v| !v.is_zero()) {
                rep.fail(format!("arity {n}"), Some(e.deg), "");
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dainf::{lambda_r_dga, tensor_twisted_dga, underlying_twisted};
    use crate::field::{F32003, Q};
    use crate::filtered::tot;
    use crate::gen::{random_module, random_nilpotent_dainf, random_twisted, Shape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type K = F32003;

    #[test]
    fn lambda_totalizes_to_a_filtered_dga() {
        for r in 0..4 {
            let l = lambda_r_dga::<Q>(r);
            let t = tot_dainf(l.dga.algebra());
            assert_eq!(t.module().total_dim(), 3);
            let rep = check_filtered_ainf(&t);
            assert!(rep.ok, "r = {r}: {rep:?}");
            assert_eq!(t.max_arity(), 2);
        }
    }

    #[test]
    fn nilpotent_algebras_totalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let shape = Shape { width: 2, degrees: (-1, 1), max_dim: 1 };
            let (g, o) = (random_module(&mut rng, shape), random_module(&mut rng, shape));
            let a = random_nilpotent_dainf::<K, _>(&mut rng, &g, &o, 3);
            let t = tot_dainf(&a);
            let rep = check_filtered_ainf(&t);
            assert!(rep.ok, "{rep:?}");
            assert_eq!(t.m(1), *tot(&underlying_twisted(&a)).d());
        }
    }

    #[test]
    fn tensors_with_lambda_totalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for r in 0..3 {
            let shape = Shape { width: 2, degrees: (-1, 1), max_dim: 1 };
            let m = random_module(&mut rng, shape);
            let a = DAInfAlgebra::from_twisted(&random_twisted::<K, _>(&mut rng, &m));
            let (t, _) = tensor_twisted_dga(&lambda_r_dga::<K>(r).dga, &a);
            let rep = check_filtered_ainf(&tot_dainf(&t));
            assert!(rep.ok, "r = {r}: {rep:?}");
        }
    }

    /// Products meeting elements of odd column and odd degree, where the
    /// signs of `μ_k` and of `Tot(M_k)` both matter.
    #[test]
    fn tensors_with_products_totalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for r in 0..3 {
            for s in 0..3 {
                let (t, _) = tensor_twisted_dga(&lambda_r_dga::<K>(r).dga, lambda_r_dga::<K>(s).dga.algebra());
                let rep = check_filtered_ainf(&tot_dainf(&t));
                assert!(rep.ok, "r = {r}, s = {s}: {rep:?}");
            }
            let shape = Shape { width: 1, degrees: (-1, 1), max_dim: 1 };
            let (g, o) = (random_module(&mut rng, shape), random_module(&mut rng, shape));
            let a = random_nilpotent_dainf::<K, _>(&mut rng, &g, &o, 2);
            let (t, _) = tensor_twisted_dga(&lambda_r_dga::<K>(r).dga, &a);
            let rep = check_filtered_ainf(&tot_dainf(&t));
            assert!(rep.ok, "r = {r}: {rep:?}");
        }
    }

    #[test]
    fn zero_products_give_the_totalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = random_module(&mut rng, Shape::default());
        let a = random_twisted::<K, _>(&mut rng, &m);
        let t = tot_dainf(&DAInfAlgebra::from_twisted(&a));
        assert!(check_filtered_ainf(&t).ok);
        assert!(t.max_arity() <= 1, "{:?}", t.ops().keys().collect::<Vec<_>>());
        assert_eq!(t.m(1), *tot(&a).d());
    }
}
