use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::bigraded::{BasisElem, Bideg, BigradedMap, BigradedModule, TensorLayout, Vector};
use crate::field::{Field, F32003, Q};
use crate::gen::{random_dainf_morphism, random_module, random_nilpotent_dainf, random_twisted, Shape};
use crate::twisted::{compose, TwistedMorphism};

type K = F32003;

fn small(rng: &mut ChaCha8Rng) -> BigradedModule {
    random_module(rng, Shape { width: 1, degrees: (-1, 1), max_dim: 1 })
}

fn twisted(rng: &mut ChaCha8Rng) -> DAInfAlgebra<K> {
    let m = small(rng);
    DAInfAlgebra::from_twisted(&random_twisted::<K, _>(rng, &m))
}

fn nilpotent(rng: &mut ChaCha8Rng) -> DAInfAlgebra<K> {
    let (g, o) = (small(rng), small(rng));
    random_nilpotent_dainf(rng, &g, &o, 2)
}

/// Components of arity at most `n`.
fn up_to(f: &DAInfMorphism<K>, n: usize) -> BTreeMap<(usize, usize), BigradedMap<K>> {
    f.truncated(n).maps().clone()
}

#[test]
fn trivial_and_unit_algebras_are_valid() {
    assert!(check_dainf(&DAInfAlgebra::<Q>::unit()).ok);
    let m = BigradedModule::from_dims([(Bideg(0, 0), 2), (Bideg(1, 0), 1)]);
    assert!(check_dainf(&DAInfAlgebra::<Q>::trivial(m)).ok);
}

#[test]
fn non_square_zero_differential_fails() {
    let m = BigradedModule::from_dims([(Bideg(0, 0), 1), (Bideg(0, 1), 1), (Bideg(0, 2), 1)]);
    let d = BigradedMap::from_fn(&m, &m, Bideg(0, 1), |e| {
        if e.deg.v() < 2 {
            Vector::single(BasisElem::new(Bideg(0, e.deg.v() + 1), 0), Q::one())
        } else {
            Default::default()
        }
    });
    let a = DAInfAlgebra::new(m, BTreeMap::from([((0, 1), d)])).unwrap();
    let rep = check_dainf(&a);
    assert!(!rep.ok);
    assert!(rep.failures.iter().any(|f| f.relation == "A_{0,1}"));
}

#[test]
fn wrong_bidegree_is_rejected() {
    let m = BigradedModule::from_dims([(Bideg(0, 0), 1), (Bideg(0, 2), 1)]);
    let bad = BigradedMap::<Q>::zero(&m, &m, Bideg(0, 2));
    assert!(DAInfAlgebra::new(m, BTreeMap::from([((0, 1), bad)])).is_err());
}

#[test]
fn generated_algebras_and_morphisms_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let a = nilpotent(&mut rng);
        assert!(check_dainf(&a).ok);
        let b = twisted(&mut rng);
        let f = random_dainf_morphism(&mut rng, &a, &b, 2);
        assert!(check_dainf_morphism(&f).ok);
        assert!(check_dainf_morphism(&DAInfMorphism::identity(&a)).ok);
    }
}

#[test]
fn corrupted_morphism_fails() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut seen = 0;
    for _ in 0..20 {
        let a = nilpotent(&mut rng);
        let b = twisted(&mut rng);
        let f = random_dainf_morphism(&mut rng, &a, &b, 2);
        let Some((&key, x)) = f.maps().iter().find(|(k, _)| k.1 == 2) else { continue };
        let mut maps = f.maps().clone();
        maps.insert(key, x.scale(&K::from_i64(2)));
        let g = DAInfMorphism::new(&a, &b, maps).unwrap();
        if g.maps() != f.maps() && !check_dainf_morphism(&g).ok {
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn composition_is_associative_and_unital() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    // arities multiply under composition, so one factor stays linear
    for it in 0..15 {
        let a = nilpotent(&mut rng);
        let (b, c, d) = (twisted(&mut rng), twisted(&mut rng), twisted(&mut rng));
        let f = random_dainf_morphism(&mut rng, &a, &b, 2);
        let g = random_dainf_morphism(&mut rng, &b, &c, 1 + it % 2);
        let h = random_dainf_morphism(&mut rng, &c, &d, 2 - it % 2);
        let gf = compose_dainf(&g, &f).unwrap();
        assert!(check_dainf_morphism(&gf).ok);
        let left = compose_dainf(&h, &gf).unwrap();
        let right = compose_dainf(&compose_dainf(&h, &g).unwrap(), &f).unwrap();
        assert_eq!(left, right);
        assert_eq!(compose_dainf(&DAInfMorphism::identity(&b), &f).unwrap(), f);
        assert_eq!(compose_dainf(&f, &DAInfMorphism::identity(&a)).unwrap(), f);
    }
}

#[test]
fn composition_checks_the_middle_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let (a, b) = (twisted(&mut rng), nilpotent(&mut rng));
    let f = DAInfMorphism::identity(&a);
    let g = DAInfMorphism::identity(&b);
    assert!(compose_dainf(&g, &f).is_err());
}

#[test]
fn underlying_functor_preserves_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..10 {
        let a = nilpotent(&mut rng);
        let (b, c) = (twisted(&mut rng), twisted(&mut rng));
        let f = random_dainf_morphism(&mut rng, &a, &b, 2);
        let g = random_dainf_morphism(&mut rng, &b, &c, 2);
        let u = underlying_twisted_morphism(&compose_dainf(&g, &f).unwrap());
        let v = compose(&underlying_twisted_morphism(&g), &underlying_twisted_morphism(&f)).unwrap();
        assert_eq!(u, v);
    }
}

#[test]
fn doubling_is_inverted_by_halving() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let m = small(&mut rng);
    let a = DAInfAlgebra::from_twisted(&random_twisted::<Q, _>(&mut rng, &m));
    let two = BigradedMap::identity(a.module()).scale(&Q::from_i64(2));
    let f = DAInfMorphism::strict(&a, &a, two).unwrap();
    let g = invert_dainf(&f, 3).unwrap();
    assert!(g.is_strict());
    assert_eq!(g.f(0, 1), BigradedMap::identity(a.module()).scale(&Q::new(1, 2)));
    assert_eq!(compose_dainf(&f, &g).unwrap(), DAInfMorphism::identity(&a));
}

#[test]
fn inverse_up_to_the_arity_cap() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut done = 0;
    for _ in 0..30 {
        let a = twisted(&mut rng);
        let f = random_dainf_morphism(&mut rng, &a, &a, 2);
        let Some(g) = invert_dainf(&f, 3) else { continue };
        let id = DAInfMorphism::identity(&a);
        assert_eq!(up_to(&compose_dainf(&f, &g).unwrap(), 3), *id.maps());
        assert_eq!(up_to(&compose_dainf(&g, &f).unwrap(), 3), *id.maps());
        done += 1;
    }
    assert!(done >= 5, "{done}");
}

#[test]
fn singular_morphisms_have_no_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    let a = twisted(&mut rng);
    let zero = DAInfMorphism::strict(&a, &a, BigradedMap::zero(a.module(), a.module(), Bideg::ZERO)).unwrap();
    if !a.module().is_zero() {
        assert!(invert_dainf(&zero, 2).is_none());
    }
}

#[test]
fn er_quasi_isomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    let a = twisted(&mut rng);
    assert!(is_er_quasi_iso_dainf(&DAInfMorphism::identity(&a), 0).unwrap());
    for r in 0..3 {
        let p = path_dainf(&a, r);
        assert!(is_er_quasi_iso_dainf(&p.iota, r).unwrap(), "r = {r}");
    }
}

/// A unit-to-unit map that kills everything cannot be a quasi-isomorphism
/// once the page is nonzero.
#[test]
fn zero_map_is_not_a_quasi_iso() {
    let a = DAInfAlgebra::<Q>::unit();
    let zero = DAInfMorphism::new(&a, &a, []).unwrap();
    assert!(!page_dims_dainf(&a, 1).is_empty());
    assert!(!is_er_quasi_iso_dainf(&zero, 1).unwrap());
}

#[test]
fn tensoring_is_functorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for r in 0..3 {
        let l = lambda_r_dga::<K>(r);
        let a = nilpotent(&mut rng);
        let (b, c) = (twisted(&mut rng), twisted(&mut rng));
        let f = random_dainf_morphism(&mut rng, &a, &b, 2);
        let g = random_dainf_morphism(&mut rng, &b, &c, 2);
        let tf = tensor_dga_morphism(&l.dga, &f);
        assert!(check_dainf_morphism(&tf).ok, "r = {r}");
        let lhs = tensor_dga_morphism(&l.dga, &compose_dainf(&g, &f).unwrap());
        let rhs = compose_dainf(&tensor_dga_morphism(&l.dga, &g), &tf).unwrap();
        assert_eq!(lhs, rhs);
        let id = DAInfMorphism::identity(&a);
        assert_eq!(tensor_dga_morphism(&l.dga, &id), DAInfMorphism::identity(tf.src()));
    }
}

/// Under `Λ_r ⊗ A ≅ P_r(A)` the tensored morphism is the path morphism.
#[test]
fn path_morphism_is_the_tensored_morphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for r in 0..3 {
        let l = lambda_r_dga::<K>(r);
        let a = nilpotent(&mut rng);
        let b = twisted(&mut rng);
        let f = random_dainf_morphism(&mut rng, &a, &b, 2);
        let pf = path_dainf_morphism(&f, r);
        assert!(check_dainf_morphism(&pf).ok);
        let tf = tensor_dga_morphism(&l.dga, &f);
        let (pa, pb) = (path_dainf(&a, r), path_dainf(&b, r));
        let (_, la) = tensor_twisted_dga(&l.dga, &a);
        let (_, lb) = tensor_twisted_dga(&l.dga, &b);
        let (_, back) = lambda_to_path(&l, &la, &pa.layout);
        let (fwd, _) = lambda_to_path(&l, &lb, &pb.layout);
        let keys: std::collections::BTreeSet<_> = tf.maps().keys().chain(pf.maps().keys()).copied().collect();
        for (i, j) in keys {
            let pre = power_map(&back, j);
            assert_eq!(fwd.compose(&tf.f(i, j)).compose(&pre), pf.f(i, j), "r = {r}, ({i},{j})");
        }
    }
}

/// `φ^{⊗j}` for a bidegree `(0,0)` map sending basis vectors to basis vectors.
fn power_map(phi: &BigradedMap<K>, j: usize) -> BigradedMap<K> {
    let src = TensorLayout::power(phi.src(), j);
    let dst = TensorLayout::power(phi.dst(), j);
    BigradedMap::from_fn(src.module(), dst.module(), Bideg::ZERO, |e| {
        let mut coeff = K::one();
        let mut picked = Vec::with_capacity(j);
        for y in src.tuple(e) {
            let v = phi.apply_basis(*y);
            let (k, c) = v.iter().next().expect("basis to basis");
            picked.push(*k);
            coeff = coeff * c.clone();
        }
        Vector::single(dst.elem(&picked), coeff)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composite_of_valid_morphisms_is_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = nilpotent(&mut rng);
        let (b, c) = (twisted(&mut rng), twisted(&mut rng));
        let f = random_dainf_morphism(&mut rng, &a, &b, 2);
        let g = random_dainf_morphism(&mut rng, &b, &c, 2);
        prop_assert!(check_dainf_morphism(&compose_dainf(&g, &f).unwrap()).ok);
    }

    #[test]
    fn totalization_is_a_filtered_ainf_algebra(seed in any::<u64>(), r in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = nilpotent(&mut rng);
        let (t, _) = tensor_twisted_dga(&lambda_r_dga::<K>(r).dga, &a);
        prop_assert!(check_dainf(&t).ok);
        prop_assert!(check_filtered_ainf(&tot_dainf(&t)).ok);
    }
}

#[test]
fn arity_one_morphisms_agree_with_twisted() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let m = small(&mut rng);
    let a = random_twisted::<K, _>(&mut rng, &m);
    let f = TwistedMorphism::identity(&a);
    let da = DAInfAlgebra::from_twisted(&a);
    let df = DAInfMorphism::new(&da, &da, f.family().members().map(|(i, x)| ((i, 1), x.clone()))).unwrap();
    assert_eq!(underlying_twisted_morphism(&df), f);
    assert_eq!(underlying_twisted(&da), a);
}
