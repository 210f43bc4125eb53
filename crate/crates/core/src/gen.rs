//! Random instances: filtered complexes, twisted complexes, morphisms and
//! homotopies, all valid by construction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bigraded::{BasisElem, Bideg, BigradedMap, BigradedModule, SumLayout, TensorLayout, Vector};
use crate::dainf::{
    dainf_morphism_residual, homotopy_dainf_operator, morphism_bideg, solve_affine, structure_bideg, DAInfAlgebra,
    DAInfHomotopy, DAInfMorphism, MapUnknowns,
};
use crate::field::Field;
use crate::filtered::{
    tot, tot_inverse, tot_inverse_morphism, tot_morphism, tot_to_homotopy, FilteredComplex, OrderRHomotopy,
    TotLayout, TotalMap, TotalMapSpace,
};
use crate::linalg::Matrix;
use crate::twisted::{direct_sum, Family, RHomotopy, TwistedComplex, TwistedMorphism};

/// Where random modules live.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    /// Columns `0..=width`.
    pub width: i32,
    /// Total degrees `lo..=hi`.
    pub degrees: (i32, i32),
    pub max_dim: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            width: 3,
            degrees: (-1, 1),
            max_dim: 2,
        }
    }
}

pub fn random_module<R: Rng + ?Sized>(rng: &mut R, shape: Shape) -> BigradedModule {
    let mut dims = Vec::new();
    for i in 0..=shape.width {
        for n in shape.degrees.0..=shape.degrees.1 {
            let d = rng.gen_range(0..=shape.max_dim);
            if d > 0 {
                dims.push((Bideg(i, n + i), d));
            }
        }
    }
    BigradedModule::from_dims(dims)
}

fn nonzero<F: Field, R: Rng + ?Sized>(rng: &mut R) -> F {
    loop {
        let x = F::random(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn sparse<F: Field, R: Rng + ?Sized>(rng: &mut R) -> F {
    if rng.gen_bool(0.5) {
        F::zero()
    } else {
        F::random(rng)
    }
}

fn random_invertible<F: Field, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<F> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| F::random(rng));
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random filtration-preserving automorphism of `Tot(M)`.
pub fn random_filtered_automorphism<F: Field, R: Rng + ?Sized>(rng: &mut R, m: &BigradedModule) -> TotalMap<F> {
    let space = TotalMapSpace::new(m, m, 0, 0).restricted(|s, t| t.h() < s.h());
    let coords: Vec<F> = (0..space.dim()).map(|_| sparse(rng)).collect();
    let mut p = space.map_of(&coords);
    for (&b, &n) in m.dims() {
        p.add_block(b, b, &random_invertible(rng, n)).expect("diagonal block");
    }
    p
}

/// Inverse of a filtration-preserving automorphism.
pub fn invert_filtered<F: Field>(p: &TotalMap<F>) -> TotalMap<F> {
    let l = TotLayout::new(p.src());
    TotalMap::from_dense(p.dst(), p.src(), 0, 0, |n| {
        p.dense(&l, &l, n).inverse().expect("automorphism")
    })
    .expect("inverse respects the filtration")
}

/// A matching differential `x ↦ c·y` on a random set of pairs with
/// `|y| = |x| + 1` and `col(x) - max_gap <= col(y) <= col(x)`.
fn matching<F: Field, R: Rng + ?Sized>(rng: &mut R, m: &BigradedModule, max_gap: Option<usize>) -> TotalMap<F> {
    let mut basis: Vec<BasisElem> = m.basis().collect();
    basis.shuffle(rng);
    let mut used = std::collections::HashSet::new();
    let mut pairs = Vec::new();
    for &x in &basis {
        if used.contains(&x) || rng.gen_bool(0.25) {
            continue;
        }
        let cands: Vec<BasisElem> = basis
            .iter()
            .copied()
            .filter(|y| {
                !used.contains(y)
                    && *y != x
                    && y.deg.total() == x.deg.total() + 1
                    && y.deg.h() <= x.deg.h()
                    && max_gap.map_or(true, |g| x.deg.h() - y.deg.h() <= g as i32)
            })
            .collect();
        if let Some(&y) = cands.choose(rng) {
            used.insert(x);
            used.insert(y);
            pairs.push((x, y, nonzero::<F, R>(rng)));
        }
    }
    TotalMap::from_fn(m, m, 1, 0, |e| {
        pairs
            .iter()
            .filter(|p| p.0 == e)
            .map(|p| (p.1, p.2.clone()))
            .collect()
    })
    .expect("matching respects the filtration")
}

/// A random split filtered complex on `Tot(M)`: a matching differential
/// conjugated by a random filtered automorphism.
pub fn random_filtered<F: Field, R: Rng + ?Sized>(rng: &mut R, m: &BigradedModule) -> FilteredComplex<F> {
    let n = matching::<F, R>(rng, m, None);
    conjugate(rng, n)
}

fn conjugate<F: Field, R: Rng + ?Sized>(rng: &mut R, n: TotalMap<F>) -> FilteredComplex<F> {
    let p = random_filtered_automorphism(rng, n.src());
    let d = invert_filtered(&p).compose(&n).compose(&p);
    FilteredComplex::new(d.with_shift(0)).expect("conjugated differential")
}

pub fn random_twisted<F: Field, R: Rng + ?Sized>(rng: &mut R, m: &BigradedModule) -> TwistedComplex<F> {
    tot_inverse(&random_filtered(rng, m)).expect("split filtered complex")
}

/// A twisted complex with `E_{r+1} = 0`: `pairs` cancelling pairs whose
/// columns differ by at most `r`, scrambled by a filtered automorphism.
pub fn random_er_acyclic<F: Field, R: Rng + ?Sized>(rng: &mut R, r: usize, pairs: usize, width: i32) -> TwistedComplex<F> {
    let mut dims: std::collections::BTreeMap<Bideg, usize> = Default::default();
    let mut list = Vec::new();
    for _ in 0..pairs {
        let gap = rng.gen_range(0..=(r as i32).min(width));
        let i = rng.gen_range(gap..=width);
        let n = rng.gen_range(-1..=1);
        let x = Bideg(i, n + i);
        let y = Bideg(i - gap, n + 1 + i - gap);
        let xi = *dims.entry(x).or_default();
        *dims.get_mut(&x).unwrap() += 1;
        let yi = *dims.entry(y).or_default();
        *dims.get_mut(&y).unwrap() += 1;
        list.push((BasisElem::new(x, xi), BasisElem::new(y, yi)));
    }
    let m = BigradedModule::from_dims(dims);
    let n = TotalMap::from_fn(&m, &m, 1, 0, |e| {
        list.iter().filter(|p| p.0 == e).map(|p| (p.1, F::one())).collect()
    })
    .expect("pair differential");
    tot_inverse(&conjugate(rng, n)).expect("split filtered complex")
}

/// A uniformly random filtered chain map `Tot(K) -> Tot(L)`.
pub fn random_chain_map<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    k: &FilteredComplex<F>,
    l: &FilteredComplex<F>,
) -> TotalMap<F> {
    let space = TotalMapSpace::new(k.module(), l.module(), 0, 0);
    let target = TotalMapSpace::new(k.module(), l.module(), 1, 0);
    let basis = space.kernel(&target, |x: &TotalMap<F>| l.d().compose(x).sub(&x.compose(k.d())));
    let mut f = TotalMap::zero(k.module(), l.module(), 0, 0);
    for b in &basis {
        f = f.add_scaled(&F::random(rng), b);
    }
    f
}

pub fn random_morphism<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    a: &TwistedComplex<F>,
    b: &TwistedComplex<F>,
) -> TwistedMorphism<F> {
    let f = random_chain_map(rng, &tot(a), &tot(b));
    tot_inverse_morphism(a, b, &f).expect("filtered chain map")
}

/// The inclusion `A -> A ⊕ C` and projection `A ⊕ C -> A` for a random
/// `E_{r+1}`-acyclic `C`: both are `E_r`-quasi-isomorphisms.
pub fn random_er_qis<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    a: &TwistedComplex<F>,
    r: usize,
) -> (TwistedMorphism<F>, TwistedMorphism<F>) {
    let width = a.module().horizontal_range().map_or(2, |(_, hi)| hi.max(1));
    let pairs = rng.gen_range(1..=3);
    let c = random_er_acyclic(rng, r, pairs, width);
    let (s, l) = direct_sum(a, &c);
    let incl = TwistedMorphism::strict(a, &s, l.inclusion(0));
    let proj = TwistedMorphism::strict(&s, a, l.projection(0));
    (incl, proj)
}

/// A random `g` with an `r`-homotopy `f ≃_r g`: `g = f + dH + Hd` for a
/// random `H` of order `r` whose correction respects the filtration.
pub fn random_homotopy<F: Field, R: Rng + ?Sized>(rng: &mut R, f: &TwistedMorphism<F>, r: usize) -> RHomotopy<F> {
    let (ka, kb) = (tot(f.src()), tot(f.dst()));
    let ri = r as i32;
    let space = TotalMapSpace::new(ka.module(), kb.module(), -1, ri);
    let target = TotalMapSpace::new(ka.module(), kb.module(), 0, ri).restricted(|s, t| t.h() > s.h());
    let bump = |x: &TotalMap<F>| {
        let y = kb.d().compose(x).add(&x.compose(ka.d()));
        let mut out = TotalMap::zero(y.src(), y.dst(), 0, ri);
        for (&(s, t), m) in y.blocks() {
            if t.h() > s.h() {
                out.add_block(s, t, m).expect("raising block");
            }
        }
        out
    };
    let basis = space.kernel(&target, bump);
    let mut h = TotalMap::zero(ka.module(), kb.module(), -1, ri);
    for b in &basis {
        h = h.add_scaled(&F::random(rng), b);
    }
    let corr = kb.d().compose(&h).add(&h.compose(ka.d()));
    let g_tot = tot_morphism(f).add(&corr);
    let g_tot = g_tot.with_shift(0);
    let g = tot_inverse_morphism(f.src(), f.dst(), &g_tot).expect("filtered chain map");
    let h = OrderRHomotopy::new(r, h).expect("order r");
    tot_to_homotopy(&h, f, &g).expect("valid by construction")
}

/// The same homotopy with one random entry of one member perturbed.
pub fn corrupt_homotopy<F: Field, R: Rng + ?Sized>(rng: &mut R, h: &RHomotopy<F>) -> Option<RHomotopy<F>> {
    let (a, b) = (h.src().module(), h.dst().module());
    let bound = Family::<F>::index_bound(a, b, h.h().base())?;
    let mut slots = Vec::new();
    for m in 0..=bound {
        let deg = Family::<F>::bideg_of(h.h().base(), m);
        for (&s, &c) in a.dims() {
            let rows = b.dim(s + deg);
            if rows > 0 {
                slots.push((m, s, rows, c));
            }
        }
    }
    let &(m, s, rows, cols) = slots.choose(rng)?;
    let mut x = h.h().member(m);
    let mut blk = x.block_or_zero(s);
    blk[(rng.gen_range(0..rows), rng.gen_range(0..cols))] += nonzero::<F, R>(rng);
    x.set_block(s, blk);
    let mut fam = h.h().clone();
    fam.set(m, x);
    RHomotopy::new(h.r(), h.f(), h.g(), fam).ok()
}

/// A dA-infinity algebra on `G ⊕ O` whose structure maps send `G^{⊗j}` to
/// `O` and vanish as soon as one input lies in `O`. Every composite of two
/// structure maps vanishes, so the relations hold for any choice of maps.
pub fn random_nilpotent_dainf<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    g: &BigradedModule,
    o: &BigradedModule,
    max_arity: usize,
) -> DAInfAlgebra<F> {
    let l = SumLayout::new(vec![(g.clone(), Bideg::ZERO), (o.clone(), Bideg::ZERO)]);
    let module = l.module().clone();
    let (Some((_, ghi)), Some((olo, _))) = (g.horizontal_range(), o.horizontal_range()) else {
        return DAInfAlgebra::trivial(module);
    };
    let mut maps = Vec::new();
    for j in 1..=max_arity {
        let lay = TensorLayout::power(&module, j);
        for i in 0..=(j as i32 * ghi - olo).max(0) as usize {
            let b = structure_bideg(i, j);
            let m = BigradedMap::from_fn(lay.module(), &module, b, |e| {
                let t = lay.tuple(e);
                if t.iter().any(|x| l.locate(*x).0 != 0) {
                    return Vector::new();
                }
                let deg = e.deg + b;
                (0..o.dim(deg))
                    .map(|k| (l.embed(1, BasisElem::new(deg, k)), sparse::<F, R>(rng)))
                    .collect()
            });
            maps.push(((i, j), m));
        }
    }
    DAInfAlgebra::new(module, maps).expect("nilpotent structure maps")
}

/// Keys `(i, j)`, `j <= max_arity`, of maps `A^{⊗j} -> B` of bidegree
/// `(base - i, ·)` that can be nonzero.
fn family_keys(a: &BigradedModule, b: &BigradedModule, base: i32, max_arity: usize) -> Vec<(usize, usize)> {
    let (Some((_, ahi)), Some((blo, _))) = (a.horizontal_range(), b.horizontal_range()) else {
        return Vec::new();
    };
    let mut keys = Vec::new();
    for j in 1..=max_arity {
        for i in 0..=(base + j as i32 * ahi - blo).max(-1) {
            keys.push((i as usize, j));
        }
    }
    keys
}

fn random_combination<F: Field, R: Rng + ?Sized>(rng: &mut R, x: &[F], kernel: &[Vec<F>]) -> Vec<F> {
    let mut out = x.to_vec();
    for v in kernel {
        let c = F::random(rng);
        for (o, y) in out.iter_mut().zip(v) {
            *o += c.clone() * y.clone();
        }
    }
    out
}

/// A random morphism `A -> B` with components of arity at most `max_arity`,
/// for `B` with zero products; the relations are then linear in `f`.
pub fn random_dainf_morphism<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    a: &DAInfAlgebra<F>,
    b: &DAInfAlgebra<F>,
    max_arity: usize,
) -> DAInfMorphism<F> {
    assert!(b.has_zero_products(), "the target must have zero products");
    let space = MapUnknowns::new(a.module(), b.module(), family_keys(a.module(), b.module(), 0, max_arity), morphism_bideg);
    let (x, ker) = solve_affine(&space, |maps| {
        dainf_morphism_residual(&DAInfMorphism::new(a, b, maps.clone()).expect("shapes"))
    })
    .expect("zero is a solution");
    let coords = random_combination(rng, &x, &ker);
    DAInfMorphism::new(a, b, space.maps_of(&coords)).expect("shapes")
}

/// A random `r`-homotopy out of `f` with components of arity at most
/// `max_arity`, for a target with zero products: `h` is drawn from the
/// solutions of the relations below `r` and `g` is read off the rest.
pub fn random_dainf_homotopy<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    f: &DAInfMorphism<F>,
    r: usize,
    max_arity: usize,
) -> DAInfHomotopy<F> {
    let (a, b) = (f.src(), f.dst());
    assert!(b.has_zero_products(), "the target must have zero products");
    let space = MapUnknowns::new(
        a.module(),
        b.module(),
        family_keys(a.module(), b.module(), r as i32, max_arity),
        |i, k| DAInfHomotopy::<F>::component_bideg(r, i, k),
    );
    let low = |maps: &std::collections::BTreeMap<(usize, usize), BigradedMap<F>>| {
        let h = DAInfHomotopy::new(r, f, f, maps.clone()).expect("shapes");
        let mut out = homotopy_dainf_operator(&h);
        out.retain(|k, _| k.0 < r);
        out
    };
    let (x, ker) = solve_affine(&space, low).expect("zero is a solution");
    let coords = random_combination(rng, &x, &ker);
    let h = DAInfHomotopy::new(r, f, f, space.maps_of(&coords)).expect("shapes");
    let mut g = f.maps().clone();
    for ((m, k), x) in homotopy_dainf_operator(&h) {
        if m >= r {
            let slot = g
                .entry((m - r, k))
                .or_insert_with(|| BigradedMap::zero(x.src(), x.dst(), morphism_bideg(m - r, k)));
            slot.add_assign(&x);
        }
    }
    let g = DAInfMorphism::new(a, b, g).expect("shapes");
    DAInfHomotopy::new(r, f, &g, h.h().clone()).expect("shapes")
}

/// `f = g` and `h` drawn from the solutions of the homotopy relations.
pub fn random_self_homotopy<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    f: &DAInfMorphism<F>,
    r: usize,
    max_arity: usize,
) -> DAInfHomotopy<F> {
    let (a, b) = (f.src(), f.dst());
    let space = MapUnknowns::new(
        a.module(),
        b.module(),
        family_keys(a.module(), b.module(), r as i32, max_arity),
        |i, k| DAInfHomotopy::<F>::component_bideg(r, i, k),
    );
    let (x, ker) = solve_affine(&space, |maps| {
        let h = DAInfHomotopy::new(r, f, f, maps.clone()).expect("shapes");
        crate::dainf::homotopy_dainf_residual(&h)
    })
    .expect("zero is a solution");
    let coords = random_combination(rng, &x, &ker);
    DAInfHomotopy::new(r, f, f, space.maps_of(&coords)).expect("shapes")
}

/// The same homotopy with one random entry of one `h_{ik}` perturbed.
pub fn corrupt_dainf_homotopy<F: Field, R: Rng + ?Sized>(rng: &mut R, h: &DAInfHomotopy<F>) -> Option<DAInfHomotopy<F>> {
    let (a, b) = (h.f().src().module(), h.f().dst().module());
    let space = MapUnknowns::new(a, b, family_keys(a, b, h.r() as i32, h.max_arity().max(1)), |i, k| {
        DAInfHomotopy::<F>::component_bideg(h.r(), i, k)
    });
    if space.dim() == 0 {
        return None;
    }
    let mut coords = vec![F::zero(); space.dim()];
    coords[rng.gen_range(0..space.dim())] = nonzero::<F, R>(rng);
    let mut maps = h.h().clone();
    for (k, x) in space.maps_of(&coords) {
        maps.entry(k).and_modify(|m| m.add_assign(&x)).or_insert(x);
    }
    DAInfHomotopy::new(h.r(), h.f(), h.g(), maps).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F32003;
    use crate::filtered::check_filtered;
    use crate::twisted::{
        check_morphism, check_r_homotopy, check_r_homotopy_assembled, check_r_homotopy_direct, check_twisted,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let m = random_module(&mut rng, Shape::default());
            let k: FilteredComplex<F32003> = random_filtered(&mut rng, &m);
            assert!(check_filtered(&k).ok);
            let a = tot_inverse(&k).unwrap();
            assert!(check_twisted(&a).ok);
            let mb = random_module(&mut rng, Shape::default());
            let b = random_twisted(&mut rng, &mb);
            let f = random_morphism(&mut rng, &a, &b);
            assert!(check_morphism(&f).ok);
            for r in 0..3 {
                let h = random_homotopy(&mut rng, &f, r);
                assert!(check_r_homotopy(&h).ok);
                if let Some(bad) = corrupt_homotopy(&mut rng, &h) {
                    assert_eq!(check_r_homotopy_direct(&bad).ok, check_r_homotopy_assembled(&bad).ok);
                }
            }
        }
    }
}
