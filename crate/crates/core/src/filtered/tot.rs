use crate::bigraded::{symmetry_iso, Bideg, BigradedModule, TensorLayout};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtered::{check_chain_map, FilteredComplex, TotalMap};
use crate::report::Report;
use crate::twisted::{tensor, tensor_morphisms, Family, TwistedComplex, TwistedMorphism, DIFFERENTIAL};

fn tot_sign<F: Field>(m: usize, base: Bideg, n: i32) -> F {
    F::sign(((m as i64 + base.h() as i64) * n as i64).rem_euclid(2) == 1)
}

/// `Σ_m (-1)^{(m+u)n} f_m(a_{j+m})` for a family with base `(u, v)`; for
/// differentials and morphisms (`u = 0`) this is the usual totalization.
pub fn tot_family<F: Field>(f: &Family<F>) -> TotalMap<F> {
    let base = f.base();
    let mut out = TotalMap::zero(f.src(), f.dst(), base.total(), base.h());
    for (m, fm) in f.members() {
        for (&s, blk) in fm.blocks() {
            let t = s + fm.bideg();
            out.add_block(s, t, &blk.scale(&tot_sign(m, base, s.total())))
                .expect("family blocks respect the filtration");
        }
    }
    out
}

/// Inverse of [`tot_family`]: reads `f_m` off the blocks that lower the
/// column index by `m - u`.
pub fn family_from_total<F: Field>(f: &TotalMap<F>, base: Bideg) -> Result<Family<F>> {
    if f.degree() != base.total() {
        return Err(Error::Invalid(format!(
            "map of degree {} cannot come from a family of degree {}",
            f.degree(),
            base.total()
        )));
    }
    let mut out = Family::zero(f.src(), f.dst(), base);
    for (&(s, t), blk) in f.blocks() {
        let m = base.h() - (t.h() - s.h());
        if m < 0 {
            return Err(Error::Filtration(format!(
                "block {s} -> {t} would need a member of negative index"
            )));
        }
        let m = m as usize;
        let mut x = out.member(m);
        let mut b = x.block_or_zero(s);
        b.add_assign(&blk.scale(&tot_sign(m, base, s.total())));
        x.set_block(s, b);
        out.set(m, x);
    }
    Ok(out)
}

/// `Tot(A)` with `d(a)_j = Σ_m (-1)^{mn} d_m(a_{j+m})`.
pub fn tot<F: Field>(a: &TwistedComplex<F>) -> FilteredComplex<F> {
    FilteredComplex::new(tot_family(a.d())).expect("totalized differential")
}

pub fn tot_morphism<F: Field>(f: &TwistedMorphism<F>) -> TotalMap<F> {
    tot_family(f.family())
}

/// The twisted complex with `Tot = K`: `d_m(a) = (-1)^{nm} d(a)_{i-m}`.
pub fn tot_inverse<F: Field>(k: &FilteredComplex<F>) -> Result<TwistedComplex<F>> {
    TwistedComplex::from_family(family_from_total(k.d(), DIFFERENTIAL)?)
}

pub fn tot_inverse_morphism<F: Field>(
    a: &TwistedComplex<F>,
    b: &TwistedComplex<F>,
    f: &TotalMap<F>,
) -> Result<TwistedMorphism<F>> {
    if f.src() != a.module() || f.dst() != b.module() {
        return Err(Error::ModuleMismatch("map does not fit the complexes".into()));
    }
    TwistedMorphism::from_family(a, b, family_from_total(f, Bideg::ZERO)?)
}

/// `f ⊗ g` on total spaces with the Koszul rule
/// `(f⊗g)(a⊗b) = (-1)^{|g||a|} f(a) ⊗ g(b)` for total degrees.
pub fn tensor_total<F: Field>(
    f: &TotalMap<F>,
    g: &TotalMap<F>,
    src: &TensorLayout,
    dst: &TensorLayout,
) -> TotalMap<F> {
    TotalMap::from_fn(
        src.module(),
        dst.module(),
        f.degree() + g.degree(),
        f.shift() + g.shift(),
        |e| {
            let t = src.tuple(e);
            let sign = F::sign((g.degree() as i64 * t[0].deg.total() as i64).rem_euclid(2) == 1);
            let mut out = Vec::new();
            for (x, c) in f.apply_basis(t[0]) {
                for (y, c2) in g.apply_basis(t[1]) {
                    out.push((dst.elem(&[x, y]), sign.clone() * c.clone() * c2));
                }
            }
            out
        },
    )
    .expect("tensor of filtered maps")
}

/// `Tot(A) ⊗ Tot(B)` on the basis of `A ⊗ B`, filtered by the sum of columns.
pub fn tensor_filtered<F: Field>(k: &FilteredComplex<F>, l: &FilteredComplex<F>) -> (FilteredComplex<F>, TensorLayout) {
    let lay = TensorLayout::new(vec![k.module().clone(), l.module().clone()]);
    let d = tensor_total(k.d(), &TotalMap::identity(l.module()), &lay, &lay)
        .add(&tensor_total(&TotalMap::identity(k.module()), l.d(), &lay, &lay));
    (FilteredComplex::new(d).expect("tensor differential"), lay)
}

/// `μ: Tot(A) ⊗ Tot(B) -> Tot(A ⊗ B)`, `a ⊗ b ↦ (-1)^{k n} a ⊗ b` for `a` in
/// column `k` and `b` of total degree `n`.
pub fn mu<F: Field>(a: &BigradedModule, b: &BigradedModule) -> TotalMap<F> {
    let lay = TensorLayout::new(vec![a.clone(), b.clone()]);
    TotalMap::from_fn(lay.module(), lay.module(), 0, 0, |e| {
        let t = lay.tuple(e);
        let odd = (t[0].deg.h() as i64 * t[1].deg.total() as i64).rem_euclid(2) == 1;
        vec![(e, F::sign(odd))]
    })
    .expect("diagonal map")
}

/// `μ` is a filtered chain map.
pub fn check_mu_chain<F: Field>(a: &TwistedComplex<F>, b: &TwistedComplex<F>) -> Report {
    let (src, _) = tensor_filtered(&tot(a), &tot(b));
    let dst = tot(&tensor(a, b));
    let mut rep = check_chain_map(&src, &dst, &mu(a.module(), b.module()));
    rep.check = "mu chain map".into();
    rep
}

/// `μ_{B,A} ∘ τ = Tot(τ) ∘ μ_{A,B}`, with `τ` the total-degree symmetry on
/// the left and the bigraded symmetry on the right.
pub fn check_mu_symmetry<F: Field>(a: &BigradedModule, b: &BigradedModule) -> Report {
    let ab = TensorLayout::new(vec![a.clone(), b.clone()]);
    let ba = TensorLayout::new(vec![b.clone(), a.clone()]);
    let swap = TotalMap::from_fn(ab.module(), ba.module(), 0, 0, |e| {
        let t = ab.tuple(e);
        let odd = (t[0].deg.total() as i64 * t[1].deg.total() as i64).rem_euclid(2) == 1;
        vec![(ba.elem(&[t[1], t[0]]), F::sign(odd))]
    })
    .expect("swap");
    let mut strict = Family::zero(ab.module(), ba.module(), Bideg::ZERO);
    strict.set(0, symmetry_iso(&ab, &ba));
    let lhs = mu::<F>(b, a).compose(&swap);
    let rhs = tot_family(&strict).compose(&mu(a, b));
    let mut rep = Report::new("mu symmetry");
    report_difference(&mut rep, &lhs.sub(&rhs));
    rep
}

/// `μ ∘ (Tot f ⊗ Tot g) = Tot(f ⊗ g) ∘ μ`.
pub fn check_mu_naturality<F: Field>(f: &TwistedMorphism<F>, g: &TwistedMorphism<F>) -> Report {
    let src = TensorLayout::new(vec![f.src().module().clone(), g.src().module().clone()]);
    let dst = TensorLayout::new(vec![f.dst().module().clone(), g.dst().module().clone()]);
    let lhs = mu(f.dst().module(), g.dst().module()).compose(&tensor_total(
        &tot_morphism(f),
        &tot_morphism(g),
        &src,
        &dst,
    ));
    let rhs = tot_morphism(&tensor_morphisms(f, g)).compose(&mu(f.src().module(), g.src().module()));
    let mut rep = Report::new("mu naturality");
    report_difference(&mut rep, &lhs.sub(&rhs));
    rep
}

pub(crate) fn report_difference<F: Field>(rep: &mut Report, diff: &TotalMap<F>) {
    let mut seen = std::collections::BTreeSet::new();
    for ((s, _), m) in diff.blocks() {
        if !m.is_zero() && seen.insert(*s) {
            rep.fail("square", Some(*s), "");
        }
    }
}
