use std::collections::BTreeMap;

use crate::bigraded::{Bideg, BigradedMap};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::report::Report;
use crate::twisted::path::{path, X, Y, Z};
use crate::twisted::{check_morphism, Family, TwistedComplex, TwistedMorphism};

/// An `r`-homotopy `ĥ: f ≃_r g` between morphisms `A -> B`; `ĥ_m` has
/// bidegree `(r-m, r-m-1)`.
#[derive(Clone, Debug)]
pub struct RHomotopy<F> {
    r: usize,
    f: TwistedMorphism<F>,
    g: TwistedMorphism<F>,
    h: Family<F>,
}

impl<F: Field> PartialEq for RHomotopy<F> {
    fn eq(&self, o: &Self) -> bool {
        self.r == o.r && self.f == o.f && self.g == o.g && self.h == o.h
    }
}

impl<F: Field> Eq for RHomotopy<F> {}

/// Base bidegree of an `r`-homotopy family.
pub fn homotopy_base(r: usize) -> Bideg {
    Bideg(r as i32, r as i32 - 1)
}

impl<F: Field> RHomotopy<F> {
    pub fn new(r: usize, f: &TwistedMorphism<F>, g: &TwistedMorphism<F>, h: Family<F>) -> Result<Self> {
        if f.src() != g.src() || f.dst() != g.dst() {
            return Err(Error::ModuleMismatch("f and g are not parallel".into()));
        }
        if h.src() != f.src().module() || h.dst() != f.dst().module() || h.base() != homotopy_base(r) {
            return Err(Error::ModuleMismatch("homotopy family does not fit f and g".into()));
        }
        Ok(RHomotopy {
            r,
            f: f.clone(),
            g: g.clone(),
            h,
        })
    }

    pub fn from_maps(
        r: usize,
        f: &TwistedMorphism<F>,
        g: &TwistedMorphism<F>,
        h: impl IntoIterator<Item = (usize, BigradedMap<F>)>,
    ) -> Result<Self> {
        let fam = Family::from_maps(f.src().module(), f.dst().module(), homotopy_base(r), h)?;
        Self::new(r, f, g, fam)
    }

    pub fn zero(r: usize, f: &TwistedMorphism<F>) -> Self {
        let h = Family::zero(f.src().module(), f.dst().module(), homotopy_base(r));
        RHomotopy {
            r,
            f: f.clone(),
            g: f.clone(),
            h,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn f(&self) -> &TwistedMorphism<F> {
        &self.f
    }

    pub fn g(&self) -> &TwistedMorphism<F> {
        &self.g
    }

    pub fn h(&self) -> &Family<F> {
        &self.h
    }

    pub fn src(&self) -> &TwistedComplex<F> {
        self.f.src()
    }

    pub fn dst(&self) -> &TwistedComplex<F> {
        self.f.dst()
    }
}

/// Left side of `Σ_{i+j=m} (-1)^{i+r} d_i^B ĥ_j + (-1)^i ĥ_i d_j^A`, linear in `ĥ`.
fn homotopy_operator<F: Field>(a: &TwistedComplex<F>, b: &TwistedComplex<F>, r: usize, h: &Family<F>) -> Family<F> {
    let base = Bideg(r as i32, r as i32);
    let mut out = Family::zero(a.module(), b.module(), base);
    for (i, di) in b.d().members() {
        for (j, hj) in h.members() {
            out.add_to_member(i + j, &F::sign((i + r) % 2 == 1), &di.compose(hj));
        }
    }
    for (i, hi) in h.members() {
        for (j, dj) in a.d().members() {
            out.add_to_member(i + j, &F::sign(i % 2 == 1), &hi.compose(dj));
        }
    }
    out
}

/// `S^r (g - f)`: member `m` is `g_{m-r} - f_{m-r}`.
fn homotopy_target<F: Field>(f: &TwistedMorphism<F>, g: &TwistedMorphism<F>, r: usize) -> Family<F> {
    let mut t = g.family().sub(f.family());
    for _ in 0..r {
        t = t.shift();
    }
    t
}

/// Residual of the conditions: zero iff `ĥ: f ≃_r g`.
pub fn homotopy_residual<F: Field>(h: &RHomotopy<F>) -> Family<F> {
    let lhs = homotopy_operator(h.src(), h.dst(), h.r, &h.h);
    lhs.sub(&homotopy_target(&h.f, &h.g, h.r))
}

/// Direct check of the homotopy conditions, one relation per `m`.
pub fn check_r_homotopy_direct<F: Field>(h: &RHomotopy<F>) -> Report {
    let mut rep = Report::new("r-homotopy");
    for (m, x) in homotopy_residual(h).members() {
        for s in x.nonzero_sources() {
            rep.fail(format!("H_{{{m},1}}"), Some(s), "");
        }
    }
    rep
}

/// The morphism `x ↦ (f(x), ĥ(x), g(x))` into the `r`-path of the target.
pub fn assemble_homotopy<F: Field>(h: &RHomotopy<F>) -> TwistedMorphism<F> {
    let p = path(h.dst(), h.r);
    let l = &p.layout;
    let top = [h.f.family().max_index(), h.g.family().max_index(), h.h.max_index()]
        .into_iter()
        .flatten()
        .max();
    let mut out = Family::zero(h.src().module(), p.complex.module(), Bideg::ZERO);
    for m in 0..=top.unwrap_or(0) {
        let mut x = l.inclusion::<F>(X).compose(&h.f.fm(m));
        x.add_assign(&l.inclusion::<F>(Y).compose(&h.h.member(m)));
        x.add_assign(&l.inclusion::<F>(Z).compose(&h.g.fm(m)));
        out.set(m, x);
    }
    TwistedMorphism::from_family(h.src(), &p.complex, out).expect("assembled homotopy")
}

/// Check through the path object: the assembled map must be a morphism.
pub fn check_r_homotopy_assembled<F: Field>(h: &RHomotopy<F>) -> Report {
    let mut rep = check_morphism(&assemble_homotopy(h));
    rep.check = "r-homotopy (assembled)".into();
    rep
}

/// Runs both routes; the verdict is the direct one and any disagreement
/// between the routes is reported as a failure.
pub fn check_r_homotopy<F: Field>(h: &RHomotopy<F>) -> Report {
    let mut rep = check_r_homotopy_direct(h);
    let other = check_r_homotopy_assembled(h);
    if other.ok != rep.ok {
        rep.fail("route agreement", None, format!("assembled route says ok = {}", other.ok));
    }
    rep
}

/// Finds some `ĥ: f ≃_r g` by solving the (finite) linear system over the
/// bidegree window, or `None` when none exists.
pub fn solve_r_homotopy<F: Field>(f: &TwistedMorphism<F>, g: &TwistedMorphism<F>, r: usize) -> Result<Option<RHomotopy<F>>> {
    if f.src() != g.src() || f.dst() != g.dst() {
        return Err(Error::ModuleMismatch("f and g are not parallel".into()));
    }
    let (a, b) = (f.src(), f.dst());
    let base = homotopy_base(r);
    let bound = Family::<F>::index_bound(a.module(), b.module(), base);
    // unknowns: one per entry of each possible block of each member
    let mut unknowns: Vec<(usize, Bideg, usize, usize)> = Vec::new();
    if let Some(bound) = bound {
        for m in 0..=bound {
            let deg = Family::<F>::bideg_of(base, m);
            for (&s, &c) in a.module().dims() {
                let rows = b.module().dim(s + deg);
                for i in 0..rows {
                    for j in 0..c {
                        unknowns.push((m, s, i, j));
                    }
                }
            }
        }
    }
    let mut eq_index: BTreeMap<(usize, Bideg, usize, usize), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, F)>> = Vec::with_capacity(unknowns.len());
    let flatten = |fam: &Family<F>, eq_index: &mut BTreeMap<_, usize>| {
        let mut col = Vec::new();
        for (m, x) in fam.members() {
            for (&s, blk) in x.blocks() {
                for i in 0..blk.rows() {
                    for j in 0..blk.cols() {
                        if blk[(i, j)].is_zero() {
                            continue;
                        }
                        let n = eq_index.len();
                        let k = *eq_index.entry((m, s, i, j)).or_insert(n);
                        col.push((k, blk[(i, j)].clone()));
                    }
                }
            }
        }
        col
    };
    for &(m, s, i, j) in &unknowns {
        let deg = Family::<F>::bideg_of(base, m);
        let mut blk = Matrix::zeros(b.module().dim(s + deg), a.module().dim(s));
        blk[(i, j)] = F::one();
        let mut e = BigradedMap::zero(a.module(), b.module(), deg);
        e.set_block(s, blk);
        let mut fam = Family::zero(a.module(), b.module(), base);
        fam.set(m, e);
        columns.push(flatten(&homotopy_operator(a, b, r, &fam), &mut eq_index));
    }
    let rhs = flatten(&homotopy_target(f, g, r), &mut eq_index);
    let n_eq = eq_index.len();
    let mut mat = Matrix::zeros(n_eq, unknowns.len());
    for (c, col) in columns.iter().enumerate() {
        for (k, x) in col {
            mat[(*k, c)] = x.clone();
        }
    }
    let mut rv = Matrix::zeros(n_eq, 1);
    for (k, x) in rhs {
        rv[(k, 0)] = x;
    }
    let Some(sol) = mat.solve(&rv) else {
        return Ok(None);
    };
    let mut h = Family::zero(a.module(), b.module(), base);
    for (c, &(m, s, i, j)) in unknowns.iter().enumerate() {
        if sol[(c, 0)].is_zero() {
            continue;
        }
        let deg = Family::<F>::bideg_of(base, m);
        let mut blk = Matrix::zeros(b.module().dim(s + deg), a.module().dim(s));
        blk[(i, j)] = sol[(c, 0)].clone();
        let mut e = BigradedMap::zero(a.module(), b.module(), deg);
        e.set_block(s, blk);
        h.add_to_member(m, &F::one(), &e);
    }
    Ok(Some(RHomotopy::new(r, f, g, h)?))
}

/// `ĥ'_0 = 0`, `ĥ'_m = -ĥ_{m-1}`: an `r`-homotopy is also an `(r+1)`-homotopy.
pub fn shift_homotopy<F: Field>(h: &RHomotopy<F>) -> RHomotopy<F> {
    RHomotopy {
        r: h.r + 1,
        f: h.f.clone(),
        g: h.g.clone(),
        h: h.h.shift().scale(&-F::one()),
    }
}

/// The homotopy `ĥ_0(x,y,z) = (0,0,y)` from `ι∂⁻` to the identity of `P_r(A)`.
pub fn path_witness<F: Field>(a: &TwistedComplex<F>, r: usize) -> RHomotopy<F> {
    let p = path(a, r);
    let l = &p.layout;
    let f = crate::twisted::compose(&p.iota, &p.minus).expect("ι∂⁻");
    let g = TwistedMorphism::identity(&p.complex);
    let h0 = l.inclusion::<F>(Z).compose(&l.projection(Y));
    RHomotopy::from_maps(r, &f, &g, [(0, h0)]).expect("path witness")
}
