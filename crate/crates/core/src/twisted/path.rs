use crate::bigraded::{Bideg, BigradedMap, SumLayout};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::twisted::{check_morphism, Family, RHomotopy, TwistedComplex, TwistedMorphism, DIFFERENTIAL};

/// Slots of the path object: `x`, `y`, `z`.
pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;

pub(crate) fn path_layout(a: &crate::bigraded::BigradedModule, r: usize) -> SumLayout {
    let r = r as i32;
    SumLayout::new(vec![
        (a.clone(), Bideg::ZERO),
        (a.clone(), Bideg(r, r - 1)),
        (a.clone(), Bideg::ZERO),
    ])
}

/// The `r`-path object `P_r(A)` with its structure maps.
#[derive(Clone, Debug)]
pub struct Path<F> {
    pub r: usize,
    pub complex: TwistedComplex<F>,
    pub layout: SumLayout,
    /// `∂⁻(x,y,z) = x`.
    pub minus: TwistedMorphism<F>,
    /// `∂⁺(x,y,z) = z`.
    pub plus: TwistedMorphism<F>,
    /// `ι(x) = (x,0,x)`.
    pub iota: TwistedMorphism<F>,
    /// `∂⁰(x,y,z) = y`, a bare map of bidegree `(r, r-1)`.
    pub middle: BigradedMap<F>,
}

/// `P_r(A)_i^j = A_i^j ⊕ A_{i+r}^{j+r-1} ⊕ A_i^j` with
/// `D_r = [[d_r,0,0],[-1,-d_r,1],[0,0,d_r]]` and
/// `D_m = diag(d_m, (-1)^{m+r+1} d_m, d_m)` for `m ≠ r`.
pub fn path<F: Field>(a: &TwistedComplex<F>, r: usize) -> Path<F> {
    let l = path_layout(a.module(), r);
    let top = a.d().max_index().unwrap_or(0).max(r);
    let mut d = Family::zero(l.module(), l.module(), DIFFERENTIAL);
    for m in 0..=top {
        let dm = a.dm(m);
        let mut x = l.place(X, X, &dm);
        x.add_assign(&l.place(Z, Z, &dm));
        x.add_scaled_assign(&F::sign((m + r + 1) % 2 == 1), &l.place(Y, Y, &dm));
        if m == r {
            let id = BigradedMap::identity(a.module());
            x.add_assign(&l.place(Y, Z, &id));
            x.add_scaled_assign(&-F::one(), &l.place(Y, X, &id));
        }
        d.set(m, x);
    }
    let complex = TwistedComplex::from_family(d).expect("path differential");
    let minus = TwistedMorphism::strict(&complex, a, l.projection(X));
    let plus = TwistedMorphism::strict(&complex, a, l.projection(Z));
    let iota_map = l.inclusion::<F>(X).add(&l.inclusion(Z));
    let iota = TwistedMorphism::strict(a, &complex, iota_map);
    let middle = l.projection(Y);
    Path {
        r,
        complex,
        layout: l,
        minus,
        plus,
        iota,
        middle,
    }
}

/// `P_r(f)_m = (f_m, (-1)^m f_m, f_m)`.
pub fn path_morphism<F: Field>(f: &TwistedMorphism<F>, r: usize) -> TwistedMorphism<F> {
    let ps = path(f.src(), r);
    let pd = path(f.dst(), r);
    let mut out = Family::zero(ps.complex.module(), pd.complex.module(), Bideg::ZERO);
    for (m, fm) in f.family().members() {
        let mut x = pd.layout.inclusion::<F>(X).compose(fm).compose(&ps.layout.projection(X));
        x.add_assign(&pd.layout.inclusion::<F>(Z).compose(fm).compose(&ps.layout.projection(Z)));
        let y = pd.layout.inclusion::<F>(Y).compose(fm).compose(&ps.layout.projection(Y));
        x.add_scaled_assign(&F::sign(m % 2 == 1), &y);
        out.set(m, x);
    }
    TwistedMorphism::from_family(&ps.complex, &pd.complex, out).expect("path morphism")
}

/// `T_r(A)_i^j = A_{i-r}^{j-r+1}` with `T_r(d_m) = (-1)^{m+r+1} d_m`.
pub fn translation<F: Field>(a: &TwistedComplex<F>, r: usize) -> TwistedComplex<F> {
    let ri = r as i32;
    let l = SumLayout::new(vec![(a.module().clone(), Bideg(-ri, 1 - ri))]);
    let mut d = Family::zero(l.module(), l.module(), DIFFERENTIAL);
    for (m, dm) in a.d().members() {
        d.set(m, l.place(0, 0, dm).scale(&F::sign((m + r + 1) % 2 == 1)));
    }
    TwistedComplex::from_family(d).expect("translation differential")
}

/// The `r`-cone of a morphism with its two structure maps.
#[derive(Clone, Debug)]
pub struct Cone<F> {
    pub r: usize,
    pub map: TwistedMorphism<F>,
    pub complex: TwistedComplex<F>,
    pub layout: SumLayout,
    /// Strict inclusion `B -> C_r(f)`.
    pub inclusion: TwistedMorphism<F>,
    /// Strict projection `C_r(f) -> T_r(A)`.
    pub projection: TwistedMorphism<F>,
}

const CONE_A: usize = 0;
const CONE_B: usize = 1;

/// `C_r(f)_i^j = A_{i-r}^{j-r+1} ⊕ B_i^j` with
/// `D_m(a,b) = ((-1)^{m+r+1} d_m a, (-1)^{m+r+1} f_{m-r}(a) + d_m b)`.
pub fn cone<F: Field>(f: &TwistedMorphism<F>, r: usize) -> Cone<F> {
    let (a, b) = (f.src(), f.dst());
    let ri = r as i32;
    let l = SumLayout::new(vec![
        (a.module().clone(), Bideg(-ri, 1 - ri)),
        (b.module().clone(), Bideg::ZERO),
    ]);
    let top = [
        a.d().max_index(),
        b.d().max_index(),
        f.family().max_index().map(|k| k + r),
    ]
    .into_iter()
    .flatten()
    .max();
    let mut d = Family::zero(l.module(), l.module(), DIFFERENTIAL);
    for m in 0..=top.unwrap_or(0) {
        let s = F::sign((m + r + 1) % 2 == 1);
        let mut x = l.place(CONE_A, CONE_A, &a.dm(m)).scale(&s);
        x.add_assign(&l.place(CONE_B, CONE_B, &b.dm(m)));
        if m >= r {
            x.add_scaled_assign(&s, &l.place(CONE_B, CONE_A, &f.fm(m - r)));
        }
        d.set(m, x);
    }
    let complex = TwistedComplex::from_family(d).expect("cone differential");
    let inclusion = TwistedMorphism::strict(b, &complex, l.inclusion(CONE_B));
    let t = translation(a, r);
    let tl = SumLayout::new(vec![(a.module().clone(), Bideg(-ri, 1 - ri))]);
    let projection = TwistedMorphism::strict(
        &complex,
        &t,
        tl.inclusion::<F>(0).compose(&l.projection(CONE_A)),
    );
    Cone {
        r,
        map: f.clone(),
        complex,
        layout: l,
        inclusion,
        projection,
    }
}

/// Splits `τ: C_r(w) -> X` into `f_m(b) = τ_m(0,b)` and the `r`-homotopy
/// `ĥ_m(a) = (-1)^m τ_m(a,0)` from `f∘w` to `0`.
pub fn cone_to_pair<F: Field>(c: &Cone<F>, tau: &TwistedMorphism<F>) -> Result<(TwistedMorphism<F>, RHomotopy<F>)> {
    if tau.src() != &c.complex {
        return Err(Error::ModuleMismatch("τ does not start at the cone".into()));
    }
    if !check_morphism(tau).ok {
        return Err(Error::Invalid("τ is not a morphism".into()));
    }
    let x = tau.dst();
    let (a, b) = (c.map.src(), c.map.dst());
    let incl_a = c.layout.inclusion::<F>(CONE_A);
    let incl_b = c.layout.inclusion::<F>(CONE_B);
    let mut f = Family::zero(b.module(), x.module(), Bideg::ZERO);
    let ri = c.r as i32;
    let mut h = Family::zero(a.module(), x.module(), Bideg(ri, ri - 1));
    for (m, tm) in tau.family().members() {
        f.set(m, tm.compose(&incl_b));
        h.set(m, tm.compose(&incl_a).scale(&F::sign(m % 2 == 1)));
    }
    let f = TwistedMorphism::from_family(b, x, f)?;
    let fw = crate::twisted::compose(&f, &c.map)?;
    let h = RHomotopy::new(c.r, &fw, &TwistedMorphism::zero(a, x), h)?;
    Ok((f, h))
}

/// Inverse of [`cone_to_pair`]: `τ_m(a,b) = (-1)^m ĥ_m(a) + f_m(b)` for
/// `ĥ: f∘w ≃_r 0`.
pub fn pair_to_cone<F: Field>(c: &Cone<F>, f: &TwistedMorphism<F>, h: &RHomotopy<F>) -> Result<TwistedMorphism<F>> {
    if f.src() != c.map.dst() || h.src() != c.map.src() || h.dst() != f.dst() || h.r() != c.r {
        return Err(Error::ModuleMismatch("pair does not fit the cone".into()));
    }
    let x = f.dst();
    let pa = c.layout.projection::<F>(CONE_A);
    let pb = c.layout.projection::<F>(CONE_B);
    let mut tau = Family::zero(c.complex.module(), x.module(), Bideg::ZERO);
    for (m, fm) in f.family().members() {
        tau.add_to_member(m, &F::one(), &fm.compose(&pb));
    }
    for (m, hm) in h.h().members() {
        tau.add_to_member(m, &F::sign(m % 2 == 1), &hm.compose(&pa));
    }
    TwistedMorphism::from_family(&c.complex, x, tau)
}
