use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtered::tot::{family_from_total, report_difference, tot_family, tot_morphism};
use crate::filtered::{tot, TotalMap};
use crate::report::Report;
use crate::twisted::{check_r_homotopy_direct, homotopy_base, RHomotopy, TwistedMorphism};

/// A homotopy of order `r` on totalizations: `H` of degree `-1` with
/// `H(F_p) ⊆ F_{p+r}` and `dH + Hd = Tot(g) - Tot(f)`.
#[derive(Clone, Debug)]
pub struct OrderRHomotopy<F> {
    r: usize,
    map: TotalMap<F>,
}

impl_field_eq!(OrderRHomotopy { r, map });

impl<F: Field> OrderRHomotopy<F> {
    pub fn new(r: usize, map: TotalMap<F>) -> Result<Self> {
        if map.degree() != -1 {
            return Err(Error::Invalid("a homotopy has degree -1".into()));
        }
        if map.needed_shift().is_some_and(|s| s > r as i32) {
            return Err(Error::Filtration(format!("map raises the filtration by more than {r}")));
        }
        Ok(OrderRHomotopy {
            r,
            map: map.with_shift(map.shift().max(r as i32)),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn map(&self) -> &TotalMap<F> {
        &self.map
    }
}

/// Verifies `dH + Hd = Tot(g) - Tot(f)`.
pub fn check_order_r_homotopy<F: Field>(
    f: &TwistedMorphism<F>,
    g: &TwistedMorphism<F>,
    h: &OrderRHomotopy<F>,
) -> Report {
    let mut rep = Report::new("order-r homotopy");
    let (ka, kb) = (tot(f.src()), tot(f.dst()));
    if h.map.src() != ka.module() || h.map.dst() != kb.module() {
        rep.fail("shape", None, "homotopy does not fit the complexes");
        return rep;
    }
    let lhs = kb.d().compose(&h.map).add(&h.map.compose(ka.d()));
    let rhs = tot_morphism(g).sub(&tot_morphism(f));
    report_difference(&mut rep, &lhs.with_shift(lhs.shift().max(rhs.shift())).sub(&rhs));
    rep
}

/// `H = (-1)^r Σ_m (-1)^{(m+r)n} ĥ_m`.
pub fn homotopy_to_tot<F: Field>(h: &RHomotopy<F>) -> OrderRHomotopy<F> {
    let map = tot_family(h.h()).scale(&F::sign(h.r() % 2 == 1));
    OrderRHomotopy::new(h.r(), map).expect("totalized homotopy")
}

/// Inverse of [`homotopy_to_tot`], validating both sides.
pub fn tot_to_homotopy<F: Field>(
    h: &OrderRHomotopy<F>,
    f: &TwistedMorphism<F>,
    g: &TwistedMorphism<F>,
) -> Result<RHomotopy<F>> {
    if !check_order_r_homotopy(f, g, h).ok {
        return Err(Error::Invalid("dH + Hd differs from Tot(g) - Tot(f)".into()));
    }
    let fam = family_from_total(&h.map.scale(&F::sign(h.r % 2 == 1)), homotopy_base(h.r))?;
    let out = RHomotopy::new(h.r, f, g, fam)?;
    debug_assert!(check_r_homotopy_direct(&out).ok);
    Ok(out)
}
