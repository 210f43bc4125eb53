//! Twisted complexes (multicomplexes), their morphisms and `r`-homotopies.

mod family;
mod homotopy;
mod ops;
pub(crate) mod path;

pub use family::{Family, STEP};
pub use homotopy::{
    assemble_homotopy, check_r_homotopy, check_r_homotopy_assembled, check_r_homotopy_direct,
    homotopy_base, homotopy_residual, path_witness, shift_homotopy, solve_r_homotopy, RHomotopy,
};
pub use ops::{compose, direct_sum, internal_hom, invert, tensor, tensor_morphisms, HomLayout};
pub use path::{
    cone, cone_to_pair, pair_to_cone, path, path_morphism, translation, Cone, Path,
};

use crate::bigraded::{Bideg, BigradedMap, BigradedModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::report::Report;

/// Base bidegree of a twisted differential family: `d_m` has `(-m, 1-m)`.
pub const DIFFERENTIAL: Bideg = Bideg(0, 1);

/// A bigraded module with maps `d_m` of bidegree `(-m, 1-m)`.
///
/// The relations `Σ_{i+j=m} (-1)^i d_i d_j = 0` are not enforced on
/// construction; use [`check_twisted`].
#[derive(Clone, Debug)]
pub struct TwistedComplex<F> {
    module: BigradedModule,
    d: Family<F>,
}

impl<F: Field> PartialEq for TwistedComplex<F> {
    fn eq(&self, o: &Self) -> bool {
        self.module == o.module && self.d == o.d
    }
}

impl<F: Field> Eq for TwistedComplex<F> {}

impl<F: Field> TwistedComplex<F> {
    pub fn new(module: BigradedModule, d: impl IntoIterator<Item = (usize, BigradedMap<F>)>) -> Result<Self> {
        let d = Family::from_maps(&module, &module, DIFFERENTIAL, d)?;
        Ok(TwistedComplex { module, d })
    }

    pub fn from_family(d: Family<F>) -> Result<Self> {
        if d.src() != d.dst() || d.base() != DIFFERENTIAL {
            return Err(Error::Invalid("not a differential family".into()));
        }
        Ok(TwistedComplex {
            module: d.src().clone(),
            d,
        })
    }

    /// The module with all `d_m = 0`.
    pub fn trivial(module: BigradedModule) -> Self {
        let d = Family::zero(&module, &module, DIFFERENTIAL);
        TwistedComplex { module, d }
    }

    /// The ground field concentrated in bidegree `(0,0)`.
    pub fn unit() -> Self {
        Self::trivial(BigradedModule::unit())
    }

    pub fn module(&self) -> &BigradedModule {
        &self.module
    }

    pub fn d(&self) -> &Family<F> {
        &self.d
    }

    pub fn dm(&self, m: usize) -> BigradedMap<F> {
        self.d.member(m)
    }

    /// Horizontal width of the support.
    pub fn width(&self) -> usize {
        self.module.horizontal_range().map_or(0, |(a, b)| (b - a) as usize)
    }
}

/// A family `f_m: A -> B` of bidegree `(-m,-m)`.
#[derive(Clone, Debug)]
pub struct TwistedMorphism<F> {
    src: TwistedComplex<F>,
    dst: TwistedComplex<F>,
    f: Family<F>,
}

impl<F: Field> PartialEq for TwistedMorphism<F> {
    fn eq(&self, o: &Self) -> bool {
        self.src == o.src && self.dst == o.dst && self.f == o.f
    }
}

impl<F: Field> Eq for TwistedMorphism<F> {}

impl<F: Field> TwistedMorphism<F> {
    pub fn new(
        src: &TwistedComplex<F>,
        dst: &TwistedComplex<F>,
        f: impl IntoIterator<Item = (usize, BigradedMap<F>)>,
    ) -> Result<Self> {
        let f = Family::from_maps(src.module(), dst.module(), Bideg::ZERO, f)?;
        Ok(TwistedMorphism {
            src: src.clone(),
            dst: dst.clone(),
            f,
        })
    }

    pub fn from_family(src: &TwistedComplex<F>, dst: &TwistedComplex<F>, f: Family<F>) -> Result<Self> {
        if f.src() != src.module() || f.dst() != dst.module() || f.base() != Bideg::ZERO {
            return Err(Error::ModuleMismatch("family does not fit the complexes".into()));
        }
        Ok(TwistedMorphism {
            src: src.clone(),
            dst: dst.clone(),
            f,
        })
    }

    pub fn identity(a: &TwistedComplex<F>) -> Self {
        Self::strict(a, a, BigradedMap::identity(a.module()))
    }

    pub fn zero(src: &TwistedComplex<F>, dst: &TwistedComplex<F>) -> Self {
        TwistedMorphism {
            src: src.clone(),
            dst: dst.clone(),
            f: Family::zero(src.module(), dst.module(), Bideg::ZERO),
        }
    }

    pub fn strict(src: &TwistedComplex<F>, dst: &TwistedComplex<F>, f0: BigradedMap<F>) -> Self {
        let mut f = Family::zero(src.module(), dst.module(), Bideg::ZERO);
        f.set(0, f0);
        TwistedMorphism {
            src: src.clone(),
            dst: dst.clone(),
            f,
        }
    }

    pub fn src(&self) -> &TwistedComplex<F> {
        &self.src
    }

    pub fn dst(&self) -> &TwistedComplex<F> {
        &self.dst
    }

    pub fn family(&self) -> &Family<F> {
        &self.f
    }

    pub fn fm(&self, m: usize) -> BigradedMap<F> {
        self.f.member(m)
    }

    pub fn is_strict(&self) -> bool {
        self.f.members().all(|(m, _)| m == 0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.src != o.src || self.dst != o.dst {
            return Err(Error::ModuleMismatch("adding morphisms between different complexes".into()));
        }
        Ok(TwistedMorphism {
            f: self.f.add(&o.f),
            ..self.clone()
        })
    }
}

/// Residual `Σ_{i+j=m} (-1)^i d_i d_j` of a differential family.
pub fn twisted_residual<F: Field>(d: &Family<F>) -> Family<F> {
    let mut out = Family::zero(d.src(), d.dst(), DIFFERENTIAL + DIFFERENTIAL);
    for (i, di) in d.members() {
        for (j, dj) in d.members() {
            out.add_to_member(i + j, &F::sign(i % 2 == 1), &di.compose(dj));
        }
    }
    out
}

/// Verifies `Σ_{i+j=m} (-1)^i d_i d_j = 0` for every `m`.
pub fn check_twisted<F: Field>(a: &TwistedComplex<F>) -> Report {
    let mut rep = Report::new("twisted");
    let res = twisted_residual(a.d());
    for (m, r) in res.members() {
        for s in r.nonzero_sources() {
            rep.fail(format!("A_{{{m},1}}"), Some(s), "");
        }
    }
    rep
}

/// Residual `Σ_{i+j=m} d_i^B f_j - (-1)^i f_i d_j^A` of a morphism family.
pub fn morphism_residual<F: Field>(a: &TwistedComplex<F>, b: &TwistedComplex<F>, f: &Family<F>) -> Family<F> {
    let mut out = Family::zero(a.module(), b.module(), DIFFERENTIAL + f.base());
    for (i, di) in b.d().members() {
        for (j, fj) in f.members() {
            out.add_to_member(i + j, &F::one(), &di.compose(fj));
        }
    }
    for (i, fi) in f.members() {
        for (j, dj) in a.d().members() {
            out.add_to_member(i + j, &-F::sign(i % 2 == 1), &fi.compose(dj));
        }
    }
    out
}

/// Verifies `Σ_{i+j=m} d_i^B f_j = Σ_{i+j=m} (-1)^i f_i d_j^A` for every `m`.
pub fn check_morphism<F: Field>(f: &TwistedMorphism<F>) -> Report {
    let mut rep = Report::new("morphism");
    let res = morphism_residual(f.src(), f.dst(), f.family());
    for (m, r) in res.members() {
        for s in r.nonzero_sources() {
            rep.fail(format!("B_{{{m},1}}"), Some(s), "");
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::linalg::Matrix;

    /// `x` in (1,1) with `d_1 x = y` in (0,1): a single nonzero `d_1`.
    pub(crate) fn d1_pair() -> TwistedComplex<Q> {
        let m = BigradedModule::from_dims([(Bideg(1, 1), 1), (Bideg(0, 1), 1)]);
        let d1 = BigradedMap::new(&m, &m, Bideg(-1, 0), [(Bideg(1, 1), Matrix::identity(1))]).unwrap();
        TwistedComplex::new(m, [(1, d1)]).unwrap()
    }

    #[test]
    fn trivial_and_pair_are_twisted() {
        assert!(check_twisted(&TwistedComplex::<Q>::unit()).ok);
        assert!(check_twisted(&d1_pair()).ok);
    }

    #[test]
    fn wrong_bidegree_rejected() {
        let m = BigradedModule::from_dims([(Bideg(0, 0), 1), (Bideg(0, 1), 1)]);
        let d = BigradedMap::<Q>::new(&m, &m, Bideg(0, 1), [(Bideg(0, 0), Matrix::identity(1))]).unwrap();
        assert!(matches!(TwistedComplex::new(m, [(1, d)]), Err(Error::Bidegree { .. })));
    }

    #[test]
    fn broken_relation_reported() {
        // d_0 d_0 != 0 on a three-term vertical chain
        let m = BigradedModule::from_dims([(Bideg(0, 0), 1), (Bideg(0, 1), 1), (Bideg(0, 2), 1)]);
        let d0 = BigradedMap::<Q>::new(
            &m,
            &m,
            Bideg(0, 1),
            [(Bideg(0, 0), Matrix::identity(1)), (Bideg(0, 1), Matrix::identity(1))],
        )
        .unwrap();
        let a = TwistedComplex::new(m, [(0, d0)]).unwrap();
        let rep = check_twisted(&a);
        assert!(!rep.ok);
        assert_eq!(rep.failed_relations(), vec!["A_{0,1}"]);
        assert_eq!(rep.failures[0].bidegree, Some(Bideg(0, 0)));
    }

    #[test]
    fn identity_is_morphism() {
        let a = d1_pair();
        assert!(check_morphism(&TwistedMorphism::identity(&a)).ok);
        // the projection killing y is not a morphism: d_1 would have to vanish
        let p = BigradedMap::new(a.module(), a.module(), Bideg::ZERO, [(Bideg(1, 1), Matrix::identity(1))]).unwrap();
        assert!(!check_morphism(&TwistedMorphism::strict(&a, &a, p)).ok);
    }
}
