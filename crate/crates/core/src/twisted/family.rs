use std::collections::BTreeMap;

use crate::bigraded::{Bideg, BigradedMap, BigradedModule};
use crate::error::{Error, Result};
use crate::field::Field;

/// Bidegree step between consecutive members of a family.
pub const STEP: Bideg = Bideg(-1, -1);

/// A family `{f_m}_{m ≥ 0}` of maps `src -> dst` where `f_m` has bidegree
/// `base + m·(-1,-1)`. Differentials have base `(0,1)`, morphisms `(0,0)`,
/// `r`-homotopies `(r, r-1)`.
///
/// Zero members are never stored.
#[derive(Clone, Debug)]
pub struct Family<F> {
    src: BigradedModule,
    dst: BigradedModule,
    base: Bideg,
    maps: BTreeMap<usize, BigradedMap<F>>,
}

impl<F: Field> PartialEq for Family<F> {
    fn eq(&self, o: &Self) -> bool {
        self.src == o.src && self.dst == o.dst && self.base == o.base && self.maps == o.maps
    }
}

impl<F: Field> Eq for Family<F> {}

impl<F: Field> Family<F> {
    pub fn zero(src: &BigradedModule, dst: &BigradedModule, base: Bideg) -> Self {
        Family {
            src: src.clone(),
            dst: dst.clone(),
            base,
            maps: BTreeMap::new(),
        }
    }

    /// Validating constructor.
    pub fn from_maps(
        src: &BigradedModule,
        dst: &BigradedModule,
        base: Bideg,
        maps: impl IntoIterator<Item = (usize, BigradedMap<F>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(src, dst, base);
        for (m, f) in maps {
            if f.src() != src || f.dst() != dst {
                return Err(Error::ModuleMismatch(format!(
                    "member {m} has the wrong source or target"
                )));
            }
            let expected = Self::bideg_of(base, m);
            if f.bideg() != expected {
                return Err(Error::Bidegree {
                    expected,
                    found: f.bideg(),
                });
            }
            if out.maps.contains_key(&m) {
                return Err(Error::Invalid(format!("member {m} given twice")));
            }
            out.set(m, f);
        }
        Ok(out)
    }

    pub fn bideg_of(base: Bideg, m: usize) -> Bideg {
        base + (m as i32) * STEP
    }

    pub fn src(&self) -> &BigradedModule {
        &self.src
    }

    pub fn dst(&self) -> &BigradedModule {
        &self.dst
    }

    pub fn base(&self) -> Bideg {
        self.base
    }

    /// Total degree `v - u` of the family, which is also that of every member.
    pub fn degree(&self) -> i32 {
        self.base.total()
    }

    pub fn get(&self, m: usize) -> Option<&BigradedMap<F>> {
        self.maps.get(&m)
    }

    pub fn member(&self, m: usize) -> BigradedMap<F> {
        self.maps
            .get(&m)
            .cloned()
            .unwrap_or_else(|| BigradedMap::zero(&self.src, &self.dst, Self::bideg_of(self.base, m)))
    }

    pub fn set(&mut self, m: usize, f: BigradedMap<F>) {
        assert_eq!(f.bideg(), Self::bideg_of(self.base, m), "member bidegree");
        assert!(f.src() == &self.src && f.dst() == &self.dst, "member modules");
        if f.is_zero() {
            self.maps.remove(&m);
        } else {
            self.maps.insert(m, f);
        }
    }

    pub fn members(&self) -> impl Iterator<Item = (usize, &BigradedMap<F>)> {
        self.maps.iter().map(|(&m, f)| (m, f))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.maps.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    /// Largest index whose member can be nonzero for degree reasons.
    pub fn index_bound(src: &BigradedModule, dst: &BigradedModule, base: Bideg) -> Option<usize> {
        let (_, shi) = src.horizontal_range()?;
        let (dlo, _) = dst.horizontal_range()?;
        // member m shifts horizontally by base.h - m and must reach dst from src
        let m = base.h() - dlo + shi;
        (m >= 0).then_some(m as usize)
    }

    pub fn bound(&self) -> Option<usize> {
        Self::index_bound(&self.src, &self.dst, self.base)
    }

    fn assert_parallel(&self, o: &Self) {
        assert!(
            self.src == o.src && self.dst == o.dst && self.base == o.base,
            "families are not parallel"
        );
    }

    pub fn add_scaled_assign(&mut self, c: &F, o: &Self) {
        self.assert_parallel(o);
        for (&m, f) in &o.maps {
            let mut x = self.member(m);
            x.add_scaled_assign(c, f);
            self.set(m, x);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled_assign(&F::one(), o);
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled_assign(&-F::one(), o);
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(&self.src, &self.dst, self.base);
        for (&m, f) in &self.maps {
            out.set(m, f.scale(c));
        }
        out
    }

    /// Adds `c * f` to member `m`.
    pub fn add_to_member(&mut self, m: usize, c: &F, f: &BigradedMap<F>) {
        let mut x = self.member(m);
        x.add_scaled_assign(c, f);
        self.set(m, x);
    }

    /// `(S f)_0 = 0`, `(S f)_m = f_{m-1}`; base moves by `(1,1)`.
    pub fn shift(&self) -> Self {
        let mut out = Self::zero(&self.src, &self.dst, self.base - STEP);
        for (&m, f) in &self.maps {
            out.maps.insert(m + 1, f.clone());
        }
        out
    }

    /// `(g ∘ f)_m = Σ_{i+j=m} g_i f_j` where `self = f`.
    pub fn then(&self, g: &Self) -> Self {
        self.then_signed(g, |_| false)
    }

    /// The enriched composition `c(g, f)_m = Σ_{i+j=m} (-1)^{i|f|} g_i f_j`.
    pub fn then_enriched(&self, g: &Self) -> Self {
        let deg_odd = self.degree().rem_euclid(2) == 1;
        self.then_signed(g, |i| deg_odd && i % 2 == 1)
    }

    fn then_signed(&self, g: &Self, odd: impl Fn(usize) -> bool) -> Self {
        assert!(self.dst == g.src, "compose: modules do not match");
        let mut out = Self::zero(&self.src, &g.dst, self.base + g.base);
        for (&i, gi) in &g.maps {
            for (&j, fj) in &self.maps {
                let c = F::sign(odd(i));
                out.add_to_member(i + j, &c, &gi.compose(fj));
            }
        }
        out
    }

    /// The same maps seen between other (dimensionally equal) modules.
    pub fn with_modules(&self, src: &BigradedModule, dst: &BigradedModule) -> Self {
        let mut out = Self::zero(src, dst, self.base);
        for (&m, f) in &self.maps {
            out.maps.insert(m, f.with_modules(src, dst));
        }
        out
    }
}
