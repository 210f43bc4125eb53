use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bidegree `(horizontal, vertical)`. An element of `A_i^j` has bidegree
/// `(i, j)` and total degree `j - i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Bideg(pub i32, pub i32);

impl Bideg {
    pub const ZERO: Bideg = Bideg(0, 0);

    pub fn h(self) -> i32 {
        self.0
    }

    pub fn v(self) -> i32 {
        self.1
    }

    pub fn total(self) -> i32 {
        self.1 - self.0
    }

    /// The pairing `<(a, b), (c, d)> = ac + bd` that drives all Koszul signs.
    pub fn dot(self, o: Bideg) -> i64 {
        self.0 as i64 * o.0 as i64 + self.1 as i64 * o.1 as i64
    }

    /// Parity of [`Bideg::dot`].
    pub fn dot_odd(self, o: Bideg) -> bool {
        self.dot(o).rem_euclid(2) == 1
    }
}

impl fmt::Display for Bideg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl Add for Bideg {
    type Output = Bideg;
    fn add(self, o: Bideg) -> Bideg {
        Bideg(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Bideg {
    type Output = Bideg;
    fn sub(self, o: Bideg) -> Bideg {
        Bideg(self.0 - o.0, self.1 - o.1)
    }
}

impl Neg for Bideg {
    type Output = Bideg;
    fn neg(self) -> Bideg {
        Bideg(-self.0, -self.1)
    }
}

impl Mul<Bideg> for i32 {
    type Output = Bideg;
    fn mul(self, b: Bideg) -> Bideg {
        Bideg(self * b.0, self * b.1)
    }
}

impl std::iter::Sum for Bideg {
    fn sum<I: Iterator<Item = Bideg>>(iter: I) -> Bideg {
        iter.fold(Bideg::ZERO, |a, b| a + b)
    }
}

/// A basis vector: the `idx`-th basis element of the piece in bidegree `deg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElem {
    pub deg: Bideg,
    pub idx: usize,
}

impl BasisElem {
    pub fn new(deg: Bideg, idx: usize) -> Self {
        BasisElem { deg, idx }
    }
}

/// Finite dimensional bigraded vector space, recorded by its dimensions.
/// Bidegrees with dimension zero are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BigradedModule {
    dims: BTreeMap<Bideg, usize>,
}

impl BigradedModule {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The ground field in bidegree `(0, 0)`.
    pub fn unit() -> Self {
        Self::from_dims([(Bideg::ZERO, 1)])
    }

    /// Sums repeated bidegrees and drops zero dimensions.
    pub fn from_dims(dims: impl IntoIterator<Item = (Bideg, usize)>) -> Self {
        let mut m = BTreeMap::new();
        for (b, n) in dims {
            if n > 0 {
                *m.entry(b).or_insert(0) += n;
            }
        }
        BigradedModule { dims: m }
    }

    /// Strict variant for external input: repeated bidegrees are an error.
    pub fn try_from_dims(dims: impl IntoIterator<Item = (Bideg, usize)>) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (b, n) in dims {
            if m.insert(b, n).is_some() {
                return Err(Error::Invalid(format!("bidegree {b} listed twice")));
            }
        }
        m.retain(|_, n| *n > 0);
        Ok(BigradedModule { dims: m })
    }

    pub fn dim(&self, b: Bideg) -> usize {
        self.dims.get(&b).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<Bideg, usize> {
        &self.dims
    }

    pub fn support(&self) -> impl Iterator<Item = Bideg> + '_ {
        self.dims.keys().copied()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn basis(&self) -> impl Iterator<Item = BasisElem> + '_ {
        self.dims
            .iter()
            .flat_map(|(&d, &n)| (0..n).map(move |i| BasisElem::new(d, i)))
    }

    /// Smallest and largest horizontal degree in the support.
    pub fn horizontal_range(&self) -> Option<(i32, i32)> {
        let lo = self.dims.keys().map(|b| b.0).min()?;
        let hi = self.dims.keys().map(|b| b.0).max()?;
        Some((lo, hi))
    }

    /// Total degrees occurring in the support, ascending.
    pub fn total_degrees(&self) -> Vec<i32> {
        let mut t: Vec<i32> = self.dims.keys().map(|b| b.total()).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// The module with `M'(b + shift) = M(b)`.
    pub fn shifted(&self, shift: Bideg) -> Self {
        BigradedModule {
            dims: self.dims.iter().map(|(&b, &n)| (b + shift, n)).collect(),
        }
    }

    /// Direct sum `self ⊕ other`, `self` first in every bidegree.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_dims(self.dims.iter().chain(other.dims.iter()).map(|(&b, &n)| (b, n)))
    }

    /// True when all horizontal degrees are nonnegative.
    pub fn is_first_quadrant_horizontal(&self) -> bool {
        self.dims.keys().all(|b| b.0 >= 0)
    }
}

/// Horizontal width of the joint support of several modules.
pub fn joint_width<'a>(mods: impl IntoIterator<Item = &'a BigradedModule>) -> usize {
    let mut lo = i32::MAX;
    let mut hi = i32::MIN;
    for m in mods {
        if let Some((a, b)) = m.horizontal_range() {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    if lo > hi {
        0
    } else {
        (hi - lo) as usize
    }
}
