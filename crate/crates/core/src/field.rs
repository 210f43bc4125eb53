//! Coefficient fields.
//!
//! Everything in the crate is generic over [`Field`]. Two implementations
//! ship with the library: [`Q`] (arbitrary precision rationals),
//! [`Fp`] (integers modulo a compile time prime) and [`DynFp`] (modulo a
//! prime fixed at run time).

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Description of a field as it appears in interchange documents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldConfig {
    Rational,
    PrimeField { p: u64 },
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfig::Rational => write!(f, "Q"),
            FieldConfig::PrimeField { p } => write!(f, "F_{p}"),
        }
    }
}

pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn config() -> FieldConfig;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    /// A uniformly chosen small element, used by the random generators.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-3..=3))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// `(-1)^odd` as a field element.
    fn sign(odd: bool) -> Self {
        if odd {
            -Self::one()
        } else {
            Self::one()
        }
    }
}

/// Integers modulo the prime `P`. `P` must be below `2^32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

/// The default prime field.
pub type F32003 = Fp<32003>;

impl<const P: u64> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(self.0 * o.0 % P)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn config() -> FieldConfig {
        FieldConfig::PrimeField { p: P }
    }
    fn to_json(&self) -> Value {
        Value::from(self.0)
    }
    fn from_json(v: &Value) -> Result<Self> {
        parse_prime_scalar(v, P).map(Fp)
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }
}

/// Parses a prime field entry: an integer in `0..p`.
pub fn parse_prime_scalar(v: &Value, p: u64) -> Result<u64> {
    match v.as_u64() {
        Some(n) if n < p => Ok(n),
        _ => Err(Error::Parse(format!(
            "expected an integer in 0..{p}, found {v}"
        ))),
    }
}

/// Integers modulo a prime chosen at run time, once per process.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DynFp(u64);

static DYN_MODULUS: std::sync::OnceLock<u64> = std::sync::OnceLock::new();

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl DynFp {
    /// Fixes the modulus. It can be set only once; setting the same value
    /// again is a no-op.
    pub fn set_modulus(p: u64) -> Result<()> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not a prime below 2^31")));
        }
        let got = *DYN_MODULUS.get_or_init(|| p);
        if got != p {
            return Err(Error::FieldMismatch {
                expected: format!("F_{got}"),
                found: format!("F_{p}"),
            });
        }
        Ok(())
    }

    pub fn modulus() -> u64 {
        *DYN_MODULUS.get().expect("DynFp modulus is not set")
    }

    pub fn new(n: i64) -> Self {
        DynFp(n.rem_euclid(Self::modulus() as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for DynFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for DynFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for DynFp {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        DynFp((self.0 + o.0) % Self::modulus())
    }
}

impl Sub for DynFp {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let p = Self::modulus();
        DynFp((self.0 + p - o.0) % p)
    }
}

impl Mul for DynFp {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        DynFp(self.0 * o.0 % Self::modulus())
    }
}

impl Neg for DynFp {
    type Output = Self;
    fn neg(self) -> Self {
        let p = Self::modulus();
        DynFp((p - self.0) % p)
    }
}

impl AddAssign for DynFp {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for DynFp {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Field for DynFp {
    fn zero() -> Self {
        DynFp(0)
    }
    fn one() -> Self {
        DynFp(1)
    }
    fn from_i64(n: i64) -> Self {
        DynFp::new(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        let p = Self::modulus();
        let (mut base, mut e, mut acc) = (self.0, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Some(DynFp(acc))
    }
    fn config() -> FieldConfig {
        FieldConfig::PrimeField { p: Self::modulus() }
    }
    fn to_json(&self) -> Value {
        Value::from(self.0)
    }
    fn from_json(v: &Value) -> Result<Self> {
        parse_prime_scalar(v, Self::modulus()).map(DynFp)
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        DynFp(rng.gen_range(0..Self::modulus()))
    }
}

/// Arbitrary precision rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer_i64(&self) -> Option<i64> {
        self.0.numer().to_i64()
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Q {
    type Err = Error;

    /// Accepts `a` or `a/b` with optional sign on the numerator.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let valid_int = |x: &str, signed: bool| {
            let digits = if signed {
                x.strip_prefix('-').or_else(|| x.strip_prefix('+')).unwrap_or(x)
            } else {
                x
            };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid_int(n, true) || !valid_int(d, false) {
            return Err(bad());
        }
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let den: BigInt = d.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Q(BigRational::new(num, den)))
    }
}

impl Add for Q {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Q(self.0 + o.0)
    }
}

impl Sub for Q {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Q(self.0 - o.0)
    }
}

impl Mul for Q {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Q(self.0 * o.0)
    }
}

impl Neg for Q {
    type Output = Self;
    fn neg(self) -> Self {
        Q(-self.0)
    }
}

impl AddAssign for Q {
    fn add_assign(&mut self, o: Self) {
        self.0 += o.0;
    }
}

impl SubAssign for Q {
    fn sub_assign(&mut self, o: Self) {
        self.0 -= o.0;
    }
}

impl Field for Q {
    fn zero() -> Self {
        Q(BigRational::zero())
    }
    fn one() -> Self {
        Q(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Q(self.0.recip()))
        }
    }
    fn config() -> FieldConfig {
        FieldConfig::Rational
    }
    fn to_json(&self) -> Value {
        Value::String(self.0.to_string())
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s.parse(),
            _ => Err(Error::Parse(format!(
                "rational entries must be strings like \"a/b\", found {v}"
            ))),
        }
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl Q {
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn prime_field_inverse() {
        for n in 1..7 {
            let x = F7::from_i64(n);
            assert_eq!(x * x.inv().unwrap(), F7::one());
        }
        assert!(F7::zero().inv().is_none());
        assert_eq!(F7::from_i64(-1), F7::from_i64(6));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!("3/6".parse::<Q>().unwrap(), Q::new(1, 2));
        assert_eq!("-4".parse::<Q>().unwrap(), Q::from_i64(-4));
        for bad in ["", "1/0", "a/b", "1/-2", "1//2", "--1", "1/"] {
            assert!(bad.parse::<Q>().is_err(), "{bad}");
        }
    }

    #[test]
    fn runtime_prime_field() {
        DynFp::set_modulus(101).unwrap();
        assert!(DynFp::set_modulus(101).is_ok());
        assert!(DynFp::set_modulus(103).is_err());
        assert!(DynFp::set_modulus(100).is_err());
        for n in 1..101 {
            let x = DynFp::from_i64(n);
            assert_eq!(x * x.inv().unwrap(), DynFp::one());
        }
        assert_eq!(DynFp::from_i64(-1).value(), 100);
        assert_eq!(DynFp::config(), FieldConfig::PrimeField { p: 101 });
    }

    #[test]
    fn json_round_trip() {
        let q = Q::new(-5, 3);
        assert_eq!(Q::from_json(&q.to_json()).unwrap(), q);
        let x = F32003::from_i64(-2);
        assert_eq!(F32003::from_json(&x.to_json()).unwrap(), x);
        assert!(F32003::from_json(&Value::from(32003u64)).is_err());
        assert!(Q::from_json(&Value::from(3)).is_err());
    }
}
