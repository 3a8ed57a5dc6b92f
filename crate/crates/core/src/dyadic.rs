//! Exact dyadic rationals `m / 2^e`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;
use crate::Rational;

/// A dyadic rational `mantissa / 2^exponent` in canonical form.
///
/// The mantissa is odd, or zero with exponent zero, so two equal values
/// always have identical representations and the exponent is the smallest
/// grid level containing the value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self { mantissa: BigInt::from(n), exponent: 0 }
    }

    /// `mantissa / 2^exponent`, normalised.
    pub fn new(mantissa: impl Into<BigInt>, exponent: u32) -> Self {
        let mut d = Self { mantissa: mantissa.into(), exponent };
        d.normalize();
        d
    }

    /// `1 / 2^k`.
    pub fn pow2_inv(k: u32) -> Self {
        Self { mantissa: BigInt::one(), exponent: k }
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(self.exponent)) as u32;
        if shift > 0 {
            self.mantissa >>= shift as usize;
            self.exponent -= shift;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Smallest `k` with `self * 2^k` an integer.
    pub fn level(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    pub fn half(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { mantissa: self.mantissa.clone(), exponent: self.exponent + 1 }
    }

    pub fn double(&self) -> Self {
        self.mul_pow2(1)
    }

    /// `self * 2^k`.
    pub fn mul_pow2(&self, k: u32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if self.exponent >= k {
            Self { mantissa: self.mantissa.clone(), exponent: self.exponent - k }
        } else {
            Self { mantissa: &self.mantissa << (k - self.exponent) as usize, exponent: 0 }
        }
    }

    /// `self / 2^k`.
    pub fn div_pow2(&self, k: u32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Self::new(&self.mantissa * n, self.exponent)
    }

    /// Numerator of `self` on the grid of level `k`, i.e. `self * 2^k`,
    /// provided it is an integer.
    pub fn grid_numerator(&self, k: u32) -> Option<BigInt> {
        (self.exponent <= k).then(|| &self.mantissa << (k - self.exponent) as usize)
    }

    /// `floor(self * 2^k)`.
    pub fn floor_at_level(&self, k: u32) -> BigInt {
        if self.exponent <= k {
            &self.mantissa << (k - self.exponent) as usize
        } else {
            self.mantissa.div_floor(&(BigInt::one() << (self.exponent - k) as usize))
        }
    }

    /// `ceil(self * 2^k)`.
    pub fn ceil_at_level(&self, k: u32) -> BigInt {
        if self.exponent <= k {
            &self.mantissa << (k - self.exponent) as usize
        } else {
            self.floor_at_level(k) + 1
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), BigInt::one() << self.exponent as usize)
    }

    /// Exact conversion when the rational has a power-of-two denominator.
    pub fn from_rational(q: &Rational) -> Option<Self> {
        let den = q.denom();
        let bits = den.bits();
        if bits == 0 || den.trailing_zeros() != Some(bits - 1) {
            return None;
        }
        Some(Self::new(q.numer().clone(), (bits - 1) as u32))
    }

    /// Exact conversion of a finite binary64 value.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        let mantissa = BigInt::from(m) * sign;
        Some(if e >= 0 { Self::new(mantissa << e as usize, 0) } else { Self::new(mantissa, (-e) as u32) })
    }

    pub fn to_f64(&self) -> f64 {
        if self.exponent <= 1000 {
            if let Some(m) = self.mantissa.to_f64() {
                return libm::ldexp(m, -(self.exponent as i32));
            }
        }
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// `"p/q"` form with `q = 2^exponent`, or a bare integer.
    pub fn to_fraction_string(&self) -> String {
        self.to_string()
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let e = self.exponent.max(other.exponent);
        let a = &self.mantissa << (e - self.exponent) as usize;
        let b = &other.mantissa << (e - other.exponent) as usize;
        (a, b, e)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.exponent == other.exponent {
            return self.mantissa.cmp(&other.mantissa);
        }
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<&Dyadic> for Rational {
    fn from(d: &Dyadic) -> Rational {
        d.to_rational()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/{}", self.mantissa, BigInt::one() << self.exponent as usize)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"p"`, `"p/q"` with `q` a power of two, and `"p/2^e"`.
impl FromStr for Dyadic {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseError::Dyadic(s.to_string());
        let Some((num, den)) = s.split_once('/') else {
            return BigInt::from_str(s).map(|m| Dyadic::new(m, 0)).map_err(|_| bad());
        };
        let mantissa = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = den.trim();
        if let Some(e) = den.strip_prefix("2^") {
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            return Ok(Dyadic::new(mantissa, e));
        }
        let q = BigInt::from_str(den).map_err(|_| bad())?;
        if !q.is_positive() {
            return Err(bad());
        }
        let bits = q.bits();
        if q.trailing_zeros() != Some(bits - 1) {
            return Err(bad());
        }
        Ok(Dyadic::new(mantissa, (bits - 1) as u32))
    }
}
