//! Outward-rounded fixed-point interval arithmetic.
//!
//! An [`Interval`] is `[lo, hi] * 2^-prec` with big-integer mantissas. Every
//! operation rounds the lower endpoint down and the upper endpoint up to the
//! grid `2^-prec`, so the result always contains the exact image of the inputs.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn floor_shift(v: &BigInt, bits: u32) -> BigInt {
    v.div_floor(&(BigInt::one() << bits))
}

fn ceil_shift(v: &BigInt, bits: u32) -> BigInt {
    -((-v).div_floor(&(BigInt::one() << bits)))
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

impl Interval {
    /// Builds `[lo, hi] * 2^-prec` from mantissas.
    pub fn from_mantissas(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        let m = v.into() << prec;
        Interval { lo: m.clone(), hi: m, prec }
    }

    /// Smallest grid interval containing `num / den` (`den > 0`).
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Self {
        let num = num.into() << prec;
        let den = den.into();
        assert!(den.is_positive(), "denominator must be positive");
        Interval { lo: num.div_floor(&den), hi: ceil_div(&num, &den), prec }
    }

    /// Smallest grid interval containing `[lo, hi]`.
    pub fn from_rationals(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        let l = (lo.numer() << prec).div_floor(lo.denom());
        let h = ceil_div(&(hi.numer() << prec), hi.denom());
        Interval { lo: l, hi: h, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.prec)
    }

    pub fn mid_f64(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, BigInt::one() << (self.prec + 1));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Re-expresses on a different grid, rounding outward when coarsening.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = prec - self.prec;
                Interval { lo: &self.lo << s, hi: &self.hi << s, prec }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                Interval { lo: floor_shift(&self.lo, s), hi: ceil_shift(&self.hi, s), prec }
            }
        }
    }

    fn check_prec(&self, other: &Interval) {
        assert_eq!(self.prec, other.prec, "interval precisions differ");
    }

    pub fn add(&self, other: &Interval) -> Interval {
        self.check_prec(other);
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi, prec: self.prec }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.check_prec(other);
        Interval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo, prec: self.prec }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        self.check_prec(other);
        let (lo, hi) = if !self.lo.is_negative() && !other.lo.is_negative() {
            (&self.lo * &other.lo, &self.hi * &other.hi)
        } else {
            let products = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
            let lo = products.iter().min().expect("nonempty").clone();
            let hi = products.iter().max().expect("nonempty").clone();
            (lo, hi)
        };
        Interval { lo: floor_shift(&lo, self.prec), hi: ceil_shift(&hi, self.prec), prec: self.prec }
    }

    /// Exact multiplication by an integer.
    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Interval { lo: b, hi: a, prec: self.prec }
        } else {
            Interval { lo: a, hi: b, prec: self.prec }
        }
    }

    /// Division; `None` if the divisor contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        self.check_prec(other);
        if !other.lo.is_positive() && !other.hi.is_negative() {
            return None;
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            let scaled = a << self.prec;
            for b in [&other.lo, &other.hi] {
                let (f, c) = if b.is_negative() {
                    let (nb, ns) = (-b, -&scaled);
                    (ns.div_floor(&nb), ceil_div(&ns, &nb))
                } else {
                    (scaled.div_floor(b), ceil_div(&scaled, b))
                };
                if lo.as_ref().is_none_or(|l| f < *l) {
                    lo = Some(f);
                }
                if hi.as_ref().is_none_or(|h| c > *h) {
                    hi = Some(c);
                }
            }
        }
        Some(Interval { lo: lo.expect("set"), hi: hi.expect("set"), prec: self.prec })
    }

    pub fn pow(&self, mut exp: u64) -> Interval {
        let mut base = self.clone();
        let mut acc = Interval::from_int(1, self.prec);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `floor(x + 1/2)` if it takes the same value at both endpoints.
    pub fn round_half_up(&self) -> Option<BigInt> {
        let half = BigInt::one() << self.prec.saturating_sub(1);
        if self.prec == 0 {
            return (self.lo == self.hi).then(|| self.lo.clone());
        }
        let l = floor_shift(&(&self.lo + &half), self.prec);
        let h = floor_shift(&(&self.hi + &half), self.prec);
        (l == h).then_some(l)
    }

    /// Midpoint rounded to `digits` decimal places, as a plain decimal string.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let num = (&self.lo + &self.hi) * &scale;
        let den = BigInt::one() << (self.prec + 1);
        let rounded = (num + (&den >> 1u32)).div_floor(&den);
        format_fixed(&rounded, digits)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo(), self.hi())
    }
}

/// Writes `v * 10^-digits` with exactly `digits` fractional digits.
pub fn format_fixed(v: &BigInt, digits: u32) -> String {
    let neg = v.is_negative();
    let s = v.abs().to_string();
    let d = digits as usize;
    let body = if d == 0 {
        s
    } else if s.len() > d {
        format!("{}.{}", &s[..s.len() - d], &s[s.len() - d..])
    } else {
        format!("0.{}{}", "0".repeat(d - s.len()), s)
    };
    if neg && v.abs() != BigInt::zero() {
        format!("-{body}")
    } else {
        body
    }
}

/// Decimal rendering of a rational, rounded half up to `digits` places.
pub fn rational_to_decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let num: BigInt = x.numer() * &scale * 2 + x.denom();
    let rounded = num.div_floor(&(x.denom() * 2));
    format_fixed(&rounded, digits)
}

/// `x` rounded toward minus infinity to `digits` places.
pub fn floor_decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    format_fixed(&(x.numer() * &scale).div_floor(x.denom()), digits)
}

/// `x` rounded toward plus infinity to `digits` places.
pub fn ceil_decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    format_fixed(&(x.numer() * &scale).div_ceil(x.denom()), digits)
}

/// The first `digits` decimal places shared by every point of `[lo, hi]`
/// (truncation toward minus infinity), or `None` if the interval straddles
/// a digit boundary.
pub fn certified_digits(lo: &BigRational, hi: &BigRational, digits: u32) -> Option<String> {
    let a = floor_decimal(lo, digits);
    (a == floor_decimal(hi, digits)).then_some(a)
}

/// `log2` of a positive big integer as `f64`, accurate for any size.
pub fn log2_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map(f64::log2).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("64-bit value");
    top.log2() + shift as f64
}
