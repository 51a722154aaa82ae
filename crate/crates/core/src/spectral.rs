//! Certified enclosures of the growth rate `alpha_D`, the unique positive root
//! of `p_D(z) = z^D - z^(D-1) - ... - 1`, and of the constants built from it:
//!
//! * `d_D = (alpha - 1) / (2 + (D + 1)(alpha - 2))`, with
//!   `|C_{t,D}| = floor(d_D alpha^t + 1/2)`;
//! * the two-excursion limit `d_D^2 / (alpha^D (alpha - 1))`;
//! * the depth-one limit `1 / (2n)!`.
//!
//! Everything here is exact rational or outward-rounded interval arithmetic;
//! floating point only appears in the diagnostic [`lemma33_report`].

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::compositions::{BigCount, CountTable};
use crate::error::{Error, Result};
use crate::interval::Interval;

/// Refinement rounds before giving up; each round adds [`REFINE_STEP_BITS`]
/// bits of precision, so this is far beyond anything a correct input needs.
pub const MAX_REFINE_ROUNDS: u32 = 64;
const REFINE_STEP_BITS: u64 = 32;
/// Guard bits carried by fixed-point evaluations on top of the target width.
const GUARD_BITS: u64 = 32;

fn check_depth(depth: usize) -> Result<()> {
    if depth < 2 {
        return Err(Error::Range(format!("alpha_D needs D >= 2, got {depth}")));
    }
    Ok(())
}

/// Sign of `p_D(m / 2^k)`, evaluated exactly as the homogenized integer
/// `sum_i c_i m^i 2^(k (D - i))` by Horner's rule.
fn poly_sign(depth: usize, m: &BigInt, k: u64) -> Ordering {
    let mut h = BigInt::one();
    for i in (0..depth).rev() {
        h = h * m - (BigInt::one() << (k * (depth - i) as u64));
    }
    h.sign().cmp(&num_bigint::Sign::NoSign)
}

/// A dyadic bracket `[lo, hi] / 2^k` with `p_D(lo) < 0 < p_D(hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaEnclosure {
    depth: usize,
    lo: BigInt,
    hi: BigInt,
    k: u64,
}

impl AlphaEnclosure {
    /// The starting bracket `[2 (1 - 2^-D), 2]`.
    pub fn initial(depth: usize) -> Result<Self> {
        check_depth(depth)?;
        let k = depth as u64;
        let hi = BigInt::one() << (k + 1);
        let lo = &hi - 2;
        let enc = AlphaEnclosure { depth, lo, hi, k };
        debug_assert_eq!(poly_sign(depth, &enc.lo, k), Ordering::Less);
        debug_assert_eq!(poly_sign(depth, &enc.hi, k), Ordering::Greater);
        Ok(enc)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.k)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.k)
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.k)
    }

    /// Largest `b` with `width <= 2^-b`.
    pub fn width_bits(&self) -> u64 {
        let diff = &self.hi - &self.lo;
        let ceil_log2 = if is_power_of_two(&diff) { diff.bits() - 1 } else { diff.bits() };
        self.k.saturating_sub(ceil_log2)
    }

    fn bisect(&mut self) {
        let mid = &self.lo + &self.hi;
        self.lo <<= 1;
        self.hi <<= 1;
        self.k += 1;
        match poly_sign(self.depth, &mid, self.k) {
            Ordering::Less => self.lo = mid,
            Ordering::Greater => self.hi = mid,
            Ordering::Equal => unreachable!("alpha_D is irrational for D >= 2"),
        }
    }

    /// Bisects until the width is at most `2^-bits` and `hi < 2`.
    pub fn refine_bits(&mut self, bits: u64) {
        while self.width_bits() < bits || self.hi >= BigInt::from(2) << self.k {
            self.bisect();
        }
    }

    /// Bisects until the width is at most `tol`.
    pub fn refine(&mut self, tol: &BigRational) {
        assert!(tol.is_positive(), "tolerance must be positive");
        self.refine_bits(0);
        while self.width() > *tol {
            self.bisect();
        }
    }

    /// The bracket on the grid `2^-prec`, rounded outward.
    pub fn interval(&self, prec: u32) -> Interval {
        Interval::from_mantissas(self.lo.clone(), self.hi.clone(), self.k as u32).with_prec(prec)
    }

    /// Midpoint rounded to `digits` decimal places.
    pub fn to_decimal(&self, digits: u32) -> String {
        Interval::from_mantissas(self.lo.clone(), self.hi.clone(), self.k as u32).to_decimal(digits)
    }
}

fn is_power_of_two(v: &BigInt) -> bool {
    let m = v.magnitude();
    !m.is_zero() && (m & (m - 1u32)).is_zero()
}

/// Encloses `alpha_D` to within `tol` by exact-rational bisection.
pub fn solve_alpha(depth: usize, tol: &BigRational) -> Result<AlphaEnclosure> {
    if !tol.is_positive() {
        return Err(Error::Range("tolerance must be positive".into()));
    }
    let mut enc = AlphaEnclosure::initial(depth)?;
    enc.refine(tol);
    Ok(enc)
}

/// [`solve_alpha`] with tolerance `2^-bits`.
pub fn solve_alpha_bits(depth: usize, bits: u64) -> Result<AlphaEnclosure> {
    let mut enc = AlphaEnclosure::initial(depth)?;
    enc.refine_bits(bits);
    Ok(enc)
}

/// Rational enclosure of a derived constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl ConstantEnclosure {
    pub fn exact(v: BigRational) -> Self {
        ConstantEnclosure { lo: v.clone(), hi: v }
    }

    fn from_interval(iv: &Interval) -> Self {
        ConstantEnclosure { lo: iv.lo(), hi: iv.hi() }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn mid_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        crate::interval::rational_to_decimal(&((&self.lo + &self.hi) / BigInt::from(2)), digits)
    }
}

/// `d_D` over an alpha enclosure, at fixed-point precision `prec`.
fn d_interval(alpha: &Interval, depth: usize) -> Interval {
    let prec = alpha.prec();
    let one = Interval::from_int(1, prec);
    let two = Interval::from_int(2, prec);
    let num = alpha.sub(&one);
    let den = two.add(&alpha.sub(&two).mul_int(&BigInt::from(depth + 1)));
    num.div(&den).expect("2 + (D + 1)(alpha - 2) > 0 for D >= 2")
}

/// `d_D^2 / (alpha^D (alpha - 1))`.
fn two_excursion_limit_interval(alpha: &Interval, depth: usize) -> Interval {
    let d = d_interval(alpha, depth);
    let one = Interval::from_int(1, alpha.prec());
    let den = alpha.pow(depth as u64).mul(&alpha.sub(&one));
    d.mul(&d).div(&den).expect("alpha > 1")
}

/// Refines precision until `eval` returns an interval of width at most `tol`.
fn refine_constant(
    depth: usize,
    tol: &BigRational,
    what: &str,
    eval: impl Fn(&Interval) -> Interval,
) -> Result<ConstantEnclosure> {
    check_depth(depth)?;
    if !tol.is_positive() {
        return Err(Error::Range("tolerance must be positive".into()));
    }
    let mut alpha = AlphaEnclosure::initial(depth)?;
    let mut bits = 64u64;
    for _ in 0..MAX_REFINE_ROUNDS {
        alpha.refine_bits(bits);
        let iv = eval(&alpha.interval((bits + GUARD_BITS) as u32));
        if iv.width() <= *tol {
            return Ok(ConstantEnclosure::from_interval(&iv));
        }
        bits += REFINE_STEP_BITS;
    }
    Err(Error::PrecisionExhausted { what: what.to_string(), iterations: MAX_REFINE_ROUNDS })
}

/// Encloses `d_D` to within `tol`.
pub fn coefficient_d(depth: usize, tol: &BigRational) -> Result<ConstantEnclosure> {
    refine_constant(depth, tol, "d_D", |a| d_interval(a, depth))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// `lim |C_t^{1,D}| / (t alpha_D^t) = d_D^2 / (alpha_D^D (alpha_D - 1))`.
    TwoExcursions { depth: usize },
    /// `lim |C_t^{n,1}| / t^(2n) = 1 / (2n)!`.
    DepthOne { n: usize },
}

pub fn limit_constant(kind: LimitKind, tol: &BigRational) -> Result<ConstantEnclosure> {
    match kind {
        LimitKind::TwoExcursions { depth } => {
            refine_constant(depth, tol, "two-excursion limit", |a| two_excursion_limit_interval(a, depth))
        }
        LimitKind::DepthOne { n } => {
            let fact: BigUint = (1..=2 * n as u64).map(BigUint::from).product();
            Ok(ConstantEnclosure::exact(BigRational::new(BigInt::one(), fact.into())))
        }
    }
}

/// Evaluates `floor(d_D alpha_D^t + 1/2)` for successive heights, reusing
/// and refining one alpha enclosure.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    alpha: AlphaEnclosure,
}

impl ClosedForm {
    pub fn new(depth: usize) -> Result<Self> {
        Ok(ClosedForm { alpha: AlphaEnclosure::initial(depth)? })
    }

    pub fn depth(&self) -> usize {
        self.alpha.depth
    }

    /// Certified enclosure of `d_D alpha_D^t` with alpha known to `bits` bits.
    pub fn approximation(&mut self, t: usize, bits: u64) -> Interval {
        self.alpha.refine_bits(bits);
        let a = self.alpha.interval((bits + GUARD_BITS) as u32);
        d_interval(&a, self.depth()).mul(&a.pow(t as u64))
    }

    /// The rounded closed form at height `t`.
    pub fn count(&mut self, t: usize) -> Result<BigCount> {
        // alpha < 2, so alpha^t < 2^t and t extra bits bound the amplification.
        let mut bits = t as u64 + 64 - (t as u64).leading_zeros() as u64 + 8;
        for _ in 0..MAX_REFINE_ROUNDS {
            let x = self.approximation(t, bits);
            if x.width() < BigRational::new(BigInt::one(), BigInt::from(2)) {
                if let Some(v) = x.round_half_up() {
                    let v = v.to_biguint().ok_or_else(|| Error::Range(format!("negative closed form at t = {t}")))?;
                    return Ok(BigCount::from(v));
                }
            }
            bits += REFINE_STEP_BITS;
        }
        Err(Error::PrecisionExhausted { what: format!("closed form at t = {t}"), iterations: MAX_REFINE_ROUNDS })
    }
}

/// `floor(d_D alpha_D^t + 1/2)`, which equals `|C_{t,D}|`.
pub fn closed_form_count(t: usize, depth: usize) -> Result<BigCount> {
    ClosedForm::new(depth)?.count(t)
}

/// The closed-form lower and upper estimates of `|C_t^{1,D}|` obtained by
/// replacing each factor `|C_{m,D}|` of the double sum with
/// `d alpha^m -+ 1/2`.
///
/// Writing `x_m = d alpha^m` and `s = t - r + 1`, the inner sum over `k` is
/// `Q(s) = sum_{i=0}^{s-1} (x_i + a)(x_{s-1-i} + a)` with `a = -+1/2`, which
/// does not depend on `t`; the estimate at `t` is `sum_{s=1}^{t-D} Q(s)`.
#[derive(Debug, Clone)]
pub struct TwoExcursionBounds {
    depth: usize,
    lower: Vec<Interval>,
    upper: Vec<Interval>,
}

impl TwoExcursionBounds {
    /// Precomputes both estimates for `t = 0..=t_max`.
    pub fn new(depth: usize, t_max: usize) -> Result<Self> {
        let mut alpha = AlphaEnclosure::initial(depth)?;
        let bits = t_max as u64 + 96;
        alpha.refine_bits(bits);
        let prec = 64u32;
        let a = alpha.interval((bits + GUARD_BITS) as u32);
        let d = d_interval(&a, depth);
        let mut x = Vec::with_capacity(t_max + 1);
        let mut pow = Interval::from_int(1, a.prec());
        for _ in 0..=t_max {
            x.push(d.mul(&pow).with_prec(prec));
            pow = pow.mul(&a);
        }
        let half = Interval::from_ratio(1, 2, prec);
        let minus: Vec<Interval> = x.iter().map(|v| v.sub(&half)).collect();
        let plus: Vec<Interval> = x.iter().map(|v| v.add(&half)).collect();
        let q = |f: &[Interval], s: usize| {
            (0..s).fold(Interval::from_int(0, prec), |acc, i| acc.add(&f[i].mul(&f[s - 1 - i])))
        };
        let mut lower = vec![Interval::from_int(0, prec); t_max + 1];
        let mut upper = lower.clone();
        for t in depth + 1..=t_max {
            let s = t - depth;
            lower[t] = lower[t - 1].add(&q(&minus, s));
            upper[t] = upper[t - 1].add(&q(&plus, s));
        }
        Ok(TwoExcursionBounds { depth, lower, upper })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn t_max(&self) -> usize {
        self.lower.len() - 1
    }

    /// Certified `(lower, upper)` at height `t`.
    pub fn at(&self, t: usize) -> (BigRational, BigRational) {
        (self.lower[t].lo(), self.upper[t].hi())
    }
}

/// `(lower, upper)` with `lower <= |C_t^{1,D}| <= upper`.
pub fn bounds_two_excursions(t: usize, depth: usize) -> Result<(BigRational, BigRational)> {
    if t == 0 {
        return Err(Error::Range("bounds need t >= 1".into()));
    }
    Ok(TwoExcursionBounds::new(depth, t)?.at(t))
}

/// One row of [`lemma33_report`]; ratios are midpoints of intervals
/// evaluated at [`LEMMA33_PREC_BITS`] bits.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma33Row {
    pub t: usize,
    /// `d^2 sum_r sum_k alpha^(t-r) / (t alpha^t)`.
    pub term1_ratio: f64,
    /// `d sum_r sum_k alpha^(k-1) / alpha^t`.
    pub term2_ratio: f64,
    /// `d sum_r sum_k alpha^(t-k-r+1) / alpha^t`.
    pub term3_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma33Report {
    pub depth: usize,
    /// `d^2 / (alpha^D (alpha - 1))`, the limit of `term1_ratio`.
    pub term1_limit: f64,
    /// `d alpha^(2-D) / (alpha - 1)^2`, an upper bound for the other two ratios.
    pub term23_bound: f64,
    pub rows: Vec<Lemma33Row>,
}

/// 212 bits is just over 64 decimal digits.
pub const LEMMA33_PREC_BITS: u32 = 212;

/// Evaluates the three sums of the two-excursion decomposition for
/// `t = D+1..=t_max`, normalized by their growth rates.
///
/// Over admissible `r` and `k`, the inner sum of the first term is constant
/// and the other two are geometric, so with `S1(t) = sum_{j<t-D} (j+1)
/// alpha^j` and `G(m) = sum_{j<m} alpha^j`: `term1 = d^2 S1(t)` and
/// `term2 = term3 = d sum_{m=1}^{t-D} G(m)`. The two latter sums visit the
/// same exponents in opposite orders.
pub fn lemma33_report(depth: usize, t_max: usize) -> Result<Lemma33Report> {
    let mut alpha = AlphaEnclosure::initial(depth)?;
    let prec = LEMMA33_PREC_BITS;
    alpha.refine_bits(prec as u64 + 2 * (64 - (t_max as u64).leading_zeros() as u64));
    let a = alpha.interval(prec);
    let one = Interval::from_int(1, prec);
    let d = d_interval(&a, depth);
    let d2 = d.mul(&d);
    let limit = two_excursion_limit_interval(&a, depth);
    let am1 = a.sub(&one);
    let bound = d.mul(&a.pow(2)).div(&a.pow(depth as u64)).and_then(|v| v.div(&am1.mul(&am1))).expect("alpha > 1");

    let mut rows = Vec::new();
    let mut pow = one.clone(); // alpha^j for j = t - D
    let mut s1 = Interval::from_int(0, prec);
    let mut g = Interval::from_int(0, prec); // G(t - D)
    let mut t2 = Interval::from_int(0, prec);
    let mut alpha_t = a.pow(depth as u64); // alpha^t
    for t in depth + 1..=t_max {
        // j = t - D - 1 joins both sums
        let j = t - depth - 1;
        s1 = s1.add(&pow.mul_int(&BigInt::from(j + 1)));
        g = g.add(&pow);
        t2 = t2.add(&g);
        pow = pow.mul(&a);
        alpha_t = alpha_t.mul(&a);
        let term1 = d2.mul(&s1).div(&alpha_t.mul_int(&BigInt::from(t))).expect("positive");
        let term2 = d.mul(&t2).div(&alpha_t).expect("positive");
        rows.push(Lemma33Row {
            t,
            term1_ratio: term1.mid_f64(),
            term2_ratio: term2.mid_f64(),
            term3_ratio: term2.mid_f64(),
        });
    }
    Ok(Lemma33Report { depth, term1_limit: limit.mid_f64(), term23_bound: bound.mid_f64(), rows })
}

/// Certified enclosure of `|C_t^{1,D}| / (t alpha_D^t)`.
pub fn two_excursion_ratio(table: &CountTable, t: usize, depth: usize, prec: u32) -> Result<ConstantEnclosure> {
    check_depth(depth)?;
    if t == 0 {
        return Err(Error::Range("ratio needs t >= 1".into()));
    }
    let count = table.exact_excursions(t, 1, depth);
    let mut alpha = AlphaEnclosure::initial(depth)?;
    alpha.refine_bits(prec as u64 + 2 * (64 - (t as u64).leading_zeros() as u64));
    let a = alpha.interval(prec);
    let c = Interval::from_int(BigInt::from(count.into_biguint()), prec);
    let den = a.pow(t as u64).mul_int(&BigInt::from(t));
    let ratio = c.div(&den).expect("alpha^t > 0");
    Ok(ConstantEnclosure::from_interval(&ratio))
}

/// Certified enclosure of the two-excursion limit at a fixed precision.
pub fn two_excursion_limit(depth: usize, prec: u32) -> Result<ConstantEnclosure> {
    let mut alpha = AlphaEnclosure::initial(depth)?;
    alpha.refine_bits(prec as u64 + 8);
    Ok(ConstantEnclosure::from_interval(&two_excursion_limit_interval(&alpha.interval(prec), depth)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow2_inv(bits: u32) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << bits)
    }

    fn dec(s: &str) -> BigRational {
        let (int, frac) = s.split_once('.').unwrap();
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        BigRational::new(format!("{int}{frac}").parse::<BigInt>().unwrap(), den)
    }

    /// Float bisection on `p_D`, independent of the exact code path.
    fn float_root(depth: usize) -> f64 {
        let p = |z: f64| z.powi(depth as i32) - (0..depth).map(|i| z.powi(i as i32)).sum::<f64>();
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn golden_ratio() {
        let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
        let enc = solve_alpha(2, &tol).unwrap();
        assert!(enc.width() <= tol);
        // (1 + sqrt 5) / 2 = 1.6180339887498948482...
        assert!(enc.lo() < dec("1.61803398875") && dec("1.61803398874") < enc.hi());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((enc.lo().to_f64().unwrap() - phi).abs() < 1e-9);
    }

    #[test]
    fn tribonacci() {
        let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
        let enc = solve_alpha(3, &tol).unwrap();
        // 1.839286755214161...
        assert!(enc.lo() < dec("1.8392867553") && dec("1.8392867551") < enc.hi());
        assert!((enc.lo().to_f64().unwrap() - float_root(3)).abs() < 1e-9);
    }

    #[test]
    fn enclosure_invariants() {
        for depth in 2..=12 {
            let enc = solve_alpha_bits(depth, 60).unwrap();
            let floor = BigRational::from_integer(2.into()) * (BigRational::one() - pow2_inv(depth as u32));
            assert!(floor <= enc.lo());
            assert!(enc.lo() < enc.hi());
            assert!(enc.hi() < BigRational::from_integer(2.into()));
            assert!(enc.width() <= pow2_inv(60));
            assert_eq!(poly_sign(depth, &enc.lo, enc.k), Ordering::Less);
            assert_eq!(poly_sign(depth, &enc.hi, enc.k), Ordering::Greater);
            assert!((enc.lo().to_f64().unwrap() - float_root(depth)).abs() < 1e-12);
        }
    }

    #[test]
    fn depth_one_is_rejected() {
        assert!(matches!(solve_alpha_bits(1, 10), Err(Error::Range(_))));
        assert!(matches!(closed_form_count(3, 1), Err(Error::Range(_))));
    }

    #[test]
    fn width_bits_is_conservative() {
        let mut enc = AlphaEnclosure::initial(4).unwrap();
        for target in [1u64, 7, 33, 100] {
            enc.refine_bits(target);
            assert!(enc.width() <= pow2_inv(target as u32));
        }
    }

    #[test]
    fn coefficient_d_golden() {
        let tol = pow2_inv(40);
        let d = coefficient_d(2, &tol).unwrap();
        assert!(d.width() <= tol);
        // (phi - 1) / (2 + 3 (phi - 2)) = 0.72360679774997896964...
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = (phi - 1.0) / (2.0 + 3.0 * (phi - 2.0));
        assert!((d.mid_f64() - expected).abs() < 1e-12);
        assert!((d.mid_f64() - 0.723_606_797_749_979).abs() < 1e-11);
    }

    #[test]
    fn coefficient_d_tribonacci_two_precisions() {
        let a = float_root(3);
        let expected = (a - 1.0) / (2.0 + 4.0 * (a - 2.0));
        let coarse = coefficient_d(3, &pow2_inv(30)).unwrap();
        let fine = coefficient_d(3, &pow2_inv(60)).unwrap();
        assert!((coarse.mid_f64() - expected).abs() < 1e-8);
        assert!(fine.width() <= coarse.width());
        assert!(coarse.lo <= fine.lo && fine.hi <= coarse.hi || (coarse.mid_f64() - fine.mid_f64()).abs() < 1e-8);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_count(4, 2).unwrap(), 5u64);
        assert_eq!(closed_form_count(0, 2).unwrap(), 1u64);
        assert_eq!(closed_form_count(2, 2).unwrap(), 2u64);
    }

    #[test]
    fn closed_form_matches_recursion_small() {
        let table = CountTable::new();
        for depth in 2..=6 {
            let mut cf = ClosedForm::new(depth).unwrap();
            for t in 0..=120 {
                assert_eq!(cf.count(t).unwrap(), table.bounded(t, depth), "t={t} D={depth}");
            }
        }
    }

    #[test]
    fn limit_examples() {
        let l2 = limit_constant(LimitKind::TwoExcursions { depth: 2 }, &pow2_inv(40)).unwrap();
        // d^2 / (phi^2 (phi - 1)) = 0.3236067977...
        assert!((l2.mid_f64() - 0.32360679774997897).abs() < 1e-11);
        let l0 = limit_constant(LimitKind::DepthOne { n: 0 }, &pow2_inv(10)).unwrap();
        assert_eq!(l0.lo, BigRational::one());
        assert_eq!(l0.hi, BigRational::one());
        let l3 = limit_constant(LimitKind::DepthOne { n: 3 }, &pow2_inv(10)).unwrap();
        assert_eq!(l3.lo, BigRational::new(1.into(), 720.into()));
        let mut prev = f64::INFINITY;
        for depth in 2..=10 {
            let l = limit_constant(LimitKind::TwoExcursions { depth }, &pow2_inv(40)).unwrap().mid_f64();
            assert!(l < prev && l > 0.0);
            prev = l;
        }
    }

    #[test]
    fn bounds_examples() {
        let table = CountTable::new();
        for (t, depth) in [(20, 2), (3, 2), (1, 2)] {
            let (lo, hi) = bounds_two_excursions(t, depth).unwrap();
            let c = BigRational::from_integer(BigInt::from(table.exact_excursions(t, 1, depth).into_biguint()));
            assert!(lo <= c && c <= hi, "t={t} D={depth}");
        }
    }

    #[test]
    fn lemma33_small() {
        let report = lemma33_report(2, 60).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let d = (phi - 1.0) / (2.0 + 3.0 * (phi - 2.0));
        // direct float double sums
        for row in report.rows.iter().filter(|r| r.t <= 40) {
            let t = row.t;
            let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
            for r in 3..=t {
                for k in 1..=t - r + 1 {
                    s1 += phi.powi((t - r) as i32);
                    s2 += phi.powi(k as i32 - 1);
                    s3 += phi.powi((t + 1 - k - r) as i32);
                }
            }
            let at = phi.powi(t as i32);
            assert!((row.term1_ratio - d * d * s1 / (t as f64 * at)).abs() < 1e-12);
            assert!((row.term2_ratio - d * s2 / at).abs() < 1e-12);
            assert!((row.term3_ratio - d * s3 / at).abs() < 1e-12);
        }
        assert!(report.rows.iter().all(|r| r.term2_ratio <= report.term23_bound));
    }
}
