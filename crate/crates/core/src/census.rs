//! Census of reciprocal geodesics by word length `4t` and number of cusp
//! excursions, with brute-force oracles and verification reports.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::compositions::{binomial, count_all, two_excursion_sum_with, BigCount, CountTable};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrices::{classify, evaluate, generator, reciprocity_check, Kind, Psl2Element};
use crate::spectral::{
    lemma33_report, limit_constant, two_excursion_limit, two_excursion_ratio, AlphaEnclosure, ClosedForm,
    ConstantEnclosure, LimitKind, TwoExcursionBounds,
};
use crate::words::{
    canonical_cyclic_form, epsilon_of, excursion_parts, projectivize, reciprocal_word, run_sequence, EpsilonSeq,
    GroupWord, Syllable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Dp,
    ClosedForm,
    Oracle,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Dp => "dp",
            Source::ClosedForm => "closed_form",
            Source::Oracle => "oracle",
        })
    }
}

/// Number of reciprocal geodesics of word length `4t` with exactly `2n`
/// excursions of depth greater than `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub t: usize,
    pub depth: usize,
    pub n: usize,
    pub count: BigCount,
    pub source: Source,
}

fn check_census_args(t: usize, depth: usize) -> Result<()> {
    if t == 0 || depth == 0 {
        return Err(Error::Range(format!("census needs t >= 1 and D >= 1, got t = {t}, D = {depth}")));
    }
    Ok(())
}

pub fn excursion_census(t: usize, depth: usize) -> Result<Vec<CensusRow>> {
    excursion_census_with(&CountTable::new(), t, depth)
}

/// Rows `n = 0..=t / (D + 1)`, the values of `n` with nonzero count.
pub fn excursion_census_with(table: &CountTable, t: usize, depth: usize) -> Result<Vec<CensusRow>> {
    check_census_args(t, depth)?;
    Ok((0..=t / (depth + 1))
        .map(|n| CensusRow { t, depth, n, count: table.exact_excursions(t, n, depth), source: Source::Dp })
        .collect())
}

/// Limits on the exhaustive oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest `t` for which all `2^t` sign tuples are enumerated.
    pub max_t: usize,
    /// Largest `t` for which normal forms are also grouped by conjugacy.
    pub cyclic_max_t: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_t: 18, cyclic_max_t: 14 }
    }
}

/// Groups the `2^t` reciprocal normal forms by conjugacy class and checks
/// that every class contains exactly two of them. Returns one normal form
/// per class, ordered by canonical form.
pub fn conjugacy_classes(t: usize) -> Result<Vec<EpsilonSeq>> {
    let forms: Vec<(GroupWord, EpsilonSeq)> = EpsilonSeq::all(t)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|e| (canonical_cyclic_form(reciprocal_word(&e).word()), e))
        .collect();
    let mut classes: HashMap<GroupWord, (usize, EpsilonSeq)> = HashMap::with_capacity(forms.len() / 2);
    for (form, e) in forms {
        classes.entry(form).or_insert_with(|| (0, e)).0 += 1;
    }
    if let Some((form, (size, _))) = classes.iter().find(|(_, (size, _))| *size != 2) {
        return Err(Error::Oracle(format!("t = {t}: conjugacy class of {form} holds {size} normal forms")));
    }
    if classes.len() != 1 << (t - 1) {
        return Err(Error::Oracle(format!("t = {t}: {} conjugacy classes, expected {}", classes.len(), 1usize << (t - 1))));
    }
    let mut reps: Vec<(GroupWord, EpsilonSeq)> = classes.into_iter().map(|(k, (_, e))| (k, e)).collect();
    reps.sort_by(|a, b| a.0.syllables().cmp(b.0.syllables()));
    Ok(reps.into_iter().map(|(_, e)| e).collect())
}

/// Tallies `tally[i][n]`: classes with `n` parts above `depths[i]`.
fn tally<'a>(reps: impl ParallelIterator<Item = EpsilonSeq> + 'a, t: usize, depths: &'a [usize]) -> Vec<Vec<u64>> {
    let empty = || vec![vec![0u64; t + 1]; depths.len()];
    reps.fold(empty, |mut acc, e| {
        let runs = run_sequence(&e);
        for (i, &d) in depths.iter().enumerate() {
            acc[i][excursion_parts(&runs, d)] += 1;
        }
        acc
    })
    .reduce(empty, |mut a, b| {
        for (x, y) in a.iter_mut().zip(b) {
            for (p, q) in x.iter_mut().zip(y) {
                *p += q;
            }
        }
        a
    })
}

/// Exhaustive census for several depths at once, see [`oracle_census`].
pub fn oracle_census_depths(t: usize, depths: &[usize], config: &OracleConfig) -> Result<Vec<Vec<CensusRow>>> {
    if t == 0 || depths.contains(&0) {
        return Err(Error::Range("oracle needs t >= 1 and D >= 1".into()));
    }
    if t > config.max_t || t >= 64 {
        return Err(Error::CapExceeded { t, cap: config.max_t.min(63) });
    }
    // one representative per {e, -e}, the tuple with leading +1, so exactly
    // half the bit patterns survive
    let canonical: Vec<EpsilonSeq> = (0..1u64 << t)
        .into_par_iter()
        .filter_map(|bits| {
            let e = EpsilonSeq::from_bits(t, bits).expect("t < 64");
            let p = projectivize(&e);
            debug_assert_eq!(p, projectivize(&e.negate()));
            (p.canonical() == &e).then_some(e)
        })
        .collect();
    if canonical.len() != 1 << (t - 1) {
        return Err(Error::Oracle(format!("t = {t}: {} projective classes", canonical.len())));
    }
    let projective = tally(canonical.into_par_iter(), t, depths);
    let counts = if t <= config.cyclic_max_t {
        let geodesic = tally(conjugacy_classes(t)?.into_par_iter(), t, depths);
        if geodesic != projective {
            return Err(Error::Oracle(format!("t = {t}: conjugacy-class and projective tallies differ")));
        }
        geodesic
    } else {
        projective
    };
    Ok(depths
        .iter()
        .zip(counts)
        .map(|(&depth, row)| {
            (0..=t / (depth + 1))
                .map(|n| CensusRow { t, depth, n, count: BigCount::from(row[n]), source: Source::Oracle })
                .collect()
        })
        .collect())
}

/// Census by exhaustive enumeration of sign tuples: projectivize, take run
/// sequences, count parts above `depth`. For `t <= cyclic_max_t` the tally is
/// taken over conjugacy classes of normal forms instead, after checking that
/// each class holds exactly two normal forms.
pub fn oracle_census(t: usize, depth: usize, config: &OracleConfig) -> Result<Vec<CensusRow>> {
    Ok(oracle_census_depths(t, &[depth], config)?.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub status: Status,
    pub measured: String,
    pub expected: String,
    pub tolerance: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(
        &mut self,
        name: &str,
        params: impl Into<String>,
        ok: bool,
        measured: impl ToString,
        expected: impl ToString,
        tolerance: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.to_string(),
            params: params.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: measured.to_string(),
            expected: expected.to_string(),
            tolerance: tolerance.into(),
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

fn format_sci(x: f64) -> String {
    format!("{x:.6e}")
}

/// `|C(t, 2n) (2n)! / t^(2n) - 1|`, exactly.
pub fn depth_one_deviation(t: usize, n: usize) -> BigRational {
    let limit = limit_constant(LimitKind::DepthOne { n }, &BigRational::one()).expect("exact").lo;
    let count = BigInt::from(binomial(t, 2 * n).into_biguint());
    let ratio = BigRational::new(count, BigInt::from(t).pow(2 * n as u32)) / limit;
    (ratio - BigRational::one()).abs()
}

pub fn verify_theorem_2n_depth1(n: usize, t_list: &[usize], tol: f64) -> Result<VerificationReport> {
    verify_theorem_2n_depth1_with(&CountTable::new(), n, t_list, tol)
}

/// Exact identity `|C_t^{n,1}| = C(t, 2n)` at each `t`, and convergence of
/// `C(t, 2n) / t^(2n)` to `1 / (2n)!`: the relative deviation must not grow
/// along `t_list` and must be below `tol` at its last entry.
pub fn verify_theorem_2n_depth1_with(
    table: &CountTable,
    n: usize,
    t_list: &[usize],
    tol: f64,
) -> Result<VerificationReport> {
    if t_list.is_empty() || t_list.windows(2).any(|w| w[0] >= w[1]) || t_list[0] == 0 {
        return Err(Error::Range("t_list must be nonempty, positive and ascending".into()));
    }
    let mut report = VerificationReport::default();
    let mut prev: Option<BigRational> = None;
    for &t in t_list {
        let count = table.exact_excursions(t, n, 1);
        let expected = binomial(t, 2 * n);
        report.push("thm32.exact", format!("n={n} t={t}"), count == expected, &count, &expected, "exact");
        let dev = depth_one_deviation(t, n);
        if let Some(p) = &prev {
            let ok = if p.is_zero() { dev.is_zero() } else { dev < *p };
            report.push(
                "thm32.monotone",
                format!("n={n} t={t}"),
                ok,
                format_sci(dev.to_f64().unwrap_or(f64::NAN)),
                format!("< {}", format_sci(p.to_f64().unwrap_or(f64::NAN))),
                "strict decrease",
            );
        }
        prev = Some(dev);
    }
    let last = prev.expect("nonempty");
    let dev = last.to_f64().unwrap_or(f64::NAN);
    let t = *t_list.last().expect("nonempty");
    report.push("thm32.limit", format!("n={n} t={t}"), dev < tol, format_sci(dev), "0", format!("rel {tol:e}"));
    Ok(report)
}

/// Relative error `|ratio - limit| / limit`, as a certified `(lo, hi)` pair.
fn relative_error(ratio: &ConstantEnclosure, limit: &ConstantEnclosure) -> (f64, f64) {
    let far = (&ratio.hi - &limit.lo).abs().max((&ratio.lo - &limit.hi).abs());
    let near = if ratio.hi < limit.lo {
        &limit.lo - &ratio.hi
    } else if ratio.lo > limit.hi {
        &ratio.lo - &limit.hi
    } else {
        BigRational::zero()
    };
    let hi = (far / &limit.lo).to_f64().unwrap_or(f64::NAN);
    let lo = (near / &limit.hi).to_f64().unwrap_or(f64::NAN);
    (lo, hi)
}

/// Fixed-point precision for the two-excursion ratio; the alpha enclosure
/// then contributes a relative error far below any tolerance in use.
pub const RATIO_PREC_BITS: u32 = 128;

pub fn verify_theorem_two_excursions(depth: usize, t_list: &[usize], tol: f64) -> Result<VerificationReport> {
    verify_theorem_two_excursions_with(&CountTable::new(), depth, t_list, tol)
}

/// Convergence of `|C_t^{1,D}| / (t alpha_D^t)` to
/// `d_D^2 / (alpha_D^D (alpha_D - 1))`: the certified relative error at the
/// last `t` must be below `tol` and strictly below the error at the previous
/// `t`.
pub fn verify_theorem_two_excursions_with(
    table: &CountTable,
    depth: usize,
    t_list: &[usize],
    tol: f64,
) -> Result<VerificationReport> {
    if t_list.is_empty() || t_list.windows(2).any(|w| w[0] >= w[1]) || t_list[0] == 0 {
        return Err(Error::Range("t_list must be nonempty, positive and ascending".into()));
    }
    let limit = two_excursion_limit(depth, RATIO_PREC_BITS)?;
    let mut report = VerificationReport::default();
    let errors: Vec<(usize, f64, f64, f64)> = t_list
        .iter()
        .map(|&t| {
            let ratio = two_excursion_ratio(table, t, depth, RATIO_PREC_BITS)?;
            let (lo, hi) = relative_error(&ratio, &limit);
            Ok((t, ratio.mid_f64(), lo, hi))
        })
        .collect::<Result<_>>()?;
    for (t, ratio, lo, hi) in &errors {
        report.push(
            "thm34.ratio",
            format!("D={depth} t={t}"),
            true,
            format!("{ratio:.12}"),
            format!("{:.12}", limit.mid_f64()),
            format!("rel err in [{}, {}]", format_sci(*lo), format_sci(*hi)),
        );
    }
    let &(t_last, _, last_lo, last_hi) = errors.last().expect("nonempty");
    report.push(
        "thm34.limit",
        format!("D={depth} t={t_last}"),
        last_hi < tol,
        format_sci(last_hi),
        format!("{:.12}", limit.mid_f64()),
        format!("rel {tol:e}"),
    );
    if errors.len() >= 2 {
        let &(t_prev, _, prev_lo, _) = &errors[errors.len() - 2];
        report.push(
            "thm34.monotone",
            format!("D={depth} t={t_prev}->{t_last}"),
            last_hi < prev_lo,
            format_sci(last_lo),
            format!("< {}", format_sci(prev_lo)),
            "strict decrease",
        );
    }
    Ok(report)
}

/// One row of the growth summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Row {
    pub row: u8,
    pub class: &'static str,
    pub t: usize,
    pub depth: usize,
    pub n: usize,
    pub count: BigCount,
    /// The growth formula evaluated at `t`, when the row has one.
    pub approximation: Option<ConstantEnclosure>,
}

/// Counts at `(t, D)` beside their growth formulas: all geodesics,
/// `D`-low-lying ones, depth-one classes for `n = 0..=n_max`, and two
/// excursions of depth `> D`.
pub fn table1(t: usize, depth: usize, n_max: usize) -> Result<Vec<Table1Row>> {
    check_census_args(t, depth)?;
    if depth < 2 {
        return Err(Error::Range("summary table needs D >= 2".into()));
    }
    let table = CountTable::new();
    let prec = 64u32;
    let mut alpha = AlphaEnclosure::initial(depth)?;
    alpha.refine_bits(t as u64 + 96);
    let mut closed = ClosedForm::new(depth)?;
    let low = closed.approximation(t, t as u64 + 96);
    let limit = two_excursion_limit(depth, prec + t as u32)?;
    let a = alpha.interval(prec + t as u32);
    let limit_iv = Interval::from_rationals(&limit.lo, &limit.hi, prec + t as u32);
    let growth = limit_iv.mul(&a.pow(t as u64)).mul_int(&BigInt::from(t));
    let enclose = |iv: &Interval| ConstantEnclosure { lo: iv.lo(), hi: iv.hi() };

    let mut rows = vec![
        Table1Row { row: 1, class: "all", t, depth, n: 0, count: count_all(t), approximation: None },
        Table1Row {
            row: 2,
            class: "low_lying",
            t,
            depth,
            n: 0,
            count: table.bounded(t, depth),
            approximation: Some(enclose(&low)),
        },
    ];
    for n in 0..=n_max {
        let fact: BigInt = (1..=2 * n).map(BigInt::from).product();
        let approx = BigRational::new(BigInt::from(t).pow(2 * n as u32), fact);
        rows.push(Table1Row {
            row: 3,
            class: "depth_one",
            t,
            depth: 1,
            n,
            count: table.exact_excursions(t, n, 1),
            approximation: Some(ConstantEnclosure::exact(approx)),
        });
    }
    rows.push(Table1Row {
        row: 4,
        class: "two_excursions",
        t,
        depth,
        n: 1,
        count: table.exact_excursions(t, 1, depth),
        approximation: Some(enclose(&growth)),
    });
    Ok(rows)
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Named groups of checks, runnable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Bijection,
    Partition,
    ClosedForm,
    DoubleSum,
    Thm32,
    Thm34,
    Lemma33,
    Matrices,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Bijection,
        Suite::Partition,
        Suite::ClosedForm,
        Suite::DoubleSum,
        Suite::Thm32,
        Suite::Thm34,
        Suite::Lemma33,
        Suite::Matrices,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bijection => "bijection",
            Suite::Partition => "partition",
            Suite::ClosedForm => "closed-form",
            Suite::DoubleSum => "double-sum",
            Suite::Thm32 => "thm32",
            Suite::Thm34 => "thm34",
            Suite::Lemma33 => "lemma33",
            Suite::Matrices => "matrices",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Range(format!("unknown suite {s:?}")))
    }
}

/// Scales and tolerances for [`run_suite`]; the defaults are the acceptance
/// settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub oracle: OracleConfig,
    /// Partition identity checked for `t <= partition_max_t`, `D <= depth_max`.
    pub partition_max_t: usize,
    pub depth_max: usize,
    pub closed_form_max_t: usize,
    pub closed_form_max_depth: usize,
    pub double_sum_max_t: usize,
    pub double_sum_max_depth: usize,
    pub bounds_max_t: usize,
    pub bounds_max_depth: usize,
    pub thm32_exact_max_t: usize,
    pub thm32_t_list: Vec<usize>,
    pub thm32_tolerance: f64,
    pub thm34_depths: Vec<usize>,
    pub thm34_t_list: Vec<usize>,
    pub thm34_tolerance: f64,
    pub lemma33_depth: usize,
    pub lemma33_t: usize,
    pub lemma33_max_t: usize,
    pub lemma33_tolerance: f64,
    pub matrices_max_t: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            oracle: OracleConfig::default(),
            partition_max_t: 20,
            depth_max: 5,
            closed_form_max_t: 500,
            closed_form_max_depth: 12,
            double_sum_max_t: 300,
            double_sum_max_depth: 8,
            bounds_max_t: 200,
            bounds_max_depth: 6,
            thm32_exact_max_t: 1000,
            thm32_t_list: vec![1_000, 10_000, 100_000],
            thm32_tolerance: 1e-3,
            thm34_depths: vec![2, 3, 4],
            thm34_t_list: vec![500, 1000, 2000],
            thm34_tolerance: 0.02,
            lemma33_depth: 2,
            lemma33_t: 500,
            lemma33_max_t: 2000,
            lemma33_tolerance: 0.02,
            matrices_max_t: 12,
        }
    }
}

impl SuiteConfig {
    /// Overrides every convergence tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.thm32_tolerance = tol;
        self.thm34_tolerance = tol;
        self.lemma33_tolerance = tol;
        self
    }
}

fn first_failure<T: Send + Sync>(items: Vec<T>, f: impl Fn(&T) -> Option<String> + Sync) -> Option<String> {
    items.par_iter().filter_map(&f).min()
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    match suite {
        Suite::Bijection => suite_bijection(cfg),
        Suite::Partition => suite_partition(cfg),
        Suite::ClosedForm => suite_closed_form(cfg),
        Suite::DoubleSum => suite_double_sum(cfg),
        Suite::Thm32 => suite_thm32(cfg),
        Suite::Thm34 => suite_thm34(cfg),
        Suite::Lemma33 => suite_lemma33(cfg),
        Suite::Matrices => suite_matrices(cfg),
    }
}

fn suite_bijection(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    for t in 1..=cfg.oracle.cyclic_max_t {
        let (ok, measured) = match conjugacy_classes(t) {
            Ok(reps) => {
                let round_trip = reps.iter().all(|e| epsilon_of(reciprocal_word(e).word()).as_ref() == Ok(e));
                (round_trip, format!("{} classes of size 2", reps.len()))
            }
            Err(e) => (false, e.to_string()),
        };
        report.push("bijection.classes", format!("t={t}"), ok, measured, format!("{} classes of size 2", 1u64 << (t - 1)), "exact");
    }
    Ok(report)
}

fn suite_partition(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let table = CountTable::new();
    let depths: Vec<usize> = (1..=cfg.depth_max).collect();
    let mut cells = Vec::new();
    for t in 1..=cfg.partition_max_t {
        for &d in &depths {
            cells.push((t, d));
        }
    }
    let bad = first_failure(cells.clone(), |&(t, d)| {
        let rows = excursion_census_with(&table, t, d).ok()?;
        let total: BigCount = rows.iter().map(|r| &r.count).sum();
        (total != count_all(t)).then(|| format!("t={t} D={d}: sum {total}"))
    });
    report.push(
        "partition.sum",
        format!("t<={} D<={}", cfg.partition_max_t, cfg.depth_max),
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{} cells sum to 2^(t-1)", cells.len())),
        "2^(t-1)",
        "exact",
    );
    let max_t = cfg.oracle.max_t.min(63);
    let mut mismatch = None;
    let mut compared = 0usize;
    for t in 1..=max_t {
        let oracle = oracle_census_depths(t, &depths, &cfg.oracle)?;
        for (d, rows) in depths.iter().zip(oracle) {
            let dp = excursion_census_with(&table, t, *d)?;
            compared += rows.len();
            let agree = dp.len() == rows.len() && dp.iter().zip(&rows).all(|(a, b)| a.n == b.n && a.count == b.count);
            if !agree && mismatch.is_none() {
                mismatch = Some(format!("t={t} D={d}"));
            }
        }
    }
    report.push(
        "partition.oracle",
        format!("t<={max_t} D<={}", cfg.depth_max),
        mismatch.is_none(),
        mismatch.unwrap_or_else(|| format!("{compared} cells agree")),
        "dp = oracle",
        "exact",
    );
    Ok(report)
}

fn suite_closed_form(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let table = CountTable::new();
    let depths: Vec<usize> = (2..=cfg.closed_form_max_depth).collect();
    let results: Vec<Result<Option<String>>> = depths
        .par_iter()
        .map(|&d| {
            let mut cf = ClosedForm::new(d)?;
            for t in 0..=cfg.closed_form_max_t {
                let v = cf.count(t)?;
                let exact = table.bounded(t, d);
                if v != exact {
                    return Ok(Some(format!("t={t} D={d}: rnd = {v}, |C_t,D| = {exact}")));
                }
            }
            Ok(None)
        })
        .collect();
    let mut bad = None;
    for r in results {
        if let Some(msg) = r? {
            bad.get_or_insert(msg);
        }
    }
    let mut report = VerificationReport::default();
    report.push(
        "closed_form.rnd",
        format!("t<={} 2<=D<={}", cfg.closed_form_max_t, cfg.closed_form_max_depth),
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{} cells agree", depths.len() * (cfg.closed_form_max_t + 1))),
        "rnd(d alpha^t) = |C_t,D|",
        "exact",
    );
    Ok(report)
}

fn suite_double_sum(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let table = CountTable::new();
    let mut report = VerificationReport::default();
    let mut cells = Vec::new();
    for d in 2..=cfg.double_sum_max_depth {
        for t in 1..=cfg.double_sum_max_t {
            cells.push((t, d));
        }
    }
    let n_cells = cells.len();
    let bad = first_failure(cells, |&(t, d)| {
        let sum = two_excursion_sum_with(&table, t, d);
        let dp = table.exact_excursions(t, 1, d);
        (sum != dp).then(|| format!("t={t} D={d}: {sum} vs {dp}"))
    });
    report.push(
        "double_sum.identity",
        format!("t<={} 2<=D<={}", cfg.double_sum_max_t, cfg.double_sum_max_depth),
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{n_cells} cells agree")),
        "sum_r sum_k |C_k-1,D||C_t-k-r+1,D| = |C_t^1,D|",
        "exact",
    );

    let depths: Vec<usize> = (2..=cfg.bounds_max_depth).collect();
    let results: Vec<Result<Option<String>>> = depths
        .par_iter()
        .map(|&d| {
            let bounds = TwoExcursionBounds::new(d, cfg.bounds_max_t)?;
            for t in 1..=cfg.bounds_max_t {
                let (lo, hi) = bounds.at(t);
                let c = BigRational::from_integer(BigInt::from(table.exact_excursions(t, 1, d).into_biguint()));
                if !(lo <= c && c <= hi) {
                    return Ok(Some(format!("t={t} D={d}")));
                }
            }
            Ok(None)
        })
        .collect();
    let mut bad = None;
    for r in results {
        if let Some(msg) = r? {
            bad.get_or_insert(msg);
        }
    }
    report.push(
        "double_sum.bounds",
        format!("t<={} 2<=D<={}", cfg.bounds_max_t, cfg.bounds_max_depth),
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{} cells sandwiched", depths.len() * cfg.bounds_max_t)),
        "lower <= |C_t^1,D| <= upper",
        "exact",
    );
    Ok(report)
}

fn suite_thm32(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let table = CountTable::new();
    let mut report = VerificationReport::default();
    let max_t = cfg.thm32_exact_max_t;
    let mut cells = Vec::new();
    for t in 1..=max_t {
        cells.push(t);
    }
    table.exact_excursions(max_t, max_t / 2, 1);
    let bad = first_failure(cells, |&t| {
        (0..=t / 2)
            .find(|&n| table.exact_excursions(t, n, 1) != binomial(t, 2 * n))
            .map(|n| format!("t={t} n={n}"))
    });
    report.push(
        "thm32.census",
        format!("D=1 t<={max_t}"),
        bad.is_none(),
        bad.unwrap_or_else(|| "all rows equal C(t,2n)".into()),
        "C(t,2n)",
        "exact",
    );
    let big = CountTable::new();
    for n in 1..=3 {
        report.extend(verify_theorem_2n_depth1_with(&big, n, &cfg.thm32_t_list, cfg.thm32_tolerance)?);
    }
    Ok(report)
}

fn suite_thm34(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let table = CountTable::new();
    let reports: Vec<Result<VerificationReport>> = cfg
        .thm34_depths
        .par_iter()
        .map(|&d| verify_theorem_two_excursions_with(&table, d, &cfg.thm34_t_list, cfg.thm34_tolerance))
        .collect();
    let mut report = VerificationReport::default();
    for r in reports {
        report.extend(r?);
    }
    Ok(report)
}

fn suite_lemma33(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let d = cfg.lemma33_depth;
    let lemma = lemma33_report(d, cfg.lemma33_max_t.max(cfg.lemma33_t))?;
    let mut report = VerificationReport::default();
    let row = lemma
        .rows
        .iter()
        .find(|r| r.t == cfg.lemma33_t)
        .ok_or_else(|| Error::Range(format!("lemma report has no row t = {}", cfg.lemma33_t)))?;
    let rel = (row.term1_ratio - lemma.term1_limit).abs() / lemma.term1_limit;
    report.push(
        "lemma33.term1",
        format!("D={d} t={}", cfg.lemma33_t),
        rel < cfg.lemma33_tolerance,
        format!("{:.12}", row.term1_ratio),
        format!("{:.12}", lemma.term1_limit),
        format!("rel {:e} (measured {})", cfg.lemma33_tolerance, format_sci(rel)),
    );
    let rows: Vec<_> = lemma.rows.iter().filter(|r| r.t <= cfg.lemma33_max_t).collect();
    let tail: Vec<_> = rows[rows.len() / 2..].to_vec();
    let xs: Vec<f64> = tail.iter().map(|r| r.t as f64).collect();
    for (name, pick) in [("lemma33.term2", 2usize), ("lemma33.term3", 3)] {
        let value = |r: &&crate::spectral::Lemma33Row| if pick == 2 { r.term2_ratio } else { r.term3_ratio };
        let max = rows.iter().map(value).fold(f64::MIN, f64::max);
        report.push(
            &format!("{name}.bounded"),
            format!("D={d} t<={}", cfg.lemma33_max_t),
            max <= lemma.term23_bound,
            format!("{max:.12}"),
            format!("<= {:.12}", lemma.term23_bound),
            "d alpha^(2-D) / (alpha-1)^2",
        );
        let ys: Vec<f64> = tail.iter().map(value).collect();
        let slope = ls_slope(&xs, &ys);
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        let noise = 64.0 * f64::EPSILON * mean / (xs[xs.len() - 1] - xs[0]).max(1.0);
        report.push(
            &format!("{name}.trend"),
            format!("D={d} t in [{}, {}]", tail[0].t, cfg.lemma33_max_t),
            slope <= noise,
            format_sci(slope),
            format!("<= {}", format_sci(noise)),
            "least-squares slope",
        );
    }
    Ok(report)
}

fn suite_matrices(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let a = GroupWord::new(vec![Syllable::A, Syllable::A]);
    let b = GroupWord::new(vec![Syllable::B; 3]);
    report.push("matrices.relations", "A^2, B^3", evaluate(&a).is_identity() && evaluate(&b).is_identity(), "identity", "identity", "exact");
    let ab = Psl2Element::from_matrix(&generator(Syllable::A) * &generator(Syllable::B));
    report.push("matrices.parabolic", "AB", classify(&ab) == Kind::Parabolic, format!("{:?}", classify(&ab)), "Parabolic", "exact");
    let mut seqs = Vec::new();
    for t in 1..=cfg.matrices_max_t {
        seqs.extend(EpsilonSeq::all(t));
    }
    let n = seqs.len();
    let bad = first_failure(seqs, |e| {
        let hyperbolic = classify(&evaluate(reciprocal_word(e).word())) == Kind::Hyperbolic;
        (!hyperbolic || !reciprocity_check(e)).then(|| e.to_string())
    });
    report.push(
        "matrices.reciprocal",
        format!("t<={}", cfg.matrices_max_t),
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{n} normal forms hyperbolic and reciprocal")),
        "hyperbolic, w = (X A X^-1) A",
        "exact",
    );
    Ok(report)
}
