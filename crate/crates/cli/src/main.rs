//! `cusp-census`: census tables, root and constant enclosures, the growth summary table, and
//! verification suites for reciprocal geodesics on the modular surface.

mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use cusp_census::census::{
    excursion_census_with, oracle_census, run_suite, table1, OracleConfig, Suite, SuiteConfig,
};
use cusp_census::compositions::{enumerate_compositions, CountTable, ExcursionFilter};
use cusp_census::interval::{ceil_decimal, certified_digits, floor_decimal, rational_to_decimal};
use cusp_census::spectral::{coefficient_d, limit_constant, solve_alpha, LimitKind, TwoExcursionBounds, MAX_REFINE_ROUNDS};
use cusp_census::words::reciprocal_word;
use cusp_census::{BigCount, Composition, EpsilonSeq, Error, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use output::{write_records, Format, Record};

/// Largest `t` accepted by `enumerate` (2^(t-1) lines).
const ENUMERATE_MAX_T: usize = 24;

#[derive(Parser)]
#[command(name = "cusp-census", version, about = "Census of reciprocal geodesics by length and cusp excursions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write records to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (output does not depend on this).
    #[arg(long, global = true, value_parser = positive)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geodesics of length 4t by number of excursions above depth D.
    Count(CountArgs),
    /// Certified decimal enclosure of alpha_D.
    Alpha(AlphaArgs),
    /// alpha_D, d_D and the limit constants.
    Constants(ConstantsArgs),
    /// Counts beside their growth formulas at (t, D).
    Table1(Table1Args),
    /// Lower and upper estimates around the two-excursion count.
    Bounds(BoundsArgs),
    /// Run verification suites; exit status 1 if any check fails.
    Verify(VerifyArgs),
    /// List compositions of t (and optionally sign sequences and words).
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("height").required(true).args(["t", "t_max"])))]
struct Heights {
    /// A single height t.
    #[arg(long, value_parser = positive)]
    t: Option<usize>,
    /// All heights 1..=t-max.
    #[arg(long, value_parser = positive)]
    t_max: Option<usize>,
}

impl Heights {
    fn range(&self) -> std::ops::RangeInclusive<usize> {
        match (self.t, self.t_max) {
            (Some(t), _) => t..=t,
            (None, Some(m)) => 1..=m,
            (None, None) => unreachable!("clap requires one of --t, --t-max"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountSource {
    Dp,
    Oracle,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    heights: Heights,
    #[arg(long = "D", value_parser = positive)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = CountSource::Dp)]
    source: CountSource,
    /// Cap for --source oracle.
    #[arg(long, default_value_t = 18, value_parser = positive)]
    oracle_max_t: usize,
    /// Count geodesics of length at most 4t instead of exactly 4t.
    #[arg(long)]
    cumulative: bool,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long = "D", value_parser = depth_two)]
    depth: usize,
    #[arg(long, default_value_t = 20)]
    digits: u32,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long = "D", value_parser = depth_two)]
    depth: usize,
    /// Also emit 1/(2n)!, the depth-one limit for 2n excursions.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 20)]
    digits: u32,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, value_parser = positive)]
    t: usize,
    #[arg(long = "D", value_parser = depth_two)]
    depth: usize,
    /// Depth-one rows for n = 0..=N.
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 6)]
    digits: u32,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    heights: Heights,
    #[arg(long = "D", value_parser = depth_two)]
    depth: usize,
    #[arg(long, default_value_t = 3)]
    digits: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of bijection, partition, closed-form, double-sum, thm32, thm34,
    /// lemma33, matrices, or all.
    #[arg(long, default_value = "all", value_parser = parse_suites)]
    suite: SuiteSel,
    /// Largest t for exhaustive enumeration (conjugacy grouping stops at 14).
    #[arg(long, value_parser = positive)]
    oracle_max_t: Option<usize>,
    /// Relative tolerance for the convergence checks.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Largest t for the closed-form sweep.
    #[arg(long, value_parser = positive)]
    t_max: Option<usize>,
}

#[derive(Clone)]
struct SuiteSel(Vec<Suite>);

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, value_parser = positive)]
    t: usize,
    /// Keep compositions with exactly N parts above D.
    #[arg(long, requires = "depth")]
    n: Option<usize>,
    #[arg(long = "D", value_parser = positive, requires = "n")]
    depth: Option<usize>,
    /// Add the sign sequence and the reciprocal normal form.
    #[arg(long)]
    words: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn depth_two(s: &str) -> Result<usize, String> {
    match positive(s)? {
        1 => Err("must be at least 2".into()),
        v => Ok(v),
    }
}

fn parse_suites(s: &str) -> Result<SuiteSel, String> {
    if s == "all" {
        return Ok(SuiteSel(Suite::ALL.to_vec()));
    }
    s.split(',').map(|p| p.trim().parse::<Suite>().map_err(|e| e.to_string())).collect::<Result<_, _>>().map(SuiteSel)
}

/// Shrinks a tolerance until the enclosure pins `digits` decimal places.
fn certify(
    digits: u32,
    enclose: impl Fn(&BigRational) -> cusp_census::Result<(BigRational, BigRational)>,
) -> anyhow::Result<(String, String, String)> {
    let mut extra = 4u32;
    for _ in 0..MAX_REFINE_ROUNDS {
        let tol = BigRational::new(BigInt::from(1), BigInt::from(10u32).pow(digits + extra));
        let (lo, hi) = enclose(&tol)?;
        if let Some(v) = certified_digits(&lo, &hi, digits) {
            return Ok((v, floor_decimal(&lo, digits), ceil_decimal(&hi, digits)));
        }
        extra += 8;
    }
    Err(Error::PrecisionExhausted { what: "decimal digits".into(), iterations: MAX_REFINE_ROUNDS }.into())
}

fn count_records(args: &CountArgs) -> anyhow::Result<Vec<Record>> {
    let depth = args.depth;
    let heights: Vec<usize> = args.heights.range().collect();
    let per_t: Vec<Vec<(usize, BigCount)>> = match args.source {
        CountSource::Dp => {
            let table = CountTable::new();
            heights
                .par_iter()
                .map(|&t| Ok(excursion_census_with(&table, t, depth)?.into_iter().map(|r| (r.n, r.count)).collect()))
                .collect::<cusp_census::Result<_>>()?
        }
        CountSource::Oracle => {
            let cfg = OracleConfig { max_t: args.oracle_max_t, cyclic_max_t: args.oracle_max_t.min(14) };
            heights
                .iter()
                .map(|&t| Ok(oracle_census(t, depth, &cfg)?.into_iter().map(|r| (r.n, r.count)).collect()))
                .collect::<cusp_census::Result<_>>()?
        }
    };
    let source = match args.source {
        CountSource::Dp => "dp",
        CountSource::Oracle => "oracle",
    };
    let mut records = Vec::new();
    if args.cumulative {
        // running totals over every height from 1, even when --t names one
        let first = heights[0];
        let mut totals: Vec<BigCount> = Vec::new();
        let lower: Vec<Vec<(usize, BigCount)>> = if first > 1 {
            let table = CountTable::new();
            (1..first)
                .map(|t| Ok(excursion_census_with(&table, t, depth)?.into_iter().map(|r| (r.n, r.count)).collect()))
                .collect::<cusp_census::Result<_>>()?
        } else {
            Vec::new()
        };
        let add = |totals: &mut Vec<BigCount>, rows: &[(usize, BigCount)]| {
            for (n, c) in rows {
                if totals.len() <= *n {
                    totals.resize(n + 1, BigCount::zero());
                }
                totals[*n] = totals[*n].clone() + c.clone();
            }
        };
        for rows in &lower {
            add(&mut totals, rows);
        }
        for (t, rows) in heights.iter().zip(&per_t) {
            add(&mut totals, rows);
            for (n, c) in totals.iter().enumerate() {
                records.push(
                    Record::new()
                        .with("t", *t)
                        .with("D", depth)
                        .with("n", n)
                        .with("count", c.to_string())
                        .with("source", source)
                        .with("scope", "at_most"),
                );
            }
        }
    } else {
        for (t, rows) in heights.iter().zip(per_t) {
            for (n, c) in rows {
                records.push(
                    Record::new().with("t", *t).with("D", depth).with("n", n).with("count", c.to_string()).with("source", source),
                );
            }
        }
    }
    Ok(records)
}

fn alpha_records(args: &AlphaArgs) -> anyhow::Result<Vec<Record>> {
    let (value, lo, hi) = certify(args.digits, |tol| solve_alpha(args.depth, tol).map(|a| (a.lo(), a.hi())))?;
    Ok(vec![Record::new()
        .with("D", args.depth)
        .with("value", value)
        .with("lo", lo)
        .with("hi", hi)
        .with("digits", args.digits as usize)])
}

fn constants_records(args: &ConstantsArgs) -> anyhow::Result<Vec<Record>> {
    let depth = args.depth;
    let record = |name: &str, d: usize, n: Option<usize>, (value, lo, hi): (String, String, String)| {
        Record::new()
            .with("name", name)
            .with("D", d)
            .with("n", n)
            .with("value", value)
            .with("lo", lo)
            .with("hi", hi)
            .with("digits", args.digits as usize)
    };
    let pair = |c: cusp_census::spectral::ConstantEnclosure| (c.lo, c.hi);
    let mut records = vec![
        record("alpha", depth, None, certify(args.digits, |tol| solve_alpha(depth, tol).map(|a| (a.lo(), a.hi())))?),
        record("d", depth, None, certify(args.digits, |tol| coefficient_d(depth, tol).map(pair))?),
        record(
            "two_excursion_limit",
            depth,
            None,
            certify(args.digits, |tol| limit_constant(LimitKind::TwoExcursions { depth }, tol).map(pair))?,
        ),
    ];
    if let Some(n) = args.n {
        let c = limit_constant(LimitKind::DepthOne { n }, &BigRational::from_integer(1.into()))?;
        records.push(record("depth_one_limit", 1, Some(n), (floor_decimal(&c.lo, args.digits), floor_decimal(&c.lo, args.digits), ceil_decimal(&c.hi, args.digits))));
    }
    Ok(records)
}

fn table1_records(args: &Table1Args) -> anyhow::Result<Vec<Record>> {
    let rows = table1(args.t, args.depth, args.n)?;
    Ok(rows
        .into_iter()
        .map(|r| {
            let count = BigRational::from_integer(BigInt::from(r.count.as_biguint().clone()));
            let mid = r.approximation.as_ref().map(|a| (&a.lo + &a.hi) / BigInt::from(2));
            let approx = mid.as_ref().map(|m| rational_to_decimal(m, args.digits));
            let ratio = mid.as_ref().filter(|m| *m != &BigRational::from_integer(0.into())).map(|m| rational_to_decimal(&(count / m), args.digits));
            Record::new()
                .with("row", r.row as usize)
                .with("class", r.class)
                .with("t", r.t)
                .with("D", r.depth)
                .with("n", r.n)
                .with("count", r.count.to_string())
                .with("approximation", approx)
                .with("ratio", ratio)
                .with("digits", args.digits as usize)
        })
        .collect())
}

fn bounds_records(args: &BoundsArgs) -> anyhow::Result<Vec<Record>> {
    let heights: Vec<usize> = args.heights.range().collect();
    let t_max = *heights.last().expect("nonempty range");
    let bounds = TwoExcursionBounds::new(args.depth, t_max)?;
    let table = CountTable::new();
    Ok(heights
        .into_iter()
        .map(|t| {
            let (lo, hi) = bounds.at(t);
            Record::new()
                .with("t", t)
                .with("D", args.depth)
                .with("lower", floor_decimal(&lo, args.digits))
                .with("count", table.exact_excursions(t, 1, args.depth).to_string())
                .with("upper", ceil_decimal(&hi, args.digits))
                .with("digits", args.digits as usize)
        })
        .collect())
}

fn verify_records(args: &VerifyArgs) -> anyhow::Result<(Vec<Record>, bool)> {
    let mut cfg = SuiteConfig::default();
    if let Some(m) = args.oracle_max_t {
        cfg.oracle = OracleConfig { max_t: m, cyclic_max_t: m.min(14) };
        cfg.partition_max_t = cfg.partition_max_t.max(m);
    }
    if let Some(tol) = args.tolerance {
        if !(tol > 0.0 && tol.is_finite()) {
            bail!(Error::Range(format!("--tolerance must be positive, got {tol}")));
        }
        cfg = cfg.with_tolerance(tol);
    }
    if let Some(t) = args.t_max {
        cfg.closed_form_max_t = t;
    }
    let mut records = Vec::new();
    let mut ok = true;
    for &suite in &args.suite.0 {
        let report = run_suite(suite, &cfg)?;
        for f in report.failures() {
            eprintln!("FAIL {} {} [{}]: measured {}, expected {}", suite.name(), f.name, f.params, f.measured, f.expected);
        }
        ok &= report.passed();
        records.extend(report.checks.into_iter().map(|c| {
            Record::new()
                .with("suite", suite.name())
                .with("check", c.name)
                .with("params", c.params)
                .with("status", c.status.to_string())
                .with("measured", c.measured)
                .with("expected", c.expected)
                .with("tolerance", c.tolerance)
        }));
    }
    Ok((records, ok))
}

/// The sign sequence with leading `+1` whose runs are the parts of `c`.
fn signs_of(c: &Composition) -> EpsilonSeq {
    let mut entries = Vec::with_capacity(c.total());
    let mut sign = Sign::Plus;
    for &p in c.parts() {
        entries.extend(std::iter::repeat_n(sign, p));
        sign = -sign;
    }
    EpsilonSeq::new(entries).expect("nonempty")
}

fn enumerate_records(args: &EnumerateArgs) -> anyhow::Result<Vec<Record>> {
    if args.t > ENUMERATE_MAX_T {
        bail!(Error::Range(format!("--t: enumerate is limited to t <= {ENUMERATE_MAX_T}")));
    }
    let filter = args.n.zip(args.depth).map(|(n, depth)| ExcursionFilter { n, depth });
    Ok(enumerate_compositions(args.t, filter)
        .enumerate()
        .map(|(i, c)| {
            let mut r = Record::new().with("index", i).with("composition", c.to_string());
            if args.words {
                let e = signs_of(&c);
                r = r.with("eps", e.to_string()).with("word", reciprocal_word(&e).word().to_string());
            }
            r
        })
        .collect())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    let (kind, records, ok) = match &cli.command {
        Command::Count(a) => ("count", count_records(a)?, true),
        Command::Alpha(a) => ("alpha", alpha_records(a)?, true),
        Command::Constants(a) => ("constants", constants_records(a)?, true),
        Command::Table1(a) => ("table1", table1_records(a)?, true),
        Command::Bounds(a) => ("bounds", bounds_records(a)?, true),
        Command::Verify(a) => {
            let (records, ok) = verify_records(a)?;
            ("verify", records, ok)
        }
        Command::Enumerate(a) => ("enumerate", enumerate_records(a)?, true),
    };
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).with_context(|| format!("--out {}", path.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    write_records(&mut *sink, cli.format, kind, &records)?;
    sink.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            // bad parameter values are usage errors; anything else means a
            // check or computation failed
            match e.downcast_ref::<Error>() {
                Some(Error::Range(_) | Error::CapExceeded { .. } | Error::ParseCount(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
