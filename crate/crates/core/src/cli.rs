//! Command implementations behind the `convex-sums` binary. Each command
//! writes its records to the given sink and returns the process exit code.

use std::io::Write;

use rayon::prelude::*;

use crate::alzer_power_sums::PowerSumTable;
use crate::error::{Error, Result};
use crate::function_model::{parse_spec, Exponent, FunctionSpec};
use crate::report::{
    write_records, write_summary, AlzerRow, OutputFormat, RecordKey, SumsRecord, Tabular,
    VerificationRecord,
};
use crate::riemann_sums::{compute_sums, difference_identity};
use crate::scalar::{NumericMode, FLOAT_PRECISION_BITS};
use crate::verify::{bounds_cell, run_suite, summarize, Suite, SuiteConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_MODE: i32 = 3;
pub const EXIT_CLASSIFICATION: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::InvalidSpec(_)
        | Error::OutOfDomain { .. }
        | Error::InvalidArgument(_)
        | Error::PartitionSize { .. } => EXIT_PARSE,
        Error::ModeUnsupported(_) | Error::InvalidMode(_) | Error::Overflow { .. } => EXIT_MODE,
        Error::UnclassifiablePiecewise | Error::HypothesisNotMet(_) => EXIT_CLASSIFICATION,
    }
}

/// Which verification records `verify` prints besides the summary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordFilter {
    None,
    Violations,
    All,
}

impl std::str::FromStr for RecordFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(RecordFilter::None),
            "violations" => Ok(RecordFilter::Violations),
            "all" => Ok(RecordFilter::All),
            other => Err(Error::InvalidArgument(format!(
                "records must be none, violations or all, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: NumericMode,
    pub format: OutputFormat,
    /// Reserved for sampled checks; no current command draws random numbers.
    pub seed: u64,
}

impl RunConfig {
    /// Builds the numeric mode from command-line settings. The tolerance
    /// must be 0 (or absent) in exact mode and positive in float mode.
    pub fn new(
        mode_name: &str,
        tolerance: Option<f64>,
        precision_bits: Option<u32>,
        max_denominator_digits: Option<u64>,
        format: OutputFormat,
        seed: u64,
    ) -> Result<Self> {
        let mode = match mode_name {
            "exact" => {
                if let Some(t) = tolerance.filter(|t| *t != 0.0) {
                    return Err(Error::InvalidMode(format!(
                        "exact mode requires tolerance 0, got {t}"
                    )));
                }
                if precision_bits.is_some() {
                    return Err(Error::InvalidMode(
                        "--precision applies to float mode only".into(),
                    ));
                }
                match max_denominator_digits {
                    Some(d) => NumericMode::exact_with_limit(d)?,
                    None => NumericMode::exact(),
                }
            }
            "float" => {
                if max_denominator_digits.is_some() {
                    return Err(Error::InvalidMode(
                        "--max-denominator-digits applies to exact mode only".into(),
                    ));
                }
                let defaults = NumericMode::float();
                NumericMode::float_with(
                    precision_bits.unwrap_or(FLOAT_PRECISION_BITS),
                    tolerance.unwrap_or(defaults.tolerance()),
                )?
            }
            other => {
                return Err(Error::InvalidMode(format!(
                    "unknown mode `{other}`, expected exact or float"
                )))
            }
        };
        Ok(RunConfig { mode, format, seed })
    }
}

/// Parses an `n` grid such as `1..500`, `2,5,9` or `1..10,50`; ranges are
/// inclusive. The result is sorted and free of duplicates.
pub fn parse_n_grid(text: &str) -> Result<Vec<u64>> {
    let bad = |reason: &str| Error::Parse {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let number = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| bad("expected a natural number"))
    };
    let mut out = Vec::new();
    for item in text.split(',') {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (number(lo)?, number(hi)?);
                if lo > hi {
                    return Err(bad("empty range"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(number(item)?),
        }
    }
    if out.contains(&0) {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Parses a comma list of positive exponents, sorted by value.
pub fn parse_r_grid(text: &str) -> Result<Vec<Exponent>> {
    let mut out = text
        .split(',')
        .map(|s| Exponent::parse(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.value().cmp(b.value()));
    out.dedup();
    Ok(out)
}

fn emit<T: Tabular, W: Write>(records: &[T], format: OutputFormat, out: &mut W) -> Result<()> {
    write_records(records, format, out).map_err(io_error)
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("cannot write output: {e}"))
}

/// `A_n`, `B_n` and the difference-identity residual for each `n`.
pub fn cmd_sums<W: Write>(
    spec_text: &str,
    ns: &[u64],
    config: &RunConfig,
    out: &mut W,
) -> Result<i32> {
    let spec = parse_spec(spec_text)?;
    let text = spec.to_string();
    let records = ns
        .par_iter()
        .map(|&n| {
            let sums = compute_sums(&spec, n, &config.mode)?;
            let residual = difference_identity(&sums, &spec)?;
            Ok(SumsRecord {
                spec: text.clone(),
                n,
                a: sums.right().to_string(),
                b: sums.left().to_string(),
                residual: residual.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&records, config.format, out)?;
    Ok(EXIT_PASS)
}

fn bounds_for(spec: &FunctionSpec, n: u64, mode: &NumericMode) -> Result<Vec<VerificationRecord>> {
    let current = compute_sums(spec, n, mode)?;
    let next = compute_sums(spec, n + 1, mode)?;
    let key = RecordKey {
        spec: spec.to_string(),
        n,
        r: None,
    };
    bounds_cell(spec, mode, &key, &current, &next)
}

/// Recursive bounds on `A_n`, `B_n` and the caps on `A_{n+1}`, `B_{n+1}`.
pub fn cmd_bounds<W: Write>(
    spec_text: &str,
    ns: &[u64],
    config: &RunConfig,
    out: &mut W,
) -> Result<i32> {
    let spec = parse_spec(spec_text)?;
    spec.classify()?;
    let per_n = ns
        .par_iter()
        .map(|&n| bounds_for(&spec, n, &config.mode))
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<_> = per_n.into_iter().flatten().collect();
    emit(&records, config.format, out)?;
    Ok(if records.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

/// Alzer ratio, its refined bounds and the classical bound per `(n, r)`.
pub fn cmd_alzer<W: Write>(
    ns: &[u64],
    rs: &[Exponent],
    config: &RunConfig,
    out: &mut W,
) -> Result<i32> {
    let Some(&n_max) = ns.last() else {
        return Err(Error::InvalidArgument("empty n grid".into()));
    };
    let tables = rs
        .par_iter()
        .map(|r| PowerSumTable::new(n_max + 1, r, &config.mode))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(u64, &PowerSumTable)> = ns
        .iter()
        .flat_map(|&n| tables.iter().map(move |t| (n, t)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(n, table)| {
            let report = table.report(n)?;
            let check = report.check(&config.mode);
            Ok(AlzerRow {
                n,
                r: report.r.to_string(),
                direction: report.direction.name().to_string(),
                classical: report.classical_lower.render(),
                lower: report.refined_lower.render(),
                ratio: report.ratio.render(),
                upper: report.refined_upper.render(),
                pass: check.passed(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&rows, config.format, out)?;
    Ok(if rows.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

/// Runs a suite over the built-in corpus, prints the selected records and a
/// summary line per check id. Exits 1 on any violation.
pub fn cmd_verify<W: Write>(
    suite: Suite,
    suite_config: &SuiteConfig,
    filter: RecordFilter,
    config: &RunConfig,
    out: &mut W,
) -> Result<i32> {
    let records = run_suite(suite, &config.mode, suite_config)?;
    let shown: Vec<VerificationRecord> = match filter {
        RecordFilter::None => Vec::new(),
        RecordFilter::Violations => records.iter().filter(|r| !r.pass).cloned().collect(),
        RecordFilter::All => records.clone(),
    };
    if !shown.is_empty() {
        emit(&shown, config.format, out)?;
    }
    let summary = summarize(&records);
    write_summary(&summary, config.format, out).map_err(io_error)?;
    Ok(if records.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}
