//! Record types emitted by the command-line front end and their encodings:
//! JSON Lines, CSV with a fixed header, and an aligned text table.
//!
//! Scalars travel as decimal strings (`p/q` for exact values) so that output
//! is identical across platforms.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{Comparison, Scalar};

/// Identifies which inequality or identity a record checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckId {
    /// `n/(n+1) ≤ ratio`.
    Eq1,
    /// Recursive bound on `A_n`, the `n(n+2)` side.
    Eq3L,
    /// Recursive bound on `A_n`, the `n²` side.
    Eq3R,
    Eq4L,
    Eq4R,
    /// Cap on `A_{n+1}`.
    Eq5,
    /// Cap on `B_{n+1}`.
    Eq6,
    /// `A_{n+1} ≤ A_n`, `B_n ≤ B_{n+1}`.
    Eq7,
    /// `w·f(a) ≤ A_n ≤ w·f(b)`.
    Eq8,
    /// `w·f(a) ≤ B_n ≤ w·f(b)`.
    Eq9,
    Eq10L,
    Eq10R,
    /// `A_n − B_n = w·(f(b) − f(a))/n`.
    IdDiff,
    /// `A_n(−f) = −A_n(f)`, likewise for `B_n`.
    IdNeg,
    /// `A_n(x^r) = S_n(r) / n^{r+1}` on `[0, 1]`.
    IdPowerSum,
    /// Refined Alzer bounds rebuilt from endpoint sums.
    IdCross,
}

impl CheckId {
    pub const INEQUALITIES: [CheckId; 12] = [
        CheckId::Eq1,
        CheckId::Eq3L,
        CheckId::Eq3R,
        CheckId::Eq4L,
        CheckId::Eq4R,
        CheckId::Eq5,
        CheckId::Eq6,
        CheckId::Eq7,
        CheckId::Eq8,
        CheckId::Eq9,
        CheckId::Eq10L,
        CheckId::Eq10R,
    ];

    pub const IDENTITIES: [CheckId; 4] = [
        CheckId::IdDiff,
        CheckId::IdNeg,
        CheckId::IdPowerSum,
        CheckId::IdCross,
    ];

    pub fn is_identity(&self) -> bool {
        CheckId::IDENTITIES.contains(self)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One checked inequality `lhs ≤ rhs` (or identity `lhs = rhs`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub ineq: CheckId,
    pub spec: String,
    pub n: u64,
    pub r: Option<String>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    /// `rhs − lhs`.
    pub gap: String,
    pub strict: bool,
}

impl VerificationRecord {
    /// A record for `lhs ≤ rhs`. A strict expectation only fails the record
    /// when the comparison was exact; float mode cannot certify gaps below
    /// its tolerance.
    pub fn inequality(
        ineq: CheckId,
        key: &RecordKey,
        lhs: &Scalar,
        rhs: &Scalar,
        cmp: &Comparison,
        strict: bool,
    ) -> Self {
        Self::from_texts(
            ineq,
            key,
            lhs.to_string(),
            rhs.to_string(),
            cmp.gap.to_string(),
            passes(cmp, strict),
            strict,
        )
    }

    pub fn from_texts(
        ineq: CheckId,
        key: &RecordKey,
        lhs: String,
        rhs: String,
        gap: String,
        pass: bool,
        strict: bool,
    ) -> Self {
        VerificationRecord {
            ineq,
            spec: key.spec.clone(),
            n: key.n,
            r: key.r.clone(),
            lhs,
            rhs,
            pass,
            gap,
            strict,
        }
    }
}

/// What a record is about: the function spec text, `n`, and `r` for power-sum checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordKey {
    pub spec: String,
    pub n: u64,
    pub r: Option<String>,
}

pub(crate) fn passes(cmp: &Comparison, strict: bool) -> bool {
    cmp.holds && (!strict || !cmp.exact || cmp.strict)
}

/// `A_n`, `B_n` and the difference-identity residual for one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsRecord {
    pub spec: String,
    pub n: u64,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub residual: String,
}

/// One Alzer report row with its sandwich verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlzerRow {
    pub n: u64,
    pub r: String,
    pub direction: String,
    pub classical: String,
    pub lower: String,
    pub ratio: String,
    pub upper: String,
    pub pass: bool,
}

/// Per-check aggregate printed by `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryLine {
    pub summary: CheckId,
    pub checks: u64,
    pub violations: u64,
    /// Smallest `rhs − lhs` for inequalities, largest `|lhs − rhs|` for identities;
    /// empty when nothing was checked.
    pub worst_gap: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    HumanTable,
    JsonLines,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "human" | "table" => Ok(OutputFormat::HumanTable),
            "jsonl" | "json" => Ok(OutputFormat::JsonLines),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::InvalidArgument(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

/// Columns for the text table rendering.
pub trait Tabular: Serialize {
    fn headers() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

impl Tabular for VerificationRecord {
    fn headers() -> &'static [&'static str] {
        &[
            "ineq", "spec", "n", "r", "lhs", "rhs", "pass", "gap", "strict",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.ineq.to_string(),
            self.spec.clone(),
            self.n.to_string(),
            self.r.clone().unwrap_or_default(),
            shorten(&self.lhs),
            shorten(&self.rhs),
            self.pass.to_string(),
            shorten(&self.gap),
            self.strict.to_string(),
        ]
    }
}

impl Tabular for SumsRecord {
    fn headers() -> &'static [&'static str] {
        &["spec", "n", "A", "B", "residual"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.spec.clone(),
            self.n.to_string(),
            shorten(&self.a),
            shorten(&self.b),
            shorten(&self.residual),
        ]
    }
}

impl Tabular for AlzerRow {
    fn headers() -> &'static [&'static str] {
        &[
            "n",
            "r",
            "direction",
            "classical",
            "lower",
            "ratio",
            "upper",
            "pass",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.r.clone(),
            self.direction.clone(),
            shorten(&self.classical),
            shorten(&self.lower),
            shorten(&self.ratio),
            shorten(&self.upper),
            self.pass.to_string(),
        ]
    }
}

/// Long decimals are cut to six places for tables; fractions and short values pass through.
fn shorten(s: &str) -> String {
    match s.split_once('.') {
        Some((_, frac)) if frac.len() > 6 && !s.contains('/') => match s.parse::<f64>() {
            Ok(v) => format!("{:.6}", if v == 0.0 { 0.0 } else { v }),
            Err(_) => s.to_string(),
        },
        _ => s.to_string(),
    }
}

pub fn write_records<T: Tabular, W: Write>(
    records: &[T],
    format: OutputFormat,
    out: &mut W,
) -> io::Result<()> {
    match format {
        OutputFormat::JsonLines => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
            Ok(())
        }
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(&mut *out);
            w.write_record(T::headers())?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()
        }
        OutputFormat::HumanTable => {
            let rows: Vec<Vec<String>> = records.iter().map(Tabular::cells).collect();
            let headers = T::headers();
            let widths: Vec<usize> = (0..headers.len())
                .map(|i| {
                    rows.iter()
                        .map(|r| r[i].len())
                        .chain([headers[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(headers.to_vec()))?;
            for r in &rows {
                writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
            }
            Ok(())
        }
    }
}

pub fn write_summary<W: Write>(
    lines: &[SummaryLine],
    format: OutputFormat,
    out: &mut W,
) -> io::Result<()> {
    for l in lines {
        match format {
            OutputFormat::JsonLines => {
                serde_json::to_writer(&mut *out, l)?;
                out.write_all(b"\n")?;
            }
            OutputFormat::Csv => writeln!(
                out,
                "# summary {} checks={} violations={} worst_gap={}",
                l.summary, l.checks, l.violations, l.worst_gap
            )?,
            OutputFormat::HumanTable => writeln!(
                out,
                "{:<10} checks={:<7} violations={:<5} worst_gap={}",
                l.summary.to_string(),
                l.checks,
                l.violations,
                shorten(&l.worst_gap)
            )?,
        }
    }
    Ok(())
}
