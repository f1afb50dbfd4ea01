//! Batch verification suites over a fixed corpus of functions and grids of
//! `n` and `r`. Each suite produces [`VerificationRecord`]s in a
//! deterministic order (corpus order, then `n`, then `r`) regardless of how
//! the work is scheduled across threads.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::alzer_power_sums::{cross_check_with_theorem, exact_power_sum, PowerSumTable};
use crate::convexity_bounds::{
    bound_a_prev, bound_b_prev, cap_a, cap_b, endpoint_range, BoundInterval,
};
use crate::error::{Error, Result};
use crate::function_model::{parse_rational, parse_spec, Exponent, FunctionSpec, Interval};
use crate::report::{passes, CheckId, RecordKey, SummaryLine, VerificationRecord};
use crate::riemann_sums::{compute_sums_range, difference_identity, EndpointSums};
use crate::scalar::{NumericMode, Scalar};

/// Base functions of the built-in corpus; their negations follow them.
pub const BASE_CORPUS: [&str; 7] = [
    "pow:r=0.5@[0,1]",
    "pow:r=1@[0,1]",
    "pow:r=2@[0,1]",
    "pow:r=3@[0,1]",
    "exp@[0,1]",
    "pwl:(0,0);(1,0);(2,1)",
    "pwl:(0,1);(1/3,0);(1,1/2);(2,3)",
];

pub fn base_corpus() -> Vec<FunctionSpec> {
    BASE_CORPUS
        .iter()
        .map(|s| parse_spec(s).expect("built-in corpus parses"))
        .collect()
}

/// The base corpus followed by the negation of each member.
pub fn corpus() -> Vec<FunctionSpec> {
    let base = base_corpus();
    let negated: Vec<_> = base.iter().cloned().map(FunctionSpec::negated).collect();
    base.into_iter().chain(negated).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Bounds,
    Monotone,
    Alzer,
    Identities,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem21" => Ok(Suite::Bounds),
            "corollary22" => Ok(Suite::Monotone),
            "corollary23" => Ok(Suite::Alzer),
            "identities" => Ok(Suite::Identities),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "suite must be one of theorem21, corollary22, corollary23, identities, all"
                    .into(),
            }),
        }
    }
}

/// Grid sizes for the suites.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Largest `n` for the recursive bounds, caps and monotonicity checks.
    pub n_max_bounds: u64,
    /// Largest `n` for the power-sum inequalities.
    pub n_max_alzer: u64,
    pub refine_exponents: Vec<Exponent>,
    pub reverse_exponents: Vec<Exponent>,
    /// Largest integer exponent for the power-sum identity and cross-check.
    pub max_integer_exponent: u32,
    pub n_max_power_sum_identity: u64,
    pub n_max_cross_check: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let exps = |list: &[&str]| {
            list.iter()
                .map(|r| Exponent::parse(r).expect("literal"))
                .collect()
        };
        SuiteConfig {
            n_max_bounds: 500,
            n_max_alzer: 1000,
            refine_exponents: exps(&["1", "1.5", "2", "3", "5", "10"]),
            reverse_exponents: exps(&["0.1", "0.25", "0.5", "0.9"]),
            max_integer_exponent: 6,
            n_max_power_sum_identity: 200,
            n_max_cross_check: 100,
        }
    }
}

/// Exact mode where the spec allows it, otherwise default float mode.
pub fn mode_for(spec: &FunctionSpec, mode: &NumericMode) -> NumericMode {
    if mode.is_exact() && !spec.supports_exact() {
        NumericMode::float()
    } else {
        *mode
    }
}

fn mode_for_exponent(r: &Exponent, mode: &NumericMode) -> NumericMode {
    if mode.is_exact() && r.as_integer().is_none() {
        NumericMode::float()
    } else {
        *mode
    }
}

/// Sums `A_1 … A_{n_max+1}` for one spec in its effective mode.
pub struct Prepared {
    pub spec: FunctionSpec,
    pub text: String,
    pub mode: NumericMode,
    pub sums: Vec<EndpointSums>,
}

impl Prepared {
    pub fn new(spec: FunctionSpec, n_max: u64, mode: &NumericMode) -> Result<Self> {
        let mode = mode_for(&spec, mode);
        let sums = compute_sums_range(&spec, 1..=n_max + 1, &mode)?;
        Ok(Prepared {
            text: spec.to_string(),
            spec,
            mode,
            sums,
        })
    }

    fn at(&self, n: u64) -> &EndpointSums {
        &self.sums[(n - 1) as usize]
    }

    fn n_max(&self) -> u64 {
        self.sums.len() as u64 - 1
    }

    fn key(&self, n: u64) -> RecordKey {
        RecordKey {
            spec: self.text.clone(),
            n,
            r: None,
        }
    }
}

fn le_record(
    ineq: CheckId,
    key: &RecordKey,
    mode: &NumericMode,
    lhs: &Scalar,
    rhs: &Scalar,
    strict: bool,
) -> VerificationRecord {
    let cmp = mode.compare_le(lhs, rhs);
    VerificationRecord::inequality(ineq, key, lhs, rhs, &cmp, strict)
}

fn eq_record(
    id: CheckId,
    key: &RecordKey,
    mode: &NumericMode,
    lhs: &Scalar,
    rhs: &Scalar,
) -> VerificationRecord {
    let cmp = mode.compare_le(lhs, rhs);
    VerificationRecord::from_texts(
        id,
        key,
        lhs.to_string(),
        rhs.to_string(),
        cmp.gap.to_string(),
        mode.approx_eq(lhs, rhs),
        false,
    )
}

/// Records the two sides of a recursive bound: the `n(n+2)` side as `left`,
/// the `n²` side as `right`.
fn bound_records(
    ids: (CheckId, CheckId),
    key: &RecordKey,
    mode: &NumericMode,
    value: &Scalar,
    bound: &BoundInterval,
    reverses: bool,
) -> [VerificationRecord; 2] {
    let lower = le_record(ids.0, key, mode, &bound.lower, value, bound.lower_strict);
    let upper = le_record(ids.1, key, mode, value, &bound.upper, bound.upper_strict);
    if reverses {
        [
            VerificationRecord {
                ineq: ids.0,
                ..upper
            },
            VerificationRecord {
                ineq: ids.1,
                ..lower
            },
        ]
    } else {
        [lower, upper]
    }
}

/// Recursive bounds on `A_n`, `B_n` from the `(n+1)`-sums and the caps on
/// `A_{n+1}`, `B_{n+1}`, oriented by the curvature of `spec`.
pub fn bounds_cell(
    spec: &FunctionSpec,
    mode: &NumericMode,
    key: &RecordKey,
    current: &EndpointSums,
    next: &EndpointSums,
) -> Result<Vec<VerificationRecord>> {
    let shape = spec.classify()?;
    let n = current.n();
    let a_bound = bound_a_prev(spec, n, next)?;
    let b_bound = bound_b_prev(spec, n, next)?;
    let mut out = Vec::with_capacity(6);
    out.extend(bound_records(
        (CheckId::Eq3L, CheckId::Eq3R),
        key,
        mode,
        current.right(),
        &a_bound,
        shape.reverses(),
    ));
    out.extend(bound_records(
        (CheckId::Eq4L, CheckId::Eq4R),
        key,
        mode,
        current.left(),
        &b_bound,
        shape.reverses(),
    ));
    let caps = [
        (CheckId::Eq5, cap_a(spec, n, mode)?, next.right()),
        (CheckId::Eq6, cap_b(spec, n, mode)?, next.left()),
    ];
    for (id, cap, value) in caps {
        let (lhs, rhs) = if shape.reverses() {
            (&cap, value)
        } else {
            (value, &cap)
        };
        out.push(le_record(id, key, mode, lhs, rhs, shape.is_strict()));
    }
    Ok(out)
}

/// Recursive bounds and caps for every `n ≤ n_max`.
pub fn bounds_records(p: &Prepared) -> Result<Vec<VerificationRecord>> {
    p.spec.classify()?;
    let per_n: Vec<Vec<VerificationRecord>> = (1..=p.n_max())
        .into_par_iter()
        .map(|n| bounds_cell(&p.spec, &p.mode, &p.key(n), p.at(n), p.at(n + 1)))
        .collect::<Result<_>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

/// Monotone sums and the endpoint range, for increasing specs only; other
/// specs yield no records.
pub fn monotone_records(p: &Prepared) -> Result<Vec<VerificationRecord>> {
    let shape = p.spec.classify()?;
    if !shape.increasing {
        return Ok(Vec::new());
    }
    let range = endpoint_range(&p.spec, &p.mode)?;
    let per_n: Vec<Vec<VerificationRecord>> = (1..=p.n_max())
        .into_par_iter()
        .map(|n| {
            let key = p.key(n);
            let (cur, next) = (p.at(n), p.at(n + 1));
            let m = &p.mode;
            vec![
                le_record(CheckId::Eq7, &key, m, next.right(), cur.right(), false),
                le_record(CheckId::Eq7, &key, m, cur.left(), next.left(), false),
                le_record(CheckId::Eq8, &key, m, &range.lower, cur.right(), false),
                le_record(CheckId::Eq8, &key, m, cur.right(), &range.upper, false),
                le_record(CheckId::Eq9, &key, m, &range.lower, cur.left(), false),
                le_record(CheckId::Eq9, &key, m, cur.left(), &range.upper, false),
            ]
        })
        .collect();
    Ok(per_n.into_iter().flatten().collect())
}

/// Classical and refined Alzer inequalities for one exponent, `n = 1..=n_max`.
pub fn alzer_records(
    r: &Exponent,
    n_max: u64,
    mode: &NumericMode,
) -> Result<Vec<VerificationRecord>> {
    let mode = mode_for_exponent(r, mode);
    let table = PowerSumTable::new(n_max + 1, r, &mode)?;
    let spec = FunctionSpec::power(r.clone(), Interval::unit())?.to_string();
    let per_n: Vec<Vec<VerificationRecord>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let report = table.report(n)?;
            let check = report.check(&mode);
            let (lower_strict, upper_strict) = report.strict_expected();
            let key = RecordKey {
                spec: spec.clone(),
                n,
                r: Some(r.to_string()),
            };
            let rec = |id, c: &crate::alzer_power_sums::RootedComparison, strict| {
                VerificationRecord::from_texts(
                    id,
                    &key,
                    c.lhs_text.clone(),
                    c.rhs_text.clone(),
                    c.gap_text.clone(),
                    passes(&c.comparison, strict),
                    strict,
                )
            };
            Ok(vec![
                rec(CheckId::Eq1, &check.classical, true),
                rec(CheckId::Eq10L, &check.lower, lower_strict),
                rec(CheckId::Eq10R, &check.upper, upper_strict),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

pub fn difference_records(p: &Prepared) -> Result<Vec<VerificationRecord>> {
    let zero = p.mode.zero();
    (1..=p.n_max())
        .into_par_iter()
        .map(|n| {
            let residual = difference_identity(p.at(n), &p.spec)?;
            Ok(eq_record(
                CheckId::IdDiff,
                &p.key(n),
                &p.mode,
                &residual,
                &zero,
            ))
        })
        .collect()
}

/// `A_n(−f) = −A_n(f)` and `B_n(−f) = −B_n(f)`.
pub fn negation_records(base: &Prepared, negated: &Prepared) -> Vec<VerificationRecord> {
    let per_n: Vec<Vec<VerificationRecord>> = (1..=base.n_max().min(negated.n_max()))
        .into_par_iter()
        .map(|n| {
            let key = negated.key(n);
            let (f, g) = (base.at(n), negated.at(n));
            vec![
                eq_record(CheckId::IdNeg, &key, &negated.mode, g.right(), &-f.right()),
                eq_record(CheckId::IdNeg, &key, &negated.mode, g.left(), &-f.left()),
            ]
        })
        .collect();
    per_n.into_iter().flatten().collect()
}

/// `A_n(x^k)` on `[0, 1]` against `S_n(k) / n^{k+1}` from big-integer power sums.
pub fn power_sum_records(
    k: u32,
    n_max: u64,
    mode: &NumericMode,
) -> Result<Vec<VerificationRecord>> {
    let r = Exponent::integer(k)?;
    let spec = FunctionSpec::power(r.clone(), Interval::unit())?;
    let p = Prepared::new(spec, n_max, mode)?;
    Ok((1..=n_max)
        .into_par_iter()
        .map(|n| {
            let sum = exact_power_sum(n, k);
            let via_power_sum =
                BigRational::new(sum, num_traits::pow(BigInt::from(n), k as usize + 1));
            let key = RecordKey {
                r: Some(r.to_string()),
                ..p.key(n)
            };
            eq_record(
                CheckId::IdPowerSum,
                &key,
                &p.mode,
                p.at(n).right(),
                &p.mode.lift(&via_power_sum),
            )
        })
        .collect())
}

pub fn cross_check_records(k: u32, n_max: u64) -> Result<Vec<VerificationRecord>> {
    let r = Exponent::integer(k)?;
    let spec = FunctionSpec::power(r.clone(), Interval::unit())?.to_string();
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let discrepancy = cross_check_with_theorem(n, &r)?;
            let key = RecordKey {
                spec: spec.clone(),
                n,
                r: Some(r.to_string()),
            };
            let mode = if discrepancy.is_exact() {
                NumericMode::exact()
            } else {
                NumericMode::float()
            };
            Ok(eq_record(
                CheckId::IdCross,
                &key,
                &mode,
                &discrepancy,
                &mode.zero(),
            ))
        })
        .collect()
}

/// Runs a suite over the built-in corpus.
pub fn run_suite(
    suite: Suite,
    mode: &NumericMode,
    config: &SuiteConfig,
) -> Result<Vec<VerificationRecord>> {
    mode.validate()?;
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let needs_sums = wants(Suite::Bounds) || wants(Suite::Monotone) || wants(Suite::Identities);
    let prepared: Vec<Prepared> = if needs_sums {
        corpus()
            .into_iter()
            .map(|s| Prepared::new(s, config.n_max_bounds, mode))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let mut out = Vec::new();
    if wants(Suite::Bounds) {
        for p in &prepared {
            out.extend(bounds_records(p)?);
        }
    }
    if wants(Suite::Monotone) {
        for p in &prepared {
            out.extend(monotone_records(p)?);
        }
    }
    if wants(Suite::Alzer) {
        let mut exponents: Vec<&Exponent> = config
            .refine_exponents
            .iter()
            .chain(&config.reverse_exponents)
            .collect();
        exponents.sort_by(|a, b| a.value().cmp(b.value()));
        for r in exponents {
            out.extend(alzer_records(r, config.n_max_alzer, mode)?);
        }
    }
    if wants(Suite::Identities) {
        for p in &prepared {
            out.extend(difference_records(p)?);
        }
        let half = prepared.len() / 2;
        for (base, negated) in prepared[..half].iter().zip(&prepared[half..]) {
            out.extend(negation_records(base, negated));
        }
        for k in 1..=config.max_integer_exponent {
            out.extend(power_sum_records(k, config.n_max_power_sum_identity, mode)?);
        }
        for k in 1..=config.max_integer_exponent {
            out.extend(cross_check_records(k, config.n_max_cross_check)?);
        }
    }
    Ok(out)
}

/// One line per inequality id (always all twelve), followed by identity ids
/// that were checked.
pub fn summarize(records: &[VerificationRecord]) -> Vec<SummaryLine> {
    let ids = CheckId::INEQUALITIES.iter().copied().chain(
        CheckId::IDENTITIES
            .iter()
            .copied()
            .filter(|id| records.iter().any(|r| r.ineq == *id)),
    );
    ids.map(|id| {
        let mut checks = 0;
        let mut violations = 0;
        let mut worst: Option<(BigRational, &str)> = None;
        for r in records.iter().filter(|r| r.ineq == id) {
            checks += 1;
            if !r.pass {
                violations += 1;
            }
            let Some(gap) = parse_rational(&r.gap) else {
                continue;
            };
            let score = if id.is_identity() {
                -num_traits::Signed::abs(&gap)
            } else {
                gap
            };
            if worst
                .as_ref()
                .is_none_or(|(w, _)| score.cmp(w) == Ordering::Less)
            {
                worst = Some((score, &r.gap));
            }
        }
        SummaryLine {
            summary: id,
            checks,
            violations,
            worst_gap: worst.map(|(_, g)| g.to_string()).unwrap_or_default(),
        }
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            n_max_bounds: 12,
            n_max_alzer: 15,
            n_max_power_sum_identity: 10,
            n_max_cross_check: 5,
            max_integer_exponent: 3,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn corpus_is_classifiable() {
        let c = corpus();
        assert_eq!(c.len(), 14);
        for s in &c {
            s.classify().unwrap();
        }
    }

    #[test]
    fn small_suites_pass_in_both_modes() {
        for mode in [NumericMode::exact(), NumericMode::float()] {
            let records = run_suite(Suite::All, &mode, &small()).unwrap();
            let failed: Vec<_> = records.iter().filter(|r| !r.pass).collect();
            assert!(failed.is_empty(), "{failed:#?}");
            let summary = summarize(&records);
            assert_eq!(summary.len(), 16);
            assert!(summary.iter().all(|s| s.checks > 0 && s.violations == 0));
        }
    }

    #[test]
    fn concave_records_are_oriented() {
        let p = Prepared::new(
            parse_spec("neg:pow:r=2@[0,1]").unwrap(),
            3,
            &NumericMode::exact(),
        )
        .unwrap();
        let recs = bounds_records(&p).unwrap();
        let eq3l = recs
            .iter()
            .find(|r| r.ineq == CheckId::Eq3L && r.n == 2)
            .unwrap();
        // A_2 = -5/8 ≤ -7/12
        assert_eq!((eq3l.lhs.as_str(), eq3l.rhs.as_str()), ("-5/8", "-7/12"));
        assert!(eq3l.pass && eq3l.strict);
        let eq3r = recs
            .iter()
            .find(|r| r.ineq == CheckId::Eq3R && r.n == 1)
            .unwrap();
        assert!(eq3r.pass && !eq3r.strict && eq3r.gap == "0");
    }

    #[test]
    fn alzer_suite_summarizes_twelve_ids() {
        let records = run_suite(Suite::Alzer, &NumericMode::float(), &small()).unwrap();
        let summary = summarize(&records);
        assert_eq!(summary.len(), 12);
        let with_checks: Vec<_> = summary
            .iter()
            .filter(|s| s.checks > 0)
            .map(|s| s.summary)
            .collect();
        assert_eq!(
            with_checks,
            vec![CheckId::Eq1, CheckId::Eq10L, CheckId::Eq10R]
        );
    }

    #[test]
    fn suite_names() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("theorem99".parse::<Suite>().is_err());
    }
}
