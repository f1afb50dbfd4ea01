//! Power sums `S_n(r) = Σ_{i=1..n} i^r`, Alzer's ratio
//! `((n+1)·S_n / (n·S_{n+1}))^{1/r}`, and its refined two-sided bounds
//!
//! ```text
//! n/(n+1)·(1 + 1/(n(n+2)))^{1/r}  ≤  ratio  ≤  n/(n+1)·(1 + ((n+1)^{r+1} − S_{n+1}) / (n²·S_{n+1}))^{1/r}
//! ```
//!
//! for `r ≥ 1`, reversed for `0 < r ≤ 1`. These follow from the recursive
//! bound on right-endpoint sums applied to `x^r` on `[0, 1]`, where
//! `A_n = S_n / n^{r+1}`; [`cross_check_with_theorem`] recomputes them along
//! that route.
//!
//! Values of the form `c·X^{1/r}` are kept as [`RootedValue`]s. When `r` is
//! an integer and `c`, `X` are exact, comparisons raise both sides to the
//! `r`-th power and compare rationals, so no root is ever extracted.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::convexity_bounds::bound_a_prev;
use crate::error::{Error, Result};
use crate::function_model::{format_rational, Exponent, FunctionSpec, Interval};
use crate::riemann_sums::compute_sums;
use crate::scalar::{Comparison, NumericMode, Scalar};
use crate::summation::CompensatedSum;

/// Decimal places kept when rendering irrational exact-mode roots.
pub const ROOT_DIGITS: usize = 30;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSum {
    pub n: u64,
    pub r: Exponent,
    pub value: Scalar,
}

fn exact_exponent(r: &Exponent) -> Result<u32> {
    r.as_integer().ok_or_else(|| {
        Error::ModeUnsupported(format!(
            "exact power sums with non-integer exponent r = {r}"
        ))
    })
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument(
            "power sums are indexed from n = 1".into(),
        ))
    } else {
        Ok(())
    }
}

pub fn power_sum(n: u64, r: &Exponent, mode: &NumericMode) -> Result<PowerSum> {
    check_n(n)?;
    mode.validate()?;
    let value = match mode {
        NumericMode::ExactRational { .. } => {
            let k = exact_exponent(r)? as usize;
            let total: BigInt = (1..=n).map(|i| num_traits::pow(BigInt::from(i), k)).sum();
            Scalar::Exact(BigRational::from_integer(total))
        }
        NumericMode::Float { .. } => {
            let rf = r.to_f64();
            let total: CompensatedSum = (1..=n).map(|i| (i as f64).powf(rf)).sum();
            Scalar::Float(total.value())
        }
    };
    Ok(PowerSum {
        n,
        r: r.clone(),
        value,
    })
}

/// Prefix table `S_1 … S_{n_max}` for sweeps over `n`.
#[derive(Clone, Debug)]
pub struct PowerSumTable {
    r: Exponent,
    mode: NumericMode,
    prefix: Vec<Scalar>,
}

impl PowerSumTable {
    pub fn new(n_max: u64, r: &Exponent, mode: &NumericMode) -> Result<Self> {
        check_n(n_max)?;
        mode.validate()?;
        let prefix = match mode {
            NumericMode::ExactRational { .. } => {
                let k = exact_exponent(r)? as usize;
                let mut acc = BigInt::zero();
                (1..=n_max)
                    .map(|i| {
                        acc += num_traits::pow(BigInt::from(i), k);
                        Scalar::Exact(BigRational::from_integer(acc.clone()))
                    })
                    .collect()
            }
            NumericMode::Float { .. } => {
                let rf = r.to_f64();
                let mut acc = CompensatedSum::new();
                (1..=n_max)
                    .map(|i| {
                        acc += (i as f64).powf(rf);
                        Scalar::Float(acc.value())
                    })
                    .collect()
            }
        };
        Ok(PowerSumTable {
            r: r.clone(),
            mode: *mode,
            prefix,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn get(&self, n: u64) -> Option<&Scalar> {
        n.checked_sub(1).and_then(|i| self.prefix.get(i as usize))
    }

    /// Report for `n`; needs `n + 1 ≤ n_max`.
    pub fn report(&self, n: u64) -> Result<AlzerReport> {
        match (self.get(n), self.get(n + 1)) {
            (Some(s_n), Some(s_next)) => report_from_sums(n, &self.r, s_n, s_next, &self.mode),
            _ => Err(Error::InvalidArgument(format!(
                "table holds sums up to n = {}, report for n = {n} needs n + 1",
                self.n_max()
            ))),
        }
    }
}

/// `coefficient · radicand^{1/root}` with positive coefficient and radicand.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedValue {
    pub coefficient: Scalar,
    pub radicand: Scalar,
    pub root: Exponent,
}

impl RootedValue {
    /// `coefficient^k · radicand` when the root is an integer `k` and both parts are exact.
    pub fn transposed(&self) -> Option<(u32, BigRational)> {
        let k = self.root.as_integer()?;
        let c = self.coefficient.as_exact()?;
        let x = self.radicand.as_exact()?;
        Some((k, num_traits::pow(c.clone(), k as usize) * x))
    }

    pub fn approx(&self) -> f64 {
        if let Some((1, v)) = self.transposed() {
            return Scalar::Exact(v).to_f64();
        }
        let root = self.root.to_f64();
        let x = self.radicand.to_f64();
        let base = match self.root.as_integer() {
            Some(1) => x,
            Some(2) => x.sqrt(),
            Some(3) => x.cbrt(),
            _ => x.powf(root.recip()),
        };
        self.coefficient.to_f64() * base
    }

    /// The value as a rational: exact for unit roots, otherwise truncated
    /// (rounded toward zero) to [`ROOT_DIGITS`] decimal places. `None`
    /// outside the exact transposable case.
    pub fn certified_rational(&self) -> Option<BigRational> {
        let (k, p) = self.transposed()?;
        if k == 1 {
            return Some(p);
        }
        let scale = num_traits::pow(BigInt::from(10), ROOT_DIGITS);
        let scaled = p * BigRational::from_integer(num_traits::pow(scale.clone(), k as usize));
        let root = scaled.to_integer().nth_root(k);
        Some(BigRational::new(root, scale))
    }

    /// Record rendering: `p/q` for exact unit roots, a truncated decimal for
    /// other exact roots, shortest round-trip decimal in float mode.
    pub fn render(&self) -> String {
        match (self.transposed(), self.certified_rational()) {
            (Some((1, v)), _) => v.to_string(),
            (_, Some(v)) => format_rational(&v),
            _ => Scalar::Float(self.approx()).to_string(),
        }
    }

    /// Six-decimal rendering for tables (fractions for exact unit roots).
    pub fn render_short(&self) -> String {
        match self.transposed() {
            Some((1, v)) => v.to_string(),
            _ => format!("{:.6}", self.approx()),
        }
    }
}

/// A `lhs ≤ rhs` check between rooted values, with record renderings.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedComparison {
    pub comparison: Comparison,
    pub lhs_text: String,
    pub rhs_text: String,
    pub gap_text: String,
}

/// Exact via r-th-power transposition when both sides allow it, float otherwise.
pub fn compare_rooted(
    mode: &NumericMode,
    lhs: &RootedValue,
    rhs: &RootedValue,
) -> RootedComparison {
    if let (Some((k1, l)), Some((k2, r))) = (lhs.transposed(), rhs.transposed()) {
        if k1 == k2 {
            let order = l.cmp(&r);
            let (lv, rv) = (
                lhs.certified_rational().expect("transposable"),
                rhs.certified_rational().expect("transposable"),
            );
            let gap = &rv - &lv;
            let gap_text = if k1 == 1 {
                gap.to_string()
            } else {
                format_rational(&gap)
            };
            return RootedComparison {
                comparison: Comparison {
                    holds: order != Ordering::Greater,
                    strict: order == Ordering::Less,
                    exact: true,
                    gap: Scalar::Exact(gap),
                },
                lhs_text: lhs.render(),
                rhs_text: rhs.render(),
                gap_text,
            };
        }
    }
    let comparison = mode.compare_le(&Scalar::Float(lhs.approx()), &Scalar::Float(rhs.approx()));
    let gap_text = comparison.gap.to_string();
    RootedComparison {
        comparison,
        lhs_text: Scalar::Float(lhs.approx()).to_string(),
        rhs_text: Scalar::Float(rhs.approx()).to_string(),
        gap_text,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `r ≥ 1`: refined_lower ≤ ratio ≤ refined_upper.
    Refine,
    /// `0 < r < 1`: refined_upper ≤ ratio ≤ refined_lower.
    Reverse,
}

impl Direction {
    pub fn for_exponent(r: &Exponent) -> Direction {
        if r.value() >= &BigRational::one() {
            Direction::Refine
        } else {
            Direction::Reverse
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Direction::Refine => "Refine",
            Direction::Reverse => "Reverse",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlzerReport {
    pub n: u64,
    pub r: Exponent,
    pub ratio: RootedValue,
    pub refined_lower: RootedValue,
    pub refined_upper: RootedValue,
    /// `n/(n+1)`, as a rooted value with unit radicand.
    pub classical_lower: RootedValue,
    pub direction: Direction,
}

/// The four comparisons of the sandwich, each oriented as `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichCheck {
    /// `n/(n+1) ≤ ratio`.
    pub classical: RootedComparison,
    /// `n/(n+1) ≤ refined_lower`.
    pub refinement: RootedComparison,
    /// `refined_lower ≤ ratio` (Refine) or `ratio ≤ refined_lower` (Reverse).
    pub lower: RootedComparison,
    /// `ratio ≤ refined_upper` (Refine) or `refined_upper ≤ ratio` (Reverse).
    pub upper: RootedComparison,
}

impl SandwichCheck {
    pub fn passed(&self) -> bool {
        [&self.classical, &self.refinement, &self.lower, &self.upper]
            .iter()
            .all(|c| c.comparison.holds)
    }
}

impl AlzerReport {
    pub fn check(&self, mode: &NumericMode) -> SandwichCheck {
        let (lower, upper) = match self.direction {
            Direction::Refine => (
                compare_rooted(mode, &self.refined_lower, &self.ratio),
                compare_rooted(mode, &self.ratio, &self.refined_upper),
            ),
            Direction::Reverse => (
                compare_rooted(mode, &self.ratio, &self.refined_lower),
                compare_rooted(mode, &self.refined_upper, &self.ratio),
            ),
        };
        SandwichCheck {
            classical: compare_rooted(mode, &self.classical_lower, &self.ratio),
            refinement: compare_rooted(mode, &self.classical_lower, &self.refined_lower),
            lower,
            upper,
        }
    }

    /// Whether the lower and upper comparisons are strict: every comparison
    /// is an equality at `r = 1`, and the upper one is also an equality at `n = 1`.
    pub fn strict_expected(&self) -> (bool, bool) {
        let curved = !self.r.is_one();
        (curved, curved && self.n >= 2)
    }
}

fn ratio_from_sums(
    n: u64,
    r: &Exponent,
    s_n: &Scalar,
    s_next: &Scalar,
    mode: &NumericMode,
) -> RootedValue {
    let radicand = &(&mode.lift_integer(n + 1) * s_n) / &(&mode.lift_integer(n) * s_next);
    RootedValue {
        coefficient: mode.lift_integer(1),
        radicand,
        root: r.clone(),
    }
}

fn report_from_sums(
    n: u64,
    r: &Exponent,
    s_n: &Scalar,
    s_next: &Scalar,
    mode: &NumericMode,
) -> Result<AlzerReport> {
    let one = mode.lift_integer(1);
    let coefficient = mode.lift_ratio(n, n + 1);
    let rooted = |radicand: Scalar| RootedValue {
        coefficient: coefficient.clone(),
        radicand,
        root: r.clone(),
    };
    // (n+1)^{r+1} / S_{n+1} is formed as (n+1)·(n+1)^r / S_{n+1} so that
    // large float exponents do not overflow.
    let last_term = match mode {
        NumericMode::ExactRational { .. } => {
            let k = exact_exponent(r)? as usize;
            Scalar::Exact(BigRational::from_integer(num_traits::pow(
                BigInt::from(n + 1),
                k,
            )))
        }
        NumericMode::Float { .. } => {
            if !s_next.to_f64().is_finite() {
                return Err(Error::ModeUnsupported(format!(
                    "power sums for n = {} and r = {r} beyond the binary64 range",
                    n + 1
                )));
            }
            Scalar::Float(((n + 1) as f64).powf(r.to_f64()))
        }
    };
    let next_power_ratio = &(&mode.lift_integer(n + 1) * &last_term) / s_next;
    let lower = &one + &mode.lift_ratio(1, n * (n + 2));
    let upper = &one + &(&(&next_power_ratio - &one) / &mode.lift_integer(n * n));
    Ok(AlzerReport {
        n,
        r: r.clone(),
        ratio: ratio_from_sums(n, r, s_n, s_next, mode),
        refined_lower: rooted(lower),
        refined_upper: rooted(upper),
        classical_lower: rooted(one.clone()),
        direction: Direction::for_exponent(r),
    })
}

fn adjacent_sums(n: u64, r: &Exponent, mode: &NumericMode) -> Result<(Scalar, Scalar)> {
    let s_n = power_sum(n, r, mode)?.value;
    let term = match mode {
        NumericMode::ExactRational { .. } => Scalar::Exact(BigRational::from_integer(
            num_traits::pow(BigInt::from(n + 1), exact_exponent(r)? as usize),
        )),
        NumericMode::Float { .. } => Scalar::Float(((n + 1) as f64).powf(r.to_f64())),
    };
    let s_next = &s_n + &term;
    Ok((s_n, s_next))
}

/// `((n+1)·S_n / (n·S_{n+1}))^{1/r}` with its exact radicand attached.
pub fn alzer_ratio(n: u64, r: &Exponent, mode: &NumericMode) -> Result<RootedValue> {
    let (s_n, s_next) = adjacent_sums(n, r, mode)?;
    Ok(ratio_from_sums(n, r, &s_n, &s_next, mode))
}

pub fn refined_bounds(n: u64, r: &Exponent, mode: &NumericMode) -> Result<AlzerReport> {
    let (s_n, s_next) = adjacent_sums(n, r, mode)?;
    report_from_sums(n, r, &s_n, &s_next, mode)
}

/// `n/(n+1) ≤ alzer_ratio(n, r)` under the mode's comparison rule.
pub fn classical_alzer_check(n: u64, r: &Exponent, mode: &NumericMode) -> Result<bool> {
    let ratio = alzer_ratio(n, r, mode)?;
    let classical = RootedValue {
        coefficient: mode.lift_ratio(n, n + 1),
        radicand: mode.lift_integer(1),
        root: r.clone(),
    };
    Ok(compare_rooted(mode, &classical, &ratio).comparison.holds)
}

/// Rebuilds the refined bounds from endpoint sums of `x^r` on `[0, 1]`:
/// dividing the recursive bound on `A_n` by `A_{n+1}` gives the normalized
/// radicands `(value / (n/(n+1)))^r` of the lower bound, the ratio and the
/// upper bound. Returns the largest absolute difference against the
/// power-sum route. Integer `r` runs exactly (the result is then a rational
/// that should be zero); other `r` run in float mode.
pub fn cross_check_with_theorem(n: u64, r: &Exponent) -> Result<Scalar> {
    let mode = if r.as_integer().is_some() {
        NumericMode::exact()
    } else {
        NumericMode::float()
    };
    check_n(n)?;
    let spec = FunctionSpec::power(r.clone(), Interval::unit())?;
    let shape = spec.classify()?;
    let sums_n = compute_sums(&spec, n, &mode)?;
    let sums_next = compute_sums(&spec, n + 1, &mode)?;
    let bound = bound_a_prev(&spec, n, &sums_next)?;
    let (near, far) = if shape.reverses() {
        (bound.upper, bound.lower)
    } else {
        (bound.lower, bound.upper)
    };
    let a_next = sums_next.right();
    let via_sums = [&near / a_next, sums_n.right() / a_next, &far / a_next];

    let report = refined_bounds(n, r, &mode)?;
    let coefficient_power = match (&report.ratio.coefficient, r.as_integer()) {
        (_, Some(k)) if mode.is_exact() => Scalar::Exact(num_traits::pow(
            BigRational::new(BigInt::from(n), BigInt::from(n + 1)),
            k as usize,
        )),
        _ => Scalar::Float((n as f64 / (n + 1) as f64).powf(r.to_f64())),
    };
    let via_power_sums = [
        report.refined_lower.radicand.clone(),
        &report.ratio.radicand / &coefficient_power,
        report.refined_upper.radicand.clone(),
    ];
    Ok(via_sums
        .iter()
        .zip(via_power_sums.iter())
        .map(|(t, d)| (t - d).abs())
        .reduce(Scalar::max_value)
        .expect("three components"))
}

/// `Σ i^k` for `i ≤ n` as a big integer.
pub fn exact_power_sum(n: u64, k: u32) -> BigInt {
    (1..=n)
        .map(|i| num_traits::pow(BigInt::from(i), k as usize))
        .sum()
}
