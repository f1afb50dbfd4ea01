//! Recursive two-sided bounds on endpoint sums of convex and concave
//! functions, the caps they imply, monotonicity of the sum sequences for
//! increasing functions, and the endpoint range of the sums.
//!
//! For convex `f` with `w = b − a`:
//!
//! ```text
//! A_{n+1} + (A_{n+1} − w·f(a)) / (n(n+2))  ≤  A_n  ≤  A_{n+1} + (w·f(b) − A_{n+1}) / n²
//! B_{n+1} + (B_{n+1} − w·f(b)) / (n(n+2))  ≤  B_n  ≤  B_{n+1} + (w·f(a) − B_{n+1}) / n²
//! A_{n+1} ≤ w·[ n/(2(n+1))·f(a) + (n+2)/(2(n+1))·f(b) ]
//! B_{n+1} ≤ w·[ (n+2)/(2(n+1))·f(a) + n/(2(n+1))·f(b) ]
//! ```
//!
//! Every inequality reverses for concave `f`, is an equality for affine `f`,
//! and is strict for strictly convex or concave `f`, except the `n²` sides at
//! `n = 1`, which are identities because `A_1 = w·f(b)` and `B_1 = w·f(a)`.
//! Concave specs flip the direction of the same expressions; `f` is never
//! negated internally.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function_model::{FunctionSpec, ShapeClass};
use crate::riemann_sums::{compute_sums, compute_sums_range, EndpointSums};
use crate::scalar::{Comparison, NumericMode, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundSource {
    Ineq3,
    Ineq4,
    Ineq5,
    Ineq6,
    EndpointRange,
    IntegralBracket,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundInterval {
    pub lower: Scalar,
    pub upper: Scalar,
    pub lower_strict: bool,
    pub upper_strict: bool,
    pub source: BoundSource,
}

/// Result of testing `lower ≤ value ≤ upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    /// `lower ≤ value`.
    pub below: Comparison,
    /// `value ≤ upper`.
    pub above: Comparison,
}

impl Containment {
    pub fn holds(&self) -> bool {
        self.below.holds && self.above.holds
    }
}

impl BoundInterval {
    pub fn contains(&self, value: &Scalar, mode: &NumericMode) -> Containment {
        Containment {
            below: mode.compare_le(&self.lower, value),
            above: mode.compare_le(value, &self.upper),
        }
    }

    pub fn width(&self) -> Scalar {
        &self.upper - &self.lower
    }

    pub fn is_degenerate(&self) -> bool {
        self.width().is_zero()
    }
}

struct Endpoints {
    width: Scalar,
    f_a: Scalar,
    f_b: Scalar,
}

fn endpoints(spec: &FunctionSpec, mode: &NumericMode) -> Result<Endpoints> {
    let d = spec.domain();
    Ok(Endpoints {
        width: mode.lift(&d.width()),
        f_a: spec.evaluate_at(d.a(), mode)?,
        f_b: spec.evaluate_at(d.b(), mode)?,
    })
}

fn check_successor(n: u64, sums_next: &EndpointSums) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "bounds are indexed from n = 1".into(),
        ));
    }
    if sums_next.n() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected sums for n + 1 = {}, got n = {}",
            n + 1,
            sums_next.n()
        )));
    }
    Ok(())
}

/// Orders the `n(n+2)` expression and the `n²` expression by curvature.
fn orient(
    shape: &ShapeClass,
    n: u64,
    near: Scalar,
    far: Scalar,
    source: BoundSource,
) -> BoundInterval {
    let strict = shape.is_strict();
    let far_strict = strict && n >= 2;
    if shape.reverses() {
        BoundInterval {
            lower: far,
            upper: near,
            lower_strict: far_strict,
            upper_strict: strict,
            source,
        }
    } else {
        BoundInterval {
            lower: near,
            upper: far,
            lower_strict: strict,
            upper_strict: far_strict,
            source,
        }
    }
}

fn recursive_bound(
    spec: &FunctionSpec,
    n: u64,
    next: &Scalar,
    towards: impl Fn(&Endpoints) -> (Scalar, Scalar),
    mode: &NumericMode,
    source: BoundSource,
) -> Result<BoundInterval> {
    let shape = spec.classify()?;
    let e = endpoints(spec, mode)?;
    let (first, last) = towards(&e);
    let n_n2 = mode.lift_integer(n * (n + 2));
    let n_sq = mode.lift_integer(n * n);
    let near = next + &((next - &(&e.width * &first)) / n_n2);
    let far = next + &((&(&e.width * &last) - next) / n_sq);
    Ok(orient(&shape, n, near, far, source))
}

/// Interval that must contain `A_n`, built from `A_{n+1}`.
pub fn bound_a_prev(
    spec: &FunctionSpec,
    n: u64,
    sums_next: &EndpointSums,
) -> Result<BoundInterval> {
    check_successor(n, sums_next)?;
    recursive_bound(
        spec,
        n,
        sums_next.right(),
        |e| (e.f_a.clone(), e.f_b.clone()),
        sums_next.mode(),
        BoundSource::Ineq3,
    )
}

/// Interval that must contain `B_n`, built from `B_{n+1}`.
pub fn bound_b_prev(
    spec: &FunctionSpec,
    n: u64,
    sums_next: &EndpointSums,
) -> Result<BoundInterval> {
    check_successor(n, sums_next)?;
    recursive_bound(
        spec,
        n,
        sums_next.left(),
        |e| (e.f_b.clone(), e.f_a.clone()),
        sums_next.mode(),
        BoundSource::Ineq4,
    )
}

fn cap(
    spec: &FunctionSpec,
    n: u64,
    mode: &NumericMode,
    a_weight: u64,
    b_weight: u64,
) -> Result<Scalar> {
    spec.classify()?;
    if n == 0 {
        return Err(Error::InvalidArgument("caps are indexed from n = 1".into()));
    }
    let e = endpoints(spec, mode)?;
    let combo = &(&mode.lift_integer(a_weight) * &e.f_a) + &(&mode.lift_integer(b_weight) * &e.f_b);
    Ok(&e.width * &combo / mode.lift_integer(2 * (n + 1)))
}

/// `w·[n f(a) + (n+2) f(b)] / (2(n+1))`: a ceiling on `A_{n+1}` for convex
/// specs, a floor for concave ones.
pub fn cap_a(spec: &FunctionSpec, n: u64, mode: &NumericMode) -> Result<Scalar> {
    cap(spec, n, mode, n, n + 2)
}

/// `w·[(n+2) f(a) + n f(b)] / (2(n+1))`: a ceiling on `B_{n+1}` for convex
/// specs, a floor for concave ones.
pub fn cap_b(spec: &FunctionSpec, n: u64, mode: &NumericMode) -> Result<Scalar> {
    cap(spec, n, mode, n + 2, n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityVerdict {
    pub n_range: (u64, u64),
    pub a_nonincreasing: bool,
    pub b_nondecreasing: bool,
    /// Largest of `A_{n+1} − A_n` and `B_n − B_{n+1}` over the range;
    /// positive values are violations.
    pub worst_violation: Scalar,
    /// False when the spec is not increasing, so the verdict is informational.
    pub asserted: bool,
}

fn monotonicity_hypothesis(spec: &FunctionSpec) -> Result<bool> {
    let shape = spec.classify()?;
    Ok(shape.increasing && (shape.is_convex() || shape.is_concave()))
}

/// Checks that `A_n` is nonincreasing and `B_n` nondecreasing over
/// `n_min..=n_max`, which holds for increasing convex or concave specs.
pub fn check_monotonicity(
    spec: &FunctionSpec,
    n_min: u64,
    n_max: u64,
    mode: &NumericMode,
) -> Result<MonotonicityVerdict> {
    if !monotonicity_hypothesis(spec)? {
        return Err(Error::HypothesisNotMet(format!(
            "{spec} is not increasing, so monotone endpoint sums are not guaranteed"
        )));
    }
    survey_monotonicity(spec, n_min, n_max, mode)
}

/// Same sweep as [`check_monotonicity`], but runs without the hypothesis
/// and marks the verdict unasserted instead of failing.
pub fn survey_monotonicity(
    spec: &FunctionSpec,
    n_min: u64,
    n_max: u64,
    mode: &NumericMode,
) -> Result<MonotonicityVerdict> {
    let asserted = monotonicity_hypothesis(spec)?;
    if n_min == 0 || n_min >= n_max {
        return Err(Error::InvalidArgument(format!(
            "monotonicity needs 1 ≤ n_min < n_max, got {n_min}..{n_max}"
        )));
    }
    let sums = compute_sums_range(spec, n_min..=n_max, mode)?;
    let steps: Vec<(Comparison, Comparison)> = sums
        .par_windows(2)
        .map(|w| {
            (
                mode.compare_le(w[1].right(), w[0].right()),
                mode.compare_le(w[0].left(), w[1].left()),
            )
        })
        .collect();
    let a_nonincreasing = steps.iter().all(|(a, _)| a.holds);
    let b_nondecreasing = steps.iter().all(|(_, b)| b.holds);
    let worst_violation = steps
        .iter()
        .flat_map(|(a, b)| [-&a.gap, -&b.gap])
        .reduce(Scalar::max_value)
        .expect("range holds at least two sizes");
    Ok(MonotonicityVerdict {
        n_range: (n_min, n_max),
        a_nonincreasing,
        b_nondecreasing,
        worst_violation,
        asserted,
    })
}

/// `[w·f(a), w·f(b)]`, which contains every `A_n` and `B_n` of an increasing spec.
pub fn endpoint_range(spec: &FunctionSpec, mode: &NumericMode) -> Result<BoundInterval> {
    require_increasing(spec)?;
    let e = endpoints(spec, mode)?;
    Ok(BoundInterval {
        lower: &e.width * &e.f_a,
        upper: &e.width * &e.f_b,
        lower_strict: false,
        upper_strict: false,
        source: BoundSource::EndpointRange,
    })
}

/// `[B_n, A_n]`, which contains the integral of an increasing spec; its
/// width is `w·(f(b) − f(a))/n`.
pub fn bracket_integral(spec: &FunctionSpec, n: u64, mode: &NumericMode) -> Result<BoundInterval> {
    require_increasing(spec)?;
    let sums = compute_sums(spec, n, mode)?;
    Ok(BoundInterval {
        lower: sums.left().clone(),
        upper: sums.right().clone(),
        lower_strict: false,
        upper_strict: false,
        source: BoundSource::IntegralBracket,
    })
}

fn require_increasing(spec: &FunctionSpec) -> Result<()> {
    if spec.classify()?.increasing {
        Ok(())
    } else {
        Err(Error::HypothesisNotMet(format!("{spec} is not increasing")))
    }
}
