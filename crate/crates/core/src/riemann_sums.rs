//! Right- and left-endpoint Riemann sums on a uniform grid.
//!
//! For `f` on `[a, b]` and nodes `x_i = a + i(b−a)/n`, the right sum is
//! `A_n = (b−a)/n · Σ_{i=1..n} f(x_i)` and the left sum is
//! `B_n = (b−a)/n · Σ_{i=0..n−1} f(x_i)`. They share the interior nodes, so
//! `A_n − B_n = (b−a)(f(b) − f(a))/n` holds exactly.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function_model::{FunctionSpec, Interval};
use crate::scalar::{rational_to_f64, NumericMode, Scalar};
use crate::summation::CompensatedSum;

/// Largest partition size accepted per call.
pub const MAX_PARTITION: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct UniformPartition {
    interval: Interval,
    n: u64,
}

impl UniformPartition {
    pub fn new(interval: Interval, n: u64) -> Result<Self> {
        if n == 0 || n > MAX_PARTITION {
            return Err(Error::PartitionSize {
                n,
                max: MAX_PARTITION,
            });
        }
        Ok(UniformPartition { interval, n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    /// Node `x_i`. Endpoints are pinned to `a` and `b`; exact mode multiplies
    /// before dividing, float mode uses a fused multiply-add.
    pub fn node(&self, i: u64, mode: &NumericMode) -> Scalar {
        debug_assert!(i <= self.n);
        let (a, b) = (self.interval.a(), self.interval.b());
        if i == 0 {
            return mode.lift(a);
        }
        if i == self.n {
            return mode.lift(b);
        }
        match mode {
            NumericMode::ExactRational { .. } => {
                let offset = self.interval.width() * BigInt::from(i) / BigInt::from(self.n);
                Scalar::Exact(a + offset)
            }
            NumericMode::Float { .. } => {
                let (af, bf) = (rational_to_f64(a), rational_to_f64(b));
                Scalar::Float((i as f64 / self.n as f64).mul_add(bf - af, af))
            }
        }
    }

    pub fn nodes<'a>(&'a self, mode: &'a NumericMode) -> impl Iterator<Item = Scalar> + 'a {
        (0..=self.n).map(move |i| self.node(i, mode))
    }
}

/// The pair `(A_n, B_n)` for one partition size.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointSums {
    n: u64,
    right: Scalar,
    left: Scalar,
    mode: NumericMode,
}

impl EndpointSums {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `A_n`, sampling right endpoints.
    pub fn right(&self) -> &Scalar {
        &self.right
    }

    /// `B_n`, sampling left endpoints.
    pub fn left(&self) -> &Scalar {
        &self.left
    }

    pub fn mode(&self) -> &NumericMode {
        &self.mode
    }
}

pub fn compute_sums(spec: &FunctionSpec, n: u64, mode: &NumericMode) -> Result<EndpointSums> {
    mode.validate()?;
    if mode.is_exact() && !spec.supports_exact() {
        return Err(Error::ModeUnsupported(format!("exact sums of {spec}")));
    }
    let partition = UniformPartition::new(spec.domain().clone(), n)?;
    let f_a = spec.evaluate(&partition.node(0, mode))?;
    let f_b = spec.evaluate(&partition.node(n, mode))?;
    let width = spec.domain().width();

    let (right, left) = match mode {
        NumericMode::ExactRational { .. } => {
            let mut interior = BigRational::default();
            for i in 1..n {
                if let Scalar::Exact(v) = spec.evaluate(&partition.node(i, mode))? {
                    interior += v;
                }
            }
            let step = width / BigInt::from(n);
            let right = &step * (&interior + expect_exact(&f_b));
            let left = step * (expect_exact(&f_a) + interior);
            (Scalar::Exact(right), Scalar::Exact(left))
        }
        NumericMode::Float { .. } => {
            let mut interior = CompensatedSum::new();
            for i in 1..n {
                interior += spec.evaluate(&partition.node(i, mode))?.to_f64();
            }
            let step = rational_to_f64(&width) / n as f64;
            let right = step * (interior + f_b.to_f64()).value();
            let left = step * (interior + f_a.to_f64()).value();
            (Scalar::Float(right), Scalar::Float(left))
        }
    };
    mode.check_size(&right)?;
    mode.check_size(&left)?;
    Ok(EndpointSums {
        n,
        right,
        left,
        mode: *mode,
    })
}

fn expect_exact(v: &Scalar) -> BigRational {
    v.as_exact()
        .cloned()
        .expect("exact mode evaluation yields exact values")
}

/// Sums for every `n` in `range`, computed in parallel and returned in `n` order.
pub fn compute_sums_range(
    spec: &FunctionSpec,
    range: RangeInclusive<u64>,
    mode: &NumericMode,
) -> Result<Vec<EndpointSums>> {
    range
        .into_par_iter()
        .map(|n| compute_sums(spec, n, mode))
        .collect()
}

/// `(A_n − B_n) − (b−a)(f(b) − f(a))/n`; zero in exact mode.
pub fn difference_identity(sums: &EndpointSums, spec: &FunctionSpec) -> Result<Scalar> {
    let mode = sums.mode();
    let d = spec.domain();
    let f_a = spec.evaluate_at(d.a(), mode)?;
    let f_b = spec.evaluate_at(d.b(), mode)?;
    let predicted = mode.lift(&d.width()) * (f_b - f_a) / mode.lift_integer(sums.n());
    Ok(&(sums.right() - sums.left()) - &predicted)
}
