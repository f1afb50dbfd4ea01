//! Compensated floating-point summation.
//!
//! Uses Neumaier's variant of Kahan summation: the running compensation
//! captures the low-order bits lost by each addition regardless of which
//! operand is larger, so the result does not depend on summand order at
//! the level of a few ulps.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, rhs: f64) {
        let t = self.sum + rhs;
        if self.sum.abs() >= rhs.abs() {
            self.compensation += (self.sum - t) + rhs;
        } else {
            self.compensation += (rhs - t) + self.sum;
        }
        self.sum = t;
    }
}

impl Add<f64> for CompensatedSum {
    type Output = Self;

    fn add(mut self, rhs: f64) -> Self {
        self += rhs;
        self
    }
}

impl Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        iter.fold(CompensatedSum::new(), |acc, x| acc + x)
    }
}

impl From<CompensatedSum> for f64 {
    fn from(s: CompensatedSum) -> f64 {
        s.value()
    }
}
