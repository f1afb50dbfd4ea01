//! Certified bounds for endpoint Riemann sums of convex and concave
//! functions, and refined two-sided Alzer inequalities for power sums.
//!
//! Every quantity can be computed either as an exact rational or as a
//! binary64 float with a tolerance-aware comparison rule; see [`NumericMode`].

pub mod alzer_power_sums;
pub mod cli;
pub mod convexity_bounds;
pub mod error;
pub mod function_model;
pub mod report;
pub mod riemann_sums;
pub mod scalar;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use function_model::{parse_spec, Curvature, Exponent, FunctionSpec, Interval, ShapeClass};
pub use riemann_sums::{compute_sums, difference_identity, EndpointSums, UniformPartition};
pub use scalar::{Comparison, NumericMode, Scalar};
