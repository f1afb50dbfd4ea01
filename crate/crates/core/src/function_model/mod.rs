//! Closed-form functions on a closed interval, pointwise evaluation in either
//! numeric regime, and analytic shape classification.

mod grammar;
mod rational;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, NumericMode, Scalar};

pub use grammar::parse_spec;
pub use rational::{format_rational, parse_rational};

/// Closed interval `[a, b]` with `a < b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    a: BigRational,
    b: BigRational,
}

impl Interval {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidSpec(format!(
                "interval needs a < b, got [{}, {}]",
                format_rational(&a),
                format_rational(&b)
            )));
        }
        Ok(Interval { a, b })
    }

    pub fn from_integers(a: i64, b: i64) -> Result<Self> {
        Interval::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn unit() -> Self {
        Interval {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn width(&self) -> BigRational {
        &self.b - &self.a
    }

    fn contains(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Exact(q) => &self.a <= q && q <= &self.b,
            Scalar::Float(v) => rational_to_f64(&self.a) <= *v && *v <= rational_to_f64(&self.b),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}]",
            format_rational(&self.a),
            format_rational(&self.b)
        )
    }
}

/// Positive rational exponent of a power function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn new(r: BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidSpec(format!(
                "exponent must be positive, got {}",
                format_rational(&r)
            )));
        }
        Ok(Exponent(r))
    }

    pub fn integer(k: u32) -> Result<Self> {
        Exponent::new(BigRational::from_integer(k.into()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let r = parse_rational(text).ok_or_else(|| Error::Parse {
            input: text.to_string(),
            reason: "expected a rational literal for the exponent".into(),
        })?;
        Exponent::new(r)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }

    /// The exponent as a machine integer, when it is one.
    pub fn as_integer(&self) -> Option<u32> {
        if self.0.is_integer() {
            self.0.to_integer().to_u32()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

/// Breakpoints `(x_j, y_j)` with strictly increasing `x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(BigRational, BigRational)>,
    approx: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSpec(
                "piecewise-linear function needs at least 2 breakpoints".into(),
            ));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidSpec(
                "piecewise-linear breakpoints must be strictly increasing in x".into(),
            ));
        }
        let approx = points
            .iter()
            .map(|(x, y)| (rational_to_f64(x), rational_to_f64(y)))
            .collect();
        Ok(PiecewiseLinear { points, approx })
    }

    pub fn points(&self) -> &[(BigRational, BigRational)] {
        &self.points
    }

    pub fn slopes(&self) -> Vec<BigRational> {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    fn span(&self) -> Result<Interval> {
        Interval::new(
            self.points[0].0.clone(),
            self.points[self.points.len() - 1].0.clone(),
        )
    }

    fn evaluate_exact(&self, x: &BigRational) -> BigRational {
        // segment j covers [x_j, x_{j+1}]
        let j = self
            .points
            .partition_point(|(px, _)| px <= x)
            .clamp(1, self.points.len() - 1)
            - 1;
        let (x0, y0) = &self.points[j];
        let (x1, y1) = &self.points[j + 1];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    fn evaluate_float(&self, x: f64) -> f64 {
        let j = self
            .approx
            .partition_point(|(px, _)| *px <= x)
            .clamp(1, self.approx.len() - 1)
            - 1;
        let (x0, y0) = self.approx[j];
        let (x1, y1) = self.approx[j + 1];
        if x == x1 {
            return y1;
        }
        y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    /// `x^r` on a nonnegative domain.
    Power(Exponent),
    Exp,
    /// `slope·x + intercept`.
    Affine {
        slope: BigRational,
        intercept: BigRational,
    },
    PiecewiseLinear(PiecewiseLinear),
    Negated(Box<FunctionSpec>),
}

/// A function together with the interval it lives on.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    kind: FunctionKind,
    domain: Interval,
}

impl FunctionSpec {
    pub fn power(r: Exponent, domain: Interval) -> Result<Self> {
        if domain.a.is_negative() {
            return Err(Error::InvalidSpec(format!(
                "power function needs a nonnegative domain, got {domain}"
            )));
        }
        Ok(FunctionSpec {
            kind: FunctionKind::Power(r),
            domain,
        })
    }

    pub fn exp(domain: Interval) -> Self {
        FunctionSpec {
            kind: FunctionKind::Exp,
            domain,
        }
    }

    pub fn affine(slope: BigRational, intercept: BigRational, domain: Interval) -> Self {
        FunctionSpec {
            kind: FunctionKind::Affine { slope, intercept },
            domain,
        }
    }

    /// The domain is the span of the breakpoints.
    pub fn piecewise_linear(points: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let pwl = PiecewiseLinear::new(points)?;
        let domain = pwl.span()?;
        Ok(FunctionSpec {
            kind: FunctionKind::PiecewiseLinear(pwl),
            domain,
        })
    }

    pub fn negated(inner: FunctionSpec) -> Self {
        let domain = inner.domain.clone();
        FunctionSpec {
            kind: FunctionKind::Negated(Box::new(inner)),
            domain,
        }
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    /// Whether every value on a rational grid is rational.
    pub fn supports_exact(&self) -> bool {
        match &self.kind {
            FunctionKind::Power(r) => r.as_integer().is_some(),
            FunctionKind::Exp => false,
            FunctionKind::Affine { .. } | FunctionKind::PiecewiseLinear(_) => true,
            FunctionKind::Negated(inner) => inner.supports_exact(),
        }
    }

    /// `f(x)` in the regime of `x`.
    pub fn evaluate(&self, x: &Scalar) -> Result<Scalar> {
        if !self.domain.contains(x) {
            return Err(Error::OutOfDomain {
                x: x.to_string(),
                a: format_rational(&self.domain.a),
                b: format_rational(&self.domain.b),
            });
        }
        self.evaluate_unchecked(x)
    }

    /// `f(x)` for a rational point moved into `mode`.
    pub fn evaluate_at(&self, x: &BigRational, mode: &NumericMode) -> Result<Scalar> {
        self.evaluate(&mode.lift(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &Scalar) -> Result<Scalar> {
        match (&self.kind, x) {
            (FunctionKind::Power(r), Scalar::Exact(q)) => match r.as_integer() {
                Some(k) => Ok(Scalar::Exact(pow_rational(q, k))),
                None => Err(Error::ModeUnsupported(format!(
                    "exact evaluation of x^{r} (non-integer exponent)"
                ))),
            },
            (FunctionKind::Power(r), Scalar::Float(v)) => Ok(Scalar::Float(match r.as_integer() {
                Some(k) if k <= i32::MAX as u32 => v.powi(k as i32),
                _ => v.powf(r.to_f64()),
            })),
            (FunctionKind::Exp, Scalar::Exact(_)) => {
                Err(Error::ModeUnsupported("exact evaluation of exp".into()))
            }
            (FunctionKind::Exp, Scalar::Float(v)) => Ok(Scalar::Float(v.exp())),
            (FunctionKind::Affine { slope, intercept }, Scalar::Exact(q)) => {
                Ok(Scalar::Exact(slope * q + intercept))
            }
            (FunctionKind::Affine { slope, intercept }, Scalar::Float(v)) => Ok(Scalar::Float(
                rational_to_f64(slope).mul_add(*v, rational_to_f64(intercept)),
            )),
            (FunctionKind::PiecewiseLinear(p), Scalar::Exact(q)) => {
                Ok(Scalar::Exact(p.evaluate_exact(q)))
            }
            (FunctionKind::PiecewiseLinear(p), Scalar::Float(v)) => {
                Ok(Scalar::Float(p.evaluate_float(*v)))
            }
            (FunctionKind::Negated(inner), _) => Ok(-inner.evaluate_unchecked(x)?),
        }
    }

    /// Analytic curvature and monotonicity of the function on its domain.
    pub fn classify(&self) -> Result<ShapeClass> {
        let shape = match &self.kind {
            FunctionKind::Power(r) => {
                let one = BigRational::one();
                let curvature = match r.value().cmp(&one) {
                    std::cmp::Ordering::Greater => Curvature::StrictlyConvex,
                    std::cmp::Ordering::Equal => Curvature::Affine,
                    std::cmp::Ordering::Less => Curvature::StrictlyConcave,
                };
                ShapeClass::certified(curvature, true, false)
            }
            FunctionKind::Exp => ShapeClass::certified(Curvature::StrictlyConvex, true, false),
            FunctionKind::Affine { slope, .. } => ShapeClass::certified(
                Curvature::Affine,
                !slope.is_negative(),
                !slope.is_positive(),
            ),
            FunctionKind::PiecewiseLinear(p) => {
                let slopes = p.slopes();
                let nondecreasing = slopes.windows(2).all(|w| w[0] <= w[1]);
                let nonincreasing = slopes.windows(2).all(|w| w[0] >= w[1]);
                let curvature = match (nondecreasing, nonincreasing) {
                    (true, true) => Curvature::Affine,
                    (true, false) => Curvature::Convex,
                    (false, true) => Curvature::Concave,
                    (false, false) => return Err(Error::UnclassifiablePiecewise),
                };
                ShapeClass::certified(
                    curvature,
                    slopes.iter().all(|s| !s.is_negative()),
                    slopes.iter().all(|s| !s.is_positive()),
                )
            }
            FunctionKind::Negated(inner) => {
                let s = inner.classify()?;
                ShapeClass {
                    curvature: s.curvature.reflect(),
                    increasing: s.decreasing,
                    decreasing: s.increasing,
                    certified: s.certified,
                }
            }
        };
        Ok(shape)
    }

    fn write_body(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FunctionKind::Power(r) => write!(f, "pow:r={r}"),
            FunctionKind::Exp => f.write_str("exp"),
            FunctionKind::Affine { slope, intercept } => write!(
                f,
                "affine:m={},c={}",
                format_rational(slope),
                format_rational(intercept)
            ),
            FunctionKind::PiecewiseLinear(p) => {
                f.write_str("pwl:")?;
                for (i, (x, y)) in p.points.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "({},{})", format_rational(x), format_rational(y))?;
                }
                Ok(())
            }
            FunctionKind::Negated(inner) => {
                f.write_str("neg:")?;
                inner.write_body(f)
            }
        }
    }
}

/// Canonical text form, re-parseable by [`parse_spec`].
impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_body(f)?;
        write!(f, "@{}", self.domain)
    }
}

impl std::str::FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

fn pow_rational(q: &BigRational, k: u32) -> BigRational {
    BigRational::new(
        num_traits::pow(q.numer().clone(), k as usize),
        num_traits::pow(q.denom().clone(), k as usize),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Curvature {
    Convex,
    StrictlyConvex,
    Concave,
    StrictlyConcave,
    Affine,
}

impl Curvature {
    /// Curvature of `-f`.
    pub fn reflect(self) -> Curvature {
        match self {
            Curvature::Convex => Curvature::Concave,
            Curvature::StrictlyConvex => Curvature::StrictlyConcave,
            Curvature::Concave => Curvature::Convex,
            Curvature::StrictlyConcave => Curvature::StrictlyConvex,
            Curvature::Affine => Curvature::Affine,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapeClass {
    pub curvature: Curvature,
    /// Nondecreasing on the domain.
    pub increasing: bool,
    /// Nonincreasing on the domain.
    pub decreasing: bool,
    /// Decided analytically from the kind rather than by sampling.
    pub certified: bool,
}

impl ShapeClass {
    fn certified(curvature: Curvature, increasing: bool, decreasing: bool) -> Self {
        ShapeClass {
            curvature,
            increasing,
            decreasing,
            certified: true,
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(
            self.curvature,
            Curvature::Convex | Curvature::StrictlyConvex | Curvature::Affine
        )
    }

    pub fn is_concave(&self) -> bool {
        matches!(
            self.curvature,
            Curvature::Concave | Curvature::StrictlyConcave | Curvature::Affine
        )
    }

    pub fn is_strict(&self) -> bool {
        matches!(
            self.curvature,
            Curvature::StrictlyConvex | Curvature::StrictlyConcave
        )
    }

    /// Concave and not affine: the bound directions flip.
    pub fn reverses(&self) -> bool {
        !self.is_convex()
    }
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> FunctionSpec {
        parse_spec(text).unwrap()
    }

    #[test]
    fn evaluates_examples() {
        let sq = spec("pow:r=2@[0,1]");
        assert_eq!(
            sq.evaluate(&Scalar::Exact(rational(1, 2))).unwrap(),
            Scalar::Exact(rational(1, 4))
        );
        let c = spec("affine:m=0,c=3/7@[-1,5]");
        for x in [-1, 0, 2, 5] {
            assert_eq!(
                c.evaluate(&Scalar::from_integer(x)).unwrap(),
                Scalar::Exact(rational(3, 7))
            );
        }
        let id = spec("pwl:(0,0);(1,1)");
        assert_eq!(
            id.evaluate(&Scalar::Float(0.25)).unwrap(),
            Scalar::Float(0.25)
        );
        assert_eq!(
            id.evaluate(&Scalar::Exact(rational(1, 4))).unwrap(),
            Scalar::Exact(rational(1, 4))
        );
    }

    #[test]
    fn out_of_domain_is_rejected() {
        let sq = spec("pow:r=2@[0,1]");
        assert!(matches!(
            sq.evaluate(&Scalar::Float(1.5)),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            sq.evaluate(&Scalar::from_integer(-1)),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn exact_mode_limits() {
        let e = spec("exp@[0,1]");
        assert!(matches!(
            e.evaluate(&Scalar::from_integer(0)),
            Err(Error::ModeUnsupported(_))
        ));
        let root = spec("pow:r=0.5@[0,4]");
        assert!(matches!(
            root.evaluate(&Scalar::from_integer(4)),
            Err(Error::ModeUnsupported(_))
        ));
        assert_eq!(
            root.evaluate(&Scalar::Float(4.0)).unwrap(),
            Scalar::Float(2.0)
        );
        assert!(!e.supports_exact());
        assert!(!spec("neg:pow:r=1.5@[0,1]").supports_exact());
        assert!(spec("neg:pow:r=3@[0,1]").supports_exact());
    }

    #[test]
    fn construction_invariants() {
        assert!(Interval::from_integers(1, 1).is_err());
        assert!(Interval::from_integers(2, 1).is_err());
        assert!(FunctionSpec::power(
            Exponent::integer(2).unwrap(),
            Interval::from_integers(-1, 1).unwrap()
        )
        .is_err());
        assert!(Exponent::integer(0).is_err());
        assert!(FunctionSpec::piecewise_linear(vec![(rational(0, 1), rational(0, 1))]).is_err());
        assert!(FunctionSpec::piecewise_linear(vec![
            (rational(0, 1), rational(0, 1)),
            (rational(0, 1), rational(1, 1)),
        ])
        .is_err());
    }

    #[test]
    fn classifies_examples() {
        let s = spec("pow:r=2@[0,1]").classify().unwrap();
        assert_eq!(s.curvature, Curvature::StrictlyConvex);
        assert!(s.increasing && s.certified);

        let s = spec("pow:r=1@[0,1]").classify().unwrap();
        assert_eq!(s.curvature, Curvature::Affine);

        let s = spec("pow:r=1/3@[0,1]").classify().unwrap();
        assert_eq!(s.curvature, Curvature::StrictlyConcave);
        assert!(s.increasing);

        let s = spec("exp@[-1,1]").classify().unwrap();
        assert_eq!(s.curvature, Curvature::StrictlyConvex);

        let s = spec("affine:m=1,c=0@[0,1]").classify().unwrap();
        assert_eq!(s.curvature, Curvature::Affine);
        assert!(s.increasing && !s.decreasing);

        let s = spec("affine:m=-2,c=0@[0,1]").classify().unwrap();
        assert!(!s.increasing && s.decreasing);

        let s = spec("pwl:(0,0);(1,0);(2,1)").classify().unwrap();
        assert_eq!(s.curvature, Curvature::Convex);
        assert!(s.increasing);

        let s = spec("pwl:(0,1);(1,2);(3,2)").classify().unwrap();
        assert_eq!(s.curvature, Curvature::Concave);
        assert!(s.increasing);

        let s = spec("pwl:(0,0);(1,1);(2,2)").classify().unwrap();
        assert_eq!(s.curvature, Curvature::Affine);

        assert_eq!(
            spec("pwl:(0,0);(1,1);(2,0);(3,5)").classify(),
            Err(Error::UnclassifiablePiecewise)
        );
        assert_eq!(
            spec("neg:pwl:(0,0);(1,1);(2,0);(3,5)").classify(),
            Err(Error::UnclassifiablePiecewise)
        );
    }

    #[test]
    fn negation_flips_shape() {
        let s = spec("neg:pow:r=2@[0,1]").classify().unwrap();
        assert_eq!(s.curvature, Curvature::StrictlyConcave);
        assert!(!s.increasing && s.decreasing);
        // constants stay monotone in both directions
        let s = spec("neg:affine:m=0,c=3@[0,1]").classify().unwrap();
        assert!(s.increasing && s.decreasing);
        // non-monotone inner stays non-monotone
        let s = spec("neg:pwl:(0,1);(1,0);(2,1)").classify().unwrap();
        assert_eq!(s.curvature, Curvature::Concave);
        assert!(!s.increasing && !s.decreasing);
    }

    #[test]
    fn double_negation_evaluates_identically() {
        let s = spec("pwl:(0,1);(1/3,0);(1,1/2);(2,3)");
        let nn = FunctionSpec::negated(FunctionSpec::negated(s.clone()));
        for i in 0..=24 {
            let x = Scalar::Exact(rational(i, 12));
            assert_eq!(nn.evaluate(&x).unwrap(), s.evaluate(&x).unwrap());
            let xf = Scalar::Float(i as f64 / 12.0);
            assert_eq!(nn.evaluate(&xf).unwrap(), s.evaluate(&xf).unwrap());
        }
    }

    #[test]
    fn pwl_hits_breakpoints_exactly_in_float() {
        let s = spec("pwl:(0,1);(1/3,0);(1,1/2);(2,3)");
        assert_eq!(s.evaluate(&Scalar::Float(2.0)).unwrap(), Scalar::Float(3.0));
        assert_eq!(s.evaluate(&Scalar::Float(1.0)).unwrap(), Scalar::Float(0.5));
        assert_eq!(s.evaluate(&Scalar::Float(0.0)).unwrap(), Scalar::Float(1.0));
    }
}
