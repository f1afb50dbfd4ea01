mod common;

use common::{alzer_f64, close, exact_sums, faulhaber, naive_sums, q, sampled_shape};
use convex_sums::alzer_power_sums::{
    cross_check_with_theorem, exact_power_sum, power_sum, refined_bounds, Direction,
};
use convex_sums::convexity_bounds::{bound_a_prev, bound_b_prev, cap_a, cap_b, endpoint_range};
use convex_sums::riemann_sums::compute_sums_range;
use convex_sums::verify::corpus;
use convex_sums::{
    compute_sums, parse_spec, Curvature, Exponent, FunctionSpec, NumericMode, Scalar,
};
use num_bigint::BigInt;
use num_rational::BigRational;

fn exact(s: &Scalar) -> &BigRational {
    s.as_exact().expect("exact value")
}

#[test]
fn bernoulli_numbers() {
    let b = common::bernoulli_plus(6);
    let expected = [
        q(1, 1),
        q(1, 2),
        q(1, 6),
        q(0, 1),
        q(-1, 30),
        q(0, 1),
        q(1, 42),
    ];
    assert_eq!(b, expected);
}

#[test]
fn power_sums_match_faulhaber() {
    let mode = NumericMode::exact();
    for k in 1..=6u32 {
        let r = Exponent::integer(k).unwrap();
        for n in 1..=200u64 {
            let f = faulhaber(n, k);
            assert_eq!(exact_power_sum(n, k), f, "n={n} k={k}");
            let s = power_sum(n, &r, &mode).unwrap();
            assert_eq!(exact(&s.value), &BigRational::from_integer(f));
        }
    }
}

#[test]
fn right_sums_of_powers_match_faulhaber() {
    let mode = NumericMode::exact();
    for k in 1..=6u32 {
        let spec = parse_spec(&format!("pow:r={k}@[0,1]")).unwrap();
        for sums in compute_sums_range(&spec, 1..=200, &mode).unwrap() {
            let n = sums.n();
            let expected = BigRational::new(
                faulhaber(n, k),
                num_traits::pow(BigInt::from(n), k as usize + 1),
            );
            assert_eq!(exact(sums.right()), &expected, "n={n} k={k}");
        }
    }
}

#[test]
fn closed_forms() {
    let mode = NumericMode::exact();
    let square = parse_spec("pow:r=2@[0,1]").unwrap();
    let line = parse_spec("affine:m=1,c=0@[0,1]").unwrap();
    for n in 1..=60i64 {
        let a = compute_sums(&square, n as u64, &mode).unwrap();
        assert_eq!(exact(a.right()), &q((n + 1) * (2 * n + 1), 6 * n * n));
        let l = compute_sums(&line, n as u64, &mode).unwrap();
        assert_eq!(exact(l.right()), &q(n + 1, 2 * n));
        assert_eq!(exact(l.left()), &q(n - 1, 2 * n));
    }
}

fn pwl_oracle(points: &[(BigRational, BigRational)], x: &BigRational) -> BigRational {
    let i = points
        .windows(2)
        .position(|w| x <= &w[1].0)
        .expect("x in span");
    let ((x0, y0), (x1, y1)) = (&points[i], &points[i + 1]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

#[test]
fn piecewise_linear_sums_match_direct_fractions() {
    let mode = NumericMode::exact();
    let cases = [
        (
            "pwl:(0,0);(1,0);(2,1)",
            vec![(q(0, 1), q(0, 1)), (q(1, 1), q(0, 1)), (q(2, 1), q(1, 1))],
        ),
        (
            "pwl:(0,1);(1/3,0);(1,1/2);(2,3)",
            vec![
                (q(0, 1), q(1, 1)),
                (q(1, 3), q(0, 1)),
                (q(1, 1), q(1, 2)),
                (q(2, 1), q(3, 1)),
            ],
        ),
        (
            "pwl:(-1,2);(1/2,-1/4);(3,7/5)",
            vec![(q(-1, 1), q(2, 1)), (q(1, 2), q(-1, 4)), (q(3, 1), q(7, 5))],
        ),
    ];
    for (text, points) in cases {
        let spec = parse_spec(text).unwrap();
        let (a, b) = (&points[0].0, &points[points.len() - 1].0);
        for n in [1u64, 2, 3, 5, 6, 7, 12, 30, 99] {
            let sums = compute_sums(&spec, n, &mode).unwrap();
            let (right, left) = exact_sums(|x| pwl_oracle(&points, x), a, b, n);
            assert_eq!(exact(sums.right()), &right, "{text} n={n}");
            assert_eq!(exact(sums.left()), &left, "{text} n={n}");
        }
    }
}

#[test]
fn exp_sums_match_naive_float_summation() {
    let spec = parse_spec("exp@[0,1]").unwrap();
    let mode = NumericMode::float();
    for sums in compute_sums_range(&spec, 1..=500, &mode).unwrap() {
        let (right, left) = naive_sums(f64::exp, 0.0, 1.0, sums.n());
        assert!(close(sums.right().to_f64(), right, 1e-12), "n={}", sums.n());
        assert!(close(sums.left().to_f64(), left, 1e-12), "n={}", sums.n());
    }
    let range = endpoint_range(&spec, &mode).unwrap();
    assert_eq!(range.lower.to_f64(), 1.0);
    assert_eq!(range.upper.to_f64(), std::f64::consts::E);
    let three = compute_sums(&spec, 3, &mode).unwrap();
    let (right, left) = naive_sums(f64::exp, 0.0, 1.0, 3);
    assert!(
        close(three.right().to_f64(), right, 1e-15) && close(three.left().to_f64(), left, 1e-15)
    );
    assert!(
        range.contains(three.right(), &mode).holds() && range.contains(three.left(), &mode).holds()
    );
}

#[test]
fn float_sums_agree_with_exact_sums() {
    for spec in corpus().into_iter().filter(FunctionSpec::supports_exact) {
        let e = compute_sums_range(&spec, 1..=300, &NumericMode::exact()).unwrap();
        let f = compute_sums_range(&spec, 1..=300, &NumericMode::float()).unwrap();
        for (x, y) in e.iter().zip(&f) {
            assert!(
                close(x.right().to_f64(), y.right().to_f64(), 1e-12),
                "{spec} n={}",
                x.n()
            );
            assert!(
                close(x.left().to_f64(), y.left().to_f64(), 1e-12),
                "{spec} n={}",
                x.n()
            );
        }
    }
}

fn float_eval(spec: &FunctionSpec) -> impl Fn(f64) -> f64 + '_ {
    move |x| spec.evaluate(&Scalar::Float(x)).unwrap().to_f64()
}

#[test]
fn classification_agrees_with_sampled_convexity() {
    let mut specs = corpus();
    for extra in [
        "pow:r=1.5@[0,2]",
        "pow:r=1/3@[1,4]",
        "pow:r=7@[1/2,1]",
        "exp@[-2,3]",
        "affine:m=-2,c=1@[0,5]",
        "pwl:(0,0);(1,2);(2,3);(4,3)",
        "pwl:(0,0);(1,1);(2,2)",
        "neg:neg:pow:r=3@[0,1]",
    ] {
        specs.push(parse_spec(extra).unwrap());
    }
    for spec in &specs {
        let shape = spec.classify().unwrap();
        let (a, b) = (spec.domain().a(), spec.domain().b());
        let sampled = sampled_shape(float_eval(spec), rational_f64(a), rational_f64(b), 41);
        match shape.curvature {
            Curvature::StrictlyConvex => assert!(sampled.strictly_convex, "{spec}"),
            Curvature::StrictlyConcave => assert!(sampled.strictly_concave, "{spec}"),
            Curvature::Convex => assert!(sampled.convex && !sampled.concave, "{spec}"),
            Curvature::Concave => assert!(sampled.concave && !sampled.convex, "{spec}"),
            Curvature::Affine => assert!(sampled.convex && sampled.concave, "{spec}"),
        }
        assert!(shape.certified);
    }
    let paper = parse_spec("pow:r=2@[0,1]").unwrap().classify().unwrap();
    assert_eq!(paper.curvature, Curvature::StrictlyConvex);
    assert!(paper.increasing && paper.certified);
}

fn rational_f64(x: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap()
}

#[test]
fn recursive_bounds_match_hand_formulas() {
    let mode = NumericMode::exact();
    let spec = parse_spec("pow:r=3@[1/2,2]").unwrap();
    let f = |x: &BigRational| x * x * x;
    let (a, b) = (q(1, 2), q(2, 1));
    let w = &b - &a;
    for n in 1..=25u64 {
        let next = compute_sums(&spec, n + 1, &mode).unwrap();
        let (an1, bn1) = exact_sums(f, &a, &b, n + 1);
        let nn = BigRational::from_integer(n.into());
        let near = &nn * (&nn + q(2, 1));
        let sq = &nn * &nn;
        let a_bound = bound_a_prev(&spec, n, &next).unwrap();
        assert_eq!(exact(&a_bound.lower), &(&an1 + (&an1 - &w * f(&a)) / &near));
        assert_eq!(exact(&a_bound.upper), &(&an1 + (&w * f(&b) - &an1) / &sq));
        let b_bound = bound_b_prev(&spec, n, &next).unwrap();
        assert_eq!(exact(&b_bound.lower), &(&bn1 + (&bn1 - &w * f(&b)) / &near));
        assert_eq!(exact(&b_bound.upper), &(&bn1 + (&w * f(&a) - &bn1) / &sq));
        let two = q(2, 1);
        let denom = &two * (&nn + q(1, 1));
        let cap_right = &w * (&nn * f(&a) + (&nn + &two) * f(&b)) / &denom;
        let cap_left = &w * ((&nn + &two) * f(&a) + &nn * f(&b)) / &denom;
        assert_eq!(exact(&cap_a(&spec, n, &mode).unwrap()), &cap_right);
        assert_eq!(exact(&cap_b(&spec, n, &mode).unwrap()), &cap_left);
    }
}

#[test]
fn alzer_values_match_direct_float_evaluation() {
    for r in [0.1, 0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0] {
        let exponent = Exponent::parse(&r.to_string()).unwrap();
        for n in [1u64, 2, 3, 7, 50, 333] {
            let report = refined_bounds(n, &exponent, &NumericMode::float()).unwrap();
            let (classical, lower, ratio, upper) = alzer_f64(n, r);
            assert!(close(report.classical_lower.approx(), classical, 1e-12));
            assert!(
                close(report.refined_lower.approx(), lower, 1e-10),
                "r={r} n={n}"
            );
            assert!(close(report.ratio.approx(), ratio, 1e-10), "r={r} n={n}");
            assert!(
                close(report.refined_upper.approx(), upper, 1e-10),
                "r={r} n={n}"
            );
            let expected = if r >= 1.0 {
                Direction::Refine
            } else {
                Direction::Reverse
            };
            assert_eq!(report.direction, expected);
        }
    }
}

#[test]
fn alzer_examples() {
    let two = Exponent::integer(2).unwrap();
    let report = refined_bounds(2, &two, &NumericMode::exact()).unwrap();
    assert!(close(
        report.refined_lower.approx(),
        std::f64::consts::FRAC_1_SQRT_2,
        1e-12
    ));
    assert!(close(report.ratio.approx(), 0.731925, 1e-6));
    assert!(close(report.refined_upper.approx(), 0.740013, 1e-6));
    assert_eq!(
        report.refined_upper.transposed().unwrap(),
        (2, q(4, 9) * q(69, 56))
    );
    assert_eq!(report.ratio.transposed().unwrap(), (2, q(15, 28)));

    // Reference values computed with 50-digit arithmetic.
    let half = Exponent::parse("1/2").unwrap();
    let report = refined_bounds(2, &half, &NumericMode::float()).unwrap();
    assert_eq!(report.direction, Direction::Reverse);
    assert!(close(report.refined_upper.approx(), 0.7537425354, 1e-9));
    assert!(close(report.ratio.approx(), 0.7628162031, 1e-9));
    assert!(close(report.refined_lower.approx(), 0.84375, 1e-15));
}

#[test]
fn cross_check_examples() {
    for (n, k) in [(1u64, 1u32), (1, 4), (2, 2), (10, 3), (40, 6)] {
        let d = cross_check_with_theorem(n, &Exponent::integer(k).unwrap()).unwrap();
        assert!(d.is_exact() && d.is_zero(), "n={n} k={k}: {d}");
    }
}
