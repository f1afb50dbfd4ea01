//! Oracles shared by the integration tests. None of them call into the
//! library's arithmetic: each recomputes its quantity from first principles.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Bernoulli numbers `B_0 … B_m` with the `B_1 = +1/2` convention, from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = m + 1`.
pub fn bernoulli_plus(m: u32) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::new();
    for k in 0..=m {
        let partial: BigRational = (0..k)
            .map(|j| BigRational::from_integer(binomial(k + 1, j)) * &b[j as usize])
            .fold(BigRational::zero(), |a, x| a + x);
        let bk = (BigRational::from_integer((k + 1).into()) - partial)
            / BigRational::from_integer((k + 1).into());
        b.push(bk);
    }
    b
}

/// `1^k + … + n^k` by Faulhaber's formula.
pub fn faulhaber(n: u64, k: u32) -> BigInt {
    let b = bernoulli_plus(k);
    let n = BigRational::from_integer(n.into());
    let total = (0..=k)
        .map(|j| {
            BigRational::from_integer(binomial(k + 1, j))
                * &b[j as usize]
                * num_traits::pow(n.clone(), (k + 1 - j) as usize)
        })
        .fold(BigRational::zero(), |a, x| a + x)
        / BigRational::from_integer((k + 1).into());
    assert!(total.is_integer(), "Faulhaber sum must be an integer");
    total.to_integer()
}

/// Right and left sums by naive summation over `f`.
pub fn naive_sums<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: u64) -> (f64, f64) {
    let h = (b - a) / n as f64;
    let right: f64 = (1..=n).map(|i| f(a + i as f64 * h)).sum::<f64>() * h;
    let left: f64 = (0..n).map(|i| f(a + i as f64 * h)).sum::<f64>() * h;
    (right, left)
}

/// Exact right and left sums of a rational function of a rational variable.
pub fn exact_sums<F: Fn(&BigRational) -> BigRational>(
    f: F,
    a: &BigRational,
    b: &BigRational,
    n: u64,
) -> (BigRational, BigRational) {
    let h = (b - a) / BigRational::from_integer(n.into());
    let node = |i: u64| a + &h * BigRational::from_integer(i.into());
    let right = (1..=n)
        .map(|i| f(&node(i)))
        .fold(BigRational::zero(), |s, x| s + x)
        * &h;
    let left = (0..n)
        .map(|i| f(&node(i)))
        .fold(BigRational::zero(), |s, x| s + x)
        * &h;
    (right, left)
}

/// Outcome of sampling `f(λx + (1−λ)y)` against `λf(x) + (1−λ)f(y)` over
/// a grid of triples.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct SampledShape {
    /// Chord never below the function.
    pub convex: bool,
    /// Chord always strictly above the function.
    pub strictly_convex: bool,
    pub concave: bool,
    pub strictly_concave: bool,
}

/// Midpoint-style convexity check over `points` grid nodes of `[a, b]` and
/// `λ ∈ {1/4, 1/2, 3/4}`, with a float tolerance for rounding.
pub fn sampled_shape<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize) -> SampledShape {
    let xs: Vec<f64> = (0..points)
        .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
        .collect();
    let mut s = SampledShape {
        convex: true,
        strictly_convex: true,
        concave: true,
        strictly_concave: true,
    };
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            for lambda in [0.25, 0.5, 0.75] {
                let inside = f(lambda * x + (1.0 - lambda) * y);
                let chord = lambda * f(x) + (1.0 - lambda) * f(y);
                let tol = 1e-12 * chord.abs().max(1.0);
                s.convex &= inside <= chord + tol;
                s.concave &= inside >= chord - tol;
                s.strictly_convex &= inside < chord - tol;
                s.strictly_concave &= inside > chord + tol;
            }
        }
    }
    s
}

/// The Alzer ratio and its refined bounds evaluated in plain f64 from direct sums.
pub fn alzer_f64(n: u64, r: f64) -> (f64, f64, f64, f64) {
    let s = |m: u64| (1..=m).map(|i| (i as f64).powf(r)).sum::<f64>();
    let (sn, sn1) = (s(n), s(n + 1));
    let nf = n as f64;
    let ratio = ((nf + 1.0) * sn / (nf * sn1)).powf(1.0 / r);
    let lower = nf / (nf + 1.0) * (1.0 + 1.0 / (nf * (nf + 2.0))).powf(1.0 / r);
    let upper =
        nf / (nf + 1.0) * (1.0 + ((nf + 1.0).powf(r + 1.0) - sn1) / (nf * nf * sn1)).powf(1.0 / r);
    (nf / (nf + 1.0), lower, ratio, upper)
}

pub fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0)
}
