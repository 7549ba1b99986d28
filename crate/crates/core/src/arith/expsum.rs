//! Upper bounds for weighted exponential sums Σ_{j≥1} j^k · e^{−2πj/N}.
//!
//! Two rigorous upper bounds are taken and the smaller kept:
//!
//! * geometric: k! / (1 − e^{−2π/N})^{k+1};
//! * elementary: k! · N^{k+1} / (δ_N·π)^{k+1}, where δ_N reflects how far
//!   1 − e^{−2π/N} can drop below its small-argument linearization.
//!
//! The exact sum has the closed form q·A_k(q)/(1−q)^{k+1} with q = e^{−2π/N}
//! and A_k the Eulerian polynomial; `exp_sum_exact` evaluates it so tests can
//! certify the bounds from the other side.

use crate::arith::interval::{pi, RigorousInterval};
use crate::{invalid, rat, Rational, Result};
use num_bigint::BigInt;
use num_traits::One;

/// δ_N: 1 when 4 | N, 1/2 when N ≡ 2 (mod 4), 1/4 when N is odd.
pub fn delta_n(n: u64) -> Rational {
    if n % 4 == 0 {
        rat(1, 1)
    } else if n % 2 == 0 {
        rat(1, 2)
    } else {
        rat(1, 4)
    }
}

fn factorial(k: u32) -> Rational {
    let mut f = BigInt::one();
    for i in 2..=k as u64 {
        f *= BigInt::from(i);
    }
    Rational::from_integer(f)
}

fn q_interval(n: u64, precision: u32) -> RigorousInterval {
    pi(precision + 16).mul_rat(&rat(-2, n as i64)).exp()
}

/// Certified upper bound (as an interval around the bound itself) for
/// Σ_{j≥1} j^k e^{−2πj/N}.
pub fn exp_sum_bound(k: u32, n: u64, precision: u32) -> Result<RigorousInterval> {
    if n == 0 {
        return invalid("exp_sum_bound requires N ≥ 1");
    }
    let kf = factorial(k);
    let q = q_interval(n, precision);
    let one = RigorousInterval::point(Rational::one(), precision);
    let geom = one.sub(&q).powi(k + 1);
    let a = RigorousInterval::point(kf.clone(), precision).div(&geom);
    // k!·N^{k+1}/(δ_N π)^{k+1}
    let mut scale = kf;
    let d = delta_n(n);
    for _ in 0..=k {
        scale *= rat(n as i64, 1) / &d;
    }
    let b = RigorousInterval::point(scale, precision).div(&pi(precision).powi(k + 1));
    Ok(a.min_upper(&b))
}

/// Row k of the Euler triangle: ⟨k, m⟩ = (m+1)⟨k−1, m⟩ + (k−m)⟨k−1, m−1⟩,
/// so that Σ_{j≥1} j^k q^j = q·(Σ_m ⟨k,m⟩ q^m)/(1−q)^{k+1}.
fn eulerian_row(k: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for n in 2..=k as usize {
        let mut next = vec![BigInt::from(0u32); n];
        for (m, slot) in next.iter_mut().enumerate() {
            let mut v = BigInt::from(0u32);
            if m < row.len() {
                v += BigInt::from(m as u64 + 1) * &row[m];
            }
            if m >= 1 && m - 1 < row.len() {
                v += BigInt::from((n - m) as u64) * &row[m - 1];
            }
            *slot = v;
        }
        row = next;
    }
    row
}

/// Certified enclosure of the exact sum Σ_{j≥1} j^k e^{−2πj/N}.
pub fn exp_sum_exact(k: u32, n: u64, precision: u32) -> Result<RigorousInterval> {
    if n == 0 {
        return invalid("exp_sum_exact requires N ≥ 1");
    }
    let q = q_interval(n, precision);
    let one = RigorousInterval::point(Rational::one(), precision);
    // q·A_k(q) by Horner over the Eulerian row (coefficients ascending).
    let coeffs = eulerian_row(k);
    let mut acc = RigorousInterval::point(Rational::from_integer(coeffs.last().unwrap().clone()), precision);
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(&q).add_rat(&Rational::from_integer(c.clone()));
    }
    let num = acc.mul(&q);
    Ok(num.div(&one.sub(&q).powi(k + 1)))
}
