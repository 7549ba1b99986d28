//! Dirichlet L-values attached to real quadratic characters.
//!
//! For a fundamental discriminant `d ≥ 1` and the Kronecker character
//! χ = (d/·), the value L(2, χ) is evaluated two independent ways:
//!
//! * closed form through the generalized Bernoulli number B_{2,χ}
//!   (`l_value_exact`), and
//! * termwise Hurwitz-zeta summation with a certified Euler–Maclaurin
//!   tail (`l_value_series`).
//!
//! The two must always intersect; tests lean on that as a cross-check.

use crate::arith::interval::{pi, zeta_interval, RigorousInterval};
use crate::arith::numthy::{bernoulli_upto, is_fundamental, kronecker};
use crate::{invalid, rat, Rational, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Real primitive character `(d/·)` of a fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KroneckerCharacter {
    d: i64,
}

impl KroneckerCharacter {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return invalid(format!("{d} is not a fundamental discriminant"));
        }
        Ok(Self { d })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    /// χ(n) ∈ {−1, 0, 1}.
    pub fn eval(&self, n: i64) -> i64 {
        kronecker(self.d, n) as i64
    }
}

/// Generalized Bernoulli number B_{2,χ} for χ = (d/·), d ≥ 1 fundamental.
///
/// B_{2,χ} = d · Σ_{a=1}^{d} χ(a)·B₂(a/d)
///         = Σ_{a=1}^{d} χ(a)·(6a² − 6ad + d²) / (6d).
pub fn b2_chi(d: i64) -> Result<Rational> {
    let chi = KroneckerCharacter::new(d)?;
    if d < 1 {
        return invalid("b2_chi expects a positive fundamental discriminant");
    }
    if d == 1 {
        return Ok(rat(1, 6)); // plain B₂
    }
    let mut num = BigInt::zero();
    for a in 1..=d {
        let c = chi.eval(a);
        if c != 0 {
            num += BigInt::from(c) * BigInt::from(6 * a * a - 6 * a * d + d * d);
        }
    }
    Ok(Rational::new(num, BigInt::from(6 * d)))
}

/// Certified enclosure of L(2, χ_d) = π² · B_{2,χ} / d^{3/2} for fundamental
/// d ≥ 1 (d = 1 gives ζ(2)).
pub fn l_value_exact(d: i64, precision: u32) -> Result<RigorousInterval> {
    if d < 1 {
        return invalid("l_value_exact expects a positive fundamental discriminant");
    }
    if d == 1 {
        return zeta_interval(&rat(2, 1), precision);
    }
    let b = b2_chi(d)?;
    let pi2 = pi(precision).powi(2);
    let d32 = RigorousInterval::point(rat(d, 1).pow(3), precision).sqrt()?;
    Ok(pi2.mul_rat(&b).div(&d32))
}

/// Certified enclosure of ζ(2, x) = Σ_{n≥0} (x+n)^{−2} for rational x > 0,
/// by Euler–Maclaurin with K = 16 initial terms and m = 10 corrections.
fn hurwitz_zeta2(x: &Rational) -> Result<(Rational, Rational)> {
    if !x.is_positive() {
        return invalid("hurwitz_zeta2 requires x > 0");
    }
    const K: i64 = 16;
    const M: usize = 10;
    let bern = bernoulli_upto(2 * M + 2);
    let mut sum = Rational::zero();
    for k in 0..K {
        let t = x + rat(k, 1);
        sum += Rational::one() / (&t * &t);
    }
    let xk = x + rat(K, 1);
    let inv = Rational::one() / &xk;
    let inv2 = &inv * &inv;
    sum += &inv; // (x+K)^{1−s}/(s−1) with s = 2
    sum += &inv2 / rat(2, 1);
    // B_{2r}/(2r)! · (2)_{2r−1} · (x+K)^{−2r−1} = B_{2r} · (x+K)^{−2r−1}
    let mut pw = inv.clone(); // (x+K)^{−(2r−1)}
    for r in 1..=M {
        let _ = r;
        pw = &pw * &inv2;
        sum += &bern[2 * r] * &pw;
    }
    let rem = (&bern[2 * M + 2] * &pw * &inv2).abs() * rat(2, 1);
    Ok((&sum - &rem, sum + rem))
}

/// Independent enclosure of L(2, χ_d) via
/// L(2, χ) = d^{−2} · Σ_{a=1}^{d} χ(a) · ζ(2, a/d).
pub fn l_value_series(d: i64, precision: u32) -> Result<RigorousInterval> {
    if d < 1 {
        return invalid("l_value_series expects a positive fundamental discriminant");
    }
    let chi = KroneckerCharacter::new(d)?;
    // Summing the exact Hurwitz rationals would let the running denominator
    // grow like the lcm of ~φ(d) unrelated term denominators, making each
    // addition progressively slower; compressing every term to a dyadic
    // enclosure keeps additions O(precision), and the outward rounding keeps
    // the result a true enclosure.
    let work = precision + 32;
    let mut sum = RigorousInterval::point(Rational::zero(), work);
    for a in 1..=d {
        let c = chi.eval(a);
        if c == 0 {
            continue;
        }
        let (zl, zh) = hurwitz_zeta2(&rat(a, d))?;
        let term = if c > 0 {
            RigorousInterval::new(zl, zh, work)
        } else {
            RigorousInterval::new(-zh, -zl, work)
        };
        sum = sum.add(&term);
    }
    let scale = Rational::new(BigInt::one(), BigInt::from(d) * BigInt::from(d));
    let scaled = sum.mul_rat(&scale);
    Ok(RigorousInterval::new(scaled.lo().clone(), scaled.hi().clone(), precision))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn bernoulli_chi_anchors() {
        assert_eq!(b2_chi(1).unwrap(), rat(1, 6));
        assert_eq!(b2_chi(5).unwrap(), rat(4, 5));
        assert_eq!(b2_chi(8).unwrap(), rat(2, 1));
        assert_eq!(b2_chi(12).unwrap(), rat(4, 1));
        assert_eq!(b2_chi(24).unwrap(), rat(12, 1));
        assert_eq!(b2_chi(28).unwrap(), rat(16, 1));
    }

    #[test]
    fn rejects_non_fundamental() {
        assert!(b2_chi(9).is_err());
        assert!(b2_chi(20).is_err()); // 20 ≡ 0 mod 4 but 20/4 = 5 ≡ 1 mod 4
        assert!(KroneckerCharacter::new(3).is_err());
    }

    #[test]
    fn closed_form_matches_series() {
        for d in [1i64, 5, 8, 12, 13, 24, 28, 33, 40] {
            let a = l_value_exact(d, 160).unwrap();
            let b = l_value_series(d, 160).unwrap();
            assert!(a.intersects(&b), "L(2,χ_{d}) mismatch");
            let w = b.width().to_f64().unwrap();
            assert!(w < 1e-20, "series width {w} too wide for d={d}");
        }
    }

    #[test]
    fn direct_partial_sums_bracket() {
        // crude third check: truncated Σ χ(n)/n² for d = 8
        let chi = KroneckerCharacter::new(8).unwrap();
        let mut s = 0.0;
        for n in 1..200000i64 {
            s += chi.eval(n) as f64 / (n as f64 * n as f64);
        }
        let v = l_value_exact(8, 128).unwrap();
        let mid = (v.lo().to_f64().unwrap() + v.hi().to_f64().unwrap()) / 2.0;
        assert!((s - mid).abs() < 1e-6);
    }
}
