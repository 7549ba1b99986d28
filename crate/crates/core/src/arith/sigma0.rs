//! Sharp constants for divisor-count bounds σ₀(n) ≤ C·n^α.
//!
//! For fixed rational α > 0 the supremum of σ₀(n)/n^α factors over prime
//! powers: each prime p contributes max_j (j+1)·p^{−αj} independently, and
//! only primes with p^α < 2 can contribute anything above 1. Each per-prime
//! maximizer is located by exact integer comparisons, so the extremal n is
//! found without any floating point; the final constant is then enclosed in
//! an interval.

use crate::arith::interval::RigorousInterval;
use crate::{invalid, Rational, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; (n + 1) as usize];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2u64;
    while p * p <= n {
        if sieve[p as usize] {
            let mut q = p * p;
            while q <= n {
                sieve[q as usize] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| sieve[i as usize]).collect()
}

/// f(j) ≥ f(j') for f(j) = (j+1)·p^{−(a/b)·j}, compared exactly:
/// (j+1)^b · p^{a·j'} ≥ (j'+1)^b · p^{a·j}.
fn per_prime_ge(p: u64, a: u64, b: u64, j: u64, jp: u64) -> bool {
    let lhs = BigInt::from(j + 1).pow(b as u32) * BigInt::from(p).pow((a * jp) as u32);
    let rhs = BigInt::from(jp + 1).pow(b as u32) * BigInt::from(p).pow((a * j) as u32);
    lhs >= rhs
}

/// Certified enclosure of C(α) = sup_{n≥1} σ₀(n)/n^α for rational α > 0.
pub fn sigma0_bound_constant(alpha: &Rational, precision: u32) -> Result<RigorousInterval> {
    if !alpha.is_positive() {
        return invalid("sigma0_bound_constant requires α > 0");
    }
    let a = alpha
        .numer()
        .to_u64()
        .ok_or_else(|| crate::Error::InvalidInput("α numerator too large".into()))?;
    let b = alpha
        .denom()
        .to_u64()
        .ok_or_else(|| crate::Error::InvalidInput("α denominator too large".into()))?;
    // Primes with p^a < 2^b, i.e. p < 2^{b/a}.
    let cutoff = (2f64).powf(b as f64 / a as f64);
    if !(cutoff.is_finite() && cutoff < 5e7) {
        return invalid("α too small: the extremal support is impractically large");
    }
    let mut divisor_count = BigInt::one();
    let mut extremal = BigInt::one();
    for p in primes_upto(cutoff.ceil() as u64 + 1) {
        // skip primes that cannot beat exponent 0
        if !per_prime_ge(p, a, b, 1, 0) && !per_prime_ge_strict(p, a, b) {
            continue;
        }
        let mut j = 0u64;
        while per_prime_ge(p, a, b, j + 1, j) {
            j += 1;
        }
        if j == 0 {
            continue;
        }
        divisor_count *= BigInt::from(j + 1);
        extremal *= BigInt::from(p).pow(j as u32);
    }
    // C = divisor_count · extremal^{−α}
    let n = RigorousInterval::point(Rational::from_integer(extremal), precision);
    let scale = n.pow_rational(&(-alpha.clone()))?;
    Ok(scale.mul_rat(&Rational::from_integer(divisor_count)))
}

/// True if moving from exponent 0 to 1 strictly improves, i.e. 2 > p^{a/b}.
fn per_prime_ge_strict(p: u64, a: u64, b: u64) -> bool {
    BigInt::from(2u32).pow(b as u32) > BigInt::from(p).pow(a as u32)
}
