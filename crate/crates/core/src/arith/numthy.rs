//! Elementary number theory: factorization by trial division (inputs here
//! are desk-scale), multiplicative functions, congruence-subgroup indices,
//! cusp counts, Kronecker symbols, fundamental discriminants, and exact
//! Bernoulli numbers.

use crate::{invalid, rat, Rational, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Prime factorization of `n ≥ 1` as ascending `(p, exponent)` pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factor requires n >= 1");
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // 6k±1 wheel
    let mut p = 7u64;
    let mut step = 4u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// `p`-adic valuation of `n ≥ 1`.
pub fn v_p(mut n: u64, p: u64) -> u32 {
    assert!(n >= 1 && p >= 2);
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for (p, _) in factor(n) {
        r = r / p * (p - 1);
    }
    r
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let prev = ds.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            ds.extend(prev.iter().map(|d| d * pe));
        }
    }
    ds.sort_unstable();
    ds
}

/// Number of divisors σ₀(n).
pub fn sigma0(n: u64) -> u64 {
    factor(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

/// Sum of divisors σ₁(n).
pub fn sigma1(n: u64) -> u64 {
    let mut s = 1u64;
    for (p, e) in factor(n) {
        let mut pe = 1u64;
        let mut geo = 1u64;
        for _ in 0..e {
            pe *= p;
            geo += pe;
        }
        s *= geo;
    }
    s
}

/// Smallest-prime-factor sieve for 0..=n (index 0 and 1 map to 0).
pub fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// lcm of a nonempty slice; checked against overflow.
pub fn lcm_all(v: &[u64]) -> u64 {
    assert!(!v.is_empty());
    v.iter().fold(1u64, |acc, &x| {
        let g = num_integer::gcd(acc, x);
        acc.checked_mul(x / g).expect("lcm overflow")
    })
}

/// Kronecker symbol (a/n), extending the Jacobi symbol to all integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut n = n;
    let mut t = 1i32;
    let mut v = 0u32;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => t = -t,
            _ => return 0, // even a with even n was caught above; a ≡ 0,2,4,6 here means a even
        }
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            t = -t;
        }
    }
    // Jacobi symbol for odd n > 0.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol (a/p) for odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    kronecker(a, p as i64)
}

/// Smallest quadratic nonresidue mod an odd prime.
pub fn nonresidue(p: u64) -> u64 {
    (2..p).find(|&u| legendre(u as i64, p) == -1).expect("odd prime has a nonresidue")
}

/// Discriminant of the quadratic field ℚ(√d), d ≠ 0 and not a square times 1
/// (d = square yields 1, the rational field, by convention here).
pub fn fundamental_discriminant(d: i64) -> Result<i64> {
    if d == 0 {
        return invalid("fundamental_discriminant: d must be nonzero");
    }
    // squarefree kernel with sign
    let mut s: i64 = if d < 0 { -1 } else { 1 };
    for (p, e) in factor(d.unsigned_abs()) {
        if e % 2 == 1 {
            s *= p as i64;
        }
    }
    Ok(if s.rem_euclid(4) == 1 { s } else { 4 * s })
}

/// Whether `d` is a fundamental discriminant (including 1).
pub fn is_fundamental(d: i64) -> bool {
    d != 0 && fundamental_discriminant(d).map_or(false, |f| f == d)
}

/// Index of Γ₀(N) in SL₂(ℤ): N·∏_{p|N}(1 + 1/p).
pub fn index_gamma0(n: u64) -> u64 {
    let mut r = n;
    for p in prime_divisors(n) {
        r = r / p * (p + 1);
    }
    r
}

/// Index of the principal congruence subgroup Γ(N): N³·∏_{p|N}(1 − p⁻²).
pub fn index_gamma(n: u64) -> u64 {
    let mut r = n.checked_pow(3).expect("index_gamma overflow");
    for p in prime_divisors(n) {
        r = r / (p * p) * (p * p - 1);
    }
    r
}

/// Index of Γ₀(N) ∩ Γ₁(L) for L | N: N·φ(L)·∏_{p|N}(1 + 1/p).
pub fn index_gamma01(n: u64, l: u64) -> Result<u64> {
    if l == 0 || n % l != 0 {
        return invalid(format!("index_gamma01: {l} does not divide {n}"));
    }
    Ok(index_gamma0(n)
        .checked_mul(euler_phi(l))
        .expect("index_gamma01 overflow"))
}

/// Number of cusps of Γ(N) lying over the divisor class δ | N:
/// φ(N/δ)·φ(δ)·N/δ.
pub fn cusp_count(n: u64, delta: u64) -> Result<u64> {
    if delta == 0 || n % delta != 0 {
        return invalid(format!("cusp_count: {delta} does not divide {n}"));
    }
    Ok(euler_phi(n / delta) * euler_phi(delta) * (n / delta))
}

/// Bernoulli numbers B₀..B_n (B₁ = −1/2), exact.
pub fn bernoulli_upto(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            acc += bj * Rational::from_integer(binom.clone());
            binom = &binom * BigInt::from((m + 1 - j) as u64) / BigInt::from((j + 1) as u64);
        }
        b.push(-acc / rat((m + 1) as i64, 1));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_functions() {
        assert_eq!(euler_phi(10), 4);
        assert_eq!(sigma0(12), 6);
        assert_eq!(lcm_all(&[1, 2, 4, 131]), 524);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(sigma1(6), 12);
        assert_eq!(factor(209600), vec![(2, 6), (5, 2), (131, 1)]);
    }

    #[test]
    fn subgroup_indices() {
        assert_eq!(index_gamma0(1), 1);
        assert_eq!(index_gamma(2), 6); // |SL₂(𝔽₂)|
        let n = 400 * 524;
        let expected: u64 = {
            // N ∏(1+1/p) over p ∈ {2,5,131}, times φ(10) = 4
            let mut r = n;
            for p in [2, 5, 131] {
                r = r / p * (p + 1);
            }
            r * 4
        };
        assert_eq!(index_gamma01(n, 10).unwrap(), expected);
        assert!(index_gamma01(12, 5).is_err());
    }

    #[test]
    fn cusp_counts() {
        assert_eq!(cusp_count(4, 2).unwrap(), 2);
        for n in [1u64, 5, 12, 30] {
            assert_eq!(cusp_count(n, n).unwrap(), euler_phi(n));
        }
        assert!(cusp_count(10, 3).is_err());
    }

    #[test]
    fn kronecker_values() {
        // quadratic reciprocity spot checks
        assert_eq!(kronecker(12, 3), 0);
        assert_eq!(kronecker(13, 3), 1);
        assert_eq!(kronecker(24, 5), 1);
        assert_eq!(kronecker(5, 3), -1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(1, 7), 1);
        // multiplicativity in the top argument
        for d in [5i64, 8, 12, 13, 24, 28] {
            for (m, n) in [(3i64, 5i64), (7, 9), (5, 11)] {
                assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
            }
        }
        // χ_D mod D periodicity for fundamental D
        for d in [5i64, 8, 12, 13, 17, 21, 24] {
            for a in 1..40i64 {
                assert_eq!(kronecker(d, a), kronecker(d, a + d));
            }
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(fundamental_discriminant(-48).unwrap(), -3);
        assert_eq!(fundamental_discriminant(-1).unwrap(), -4);
        assert_eq!(fundamental_discriminant(-5).unwrap(), -20);
        assert_eq!(fundamental_discriminant(3).unwrap(), 12);
        assert_eq!(fundamental_discriminant(864).unwrap(), 24); // 864 = 2⁵·3³
        assert_eq!(fundamental_discriminant(9).unwrap(), 1);
        assert!(is_fundamental(1));
        assert!(is_fundamental(-4));
        assert!(is_fundamental(12));
        assert!(!is_fundamental(3));
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli_upto(12);
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
    }
}
