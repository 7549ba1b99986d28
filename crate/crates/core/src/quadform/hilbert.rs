//! Hilbert symbols over the p-adic fields and the local isotropy test for
//! quaternary diagonal forms.

use crate::arith::{legendre, prime_divisors};
use crate::{invalid, Result};

/// p-adic valuation and unit part of a nonzero signed integer.
fn split(mut a: i64, p: u64) -> (u32, i64) {
    debug_assert!(a != 0);
    let p = p as i64;
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    (v, a)
}

/// `(u - 1) / 2 mod 2` for odd `u` (nontrivial iff `u = 3 mod 4`).
fn eps2(u: i64) -> u32 {
    (((u - 1) / 2).rem_euclid(2)) as u32
}

/// `(u^2 - 1) / 8 mod 2` for odd `u` (nontrivial iff `u = +-3 mod 8`).
fn omega2(u: i64) -> u32 {
    (((u * u - 1) / 8).rem_euclid(2)) as u32
}

/// Hilbert symbol `(a, b)_p` for nonzero integers at a prime `p`.
///
/// Returns `+1` when `a x^2 + b y^2 = z^2` has a nontrivial solution over
/// the p-adic numbers and `-1` otherwise.
pub fn hilbert_symbol(a: i64, b: i64, p: u64) -> Result<i32> {
    if a == 0 || b == 0 {
        return invalid("Hilbert symbol requires nonzero arguments");
    }
    if p < 2 {
        return invalid("Hilbert symbol requires a prime");
    }
    let (va, u) = split(a, p);
    let (vb, w) = split(b, p);
    if p == 2 {
        let e = eps2(u) * eps2(w) + va * omega2(w) + vb * omega2(u);
        return Ok(if e % 2 == 1 { -1 } else { 1 });
    }
    let mut s = 1i32;
    if va % 2 == 1 && vb % 2 == 1 && p % 4 == 3 {
        s = -s;
    }
    if vb % 2 == 1 && legendre(u, p) == -1 {
        s = -s;
    }
    if va % 2 == 1 && legendre(w, p) == -1 {
        s = -s;
    }
    Ok(s)
}

/// Hilbert symbol at the real place: `-1` iff both arguments are negative.
pub fn hilbert_symbol_real(a: i64, b: i64) -> Result<i32> {
    if a == 0 || b == 0 {
        return invalid("Hilbert symbol requires nonzero arguments");
    }
    Ok(if a < 0 && b < 0 { -1 } else { 1 })
}

/// Whether the quaternary diagonal form `sum a_j x_j^2` is anisotropic over
/// the p-adic numbers, i.e. represents zero only trivially.
///
/// A quaternary form is anisotropic at `p` exactly when its discriminant is
/// a p-adic square and its Hasse invariant `prod_{i<j} (a_i, a_j)_p` equals
/// `-(-1, -1)_p`.
pub fn is_anisotropic(coeffs: &[u64], p: u64) -> Result<bool> {
    if coeffs.len() != 4 {
        return invalid("local isotropy test is implemented for rank 4");
    }
    if coeffs.contains(&0) {
        return invalid("coefficients must be nonzero");
    }
    let a: Vec<i64> = coeffs
        .iter()
        .map(|&c| i64::try_from(c).map_err(|_| crate::Error::CountOverflow(c)))
        .collect::<Result<_>>()?;
    let mut d: i64 = 1;
    for &ai in &a {
        d = d
            .checked_mul(ai)
            .ok_or(crate::Error::CountOverflow(u64::MAX))?;
    }
    if !is_padic_square(d, p) {
        return Ok(false);
    }
    let mut hasse = 1i32;
    for i in 0..4 {
        for j in (i + 1)..4 {
            hasse *= hilbert_symbol(a[i], a[j], p)?;
        }
    }
    Ok(hasse == -hilbert_symbol(-1, -1, p)?)
}

/// Whether a nonzero integer is a square in the p-adic numbers.
fn is_padic_square(a: i64, p: u64) -> bool {
    debug_assert!(a != 0);
    let (v, u) = split(a, p);
    if v % 2 == 1 {
        return false;
    }
    if p == 2 {
        u.rem_euclid(8) == 1
    } else {
        legendre(u, p) == 1
    }
}

/// The primes at which the form could fail to be isotropic: odd divisors of
/// the coefficients together with 2.
pub fn candidate_anisotropic_primes(coeffs: &[u64]) -> Vec<u64> {
    let mut ps = vec![2];
    for &a in coeffs {
        for q in prime_divisors(a) {
            if !ps.contains(&q) {
                ps.push(q);
            }
        }
    }
    ps.sort_unstable();
    ps
}

/// Exhaustive search for a primitive zero of `sum a_j x_j^2 mod p^k`
/// (test oracle; cost `p^{4k}`).
#[cfg(test)]
fn has_primitive_zero_mod(coeffs: &[u64; 4], p: u64, k: u32) -> bool {
    let pk = p.pow(k);
    let q = |x: u64, a: u64| (a % pk) * (x * x % pk) % pk;
    for x0 in 0..pk {
        for x1 in 0..pk {
            let s01 = (q(x0, coeffs[0]) + q(x1, coeffs[1])) % pk;
            for x2 in 0..pk {
                let s012 = (s01 + q(x2, coeffs[2])) % pk;
                for x3 in 0..pk {
                    if (s012 + q(x3, coeffs[3])) % pk == 0
                        && (x0 % p != 0 || x1 % p != 0 || x2 % p != 0 || x3 % p != 0)
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}
