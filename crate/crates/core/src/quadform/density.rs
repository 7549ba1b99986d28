//! Local representation densities of shifted diagonal forms.
//!
//! Two independent evaluators are provided:
//!
//! * [`local_density`] counts solutions of `Q(x) = n (mod p^k)` under the
//!   coordinate congruence directly, at increasing depth `k` until the
//!   normalized count stabilizes;
//! * [`local_density_closed`] evaluates the same quantity at odd primes away
//!   from the shift modulus through quadratic Gauss sums, in exact rational
//!   arithmetic inside the ring `Q(sqrt(p), i)`.
//!
//! Having both lets the tests confront the closed form with brute counting
//! on small moduli, while the fast path serves the large sweeps.

use super::ShiftedDiagonalForm;
use crate::arith::{factor, kronecker, legendre, v_p};
use crate::{invalid, Error, Rational, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Largest modulus `p^k` the direct counter is willing to enumerate.
pub const MODULUS_CAP: u128 = 100_000_000;

/// An exact local density value at a prime.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDensity {
    /// The prime.
    pub p: u64,
    /// Solutions of `Q(x) = n (mod p^k)` under the coordinate congruence,
    /// divided by `p^{k (l - 1)}`, at any depth `k >= depth` (stable).
    pub value: Rational,
    /// Depth at which stability was verified.
    pub depth: u32,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && factor(p) == vec![(p, 1)]
}

fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

pub(crate) fn v_p_u128(mut n: u128, p: u64) -> u32 {
    debug_assert!(n != 0);
    let p = u128::from(p);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Element `x + y sqrt(p) + u i + v i sqrt(p)` of `Q(sqrt(p), i)`, the ring
/// where quadratic Gauss sums modulo powers of `p` live.
#[derive(Debug, Clone, PartialEq)]
struct QuadVal {
    x: Rational,
    y: Rational,
    u: Rational,
    v: Rational,
}

impl QuadVal {
    fn zero() -> Self {
        Self {
            x: Rational::zero(),
            y: Rational::zero(),
            u: Rational::zero(),
            v: Rational::zero(),
        }
    }

    fn from_int(b: BigInt) -> Self {
        Self {
            x: Rational::from_integer(b),
            ..Self::zero()
        }
    }

    fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    /// `scale * sqrt(p)`
    fn sqrt_p(scale: BigInt) -> Self {
        Self {
            y: Rational::from_integer(scale),
            ..Self::zero()
        }
    }

    /// `scale * i * sqrt(p)`
    fn i_sqrt_p(scale: BigInt) -> Self {
        Self {
            v: Rational::from_integer(scale),
            ..Self::zero()
        }
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.u.is_zero() && self.v.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
            u: &self.u + &o.u,
            v: &self.v + &o.v,
        }
    }

    fn negate(&self) -> Self {
        Self {
            x: -self.x.clone(),
            y: -self.y.clone(),
            u: -self.u.clone(),
            v: -self.v.clone(),
        }
    }

    /// Multiplication by `i`: rotates `(x, y, u, v)` to `(-u, -v, x, y)`.
    fn mul_i(&self) -> Self {
        Self {
            x: -self.u.clone(),
            y: -self.v.clone(),
            u: self.x.clone(),
            v: self.y.clone(),
        }
    }

    fn mul(&self, o: &Self, p: u64) -> Self {
        let p = Rational::from_integer(BigInt::from(p));
        let x = &self.x * &o.x + &p * (&self.y * &o.y)
            - (&self.u * &o.u + &p * (&self.v * &o.v));
        let y = &self.x * &o.y + &self.y * &o.x - (&self.u * &o.v + &self.v * &o.u);
        let u = &self.x * &o.u + &self.u * &o.x + &p * (&self.y * &o.v + &self.v * &o.y);
        let v = &self.x * &o.v + &self.v * &o.x + &self.y * &o.u + &self.u * &o.y;
        Self { x, y, u, v }
    }

    fn scale_int(&self, c: &BigInt) -> Self {
        let c = Rational::from_integer(c.clone());
        Self {
            x: &self.x * &c,
            y: &self.y * &c,
            u: &self.u * &c,
            v: &self.v * &c,
        }
    }

    fn scale_div(&self, d: &BigInt) -> Self {
        let inv = Rational::new(BigInt::one(), d.clone());
        Self {
            x: &self.x * &inv,
            y: &self.y * &inv,
            u: &self.u * &inv,
            v: &self.v * &inv,
        }
    }
}

/// Number of solutions of `sum_j a_j x_j^2 = n (mod p^k)` over `(Z/p^k)^l`,
/// evaluated through quadratic Gauss sums (`p` odd, `n >= 1`).
///
/// The Gauss sums over units of each level `p^j` are multiplied out in
/// `Q(sqrt(p), i)`; the imaginary and irrational parts must cancel in the
/// final total, which the function asserts.
pub(crate) fn count_shell(coeffs: &[u64], p: u64, n: u64, k: u32) -> Result<BigInt> {
    if p < 3 || !is_prime(p) {
        return invalid("Gauss-sum counting requires an odd prime");
    }
    if n == 0 || k == 0 || coeffs.is_empty() {
        return invalid("Gauss-sum counting requires n >= 1 and k >= 1");
    }
    let l = coeffs.len() as u32;
    let rho = v_p(n, p);
    let npr = n / p.pow(rho);
    let mut alphas = Vec::with_capacity(coeffs.len());
    let mut units = Vec::with_capacity(coeffs.len());
    for &a in coeffs {
        if a == 0 {
            return invalid("coefficients must be positive");
        }
        let al = v_p(a, p);
        let unit = a / p.pow(al);
        let unit = i64::try_from(unit).map_err(|_| Error::CountOverflow(unit))?;
        alphas.push(al);
        units.push(unit);
    }

    let mut total = QuadVal::from_int(big_pow(p, k * (l - 1)));
    for j in 1..=k {
        let mut sm: u32 = 0;
        let mut s = false;
        let mut e = QuadVal::one();
        for i in 0..coeffs.len() {
            if j > alphas[i] {
                let m = j - alphas[i];
                sm += m;
                if m % 2 == 1 {
                    s = !s;
                    if legendre(units[i], p) == -1 {
                        e = e.negate();
                    }
                }
                // normalized Gauss sum factor: 1 when p^m = 1 (mod 4), else i
                if p % 4 == 3 && m % 2 == 1 {
                    e = e.mul_i();
                }
            }
        }
        let unit_sum = if !s {
            if rho >= j {
                QuadVal::from_int(big_pow(p, j - 1) * (p - 1))
            } else if rho + 1 == j {
                QuadVal::from_int(-big_pow(p, j - 1))
            } else {
                QuadVal::zero()
            }
        } else if rho + 1 == j {
            let leg = legendre(-i64::try_from(npr % p).expect("residue fits"), p);
            let scale = big_pow(p, j - 1) * leg;
            if p % 4 == 1 {
                QuadVal::sqrt_p(scale)
            } else {
                QuadVal::i_sqrt_p(scale)
            }
        } else {
            QuadVal::zero()
        };
        if unit_sum.is_zero() {
            continue;
        }
        let base = big_pow(p, k * l - sm + sm / 2);
        let mut term = e.mul(&unit_sum, p);
        term = if sm % 2 == 0 {
            term.scale_int(&base)
        } else {
            term.mul(&QuadVal::sqrt_p(base), p)
        };
        term = term.scale_div(&big_pow(p, k));
        total = total.add(&term);
    }

    if !total.y.is_zero() || !total.u.is_zero() || !total.v.is_zero() {
        return invalid(format!(
            "Gauss-sum total has a non-rational part for coeffs {coeffs:?}, p={p}, n={n}, k={k}"
        ));
    }
    if !total.x.is_integer() || total.x.is_negative() {
        return invalid(format!(
            "Gauss-sum total is not a nonnegative integer for coeffs {coeffs:?}, p={p}, n={n}, k={k}"
        ));
    }
    Ok(total.x.to_integer())
}

/// Closed-form local density at an odd prime coprime to the shift modulus.
///
/// For such primes the coordinate congruence is invisible modulo powers of
/// `p`, so the density agrees with the unshifted one.  The count is taken at
/// depth `k0 = v_p(n) + max_j v_p(a_j) + 3` and at `k0 + 1`; the two
/// normalized values must agree, otherwise [`Error::NotStabilized`] is
/// returned.
pub fn local_density_closed(form: &ShiftedDiagonalForm, p: u64, n: u64) -> Result<LocalDensity> {
    if form.modulus() % p == 0 {
        return invalid("closed-form density requires p coprime to the shift modulus");
    }
    if n == 0 {
        return invalid("local density requires n >= 1");
    }
    let l = form.rank() as u32;
    if l < 2 {
        return invalid("local density requires rank >= 2");
    }
    let rho = v_p(n, p);
    let amax = form.coeffs().iter().map(|&a| v_p(a, p)).max().unwrap_or(0);
    let k0 = rho + amax + 3;
    let count0 = count_shell(form.coeffs(), p, n, k0)?;
    let count1 = count_shell(form.coeffs(), p, n, k0 + 1)?;
    let beta0 = Rational::new(count0, big_pow(p, k0 * (l - 1)));
    let beta1 = Rational::new(count1, big_pow(p, (k0 + 1) * (l - 1)));
    if beta0 != beta1 {
        return Err(Error::NotStabilized {
            p,
            n,
            depth: k0 + 1,
        });
    }
    Ok(LocalDensity {
        p,
        value: beta0,
        depth: k0 + 1,
    })
}

/// Distribution of `a x^2 mod p^k` as `x` runs over the residues modulo
/// `p^k` that satisfy `x = r (mod p^{min(k, v_m)})`.
fn value_distribution(a: u64, p: u64, k: u32, r: u64, v_m: u32) -> Vec<u64> {
    let pk = p.pow(k);
    let step = p.pow(v_m.min(k));
    let mut dist = vec![0u64; pk as usize];
    let a_red = u128::from(a % pk);
    let pk128 = u128::from(pk);
    let mut x = r % step;
    while x < pk {
        let sq = u128::from(x) * u128::from(x) % pk128;
        let t = (a_red * sq % pk128) as usize;
        dist[t] += 1;
        x += step;
    }
    dist
}

fn convolve(d1: &[u64], d2: &[u64]) -> Result<Vec<u64>> {
    let n = d1.len();
    let mut out = vec![0u64; n];
    for (t1, &c1) in d1.iter().enumerate() {
        if c1 == 0 {
            continue;
        }
        for (t2, &c2) in d2.iter().enumerate() {
            if c2 == 0 {
                continue;
            }
            let t = if t1 + t2 >= n { t1 + t2 - n } else { t1 + t2 };
            let prod = c1.checked_mul(c2).ok_or(Error::CountOverflow(c1))?;
            out[t] = out[t]
                .checked_add(prod)
                .ok_or(Error::CountOverflow(out[t]))?;
        }
    }
    Ok(out)
}

/// Precomputed value distributions for counting solutions of
/// `Q(x) = n (mod p^k)` under the coordinate congruence.
///
/// The distributions do not depend on `n`, so a table pair can be reused
/// across many target values; each query is a single cyclic dot product.
pub(crate) struct DensityTables {
    p: u64,
    k: u32,
    pk: u64,
    rank: u32,
    front: Vec<u64>,
    back: Vec<u64>,
}

impl DensityTables {
    pub(crate) fn build(form: &ShiftedDiagonalForm, p: u64, k: u32) -> Result<Self> {
        let cap = u128::from(p).checked_pow(k).ok_or(Error::ModulusCap(u128::MAX))?;
        if cap > MODULUS_CAP {
            return Err(Error::ModulusCap(cap));
        }
        let v_m = v_p(form.modulus(), p);
        let r = form.residue() % p.pow(v_m.min(k));
        let dists: Vec<Vec<u64>> = form
            .coeffs()
            .iter()
            .map(|&a| value_distribution(a, p, k, r, v_m))
            .collect();
        let pk = p.pow(k);
        let (front, back) = match dists.len() {
            1 => {
                let mut delta = vec![0u64; pk as usize];
                delta[0] = 1;
                (delta, dists.into_iter().next().expect("one dist"))
            }
            _ => {
                let mut iter = dists.into_iter();
                let mut front = iter.next().expect("first dist");
                let mut rest: Vec<Vec<u64>> = iter.collect();
                let back = rest.pop().expect("rank >= 2");
                for d in rest {
                    front = convolve(&front, &d)?;
                }
                (front, back)
            }
        };
        Ok(Self {
            p,
            k,
            pk,
            rank: form.rank() as u32,
            front,
            back,
        })
    }

    pub(crate) fn count(&self, n: u64) -> u128 {
        let target = (n % self.pk) as usize;
        let len = self.pk as usize;
        let mut total = 0u128;
        for (t, &c1) in self.front.iter().enumerate() {
            if c1 == 0 {
                continue;
            }
            let t2 = if target >= t {
                target - t
            } else {
                target + len - t
            };
            total += u128::from(c1) * u128::from(self.back[t2]);
        }
        total
    }

    pub(crate) fn density(&self, n: u64) -> Rational {
        let count = BigInt::from(self.count(n));
        Rational::new(count, big_pow(self.p, self.k * (self.rank - 1)))
    }
}

/// Exact local density by direct counting at increasing depth.
///
/// Counts solutions of `Q(x) = n (mod p^k)` with all coordinates in the
/// residue class of the form, normalized by `p^{k (l - 1)}`.  Depths start
/// just above `v_p(4 n disc(Q) M^2) + 2`; two consecutive depths must agree
/// before the value is accepted.  Fails with [`Error::NotStabilized`] if no
/// agreement occurs within six further levels, or [`Error::ModulusCap`] if
/// `p^k` would exceed [`MODULUS_CAP`].
pub fn local_density(form: &ShiftedDiagonalForm, p: u64, n: u64) -> Result<LocalDensity> {
    if !is_prime(p) {
        return invalid("local density requires a prime");
    }
    if n == 0 {
        return invalid("local density requires n >= 1");
    }
    if form.rank() < 2 {
        return invalid("local density requires rank >= 2");
    }
    let disc = form.discriminant()?;
    let m = form.modulus();
    let thr = v_p(4, p) + v_p(n, p) + v_p_u128(disc, p) + 2 * v_p(m.max(1), p);
    let mut prev: Option<(Rational, u32)> = None;
    for k in (thr + 1)..=(thr + 7) {
        let tables = DensityTables::build(form, p, k)?;
        let value = tables.density(n);
        if let Some((prev_value, _)) = &prev {
            if *prev_value == value {
                return Ok(LocalDensity { p, value, depth: k });
            }
        }
        prev = Some((value, k));
    }
    Err(Error::NotStabilized {
        p,
        n,
        depth: thr + 7,
    })
}

/// The Euler-normalized local factor `gamma_p(n) = beta_p(n) / (1 - psi(p) p^{-2})`
/// at an odd prime coprime to the shift modulus, where `psi` is the real
/// character attached to the form's discriminant.
///
/// Equals 1 whenever `p` divides neither `2 disc(Q)` nor `n`.
pub fn gamma_p(form: &ShiftedDiagonalForm, p: u64, n: u64) -> Result<Rational> {
    let density = local_density_closed(form, p, n)?;
    let d = form.character_discriminant()?;
    let psi = BigInt::from(kronecker(d, p as i64));
    let p2 = BigInt::from(p) * BigInt::from(p);
    Ok(density.value * Rational::new(p2.clone(), p2 - psi))
}
