//! Rigorous interval arithmetic over exact rational endpoints.
//!
//! Endpoints are arbitrary-precision rationals compressed outward to dyadic
//! values after every operation, so denominators stay bounded while the
//! enclosure property is preserved: the true value of every expression built
//! from enclosed inputs lies between `lo` and `hi`.
//!
//! Transcendental evaluations (π via Machin's formula, exp/ln by reduced
//! Taylor/atanh series, ζ by Euler–Maclaurin) carry explicit remainder
//! bounds; nothing is rounded to nearest anywhere.

use crate::arith::numthy::bernoulli_upto;
use crate::{invalid, rat, Rational, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

pub const DEFAULT_PRECISION: u32 = 256;

// Guard bits kept beyond the nominal precision during compression.
const GUARD: u32 = 32;

/// Closed interval `[lo, hi]` with directed rounding at `precision` bits.
#[derive(Debug, Clone, PartialEq)]
pub struct RigorousInterval {
    lo: Rational,
    hi: Rational,
    precision: u32,
}

/// Parse a decimal literal (`"5.84e38"`, `"-0.25"`, `"1e-6"`) into an exact
/// rational.
pub fn rational_from_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (mant, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| crate::Error::InvalidInput(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (mant, shift) = match mant.find('.') {
        Some(i) => {
            let digits: String = format!("{}{}", &mant[..i], &mant[i + 1..]);
            (digits, (mant.len() - i - 1) as i64)
        }
        None => (mant.to_string(), 0),
    };
    let n: BigInt = mant
        .parse()
        .map_err(|_| crate::Error::InvalidInput(format!("bad mantissa in {s:?}")))?;
    let e = exp10 - shift;
    let ten = BigInt::from(10u32);
    Ok(if e >= 0 {
        Rational::from_integer(n * ten.pow(e as u32))
    } else {
        Rational::new(n, ten.pow((-e) as u32))
    })
}

/// Round `q` to a dyadic rational with ~`bits` significant bits.
/// `up = false` rounds toward −∞, `up = true` toward +∞.
fn dyadic_round(q: &Rational, bits: u32, up: bool) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let mag = nb - db; // |q| ∈ [2^{mag-1}, 2^{mag+1})
    let shift = bits as i64 - mag;
    let (num, den) = if shift >= 0 {
        (q.numer() << shift as usize, q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << (-shift) as usize)
    };
    let (fl, rem) = num.div_mod_floor(&den);
    let m = if up && !rem.is_zero() { fl + 1 } else { fl };
    if shift >= 0 {
        Rational::new(m, BigInt::one() << shift as usize)
    } else {
        Rational::from_integer(m << (-shift) as usize)
    }
}

fn compress(lo: Rational, hi: Rational, prec: u32) -> (Rational, Rational) {
    let bits = prec + GUARD;
    // Skip when endpoints are already small (keeps exact rationals exact).
    let small = |q: &Rational| q.numer().bits() + q.denom().bits() <= 2 * bits as u64;
    let l = if small(&lo) { lo } else { dyadic_round(&lo, bits, false) };
    let h = if small(&hi) { hi } else { dyadic_round(&hi, bits, true) };
    (l, h)
}

impl RigorousInterval {
    pub fn new(lo: Rational, hi: Rational, precision: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        let (lo, hi) = compress(lo, hi, precision);
        Self { lo, hi, precision }
    }

    pub fn point(q: Rational, precision: u32) -> Self {
        Self { lo: q.clone(), hi: q, precision }
    }

    pub fn from_u64(n: u64, precision: u32) -> Self {
        Self::point(Rational::from_integer(BigInt::from(n)), precision)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    fn prec2(&self, other: &Self) -> u32 {
        self.precision.max(other.precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi, self.prec2(other))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.lo - &other.hi, &self.hi - &other.lo, self.prec2(other))
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone(), self.precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi, self.prec2(other))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "interval division by an interval containing zero"
        );
        let c = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi, self.prec2(other))
    }

    pub fn add_rat(&self, q: &Rational) -> Self {
        Self::new(&self.lo + q, &self.hi + q, self.precision)
    }

    pub fn mul_rat(&self, q: &Rational) -> Self {
        if q.is_negative() {
            Self::new(&self.hi * q, &self.lo * q, self.precision)
        } else {
            Self::new(&self.lo * q, &self.hi * q, self.precision)
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Self::new(Rational::zero(), self.lo.abs().max(self.hi.abs()), self.precision)
        }
    }

    /// Componentwise minimum; sound when both operands are upper-bound
    /// carriers for the same quantity.
    pub fn min_upper(&self, other: &Self) -> Self {
        Self::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
            self.prec2(other),
        )
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::point(Rational::one(), self.precision);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return invalid("sqrt of an interval reaching below zero");
        }
        let prec = self.precision;
        Ok(Self::new(sqrt_dir(&self.lo, prec, false), sqrt_dir(&self.hi, prec, true), prec))
    }

    /// exp over the interval (monotone).
    pub fn exp(&self) -> Self {
        let (lo, _) = exp_enclosure(&self.lo, self.precision);
        let (_, hi) = exp_enclosure(&self.hi, self.precision);
        Self::new(lo, hi, self.precision)
    }

    /// Natural log; requires a strictly positive interval.
    pub fn ln(&self) -> Result<Self> {
        if !self.lo.is_positive() {
            return invalid("ln of an interval reaching zero or below");
        }
        let (lo, _) = ln_enclosure(&self.lo, self.precision);
        let (_, hi) = ln_enclosure(&self.hi, self.precision);
        Ok(Self::new(lo, hi, self.precision))
    }

    /// `self^e` for rational exponent, via exp(e·ln self); requires a
    /// strictly positive base.
    pub fn pow_rational(&self, e: &Rational) -> Result<Self> {
        let l = self.ln()?;
        Ok(l.mul_rat(e).exp())
    }
}

/// Certified enclosure of π.
pub fn pi(precision: u32) -> RigorousInterval {
    static CACHE: OnceLock<Mutex<HashMap<u32, (Rational, Rational)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some((lo, hi)) = cache.lock().unwrap().get(&precision) {
        return RigorousInterval::new(lo.clone(), hi.clone(), precision);
    }
    // Machin: π = 16·atan(1/5) − 4·atan(1/239).
    let a5 = atan_inv(5, precision + 8);
    let a239 = atan_inv(239, precision + 8);
    let v = a5.mul_rat(&rat(16, 1)).sub(&a239.mul_rat(&rat(4, 1)));
    let v = RigorousInterval::new(v.lo.clone(), v.hi.clone(), precision);
    cache
        .lock()
        .unwrap()
        .insert(precision, (v.lo.clone(), v.hi.clone()));
    v
}

/// atan(1/x) for integer x ≥ 2 by the alternating Taylor series; consecutive
/// partial sums bracket the value. Terms have power-of-x denominators, so
/// exact arithmetic stays cheap.
fn atan_inv(x: u64, precision: u32) -> RigorousInterval {
    let x2 = Rational::from_integer(BigInt::from(x) * BigInt::from(x));
    let mut term = rat(1, x as i64); // x^{−(2k+1)}
    let mut sum = Rational::zero();
    let mut k = 0u32;
    let eps = pow2_neg(precision + 8);
    let (mut lo, mut hi);
    loop {
        let contrib = &term / rat(2 * k as i64 + 1, 1);
        if k % 2 == 0 {
            sum += &contrib;
            hi = sum.clone();
            lo = &sum - &contrib;
        } else {
            sum -= &contrib;
            lo = sum.clone();
            hi = &sum + &contrib;
        }
        if contrib < eps {
            return RigorousInterval::new(lo, hi, precision);
        }
        term = term / &x2;
        k += 1;
    }
}

fn pow2_neg(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// Certified enclosure of ln 2 = 2·atanh(1/3).
pub fn ln2(precision: u32) -> RigorousInterval {
    static CACHE: OnceLock<Mutex<HashMap<u32, (Rational, Rational)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some((lo, hi)) = cache.lock().unwrap().get(&precision) {
        return RigorousInterval::new(lo.clone(), hi.clone(), precision);
    }
    let (lo, hi) = atanh_series(&rat(1, 3), precision + 8);
    let v = RigorousInterval::new(lo * rat(2, 1), hi * rat(2, 1), precision);
    cache
        .lock()
        .unwrap()
        .insert(precision, (v.lo.clone(), v.hi.clone()));
    v
}

/// Enclosure of atanh(t) = Σ t^{2i+1}/(2i+1) for exact rational 0 ≤ t ≤ 1/2.
/// Each endpoint carries its own directed rounding, so working rationals stay
/// bounded without losing soundness.
fn atanh_series(t: &Rational, precision: u32) -> (Rational, Rational) {
    assert!(!t.is_negative() && t <= &rat(1, 2));
    let bits = precision + GUARD;
    let t2 = t * t;
    let mut pw_lo = t.clone(); // directed brackets of t^{2i+1}
    let mut pw_hi = t.clone();
    let mut s_lo = Rational::zero();
    let mut s_hi = Rational::zero();
    let mut i: i64 = 0;
    let eps = pow2_neg(precision + 8);
    loop {
        s_lo = dyadic_round(&(&s_lo + &pw_lo / rat(2 * i + 1, 1)), 4 * bits, false);
        s_hi = dyadic_round(&(&s_hi + &pw_hi / rat(2 * i + 1, 1)), 4 * bits, true);
        pw_lo = dyadic_round(&(&pw_lo * &t2), 2 * bits, false);
        pw_hi = dyadic_round(&(&pw_hi * &t2), 2 * bits, true);
        i += 1;
        // tail ≤ t^{2i+1}/((2i+1)(1−t²))
        let tail = &pw_hi / (rat(2 * i + 1, 1) * (Rational::one() - &t2));
        if tail < eps {
            return (s_lo, s_hi + tail);
        }
    }
}

/// Directed square root of an exact nonnegative rational.
fn sqrt_dir(q: &Rational, precision: u32, up: bool) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let s = (precision + GUARD) as usize;
    // floor(q·4^s) = floor(num·4^s / den)
    let scaled = (q.numer() << (2 * s)) / q.denom();
    let r = scaled.sqrt(); // floor integer sqrt
    let den = BigInt::one() << s;
    if up {
        // (r+1)² > floor(q·4^s) ≥ q·4^s − 1, so (r+1)/2^s ≥ √q whenever
        // (r+1)² ≥ q·4^s; check exactly and bump once more if needed.
        let mut m = &r + 1;
        while &(&m * &m) * q.denom() < q.numer() << (2 * s) {
            m += 1;
        }
        Rational::new(m, den)
    } else {
        Rational::new(r, den)
    }
}

/// Enclosure of exp(q) for an exact rational argument.
fn exp_enclosure(q: &Rational, precision: u32) -> (Rational, Rational) {
    // Range reduction: exp(q) = 2^k · exp(q − k·ln2), |reduced| ≲ 0.7.
    let k: i64 = {
        let approx = q.to_f64().unwrap_or(0.0) / std::f64::consts::LN_2;
        if approx.is_finite() {
            approx.round() as i64
        } else {
            0
        }
    };
    let l2 = ln2(precision + 16);
    let kq = rat(k, 1);
    // Outward brackets of q keep the series input small for huge exact
    // arguments (exp is monotone, so endpoints map to endpoints).
    let q_lo = dyadic_round(q, precision + GUARD + 8, false);
    let q_hi = dyadic_round(q, precision + GUARD + 8, true);
    // r interval: q − k·ln2
    let (r_lo, r_hi) = if k >= 0 {
        (&q_lo - &kq * &l2.hi, &q_hi - &kq * &l2.lo)
    } else {
        (&q_lo - &kq * &l2.lo, &q_hi - &kq * &l2.hi)
    };
    debug_assert!(r_lo <= r_hi);
    let bound = r_lo.abs().max(r_hi.abs());
    assert!(bound <= rat(3, 2), "exp range reduction failed");
    // Taylor with interval argument r.
    let prec = precision + 16;
    let mut term_lo = Rational::one();
    let mut term_hi = Rational::one();
    let mut sum_lo = Rational::one();
    let mut sum_hi = Rational::one();
    let eps = pow2_neg(prec + 8);
    let mut i: i64 = 1;
    loop {
        // term ← term·r/i  (interval multiply)
        let c = [
            &term_lo * &r_lo,
            &term_lo * &r_hi,
            &term_hi * &r_lo,
            &term_hi * &r_hi,
        ];
        term_lo = c.iter().min().unwrap() / rat(i, 1);
        term_hi = c.iter().max().unwrap() / rat(i, 1);
        sum_lo += &term_lo;
        sum_hi += &term_hi;
        let mag = term_lo.abs().max(term_hi.abs());
        if mag < eps && i as u64 > bound.to_integer().to_u64().unwrap_or(0) + 2 {
            // tail ≤ mag · Σ (bound/(i+1))^j ≤ 2·mag once bound/(i+1) ≤ 1/2
            let tail = mag * rat(2, 1);
            sum_lo -= &tail;
            sum_hi += &tail;
            break;
        }
        i += 1;
        term_lo = dyadic_round(&term_lo, 2 * prec, false);
        term_hi = dyadic_round(&term_hi, 2 * prec, true);
        sum_lo = dyadic_round(&sum_lo, 4 * prec, false);
        sum_hi = dyadic_round(&sum_hi, 4 * prec, true);
    }
    if sum_lo.is_negative() {
        sum_lo = Rational::zero(); // exp > 0 always
    }
    // scale by 2^k
    let (lo, hi) = if k >= 0 {
        let f = Rational::from_integer(BigInt::one() << k as usize);
        (sum_lo * &f, sum_hi * &f)
    } else {
        let f = Rational::new(BigInt::one(), BigInt::one() << (-k) as usize);
        (sum_lo * &f, sum_hi * &f)
    };
    compress(lo, hi, precision)
}

/// Enclosure of ln(q) for an exact rational q > 0.
fn ln_enclosure(q: &Rational, precision: u32) -> (Rational, Rational) {
    assert!(q.is_positive());
    let bits = precision + GUARD + 8;
    // q = m·2^k with m ∈ [1, 2)
    let k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let m = if k >= 0 {
        q / Rational::from_integer(BigInt::one() << k as usize)
    } else {
        q * Rational::from_integer(BigInt::one() << (-k) as usize)
    };
    // m ∈ [1/2, 2); normalize to [1, 2)
    let (m, k) = if m < Rational::one() {
        (m * rat(2, 1), k - 1)
    } else {
        (m, k)
    };
    debug_assert!(m >= Rational::one() && m < rat(2, 1));
    // Directed dyadic brackets of m keep the series input small even when q
    // has enormous numerators (ln is monotone, so endpoints map to endpoints).
    let mut m_lo = dyadic_round(&m, bits, false);
    if m_lo < Rational::one() {
        m_lo = Rational::one();
    }
    let m_hi = dyadic_round(&m, bits, true);
    let t_lo = (&m_lo - Rational::one()) / (&m_lo + Rational::one()); // ∈ [0, 1/3]
    let t_hi = (&m_hi - Rational::one()) / (&m_hi + Rational::one());
    let s_lo = atanh_series(&t_lo, precision + 16).0;
    let s_hi = atanh_series(&t_hi, precision + 16).1;
    let l2 = ln2(precision + 16);
    let kq = rat(k, 1);
    let (lo, hi) = if k >= 0 {
        (s_lo * rat(2, 1) + &kq * &l2.lo, s_hi * rat(2, 1) + &kq * &l2.hi)
    } else {
        (s_lo * rat(2, 1) + &kq * &l2.hi, s_hi * rat(2, 1) + &kq * &l2.lo)
    };
    compress(lo, hi, precision)
}

/// Certified enclosure of ζ(s) for rational s > 1 by Euler–Maclaurin.
pub fn zeta_interval(s: &Rational, precision: u32) -> Result<RigorousInterval> {
    if s <= &Rational::one() {
        return invalid("zeta_interval requires s > 1");
    }
    let prec = precision + 16;
    let nn: u64 = 256;
    let m = 24usize;
    let bern = bernoulli_upto(2 * m + 2);
    // Σ_{n=1}^{N−1} n^{−s}
    let mut sum = RigorousInterval::point(Rational::one(), prec);
    for n in 2..nn {
        sum = sum.add(&pow_u64(n, &(-s.clone()), prec));
    }
    // t = N^{1−s}
    let t = pow_u64(nn, &(Rational::one() - s), prec);
    // + N^{1−s}/(s−1) + N^{−s}/2
    sum = sum.add(&t.mul_rat(&(Rational::one() / (s - Rational::one()))));
    sum = sum.add(&t.mul_rat(&Rational::new(BigInt::one(), BigInt::from(2 * nn))));
    // correction terms: B_{2k}/(2k)! · (s)_{2k−1} · N^{−s−2k+1}
    let nq = Rational::from_integer(BigInt::from(nn));
    let mut fact = Rational::one(); // (2k)!
    let mut rising = Rational::one(); // (s)_{2k−1}
    let mut npow = Rational::one(); // N^{−2k+2} · N^{1−s} pairing via t
    let mut j = 0i64; // next factor index for the rising factorial
    for k in 1..=m {
        fact *= rat((2 * k as i64 - 1) * 2 * k as i64, 1);
        while j < 2 * k as i64 - 1 {
            rising *= s + rat(j, 1);
            j += 1;
        }
        npow /= &nq * &nq; // N^{−2k}
        // N^{−s−2k+1} = N^{1−s} · N^{−2k} = t · npow
        let coeff = &bern[2 * k] / &fact * &rising * &npow;
        sum = sum.add(&t.mul_rat(&coeff));
    }
    // remainder: |B_{2m+2}/(2m+2)!·(s)_{2m+1}·N^{−s−2m−1}|
    let mut fact2 = fact.clone();
    fact2 *= rat((2 * m as i64 + 1) * (2 * m as i64 + 2), 1);
    let mut rising2 = rising.clone();
    while j < 2 * m as i64 + 1 {
        rising2 *= s + rat(j, 1);
        j += 1;
    }
    let rem_coeff = (&bern[2 * m + 2] / fact2 * rising2 * (&npow / (&nq * &nq))).abs();
    let rem = t.mul_rat(&rem_coeff);
    let lo = &sum.lo - rem.hi();
    let hi = &sum.hi + rem.hi();
    Ok(RigorousInterval::new(lo, hi, precision))
}

/// Enclosure of n^e for integer n ≥ 1 and rational exponent.
pub fn pow_u64(n: u64, e: &Rational, precision: u32) -> RigorousInterval {
    if n == 1 || e.is_zero() {
        return RigorousInterval::point(Rational::one(), precision);
    }
    if e.is_integer() {
        let k = e.to_integer();
        if let Some(k) = k.to_i32() {
            let base = Rational::from_integer(BigInt::from(n));
            let v = base.pow(k);
            return RigorousInterval::point(v, precision);
        }
    }
    let base = RigorousInterval::from_u64(n, precision);
    base.pow_rational(e).expect("positive base")
}
