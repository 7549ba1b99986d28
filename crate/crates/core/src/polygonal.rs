//! Generalized polygonal numbers and exact representation counting.
//!
//! For m ≥ 3 the m-gonal number with (possibly negative) index x is
//! p_m(x) = ((m−2)x² − (m−4)x)/2. A tuple of positive coefficients
//! a = (a₁, …, a_k) represents n when n = Σ aⱼ·p_m(xⱼ) over integers xⱼ.
//!
//! Everything here is exact integer work: dense count tables, bitmask
//! representability tables for escalation, and the shifted square-count
//! s(h) = #{y : Σ aⱼyⱼ² = h, yⱼ ≡ c (mod 2(m−2))} obtained by completing
//! the square, which turns m-gonal representation questions into
//! congruence-constrained sums of four squares.

use crate::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{Read as _, Write as _};
use std::path::Path;

/// p_m(x) = ((m−2)x² − (m−4)x)/2, defined for every integer x.
pub fn polygonal_number(m: u32, x: i64) -> Result<i128> {
    if m < 3 {
        return invalid("polygonal order must be at least 3");
    }
    let m = m as i128;
    let x = x as i128;
    Ok(((m - 2) * x * x - (m - 4) * x) / 2)
}

/// All distinct values a·p_m(x) ≤ limit, sorted ascending (0 included).
///
/// Index magnitudes never exceed 1 + ⌈√(2·limit/((m−2)a))⌉.
pub fn generalized_values_upto(m: u32, a: u64, limit: u64) -> Result<Vec<u64>> {
    if m < 3 {
        return invalid("polygonal order must be at least 3");
    }
    if a == 0 {
        return invalid("coefficients must be positive");
    }
    let mut vals = vec![0u64];
    for sign in [1i64, -1] {
        let mut x = sign;
        loop {
            let p = polygonal_number(m, x)?;
            debug_assert!(p >= 0);
            let v = (p as u128).checked_mul(a as u128).unwrap_or(u128::MAX);
            if v > limit as u128 {
                // values are nondecreasing in |x| past x = ±1
                if x.unsigned_abs() >= 2 {
                    break;
                }
            } else {
                vals.push(v as u64);
            }
            x += sign;
            let cap = 2 + int_sqrt_ceil(2 * limit / ((m as u64 - 2) * a));
            if x.unsigned_abs() > cap {
                break;
            }
        }
    }
    vals.sort_unstable();
    vals.dedup();
    Ok(vals)
}

fn int_sqrt_ceil(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Dense table t[n] = #{(x₁, …, x_k) : Σ aⱼ·p_m(xⱼ) = n} for 0 ≤ n ≤ limit.
pub fn rep_table(m: u32, coeffs: &[u64], limit: u64) -> Result<Vec<u64>> {
    if coeffs.is_empty() {
        return invalid("rep_table needs at least one coefficient");
    }
    let size = (limit + 1) as usize;
    let mut table = vec![0u64; size];
    table[0] = 1;
    for &a in coeffs {
        let vals = generalized_values_upto(m, a, limit)?;
        let mut next = vec![0u64; size];
        for &v in &vals {
            let v = v as usize;
            for n in 0..size - v {
                if table[n] != 0 {
                    next[n + v] = next[n + v]
                        .checked_add(table[n])
                        .ok_or(Error::CountOverflow(limit))?;
                }
            }
        }
        table = next;
    }
    Ok(table)
}

/// Bitmask of representable values: bit n set ⟺ n is a sum Σ aⱼ·p_m(xⱼ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMask {
    bits: Vec<u64>,
    limit: u64,
}

impl RepMask {
    /// Mask for the empty coefficient tuple: only 0 is representable.
    pub fn empty_tuple(limit: u64) -> Self {
        let words = (limit / 64 + 1) as usize;
        let mut bits = vec![0u64; words];
        bits[0] = 1;
        Self { bits, limit }
    }

    /// Mask for a full coefficient tuple.
    pub fn build(m: u32, coeffs: &[u64], limit: u64) -> Result<Self> {
        let mut mask = Self::empty_tuple(limit);
        for &a in coeffs {
            mask = mask.extended(m, a)?;
        }
        Ok(mask)
    }

    /// Mask for the tuple with one more coefficient appended.
    pub fn extended(&self, m: u32, a: u64) -> Result<Self> {
        let vals = generalized_values_upto(m, a, self.limit)?;
        let mut out = Self {
            bits: vec![0u64; self.bits.len()],
            limit: self.limit,
        };
        for &v in &vals {
            or_shifted(&mut out.bits, &self.bits, v);
        }
        out.clear_past_limit();
        Ok(out)
    }

    fn clear_past_limit(&mut self) {
        let extra = (self.limit % 64 + 1) as u32;
        if extra < 64 {
            let last = self.bits.len() - 1;
            self.bits[last] &= (1u64 << extra) - 1;
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.limit && self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// Least nonrepresentable value ≤ limit, if any.
    pub fn first_missing(&self) -> Option<u64> {
        for (i, &w) in self.bits.iter().enumerate() {
            if w != u64::MAX {
                let n = i as u64 * 64 + (!w).trailing_zeros() as u64;
                if n <= self.limit {
                    return Some(n);
                }
                return None;
            }
        }
        None
    }
}

/// dst |= src << shift (in bits), truncated at the dst length.
fn or_shifted(dst: &mut [u64], src: &[u64], shift: u64) {
    let q = (shift / 64) as usize;
    let r = (shift % 64) as u32;
    if q >= dst.len() {
        return;
    }
    if r == 0 {
        for i in q..dst.len() {
            dst[i] |= src[i - q];
        }
    } else {
        for i in q..dst.len() {
            let mut w = src[i - q] << r;
            if i > q {
                w |= src[i - q - 1] >> (64 - r);
            }
            dst[i] |= w;
        }
    }
}

/// Residue c with the index substitution y = 2(m−2)·x − (m−4): the admissible
/// y are exactly y ≡ c (mod 2(m−2)).
fn shifted_residue(m: u32, modulus: u64) -> u64 {
    (modulus - (m as u64 - 4) % modulus) % modulus
}

/// All y ≡ c (mod modulus) with a·y² ≤ h_max, returned as (a·y²) values
/// (one entry per admissible y, so repeated values stay repeated).
fn shifted_square_values(m: u32, modulus: u64, a: u64, h_max: u64) -> Result<Vec<u64>> {
    if m < 5 {
        return invalid("shifted counting assumes m ≥ 5 so that 2(m−2) > m−4");
    }
    if modulus != 2 * (m as u64 - 2) {
        return invalid("modulus must equal 2(m−2)");
    }
    let c = shifted_residue(m, modulus) as i64;
    let mm = modulus as i64;
    let mut vals = Vec::new();
    for sign in [1i64, -1] {
        let mut k = if sign == 1 { 0 } else { 1 };
        loop {
            let y = c + sign * k * mm;
            let sq = (y as i128) * (y as i128) * (a as i128);
            if sq > h_max as i128 {
                break;
            }
            vals.push(sq as u64);
            k += 1;
        }
    }
    Ok(vals)
}

/// s(h) = #{y ∈ ℤ^k : Σ aⱼyⱼ² = h, yⱼ ≡ c (mod modulus)} by meeting the two
/// halves of the coefficient tuple in a hash map.
pub fn shifted_rep_count(m: u32, modulus: u64, coeffs: &[u64], h: u64) -> Result<u64> {
    if coeffs.is_empty() {
        return invalid("shifted_rep_count needs at least one coefficient");
    }
    let (left, right) = coeffs.split_at(coeffs.len() / 2);
    let enumerate = |part: &[u64]| -> Result<Vec<u64>> {
        let mut sums = vec![0u64];
        for &a in part {
            let vals = shifted_square_values(m, modulus, a, h)?;
            let mut next = Vec::with_capacity(sums.len() * vals.len());
            for &s in &sums {
                for &v in &vals {
                    if s + v <= h {
                        next.push(s + v);
                    }
                }
            }
            sums = next;
        }
        Ok(sums)
    };
    if left.is_empty() {
        return Ok(enumerate(right)?.iter().filter(|&&s| s == h).count() as u64);
    }
    let mut table: HashMap<u64, u64> = HashMap::new();
    for s in enumerate(left)? {
        *table.entry(s).or_insert(0) += 1;
    }
    let mut count = 0u64;
    for s in enumerate(right)? {
        if let Some(&c) = table.get(&(h - s)) {
            count += c;
        }
    }
    Ok(count)
}

/// Dense table of s(h) for 0 ≤ h ≤ h_max (bulk version of
/// [`shifted_rep_count`]).
pub fn shifted_rep_table(m: u32, modulus: u64, coeffs: &[u64], h_max: u64) -> Result<Vec<u64>> {
    if coeffs.is_empty() {
        return invalid("shifted_rep_table needs at least one coefficient");
    }
    let size = (h_max + 1) as usize;
    let mut table = vec![0u64; size];
    table[0] = 1;
    for &a in coeffs {
        let vals = shifted_square_values(m, modulus, a, h_max)?;
        let mut next = vec![0u64; size];
        for &v in &vals {
            let v = v as usize;
            for n in 0..size - v {
                if table[n] != 0 {
                    next[n + v] = next[n + v]
                        .checked_add(table[n])
                        .ok_or(Error::CountOverflow(h_max))?;
                }
            }
        }
        table = next;
    }
    Ok(table)
}

/// Check r(n) = s(8(m−2)n + (m−4)²·Σaⱼ) for every n ≤ n_max; returns the
/// first violating n, or None when the completion identity holds throughout.
pub fn verify_completion_identity(m: u32, coeffs: &[u64], n_max: u64) -> Result<Option<u64>> {
    let modulus = 2 * (m as u64 - 2);
    let shift: u64 = (m as u64 - 4).pow(2) * coeffs.iter().sum::<u64>();
    let h_max = 4 * modulus * n_max + shift;
    let r = rep_table(m, coeffs, n_max)?;
    let s = shifted_rep_table(m, modulus, coeffs, h_max)?;
    for n in 0..=n_max {
        if r[n as usize] != s[(4 * modulus * n + shift) as usize] {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct CacheMeta {
    schema_version: u32,
    m: u32,
    coeffs: Vec<u64>,
    limit: u64,
}

/// [`rep_table`] with a little-endian u64 file cache keyed by (m, coeffs,
/// limit); corrupt or mismatched entries are silently recomputed.
pub fn rep_table_cached(m: u32, coeffs: &[u64], limit: u64, cache_dir: &Path) -> Result<Vec<u64>> {
    let tag: Vec<String> = coeffs.iter().map(|a| a.to_string()).collect();
    let stem = format!("rep-m{}-a{}-L{}", m, tag.join("."), limit);
    let data_path = cache_dir.join(format!("{stem}.u64"));
    let meta_path = cache_dir.join(format!("{stem}.meta.json"));
    let meta = CacheMeta {
        schema_version: 1,
        m,
        coeffs: coeffs.to_vec(),
        limit,
    };
    if let (Ok(mut f), Ok(mf)) = (
        std::fs::File::open(&data_path),
        std::fs::File::open(&meta_path),
    ) {
        if let Ok(stored) = serde_json::from_reader::<_, CacheMeta>(mf) {
            if stored == meta {
                let mut raw = Vec::new();
                if f.read_to_end(&mut raw).is_ok() && raw.len() == 8 * (limit as usize + 1) {
                    return Ok(raw
                        .chunks_exact(8)
                        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
                        .collect());
                }
            }
        }
    }
    let table = rep_table(m, coeffs, limit)?;
    std::fs::create_dir_all(cache_dir)?;
    let mut raw = Vec::with_capacity(8 * table.len());
    for &v in &table {
        raw.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::File::create(&data_path)?.write_all(&raw)?;
    serde_json::to_writer(std::fs::File::create(&meta_path)?, &meta)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heptagonal_values() {
        // p₇: 0, 1, 4, 7, 13, 18, 27, 34, ...
        assert_eq!(polygonal_number(7, 0).unwrap(), 0);
        assert_eq!(polygonal_number(7, 1).unwrap(), 1);
        assert_eq!(polygonal_number(7, -1).unwrap(), 4);
        assert_eq!(polygonal_number(7, 2).unwrap(), 7);
        assert_eq!(polygonal_number(7, -2).unwrap(), 13);
        assert_eq!(polygonal_number(7, 3).unwrap(), 18);
        // squares and triangular numbers as degenerate cases
        assert_eq!(polygonal_number(4, -5).unwrap(), 25);
        assert_eq!(polygonal_number(3, 4).unwrap(), 10);
        assert!(polygonal_number(2, 1).is_err());
    }

    #[test]
    fn value_lists() {
        assert_eq!(
            generalized_values_upto(7, 1, 20).unwrap(),
            vec![0, 1, 4, 7, 13, 18]
        );
        assert_eq!(generalized_values_upto(7, 3, 20).unwrap(), vec![0, 3, 12]);
    }

    #[test]
    fn single_coefficient_table() {
        assert_eq!(rep_table(7, &[1], 4).unwrap(), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn tuple_1133_misses_nine() {
        let t = rep_table(7, &[1, 1, 3, 3], 60).unwrap();
        assert_eq!(t[9], 0);
        // 9 is the only miss in this range
        let misses: Vec<usize> = (0..=60).filter(|&n| t[n] == 0).collect();
        assert_eq!(misses, vec![9]);
    }

    #[test]
    fn masks_match_tables() {
        let limit = 300;
        for coeffs in [vec![1u64], vec![1, 2], vec![1, 2, 4], vec![1, 1, 3, 3]] {
            let t = rep_table(7, &coeffs, limit).unwrap();
            let mask = RepMask::build(7, &coeffs, limit).unwrap();
            for n in 0..=limit {
                assert_eq!(mask.contains(n), t[n as usize] != 0, "{coeffs:?} at {n}");
            }
        }
    }

    #[test]
    fn first_missing_values() {
        let m = RepMask::build(7, &[1], 100).unwrap();
        assert_eq!(m.first_missing(), Some(2));
        let m = RepMask::build(7, &[1, 2, 4], 200).unwrap();
        assert_eq!(m.first_missing(), Some(131));
    }

    #[test]
    fn shifted_count_matches_example() {
        // y ≡ 7 (mod 10): of ±7 only +7 qualifies
        assert_eq!(shifted_rep_count(7, 10, &[1], 49).unwrap(), 1);
        // 169 = (−13)² with −13 ≡ 7, matching r(4) = 1 at h = 40·4 + 9
        assert_eq!(shifted_rep_count(7, 10, &[1], 169).unwrap(), 1);
        // ±3 ↔ x ∈ {0, ...}: s(9) = 1 matches r(0) = 1 at h = 40·0 + 9
        assert_eq!(shifted_rep_count(7, 10, &[1], 9).unwrap(), 1);
        // ±2 are 2 and 8 (mod 10): no admissible y at all
        assert_eq!(shifted_rep_count(7, 10, &[1], 4).unwrap(), 0);
    }

    #[test]
    fn shifted_table_matches_pointwise() {
        let coeffs = [1u64, 2, 3];
        let table = shifted_rep_table(7, 10, &coeffs, 1200).unwrap();
        for h in (0..=1200).step_by(97) {
            assert_eq!(
                table[h as usize],
                shifted_rep_count(7, 10, &coeffs, h).unwrap(),
                "h = {h}"
            );
        }
    }

    #[test]
    fn completion_identity_small_tuples() {
        for coeffs in [vec![1u64], vec![1, 2], vec![1, 1, 3], vec![1, 2, 4, 131]] {
            assert_eq!(
                verify_completion_identity(7, &coeffs, 120).unwrap(),
                None,
                "{coeffs:?}"
            );
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join("heptabound-cache-test");
        let _ = std::fs::remove_dir_all(&dir);
        let a = rep_table_cached(7, &[1, 2, 5], 500, &dir).unwrap();
        let b = rep_table_cached(7, &[1, 2, 5], 500, &dir).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, rep_table(7, &[1, 2, 5], 500).unwrap());
        let _ = std::fs::remove_dir_all(&dir);
    }
}
