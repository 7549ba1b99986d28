//! Exact counts of congruence-constrained lattice points of bounded value,
//! together with an explicit closed-form upper bound for such counts.

use crate::arith::RigorousInterval;
use crate::{invalid, Error, Rational, Result};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;

type Rat128 = Ratio<i128>;

/// A symmetric integer Gram matrix with even diagonal, representing the
/// integer-valued quadratic form `Q(x) = x^T G x / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    entries: Vec<Vec<i64>>,
}

impl GramMatrix {
    /// Validates squareness, symmetry and even diagonal.  Dimensions 1..=4
    /// are supported.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 || dim > 4 {
            return invalid("Gram matrix must have dimension 1..=4");
        }
        if entries.iter().any(|row| row.len() != dim) {
            return invalid("Gram matrix must be square");
        }
        for i in 0..dim {
            if entries[i][i] % 2 != 0 {
                return invalid("Gram matrix must have even diagonal");
            }
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return invalid("Gram matrix must be symmetric");
                }
            }
        }
        Ok(Self { entries })
    }

    /// Gram matrix `diag(2 a_1, ..., 2 a_l)` of a diagonal form.
    pub fn from_diagonal(coeffs: &[u64]) -> Result<Self> {
        if coeffs.iter().any(|&a| a == 0) {
            return invalid("diagonal coefficients must be positive");
        }
        let entries = coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let mut row = vec![0i64; coeffs.len()];
                row[i] = 2 * i64::try_from(a).map_err(|_| Error::CountOverflow(a))?;
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// `Q(x) = x^T G x / 2`; an integer because the diagonal is even.
    pub fn evaluate(&self, x: &[i64]) -> i128 {
        assert_eq!(x.len(), self.dim(), "dimension mismatch");
        let mut twice = 0i128;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                twice += i128::from(self.entries[i][j]) * i128::from(x[i]) * i128::from(x[j]);
            }
        }
        twice / 2
    }

    /// Determinant, by cofactor expansion (dimension is at most 4).
    pub fn det(&self) -> i128 {
        fn det_rec(m: &[Vec<i128>]) -> i128 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            let mut acc = 0i128;
            for (col, &top) in m[0].iter().enumerate() {
                if top == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1 } else { -1 };
                acc += sign * top * det_rec(&minor);
            }
            acc
        }
        let m: Vec<Vec<i128>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&v| i128::from(v)).collect())
            .collect();
        det_rec(&m)
    }

    /// Positive definiteness via Sylvester's criterion on leading minors.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.dim()).all(|k| {
            let sub: Vec<Vec<i64>> = self.entries[..k]
                .iter()
                .map(|row| row[..k].to_vec())
                .collect();
            (GramMatrix { entries: sub }).det() > 0
        })
    }

    /// LDL^T decomposition of `G` over the rationals: returns `(d, u)` with
    /// `x^T G x = sum_i d_i (x_i + sum_{j>i} u[i][j] x_j)^2`.
    pub(crate) fn ldl(&self) -> Result<(Vec<Rat128>, Vec<Vec<Rat128>>)> {
        let n = self.dim();
        let mut d = vec![Rat128::zero(); n];
        let mut u = vec![vec![Rat128::zero(); n]; n];
        for i in 0..n {
            let mut di = Rat128::from_integer(i128::from(self.entries[i][i]));
            for k in 0..i {
                di -= d[k] * u[k][i] * u[k][i];
            }
            if di <= Rat128::zero() {
                return invalid("Gram matrix is not positive definite");
            }
            d[i] = di;
            for j in (i + 1)..n {
                let mut num = Rat128::from_integer(i128::from(self.entries[i][j]));
                for k in 0..i {
                    num -= d[k] * u[k][i] * u[k][j];
                }
                u[i][j] = num / di;
            }
        }
        Ok((d, u))
    }
}

fn isqrt_i128(v: i128) -> i128 {
    debug_assert!(v >= 0);
    if v < 2 {
        return v;
    }
    let mut r = (v as f64).sqrt() as i128;
    r = r.saturating_sub(2).max(0);
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Number of lattice points `x` with every coordinate in the class
/// `residue mod modulus` and `Q(x) = x^T G x / 2 <= n`.
///
/// The Gram matrix must be positive definite.  Enumeration follows the
/// LDL^T decomposition level by level, so only points inside the ellipsoid
/// (plus its boundary) are visited.
pub fn lattice_count(gram: &GramMatrix, n: u64, residue: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return invalid("shift modulus must be positive");
    }
    if residue >= modulus {
        return invalid("shift residue must be reduced");
    }
    let (d, u) = gram.ldl()?;
    let dim = gram.dim();
    let budget = Rat128::from_integer(2i128 * i128::from(n));
    let mut coords = vec![0i128; dim];
    let m = i128::from(modulus);
    let r = i128::from(residue);

    fn recurse(
        level: usize,
        budget: Rat128,
        d: &[Rat128],
        u: &[Vec<Rat128>],
        coords: &mut [i128],
        m: i128,
        r: i128,
    ) -> Result<u64> {
        if budget < Rat128::zero() {
            return Ok(0);
        }
        let i = level - 1;
        // center offset c = sum_{j > i} u[i][j] x_j
        let mut c = Rat128::zero();
        for j in level..coords.len() {
            c += u[i][j] * Rat128::from_integer(coords[j]);
        }
        let b2 = budget / d[i];
        let b_int = isqrt_i128(b2.floor().to_integer()) + 1;
        // coarse window for x + c in [-b_int, b_int], snapped to the class
        let lo = (-c).floor().to_integer() - b_int;
        let hi = (-c).ceil().to_integer() + b_int;
        let mut x = r + ((lo - r).div_euclid(m)) * m;
        if x < lo {
            x += m;
        }
        let mut total = 0u64;
        while x <= hi {
            let off = Rat128::from_integer(x) + c;
            let used = d[i] * off * off;
            if used <= budget {
                coords[i] = x;
                let sub = if i == 0 {
                    1
                } else {
                    recurse(i, budget - used, d, u, coords, m, r)?
                };
                total = total
                    .checked_add(sub)
                    .ok_or(Error::CountOverflow(u64::MAX))?;
            }
            x += m;
        }
        Ok(total)
    }

    recurse(dim, budget, &d, &u, &mut coords, m, r)
}

/// Explicit upper bound for [`lattice_count`]:
///
/// `(2/M + 1)^l (2n)^{l/2} / sqrt(det G) + l (2/M + 1)^{l-1} n^{(l-1)/2}`.
///
/// The first term dominates the ellipsoid volume per congruence class, the
/// second the boundary effects.  Returned as a rigorous enclosure of the
/// exact real value.
pub fn lattice_count_bound(
    rank: u32,
    det: i128,
    n: u64,
    modulus: u64,
    precision: u32,
) -> Result<RigorousInterval> {
    if rank == 0 || modulus == 0 || det <= 0 {
        return invalid("bound needs positive rank, modulus, and determinant");
    }
    let q = Rational::new(BigInt::from(modulus) + 2, BigInt::from(modulus));
    let pow_rat = |base: &Rational, e: u32| -> Rational {
        let mut acc = Rational::from_integer(BigInt::from(1));
        for _ in 0..e {
            acc *= base.clone();
        }
        acc
    };
    let int_pow = |base: u128, e: u32| -> Rational {
        let mut acc = BigInt::from(1);
        for _ in 0..e {
            acc *= BigInt::from(base);
        }
        Rational::from_integer(acc)
    };

    // (2n)^{l/2} split into an exact power and at most one square root
    let two_n = 2u128 * u128::from(n);
    let mut t1 =
        RigorousInterval::point(pow_rat(&q, rank) * int_pow(two_n, rank / 2), precision);
    if rank % 2 == 1 {
        let root =
            RigorousInterval::point(Rational::from_integer(BigInt::from(two_n)), precision)
                .sqrt()?;
        t1 = t1.mul(&root);
    }
    let sqrt_det =
        RigorousInterval::point(Rational::from_integer(BigInt::from(det)), precision).sqrt()?;
    t1 = t1.div(&sqrt_det);

    let mut t2 = RigorousInterval::point(
        Rational::from_integer(BigInt::from(rank))
            * pow_rat(&q, rank - 1)
            * int_pow(u128::from(n), (rank - 1) / 2),
        precision,
    );
    if (rank - 1) % 2 == 1 {
        let root = RigorousInterval::point(Rational::from_integer(BigInt::from(n)), precision)
            .sqrt()?;
        t2 = t2.mul(&root);
    }
    Ok(t1.add(&t2))
}

/// Brute-force reference count over a coordinate box (test oracle).
#[cfg(test)]
pub(crate) fn lattice_count_brute(
    gram: &GramMatrix,
    n: u64,
    residue: u64,
    modulus: u64,
    box_radius: i64,
) -> u64 {
    let dim = gram.dim();
    let mut coords = vec![0i64; dim];
    fn rec(
        gram: &GramMatrix,
        n: u64,
        residue: i64,
        modulus: i64,
        box_radius: i64,
        level: usize,
        coords: &mut [i64],
    ) -> u64 {
        if level == coords.len() {
            let v = gram.evaluate(coords);
            return u64::from(v >= 0 && v <= i128::from(n));
        }
        let mut total = 0;
        let mut x = -box_radius + (residue - (-box_radius)).rem_euclid(modulus);
        while x <= box_radius {
            coords[level] = x;
            total += rec(gram, n, residue, modulus, box_radius, level + 1, coords);
            x += modulus;
        }
        total
    }
    rec(
        gram,
        n,
        residue as i64,
        modulus as i64,
        box_radius,
        0,
        &mut coords,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_dec;

    #[test]
    fn gram_validation() {
        assert!(GramMatrix::new(vec![vec![2, 1], vec![0, 2]]).is_err());
        assert!(GramMatrix::new(vec![vec![3]]).is_err());
        assert!(GramMatrix::new(vec![vec![2, 0]]).is_err());
        let g = GramMatrix::new(vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.det(), 4);
        assert!(g.is_positive_definite());
        let neg = GramMatrix::new(vec![vec![-2, 0], vec![0, 2]]).unwrap();
        assert!(!neg.is_positive_definite());
        assert!(lattice_count(&neg, 5, 0, 1).is_err());
    }

    #[test]
    fn evaluate_and_det_on_diagonal_forms() {
        let g = GramMatrix::from_diagonal(&[1, 2, 4, 131]).unwrap();
        assert_eq!(g.det(), 16 * 1048);
        assert_eq!(g.evaluate(&[1, 1, 1, 1]), 138);
        let h = GramMatrix::new(vec![vec![2, 2], vec![2, 4]]).unwrap();
        assert_eq!(h.evaluate(&[1, 1]), 5);
        assert_eq!(h.det(), 4);
    }

    #[test]
    fn single_square_counts() {
        let g = GramMatrix::from_diagonal(&[1]).unwrap();
        assert_eq!(lattice_count(&g, 4, 0, 1).unwrap(), 5);
        assert_eq!(lattice_count(&g, 0, 0, 1).unwrap(), 1);
        assert_eq!(lattice_count(&g, 4, 1, 2).unwrap(), 2);
    }

    #[test]
    fn two_squares_counts() {
        let g = GramMatrix::from_diagonal(&[1, 1]).unwrap();
        assert_eq!(lattice_count(&g, 1, 0, 1).unwrap(), 5);
        assert_eq!(lattice_count(&g, 2, 0, 1).unwrap(), 9);
        assert_eq!(lattice_count(&g, 25, 0, 1).unwrap(), 81);
    }

    #[test]
    fn bound_example_value() {
        // one variable, n = 4: 3 * sqrt(8) / sqrt(2) + 1 = 7
        let b = lattice_count_bound(1, 2, 4, 1, 128).unwrap();
        assert!(b.lo() > &rat_dec("6.999999"));
        assert!(b.hi() < &rat_dec("7.000001"));
        assert!(Rational::from_integer(5.into()) <= *b.lo());
    }

    #[test]
    fn bound_dominates_on_random_forms() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..40 {
            let dim = 1 + (next() % 4) as usize;
            let coeffs: Vec<u64> = (0..dim).map(|_| 1 + next() % 12).collect();
            let mut g = GramMatrix::from_diagonal(&coeffs).unwrap();
            // random small off-diagonal perturbation that keeps G diagonally
            // dominant, hence positive definite
            if dim >= 2 {
                let i = (next() % (dim as u64 - 1)) as usize;
                g.entries[i][i + 1] = 1;
                g.entries[i + 1][i] = 1;
            }
            assert!(g.is_positive_definite(), "trial {trial}");
            let modulus = [1u64, 2, 10][(next() % 3) as usize];
            let residue = next() % modulus;
            let n = 1 + next() % 300;
            let count = lattice_count(&g, n, residue, modulus).unwrap();
            let bound = lattice_count_bound(dim as u32, g.det(), n, modulus, 128).unwrap();
            assert!(
                Rational::from_integer(count.into()) <= *bound.lo(),
                "count {count} exceeds bound at trial {trial}"
            );
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let g = GramMatrix::new(vec![vec![2, 1, 0], vec![1, 4, -1], vec![0, -1, 6]]).unwrap();
        for (n, residue, modulus) in [(10u64, 0u64, 1u64), (30, 1, 2), (50, 0, 1), (17, 2, 3)] {
            let fast = lattice_count(&g, n, residue, modulus).unwrap();
            let brute = lattice_count_brute(&g, n, residue, modulus, 40);
            assert_eq!(fast, brute, "n={n} r={residue} M={modulus}");
        }
    }

    #[test]
    fn shifted_count_matches_representation_tables() {
        // cumulative exact-value counts agree with the ellipsoid count
        let g = GramMatrix::from_diagonal(&[1, 1, 1, 3]).unwrap();
        let h_max = 169u64;
        let table = crate::polygonal::shifted_rep_table(7, 10, &[1, 1, 1, 3], h_max).unwrap();
        let cumulative: u64 = table.iter().sum();
        assert_eq!(lattice_count(&g, h_max, 7, 10).unwrap(), cumulative);
    }
}
