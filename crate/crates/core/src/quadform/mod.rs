//! Shifted diagonal quadratic forms and their arithmetic invariants.
//!
//! The central object is [`ShiftedDiagonalForm`]: a diagonal quadratic form
//! `Q(x) = a_1 x_1^2 + ... + a_l x_l^2` whose variables are constrained to a
//! fixed residue class `x_j = r (mod M)`.  Counting lattice points of bounded
//! value on such a form, and computing its local representation densities, is
//! what the rest of the crate builds on.
//!
//! Submodules:
//! * [`lattice`] — exact constrained lattice-point counts and an explicit
//!   upper bound for them,
//! * [`density`] — local representation densities (exact rational values)
//!   by direct counting and by a closed-form evaluation at odd primes,
//! * [`hilbert`] — Hilbert symbols and the local isotropy test,
//! * [`reduce`] — Minkowski-style reduction of small Gram matrices.

pub mod density;
pub mod hilbert;
pub mod lattice;
pub mod reduce;

pub use density::{gamma_p, local_density, local_density_closed, LocalDensity};
pub use hilbert::{hilbert_symbol, is_anisotropic};
pub use lattice::{lattice_count, lattice_count_bound, GramMatrix};
pub use reduce::minkowski_reduce;

use crate::arith::lcm_all;
use crate::{invalid, Error, Result};
use serde::Serialize;

/// A diagonal quadratic form `sum_j a_j x_j^2` with every variable shifted
/// into the residue class `x_j = residue (mod modulus)`.
///
/// `modulus = 1, residue = 0` recovers an ordinary (unshifted) diagonal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftedDiagonalForm {
    coeffs: Vec<u64>,
    residue: u64,
    modulus: u64,
}

impl ShiftedDiagonalForm {
    /// Creates a form, validating that all coefficients are positive and
    /// that `residue` is a reduced residue: `0 <= residue < modulus`.
    pub fn new(coeffs: &[u64], residue: u64, modulus: u64) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("a diagonal form needs at least one coefficient");
        }
        if coeffs.iter().any(|&a| a == 0) {
            return invalid("diagonal coefficients must be positive");
        }
        if modulus == 0 {
            return invalid("shift modulus must be positive");
        }
        if residue >= modulus {
            return invalid(format!(
                "shift residue {residue} is not reduced modulo {modulus}"
            ));
        }
        Ok(Self {
            coeffs: coeffs.to_vec(),
            residue,
            modulus,
        })
    }

    /// Creates the unshifted form `sum_j a_j x_j^2`.
    pub fn plain(coeffs: &[u64]) -> Result<Self> {
        Self::new(coeffs, 0, 1)
    }

    /// The shifted form that carries sums of generalized `m`-gonal numbers.
    ///
    /// Substituting `y = 2(m-2)x - (m-4)` turns the polygonal value
    /// `((m-2)x^2 - (m-4)x)/2` into `(y^2 - (m-4)^2) / (8(m-2))`, with `y`
    /// ranging over the class `-(m-4) mod 2(m-2)`.  A sum with coefficients
    /// `a_j` is therefore represented by this form with
    /// `modulus = 2(m-2)` and `residue = (modulus - (m-4)) mod modulus`.
    pub fn from_polygonal(m: u32, coeffs: &[u64]) -> Result<Self> {
        if m < 5 {
            return invalid("polygonal completion requires m >= 5");
        }
        let modulus = 2 * (u64::from(m) - 2);
        let residue = (modulus - (u64::from(m) - 4)) % modulus;
        Self::new(coeffs, residue, modulus)
    }

    /// The diagonal coefficients.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// The common residue of all variables.
    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// The shift modulus.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of variables.
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// Value of the form at a point (no congruence check).
    pub fn evaluate(&self, x: &[i64]) -> i128 {
        assert_eq!(x.len(), self.coeffs.len(), "dimension mismatch");
        self.coeffs
            .iter()
            .zip(x)
            .map(|(&a, &xi)| i128::from(a) * i128::from(xi) * i128::from(xi))
            .sum()
    }

    /// Product of the coefficients.
    pub fn coeff_product(&self) -> Result<u128> {
        let mut prod: u128 = 1;
        for &a in &self.coeffs {
            prod = prod
                .checked_mul(u128::from(a))
                .ok_or(Error::CountOverflow(u64::MAX))?;
        }
        Ok(prod)
    }

    /// Discriminant of the associated even Gram matrix `diag(2 a_j)`,
    /// i.e. `2^rank * prod_j a_j`.
    pub fn discriminant(&self) -> Result<u128> {
        let prod = self.coeff_product()?;
        (1u128)
            .checked_shl(self.rank() as u32)
            .and_then(|pow| pow.checked_mul(prod))
            .ok_or(Error::CountOverflow(u64::MAX))
    }

    /// Least common multiple of the coefficients.
    pub fn coeff_lcm(&self) -> u64 {
        lcm_all(&self.coeffs)
    }

    /// Fundamental discriminant `D` of the real quadratic character attached
    /// to the form: the discriminant of `Q(sqrt(prod_j a_j))`, so `D = 1`
    /// when the coefficient product is a perfect square.
    ///
    /// The associated character `psi = (D/.)` is the one appearing in the
    /// Euler factors `1 - psi(p) p^{-2}` of the weight-2 Eisenstein
    /// coefficient formula.
    pub fn character_discriminant(&self) -> Result<i64> {
        let prod = self.coeff_product()?;
        let prod = i64::try_from(prod)
            .map_err(|_| Error::CountOverflow(u64::MAX))?;
        crate::arith::fundamental_discriminant(prod)
    }

    /// Level of the unshifted form: the least `N` with `N * A^{-1}` integral
    /// and even-diagonal, where `A = diag(2 a_j)`; equals `4 * lcm(a_j)`.
    pub fn level(&self) -> u64 {
        4 * self.coeff_lcm()
    }

    /// Level and character conductor of the theta series attached to this
    /// shifted form in four variables.
    ///
    /// Returns `(4 * lcm(a_j) * modulus^2, 4 * prod_j a_j)`: the theta series
    /// is modular of the first level, with nebentypus character given by the
    /// Kronecker symbol of conductor dividing the second value.
    pub fn modular_level_character(&self) -> Result<(u128, u128)> {
        if self.rank() != 4 {
            return invalid("theta level/character is implemented for rank 4");
        }
        let m2 = u128::from(self.modulus) * u128::from(self.modulus);
        let level = 4u128
            .checked_mul(u128::from(self.coeff_lcm()))
            .and_then(|v| v.checked_mul(m2))
            .ok_or(Error::CountOverflow(u64::MAX))?;
        let character = 4u128
            .checked_mul(self.coeff_product()?)
            .ok_or(Error::CountOverflow(u64::MAX))?;
        Ok((level, character))
    }
}

/// Least `N` such that `N * A^{-1}` is integral with even diagonal entries,
/// for `A = diag(2 a_j)`, found by scanning divisors of `4 * lcm(a_j)`.
///
/// This is the defining property of the level; the scan confirms the closed
/// form instead of assuming it.
pub fn minimal_theta_level(coeffs: &[u64]) -> Result<u64> {
    if coeffs.is_empty() || coeffs.contains(&0) {
        return invalid("level search needs positive coefficients");
    }
    let cap = 4 * lcm_all(coeffs);
    let is_valid = |n: u64| coeffs.iter().all(|&a| n % (4 * a) == 0);
    let mut best = cap;
    let mut d = 1u64;
    while d * d <= cap {
        if cap % d == 0 {
            if is_valid(d) {
                best = best.min(d);
            }
            if is_valid(cap / d) {
                best = best.min(cap / d);
            }
        }
        d += 1;
    }
    Ok(best)
}
