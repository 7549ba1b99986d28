//! The bound engine: exact main-term constants for shifted theta series,
//! certified cusp-coefficient bounds, the crossover constants where the main
//! term provably dominates, and the assembled global bound over the whole
//! depth-4 escalation layer.
//!
//! Layering policy: everything that can be exact is exact (`Rational`);
//! every transcendental step (powers of π, real exponents) is a directed
//! [`RigorousInterval`], and every inequality is checked against the
//! conservative endpoint.

pub mod cusp;
pub mod eisenstein;
pub mod theorem;

pub use cusp::{
    cusp_coeff_bound, cusp_coeff_constant, cusp_divisor_sum, cusp_norm_sq_bound,
    cusp_norm_sq_bound_display, cusp_norm_sq_bound_uniform, cusp_prefactor,
    cusp_prefactor_uniform, divisor_sum_factor, divisor_sum_factor_max, euler_minus_product,
    euler_plus_product, pinned_uniform_constant, uniform_coeff_constant,
};
pub use eisenstein::{
    eisenstein_c_a, eisenstein_cdelta, eisenstein_cdelta_scan, eisenstein_cl, eisenstein_lower,
    eisenstein_p0, gamma_min_scan, EisensteinEvaluator,
};
pub use theorem::{
    assemble_theorem, bound_report, crossover, crossover_for_constant, format_sig4_down,
    format_sig4_up, report_csv, report_json, special_case_1133, SpecialCaseReport, TheoremReport,
};

use serde::Serialize;

use crate::arith::RigorousInterval;
use crate::{invalid, rat, Rational, Result};

/// One row of the coefficient-bound table: `|B(h)| ≤ constant · h^exponent ·
/// N^(1+2δ) · (stuff independent of the row)`.  Only the three certified
/// rows exist; [`BoundProfile::three_fifths`] is the default used by the
/// headline bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundProfile {
    name: &'static str,
    exponent: Rational,
    delta: Rational,
    constant: Rational,
}

impl BoundProfile {
    /// `h^{17/30}` row with constant `4.58·10^128` and `δ = 10^{-6}`.
    pub fn seventeen_thirtieths() -> Self {
        BoundProfile {
            name: "17/30",
            exponent: rat(17, 30),
            delta: rat(1, 1_000_000),
            constant: rat(458, 1) * big_ten_pow(126),
        }
    }

    /// `h^{4/7}` row with constant `4.39·10^79` and `δ = 10^{-6}`.
    pub fn four_sevenths() -> Self {
        BoundProfile {
            name: "4/7",
            exponent: rat(4, 7),
            delta: rat(1, 1_000_000),
            constant: rat(439, 1) * big_ten_pow(77),
        }
    }

    /// `h^{3/5}` row with constant `6.95·10^18` and `δ = 1.25·10^{-6}`
    /// (so the level factor is `N^{1+2.5·10^{-6}}`).  This is the row all
    /// headline constants are built from.
    pub fn three_fifths() -> Self {
        BoundProfile {
            name: "3/5",
            exponent: rat(3, 5),
            delta: rat(1, 800_000),
            constant: rat(695, 1) * big_ten_pow(16),
        }
    }

    /// Look a profile up by its display name (`"17/30"`, `"4/7"`, `"3/5"`).
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "17/30" => Ok(Self::seventeen_thirtieths()),
            "4/7" => Ok(Self::four_sevenths()),
            "3/5" => Ok(Self::three_fifths()),
            other => invalid(format!(
                "unknown bound profile {other:?}; available: 17/30, 4/7, 3/5"
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Exponent on the argument `h`.
    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// Leading constant of the row (exactly representable).
    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// Exponent on the level-sized quantity `400·lcm`: `1 + 2δ`.
    pub fn level_exponent(&self) -> Rational {
        rat(1, 1) + rat(2, 1) * &self.delta
    }
}

pub(crate) fn big_ten_pow(e: u32) -> Rational {
    Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(10), e as usize))
}

/// Lower bound for the product of bad-prime local factors.
///
/// The isotropic case is a plain positive rational, constant in the
/// argument.  At an anisotropic prime the factor necessarily decays, but in
/// a controlled way: `Product(γ) ≥ c · p^{-R}` where `R = ord_p` of the
/// argument; `c` here is the verified uniform constant (minimum of
/// `γ · p^R` over the scanned range of `R`, stable beyond it).
#[derive(Debug, Clone, PartialEq)]
pub enum CDelta {
    Product(Rational),
    AnisotropicDecay { p: u64, c: Rational },
}

impl CDelta {
    pub fn is_anisotropic(&self) -> bool {
        matches!(self, CDelta::AnisotropicDecay { .. })
    }

    /// The constant part: the product itself, or the decay constant `c`.
    pub fn constant(&self) -> &Rational {
        match self {
            CDelta::Product(v) => v,
            CDelta::AnisotropicDecay { c, .. } => c,
        }
    }
}

/// Everything the engine certifies about one coefficient tuple.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub coeffs: Vec<u64>,
    /// Constant offset of the completed argument: `h = 40 n + h0`.
    pub h0: u64,
    /// Exact main-term constant from the L-value and the places 2, 5.
    #[serde(serialize_with = "ser_rat")]
    pub c_l: Rational,
    /// Lower bound for the remaining bad-prime factors (or decay form).
    #[serde(serialize_with = "ser_cdelta")]
    pub c_delta: CDelta,
    /// `c_a = C_L · C_Δ / 5000`, exact.
    #[serde(serialize_with = "ser_rat")]
    pub c_a: Rational,
    /// Certified upper enclosure of the squared Petersson-norm bound.
    #[serde(serialize_with = "ser_interval")]
    pub norm_sq_bound: RigorousInterval,
    /// Coefficient-bound constant used for the crossover (the pinned
    /// uniform one, valid for every tuple in the depth-4 layer).
    #[serde(serialize_with = "ser_interval")]
    pub d_a: RigorousInterval,
    /// Crossover: past this argument the main term dominates.  For the
    /// anisotropic tuple this is the dedicated special-case bound.
    #[serde(serialize_with = "ser_interval")]
    pub crossover: RigorousInterval,
    pub anisotropic: bool,
}

pub(crate) fn ser_rat<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

pub(crate) fn ser_cdelta<S: serde::Serializer>(
    c: &CDelta,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match c {
        CDelta::Product(v) => ser_rat(v, s),
        CDelta::AnisotropicDecay { p, .. } => s.serialize_str(&format!("anisotropic:p={p}")),
    }
}

pub(crate) fn ser_interval<S: serde::Serializer>(
    v: &RigorousInterval,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("interval", 2)?;
    st.serialize_field("lo", &theorem::format_sig4_down(v.lo()))?;
    st.serialize_field("hi", &theorem::format_sig4_up(v.hi()))?;
    st.end()
}

/// The seven depth-4 families `(prefix, k_min..=k_max)` of the escalation
/// layer the bound constants were maximized over.  `k` ranges from the last
/// prefix entry to the prefix's truant, inclusive.
pub const DEPTH4_FAMILIES: [([u64; 3], u64, u64); 7] = [
    ([1, 1, 1], 1, 10),
    ([1, 1, 2], 2, 23),
    ([1, 1, 3], 3, 6),
    ([1, 2, 2], 2, 19),
    ([1, 2, 3], 3, 31),
    ([1, 2, 4], 4, 131),
    ([1, 2, 5], 5, 10),
];

/// All 217 depth-4 tuples, lexicographically ordered.
pub fn depth4_nodes() -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (prefix, lo, hi) in DEPTH4_FAMILIES {
        for k in lo..=hi {
            out.push(vec![prefix[0], prefix[1], prefix[2], k]);
        }
    }
    out
}

/// Whether `coeffs` is one of the depth-4 tuples.  Bound constants that were
/// maximized over that finite set are only valid on it, so several
/// operations reject anything outside.
pub fn in_depth4_set(coeffs: &[u64]) -> bool {
    if coeffs.len() != 4 {
        return false;
    }
    DEPTH4_FAMILIES
        .iter()
        .any(|(p, lo, hi)| coeffs[..3] == p[..] && (*lo..=*hi).contains(&coeffs[3]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_dec;

    #[test]
    fn profile_rows_are_exact() {
        let p = BoundProfile::three_fifths();
        assert_eq!(p.exponent(), &rat(3, 5));
        assert_eq!(p.delta(), &rat_dec("1.25e-6"));
        assert_eq!(p.constant(), &rat_dec("6.95e18"));
        assert_eq!(p.level_exponent(), rat_dec("1.0000025"));
        let q = BoundProfile::four_sevenths();
        assert_eq!(q.constant(), &rat_dec("4.39e79"));
        assert_eq!(q.delta(), &rat_dec("1e-6"));
        let r = BoundProfile::seventeen_thirtieths();
        assert_eq!(r.constant(), &rat_dec("4.58e128"));
        assert_eq!(r.exponent(), &rat(17, 30));
        assert_eq!(BoundProfile::by_name("3/5").unwrap(), p);
        assert_eq!(BoundProfile::by_name("4/7").unwrap(), q);
        assert_eq!(BoundProfile::by_name("17/30").unwrap(), r);
        assert!(BoundProfile::by_name("2/3").is_err());
    }

    #[test]
    fn depth4_family_table_has_217_nodes() {
        let nodes = depth4_nodes();
        assert_eq!(nodes.len(), 217);
        // lexicographic and duplicate-free
        for w in nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(in_depth4_set(&[1, 1, 1, 1]));
        assert!(in_depth4_set(&[1, 2, 4, 131]));
        assert!(in_depth4_set(&[1, 1, 3, 3]));
        assert!(!in_depth4_set(&[1, 2, 4, 132]));
        assert!(!in_depth4_set(&[1, 1, 3, 2]));
        assert!(!in_depth4_set(&[1, 3, 3, 3]));
        assert!(!in_depth4_set(&[1, 1, 1]));
    }

    #[test]
    fn cdelta_accessors() {
        let p = CDelta::Product(rat(2, 3));
        assert!(!p.is_anisotropic());
        assert_eq!(p.constant(), &rat(2, 3));
        let d = CDelta::AnisotropicDecay { p: 3, c: rat(3, 2) };
        assert!(d.is_anisotropic());
        assert_eq!(d.constant(), &rat(3, 2));
    }
}
