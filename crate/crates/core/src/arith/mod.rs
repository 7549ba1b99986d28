//! Exact rational and rigorous interval arithmetic plus elementary
//! number-theoretic utilities: totients and divisor functions, congruence
//! subgroup indices, cusp counts, exponential-sum and divisor-count bounds,
//! Bernoulli numbers, Kronecker symbols, and exact quadratic `L`-values.

pub mod expsum;
pub mod interval;
pub mod lvalue;
pub mod numthy;
pub mod sigma0;

pub use expsum::{delta_n, exp_sum_bound};
pub use interval::{zeta_interval, RigorousInterval};
pub use lvalue::{b2_chi, l_value_exact, KroneckerCharacter};
pub use numthy::{
    cusp_count, divisors, euler_phi, factor, fundamental_discriminant, index_gamma,
    index_gamma0, index_gamma01, kronecker, lcm_all, legendre, nonresidue, prime_divisors,
    sigma0, sigma1, v_p,
};
pub use sigma0::sigma0_bound_constant;
