//! Coefficients of the convergent expansion
//!
//! ```text
//! g(x) = (1 + 1/x)^x = sum_{j>=0} c_j x^-j,   x > 1,
//! ```
//!
//! equivalently the Maclaurin coefficients of `f(z) = (1+z)^(1/z)`.
//!
//! - [`exact`]: the rationals `a_j = c_j / e` by recursion, and `c_j` at any
//!   precision.
//! - [`partition`]: the partition-sum oracle for `a_j`, partition counts and the
//!   Hardy-Ramanujan estimate.
//! - [`quadrature`]: `c_j` from a trapezoid-rule Cauchy integral.
//! - [`asymptotics`]: the residual `eta_j = c_j - (-1)^j (1 + 1/j)` and `R(z)`.
//! - [`series`]: `g(x)` directly and by partial sums; estimating `e`.
//! - [`par`]: rayon helpers with a sequential fallback.

pub mod asymptotics;
pub mod bignum;
pub mod error;
pub mod exact;
pub mod export;
pub mod par;
pub mod partition;
pub mod quadrature;
pub mod series;

pub use bignum::{BigComplex, BigReal};
pub use error::{Error, Result};
pub use exact::{d_weight, extend_table, CoefficientTable};
pub use rug::{Integer, Rational};
