//! Sharp constants bounding the `n`-th derivative of an analytic function on
//! the unit disk by the Hardy-space norm of its real part.
//!
//! The crate computes the best constant `C_{p,n}` in
//!
//! ```text
//! |f⁽ⁿ⁾(z)| ≤ C_{p,n} (1 − |z|²)^{−1/p−n} ‖Re(f − P)‖_{h^p}
//! ```
//!
//! by maximizing the kernel profile integral `F_q(β)` over `β ∈ [0, π/2]`,
//! validates the closed forms known for `q ∈ {1, 2, ∞}`, probes the
//! monotonicity conjecture for `F_q`, reproduces the high-precision
//! sine-power-sum asymptotics, and property-tests the inequality itself
//! against sampled analytic functions.

pub mod appendixb;
pub mod closed;
pub mod constants;
pub mod error;
pub mod exact;
pub mod harness;
pub mod kernel;
pub mod optimizer;
pub mod params;
pub mod precision;
pub mod quad;
pub mod real;

pub use error::{Error, Result};
pub use params::{Angle, Exponent, Params};
pub use precision::{BigReal, PrecisionCtx};
pub use quad::QuadResult;
