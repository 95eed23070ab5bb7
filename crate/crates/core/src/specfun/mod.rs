//! Self-contained special functions: `K_nu` for complex order with
//! `Re z > 0`, the complex gamma function, and the small-z boundary
//! coefficients. No platform special-function libraries are used, only
//! elementary functions.

mod bessel;
mod gamma;

pub use bessel::{bessel_k, small_z_coefficients, SmallZCoefficients, MAX_ORDER};
pub use gamma::gamma;

/// Euler–Mascheroni constant, used by the logarithmic small-z branch
/// `K_0(z) ~ -ln(z/2) - gamma_E`.
pub const EULER_GAMMA: f64 = 0.577215664901532_9;
