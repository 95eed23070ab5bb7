//! Physical parameters and the angular-momentum reduction of the planar
//! flux-line Hamiltonian `(i∇ + A_κ)² + α/r²` on the punctured plane.
//!
//! After separating the angle variable and applying the unitary map
//! `W f(r) = r^{1/2} f(r)`, every quantity in this crate lives on the
//! half-line in plain `L²((0,∞), dr)`: sector `m` carries the radial
//! operator `-d²/dr² + [(m-κ)² + α - 1/4]/r²`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for deciding membership in measure-zero flux sets (integers,
/// half-integers) and for flagging boundary-proximate counting inputs.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Physical parameters of the model, all dimensionless: scaled magnetic
/// flux `kappa`, inverse-square coupling `alpha`, Coulomb coupling `beta`
/// (zero in the plain model).
///
/// Both signs of `alpha` are meaningful: `alpha >= 1` makes the operator
/// essentially self-adjoint, while sufficiently negative `alpha` drives
/// sector orders imaginary (over-attractive regime).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxConfig {
    pub kappa: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl FluxConfig {
    pub fn new(kappa: f64, alpha: f64) -> Result<Self> {
        Self::with_beta(kappa, alpha, 0.0)
    }

    pub fn with_beta(kappa: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !kappa.is_finite() || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "flux parameters must be finite, got kappa={kappa}, alpha={alpha}, beta={beta}"
            )));
        }
        // Keep the sector bookkeeping inside exact integer arithmetic:
        // |kappa| below the f64 integer range, and a coupling floor so the
        // contributing set stays enumerable.
        if kappa.abs() > 1e15 {
            return Err(Error::InvalidParameter(format!(
                "|kappa| = {} exceeds the supported range 1e15",
                kappa.abs()
            )));
        }
        if alpha < -1e9 {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} below the supported floor -1e9"
            )));
        }
        Ok(FluxConfig { kappa, alpha, beta })
    }

    /// Half-width `sqrt(1 - alpha)` of the contributing-sector interval,
    /// or `None` for `alpha >= 1`.
    pub fn sector_half_width(&self) -> Option<f64> {
        (self.alpha < 1.0).then(|| (1.0 - self.alpha).sqrt())
    }
}

/// One angular-momentum sector of the reduced Hamiltonian.
///
/// `nu_squared = (m-κ)² + α` and `coefficient = nu_squared - 1/4` is the
/// `1/r²` coefficient of the radial operator. `order` is the principal
/// square root of `nu_squared`: real nonnegative when `nu_squared >= 0`,
/// positive imaginary otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorChannel {
    pub m: i64,
    pub nu_squared: f64,
    pub coefficient: f64,
    pub order: Complex64,
}

impl SectorChannel {
    /// Closed-form endpoint rule at the origin: limit circle iff `nu² < 1`.
    pub fn is_limit_circle(&self) -> bool {
        self.nu_squared < 1.0
    }

    /// True when the order vanishes and the small-r expansion needs the
    /// logarithmic pair `(r^{1/2} ln r, r^{1/2})`.
    pub fn is_log_branch(&self) -> bool {
        self.nu_squared.abs() < 1e-18
    }
}

/// Builds the channel of sector `m` for the given parameters.
pub fn sector_channel(config: &FluxConfig, m: i64) -> SectorChannel {
    let d = m as f64 - config.kappa;
    let nu_squared = d * d + config.alpha;
    let order = if nu_squared >= 0.0 {
        Complex64::new(nu_squared.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-nu_squared).sqrt())
    };
    SectorChannel {
        m,
        nu_squared,
        coefficient: nu_squared - 0.25,
        order,
    }
}

/// Smallest integer strictly greater than `x`.
fn strict_ceil(x: f64) -> i64 {
    let c = x.ceil();
    if c == x {
        c as i64 + 1
    } else {
        c as i64
    }
}

/// Largest integer strictly smaller than `x`.
fn strict_floor(x: f64) -> i64 {
    let f = x.floor();
    if f == x {
        f as i64 - 1
    } else {
        f as i64
    }
}

/// The finite set Γ of sectors with `|m - κ| < sqrt(1 - α)` (open
/// inequality), each as a channel, sorted by `m`. Empty for `alpha >= 1`.
pub fn contributing_sectors(config: &FluxConfig) -> Vec<SectorChannel> {
    let Some(s) = config.sector_half_width() else {
        return Vec::new();
    };
    let lo = strict_ceil(config.kappa - s);
    let hi = strict_floor(config.kappa + s);
    (lo..=hi).map(|m| sector_channel(config, m)).collect()
}

/// Distance from the counting interval's endpoints `κ ± sqrt(1-α)` to the
/// nearest integer; the classification is numerically unreliable when this
/// is below [`BOUNDARY_TOL`]. Returns `f64::INFINITY` for `alpha >= 1`.
pub fn boundary_proximity(config: &FluxConfig) -> f64 {
    let Some(s) = config.sector_half_width() else {
        return f64::INFINITY;
    };
    let lo = config.kappa - s;
    let hi = config.kappa + s;
    let d_lo = (lo - lo.round()).abs();
    let d_hi = (hi - hi.round()).abs();
    d_lo.min(d_hi)
}

/// Reduces the flux to its representative in `(-1/2, 1/2]`, returning
/// `(kappa_reduced, shift)` with `kappa = kappa_reduced + shift`.
///
/// Deficiency indices are invariant under integer flux shifts, so the
/// representative carries all the counting information.
pub fn gauge_reduce(kappa: f64) -> (f64, i64) {
    let shift = (kappa - 0.5).ceil();
    (kappa - shift, shift as i64)
}

/// Flux induced on a polarizable neutral atom by a charged wire in a
/// uniform axial magnetic field: `κ = γϱ/(2πc)` for polarizability `γ`,
/// charge density `ϱ` and speed of light `c`.
pub fn flux_from_polarizability(gamma: f64, varrho: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "speed of light must be positive and finite, got {c}"
        )));
    }
    if !gamma.is_finite() || !varrho.is_finite() {
        return Err(Error::InvalidParameter(
            "polarizability and charge density must be finite".into(),
        ));
    }
    Ok(gamma * varrho / (2.0 * std::f64::consts::PI * c))
}
