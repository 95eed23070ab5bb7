//! Negative-energy point spectrum of sector-diagonal self-adjoint
//! extensions.
//!
//! A candidate eigenfunction at energy `E = -μ²` is `r^{1/2} K_ν(μ r)`;
//! matching its small-r coefficient ratio against the extension's
//! boundary ratio λ gives a closed-form condition:
//!
//! * real `ν ∈ (0,1)`: `ρ(μ) = (Γ(-ν)/Γ(ν)) (μ/2)^{2ν}`, a strictly
//!   monotone map onto the negative reals, so at most one state;
//! * `ν = 0`: `ρ(μ) = ln(μ/2) + γ_E`, one state for every finite λ;
//! * imaginary `ν = iσ`: `ρ(μ)` is a pure phase that advances with
//!   `ln μ`, producing the geometric tower `μ_n = μ_0 e^{-πn/σ}`.
//!
//! An independent shooting oracle integrates the radial equation from the
//! λ-determined data near the origin out to a Dirichlet wall and locates
//! eigenvalues by bisecting on the sign of the wall value.
//!
//! Phase convention for the tower anchor: `μ_0` is the largest solution
//! of `2σ ln(μ/2) - 2 arg Γ(iσ) ≡ arg λ (mod 2π)` with `μ_0 <= 1e4`, and
//! the enumeration stops below `μ = 1e-8`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extensions::BoundaryRatio;
use crate::flux::SectorChannel;
use crate::ode::{integrate, OdeOptions};
use crate::specfun::{gamma, EULER_GAMMA};

/// Upper anchor of the geometric-tower enumeration window.
const MU_MAX: f64 = 1e4;
/// Lower truncation of the tower enumeration.
const MU_MIN: f64 = 1e-8;
/// States shallower than this are discarded by the shooting oracle.
const E_FLOOR: f64 = 1e-6;
/// Imaginary-part slack for boundary ratios that must be real (real
/// order) or unimodular (imaginary order).
const RATIO_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedForm,
    Shooting,
}

/// One bound state of a sector-diagonal extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub m: i64,
    pub energy: f64,
    pub mu: f64,
    pub lambda_used: BoundaryRatio,
    pub method: SolveMethod,
}

impl BoundState {
    fn new(channel: &SectorChannel, mu: f64, lambda: BoundaryRatio, method: SolveMethod) -> Self {
        BoundState {
            m: channel.m,
            energy: -(mu * mu),
            mu,
            lambda_used: lambda,
            method,
        }
    }
}

/// The three boundary-condition regimes of a limit-circle sector.
enum SectorKind {
    /// Real order in (0, 1).
    Power(f64),
    /// Order zero (logarithmic pair).
    Log,
    /// Imaginary order `iσ`.
    Oscillatory(f64),
}

fn sector_kind(channel: &SectorChannel) -> Result<SectorKind> {
    if !channel.is_limit_circle() {
        return Err(Error::Domain(format!(
            "sector m={} is limit point (nu^2 = {}); it admits no boundary condition",
            channel.m, channel.nu_squared
        )));
    }
    if channel.is_log_branch() {
        Ok(SectorKind::Log)
    } else if channel.nu_squared > 0.0 {
        Ok(SectorKind::Power(channel.order.re))
    } else {
        Ok(SectorKind::Oscillatory(channel.order.im))
    }
}

/// Validated boundary-ratio value per regime.
enum LambdaKind {
    Friedrichs,
    Real(f64),
    Phase(f64),
}

/// Checks that λ lies on the sector's admissible von Neumann circle:
/// the extended real line for real or zero order, the unit circle for
/// imaginary order.
fn classify_lambda(kind: &SectorKind, lambda: &BoundaryRatio) -> Result<LambdaKind> {
    match (kind, lambda) {
        (SectorKind::Power(_) | SectorKind::Log, BoundaryRatio::Infinity) => {
            Ok(LambdaKind::Friedrichs)
        }
        (SectorKind::Power(_) | SectorKind::Log, BoundaryRatio::Finite(l)) => {
            if l.im.abs() > RATIO_TOL * (1.0 + l.norm()) {
                return Err(Error::InvalidBoundaryRatio(format!(
                    "{l} is not real; real-order boundary ratios lie on the extended real line"
                )));
            }
            Ok(LambdaKind::Real(l.re))
        }
        (SectorKind::Oscillatory(_), BoundaryRatio::Infinity) => {
            Err(Error::InvalidBoundaryRatio(
                "imaginary order admits no Friedrichs direction; ratios lie on the unit circle"
                    .into(),
            ))
        }
        (SectorKind::Oscillatory(_), BoundaryRatio::Finite(l)) => {
            if (l.norm() - 1.0).abs() > RATIO_TOL {
                return Err(Error::InvalidBoundaryRatio(format!(
                    "|{l}| != 1; imaginary-order boundary ratios lie on the unit circle"
                )));
            }
            Ok(LambdaKind::Phase(l.arg()))
        }
    }
}

/// Origin coefficient ratio of the candidate eigenfunction
/// `r^{1/2} K_ν(μ r)` for real order: `(Γ(-ν)/Γ(ν)) (μ/2)^{2ν}`.
pub fn eigenfunction_ratio(nu: f64, mu: f64) -> Result<f64> {
    let g_ratio = (gamma(Complex64::new(-nu, 0.0))? / gamma(Complex64::new(nu, 0.0))?).re;
    Ok(g_ratio * (0.5 * mu).powf(2.0 * nu))
}

/// Closed-form bound states of the extension with boundary ratio λ.
pub fn bound_states_closed_form(
    channel: &SectorChannel,
    lambda: &BoundaryRatio,
) -> Result<Vec<BoundState>> {
    let kind = sector_kind(channel)?;
    let value = classify_lambda(&kind, lambda)?;
    match (kind, value) {
        (_, LambdaKind::Friedrichs) => Ok(Vec::new()),
        (SectorKind::Power(nu), LambdaKind::Real(l)) => {
            if l >= 0.0 {
                // rho(mu) covers only the open negative ray.
                return Ok(Vec::new());
            }
            let g_ratio = (gamma(Complex64::new(nu, 0.0))? / gamma(Complex64::new(-nu, 0.0))?).re;
            let t = l * g_ratio;
            let mu = 2.0 * t.powf(0.5 / nu);
            Ok(vec![BoundState::new(channel, mu, *lambda, SolveMethod::ClosedForm)])
        }
        (SectorKind::Log, LambdaKind::Real(l)) => {
            let mu = 2.0 * (l - EULER_GAMMA).exp();
            Ok(vec![BoundState::new(channel, mu, *lambda, SolveMethod::ClosedForm)])
        }
        (SectorKind::Oscillatory(sigma), LambdaKind::Phase(phi)) => {
            let arg_gamma = gamma(Complex64::new(0.0, sigma))?.arg();
            // 2σ ln(μ/2) - 2 arg Γ(iσ) = φ + 2πk
            let two_pi = 2.0 * std::f64::consts::PI;
            let k_max =
                ((2.0 * sigma * (MU_MAX / 2.0).ln() - phi - 2.0 * arg_gamma) / two_pi).floor();
            let mut states = Vec::new();
            let mut k = k_max;
            loop {
                let mu = 2.0 * ((phi + 2.0 * arg_gamma + two_pi * k) / (2.0 * sigma)).exp();
                if mu <= MU_MIN {
                    break;
                }
                states.push(BoundState::new(channel, mu, *lambda, SolveMethod::ClosedForm));
                k -= 1.0;
            }
            Ok(states)
        }
        _ => unreachable!("lambda classification is regime-consistent"),
    }
}

/// Small-r coefficients `(A, B)` realizing the boundary ratio λ with a
/// real solution: `u = A r^{1/2-ν} + B r^{1/2+ν}` (suitably interpreted
/// in the log and oscillatory regimes).
fn initial_coefficients(kind: &SectorKind, value: &LambdaKind) -> (Complex64, Complex64) {
    match (kind, value) {
        (_, LambdaKind::Friedrichs) => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        (_, LambdaKind::Real(l)) => (Complex64::new(1.0, 0.0), Complex64::new(*l, 0.0)),
        // B = conj(A) with B/A = λ keeps the oscillatory solution real.
        (_, LambdaKind::Phase(phi)) => {
            let a = Complex64::from_polar(1.0, -0.5 * phi);
            (a, a.conj())
        }
    }
}

/// Frobenius series data `u(r), u'(r)` at small `r` for the solution of
/// `-u'' + (ν²-1/4)/r² u = -μ² u` with prescribed `(A, B)`.
fn series_initial_data(
    kind: &SectorKind,
    coeffs: (Complex64, Complex64),
    mu: f64,
    r: f64,
) -> (f64, f64) {
    let (a, b) = coeffs;
    let mu2 = mu * mu;
    let mut value = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    match kind {
        SectorKind::Power(_) | SectorKind::Oscillatory(_) => {
            let nu = match kind {
                SectorKind::Power(n) => Complex64::new(*n, 0.0),
                SectorKind::Oscillatory(s) => Complex64::new(0.0, *s),
                SectorKind::Log => unreachable!(),
            };
            for (coef, sgn) in [(a, -1.0), (b, 1.0)] {
                let exponent = 0.5 + sgn * nu;
                let mut term = coef * (exponent * r.ln()).exp();
                for k in 0..=3 {
                    let e_k = exponent + 2.0 * k as f64;
                    value += term;
                    slope += term * e_k / r;
                    let kk = (k + 1) as f64;
                    term *= mu2 * r * r / (4.0 * kk * (kk + sgn * nu));
                }
            }
        }
        SectorKind::Log => {
            // u1 = sqrt(r) Σ t_k with t_k = (μ²r²/4)^k / (k!)²;
            // u2 = u1 ln r - sqrt(r) Σ t_k H_k  (H_k harmonic numbers).
            let sqrt_r = r.sqrt();
            let lnr = r.ln();
            let (mut u1, mut du1) = (0.0f64, 0.0f64);
            let (mut u2c, mut du2c) = (0.0f64, 0.0f64);
            let mut t_k = 1.0;
            let mut h_k = 0.0;
            for k in 0..=3 {
                let e_k = 0.5 + 2.0 * k as f64;
                let p = t_k * sqrt_r;
                u1 += p;
                du1 += p * e_k / r;
                u2c -= p * h_k;
                du2c -= p * h_k * e_k / r;
                let kk = (k + 1) as f64;
                t_k *= mu2 * r * r / (4.0 * kk * kk);
                h_k += 1.0 / kk;
            }
            let u2 = u1 * lnr + u2c;
            let du2 = du1 * lnr + u1 / r + du2c;
            value = a * u2 + b * u1;
            slope = a * du2 + b * du1;
        }
    }
    (value.re, slope.re)
}

/// Wall value `u(wall)` of the λ-initialized solution at `E = -μ²`,
/// integrated with periodic renormalization (the sign is what matters).
fn wall_value(channel: &SectorChannel, kind: &SectorKind, value: &LambdaKind, mu: f64, wall: f64, rtol: f64) -> Result<f64> {
    let coeffs = initial_coefficients(kind, value);
    // Keep the matching radius as large as the series allows: integration
    // errors injected at radius r contaminate the subdominant coefficient
    // with leverage r^{-2 Re nu}, so starting deep in the power region
    // would erase the boundary condition for orders near one.
    let r_min = 0.05f64.min(0.1 / mu).min(0.5 * wall);
    let (u0, du0) = series_initial_data(kind, coeffs, mu, r_min);
    let c = channel.coefficient;
    let mu2 = mu * mu;
    let rhs = move |r: f64, y: &[f64; 2]| [y[1], (c / (r * r) + mu2) * y[0]];
    let opts = OdeOptions {
        rtol: (0.01 * rtol).max(5e-14),
        atol: 0.0,
        err_components: 2,
        max_steps: 20_000_000,
    };
    let mut y = [u0, du0];
    // Segment so each leg grows at most ~e^80 before renormalizing.
    let segments = (1 + (mu * wall / 80.0) as usize).min(4000);
    let mut r = r_min;
    for i in 0..segments {
        let r_next = if i + 1 == segments {
            wall
        } else {
            r_min + (wall - r_min) * (i + 1) as f64 / segments as f64
        };
        y = integrate(&rhs, r, r_next, y, &opts, &|_| f64::INFINITY, &mut |_, _| {})?;
        r = r_next;
        let scale = y[0].abs().max(y[1].abs() / mu.max(1.0));
        if scale > 1e50 {
            y[0] /= scale;
            y[1] /= scale;
        }
    }
    Ok(y[0])
}

/// Independent oracle: locates bound states by integrating the sector
/// equation from λ-determined small-r data out to a Dirichlet wall and
/// bisecting on the sign of the wall value over a logarithmic μ grid
/// spanning `μ · wall ∈ [20, 2500]`. States are returned shallowest
/// first, at most `max_count`, ignoring `|E| <= 1e-6`.
pub fn shooting_eigenvalues(
    channel: &SectorChannel,
    lambda: &BoundaryRatio,
    wall_radius: f64,
    max_count: usize,
    tolerance: f64,
) -> Result<Vec<BoundState>> {
    if !(wall_radius > 0.0) || !wall_radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "wall radius must be positive and finite, got {wall_radius}"
        )));
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let kind = sector_kind(channel)?;
    let value = classify_lambda(&kind, lambda)?;

    let mu_lo = 20.0 / wall_radius;
    let mu_hi = 2500.0 / wall_radius;
    let decades = (mu_hi / mu_lo).log10();
    let n_grid = (24.0 * decades).ceil() as usize + 1;

    let w_at = |mu: f64| wall_value(channel, &kind, &value, mu, wall_radius, tolerance);

    let mut states = Vec::new();
    let mut prev_mu = mu_lo;
    let mut prev_w = w_at(prev_mu)?;
    for j in 1..=n_grid {
        let mu = mu_lo * (mu_hi / mu_lo).powf(j as f64 / n_grid as f64);
        let mut w = w_at(mu)?;
        if w == 0.0 {
            w = f64::MIN_POSITIVE;
        }
        if prev_w * w < 0.0 {
            // Bisect on log μ.
            let (mut a, mut b) = (prev_mu, mu);
            let mut wa = prev_w;
            for _ in 0..80 {
                let mid = (a * b).sqrt();
                let wm = w_at(mid)?;
                if wm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if wm.signum() == wa.signum() {
                    a = mid;
                    wa = wm;
                } else {
                    b = mid;
                }
                if (b - a) < 1e-12 * b {
                    break;
                }
            }
            let mu_star = (a * b).sqrt();
            if mu_star * mu_star > E_FLOOR {
                states.push(BoundState::new(channel, mu_star, *lambda, SolveMethod::Shooting));
                if states.len() >= max_count {
                    return Ok(states);
                }
            }
        }
        prev_mu = mu;
        prev_w = w;
    }
    Ok(states)
}
