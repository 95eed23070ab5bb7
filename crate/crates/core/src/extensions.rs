//! Deficiency elements and the von Neumann parameterization of the
//! self-adjoint extensions.
//!
//! The deficiency elements of sector `m` are
//! `ψ_±(r) = r^{1/2} e^{νπi} K_ν(e^{∓iπ/4} r)`; they are square-integrable
//! exactly when the sector is limit circle (`Re ν < 1`). A `d × d` unitary
//! between the two deficiency subspaces fixes one self-adjoint extension;
//! when the unitary is diagonal, each sector contributes the scalar
//! boundary condition `B/A = λ(θ)` on the small-r coefficients of
//! `A r^{1/2-ν} + B r^{1/2+ν}` (log pair for `ν = 0`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::deficiency::DeficiencyReport;
use crate::error::{Error, Result};
use crate::flux::{sector_channel, FluxConfig, SectorChannel};
use crate::specfun::{bessel_k, gamma, small_z_coefficients, EULER_GAMMA};

const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;

/// Which deficiency element: `Plus` carries the rotated argument
/// `e^{-iπ/4} r` (an eigenvector of the adjoint with eigenvalue `+i`),
/// `Minus` the conjugate rotation (eigenvalue `-i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The argument rotation `e^{∓iπ/4}`.
    pub fn rotation(self) -> Complex64 {
        match self {
            Sign::Plus => Complex64::from_polar(1.0, -FRAC_PI_4),
            Sign::Minus => Complex64::from_polar(1.0, FRAC_PI_4),
        }
    }

    /// Principal logarithm of the rotation, `∓iπ/4`.
    fn log_rotation(self) -> Complex64 {
        match self {
            Sign::Plus => Complex64::new(0.0, -FRAC_PI_4),
            Sign::Minus => Complex64::new(0.0, FRAC_PI_4),
        }
    }

    /// Eigenvalue of the adjoint on this element, `±i`.
    pub fn eigenvalue(self) -> Complex64 {
        match self {
            Sign::Plus => Complex64::i(),
            Sign::Minus => -Complex64::i(),
        }
    }
}

/// Small-r boundary data of a radial function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryData {
    /// `A r^{1/2-ν} + B r^{1/2+ν}` (non-integer order).
    PowerPair { a: Complex64, b: Complex64 },
    /// `r^{1/2} (a ln r + b)` (order zero).
    LogPair { a: Complex64, b: Complex64 },
    /// Leading singular coefficient only (integer order `ν >= 1`; these
    /// sectors are limit point and carry no boundary condition).
    LeadingOnly { a: Complex64 },
}

/// L² norm of a deficiency element over `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum L2Norm {
    Finite(f64),
    Infinite,
}

impl L2Norm {
    pub fn is_finite(&self) -> bool {
        matches!(self, L2Norm::Finite(_))
    }
}

/// One deficiency element `ψ_±` of a sector.
#[derive(Debug, Clone, PartialEq)]
pub struct DeficiencyElement {
    pub channel: SectorChannel,
    pub sign: Sign,
    pub l2_norm: L2Norm,
    pub boundary: BoundaryData,
}

/// Boundary data of `ψ_sign` in the channel, without norm computation.
pub(crate) fn boundary_data(channel: &SectorChannel, sign: Sign) -> Result<BoundaryData> {
    let nu = channel.order;
    if channel.is_log_branch() {
        // K_0(z) ~ -ln(z/2) - gamma_E, so with z = c r:
        // psi ~ r^{1/2} (-ln r - ln c + ln 2 - gamma_E).
        let b = Complex64::new(std::f64::consts::LN_2 - EULER_GAMMA, 0.0) - sign.log_rotation();
        return Ok(BoundaryData::LogPair {
            a: Complex64::new(-1.0, 0.0),
            b,
        });
    }
    let phase = (nu * Complex64::new(0.0, std::f64::consts::PI)).exp();
    if nu.im == 0.0 && (nu.re - nu.re.round()).abs() < 1e-9 && nu.re >= 0.5 {
        // Integer order >= 1: only the leading power coefficient is defined.
        let a_coef = gamma(nu)? * ((nu - 1.0) * std::f64::consts::LN_2).exp();
        let a = phase * a_coef * (-nu * sign.log_rotation()).exp();
        return Ok(BoundaryData::LeadingOnly { a });
    }
    let sz = small_z_coefficients(nu)?;
    let a = phase * sz.a_coef * (-nu * sign.log_rotation()).exp();
    let b = phase * sz.b_coef * (nu * sign.log_rotation()).exp();
    Ok(BoundaryData::PowerPair { a, b })
}

/// Builds `ψ_±` for the channel: evaluation data, boundary coefficients,
/// and its L² norm (infinite exactly on limit-point channels).
pub fn deficiency_element(channel: &SectorChannel, sign: Sign) -> Result<DeficiencyElement> {
    let boundary = boundary_data(channel, sign)?;
    let mut element = DeficiencyElement {
        channel: *channel,
        sign,
        l2_norm: L2Norm::Infinite,
        boundary,
    };
    element.l2_norm = compute_l2_norm(&element, 1e-10)?;
    Ok(element)
}

impl DeficiencyElement {
    /// Evaluates `r^{1/2} e^{νπi} K_ν(e^{∓iπ/4} r)`.
    pub fn evaluate(&self, r: f64) -> Result<Complex64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radial point must be positive, got {r}")));
        }
        let nu = self.channel.order;
        let phase = (nu * Complex64::new(0.0, std::f64::consts::PI)).exp();
        Ok(r.sqrt() * phase * bessel_k(nu, self.sign.rotation() * r)?)
    }

    /// Evaluates the small-r boundary form at `r`.
    pub fn boundary_approx(&self, r: f64) -> Complex64 {
        let nu = self.channel.order;
        let sqrt_r = Complex64::new(r.sqrt(), 0.0);
        match self.boundary {
            BoundaryData::PowerPair { a, b } => {
                let lr = Complex64::new(r.ln(), 0.0);
                a * ((0.5 - nu) * lr).exp() + b * ((0.5 + nu) * lr).exp()
            }
            BoundaryData::LogPair { a, b } => sqrt_r * (a * r.ln() + b),
            BoundaryData::LeadingOnly { a } => {
                let lr = Complex64::new(r.ln(), 0.0);
                a * ((0.5 - nu) * lr).exp()
            }
        }
    }
}

/// Adaptive Simpson on one panel.
fn simpson_panel(
    f: &mut impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || depth >= 28 {
        if depth >= 28 && err.abs() > 15.0 * tol {
            return Err(Error::Accuracy {
                achieved: err.abs(),
                requested: tol,
            });
        }
        return Ok(left + right + err / 15.0);
    }
    Ok(simpson_panel(f, a, m, fa, flm, fm, 0.5 * tol, depth + 1)?
        + simpson_panel(f, m, b, fm, frm, fb, 0.5 * tol, depth + 1)?)
}

fn adaptive_simpson(
    f: &mut impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    let fa = f(a)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let fb = f(b)?;
    simpson_panel(f, a, b, fa, fm, fb, tol, 0)
}

/// L² norm with explicit quadrature range; `compute_l2_norm` uses
/// `[1e-5, 35]`, and widening the range perturbs a finite result far
/// below the tolerance (exponential decay of `K`).
pub fn compute_l2_norm_on(
    element: &DeficiencyElement,
    tolerance: f64,
    r_lo: f64,
    r_hi: f64,
) -> Result<L2Norm> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let nu = element.channel.order;
    if nu.im == 0.0 && nu.re >= 1.0 {
        return Ok(L2Norm::Infinite);
    }

    // Near-origin tail: the boundary form is integrated in closed form.
    let tail0 = match element.boundary {
        BoundaryData::LeadingOnly { .. } => return Ok(L2Norm::Infinite),
        BoundaryData::PowerPair { a, b } => {
            let two_nu_re = 2.0 * nu.re;
            if two_nu_re >= 2.0 {
                return Ok(L2Norm::Infinite);
            }
            // |A|² ε^{2-2Re ν}/(2-2Re ν) + |B|² ε^{2+2Re ν}/(2+2Re ν)
            //   + 2 Re[A conj(B) ε^{2-2i Im ν}/(2-2i Im ν)].
            let t1 = a.norm_sqr() * r_lo.powf(2.0 - two_nu_re) / (2.0 - two_nu_re);
            let t2 = b.norm_sqr() * r_lo.powf(2.0 + two_nu_re) / (2.0 + two_nu_re);
            let w = Complex64::new(2.0, -2.0 * nu.im);
            let cross = 2.0 * (a * b.conj() * (w * r_lo.ln()).exp() / w).re;
            t1 + t2 + cross
        }
        BoundaryData::LogPair { a, b } => {
            let ln_e = r_lo.ln();
            let half_e2 = 0.5 * r_lo * r_lo;
            a.norm_sqr() * half_e2 * (ln_e * ln_e - ln_e + 0.5)
                + 2.0 * (a * b.conj()).re * half_e2 * (ln_e - 0.5)
                + b.norm_sqr() * half_e2
        }
    };

    // Quadrature core on logarithmically graded panels. The requested
    // tolerance is relative; a coarse pass sets the absolute budget.
    let mut f = |r: f64| -> Result<f64> { Ok(element.evaluate(r)?.norm_sqr()) };
    let mut breaks = vec![r_lo];
    let mut x = r_lo;
    while x < 1.0_f64.min(r_hi) {
        x = (x * 10.0).min(1.0_f64.min(r_hi));
        breaks.push(x);
    }
    while x < r_hi {
        x = (x * 3.0).min(r_hi);
        breaks.push(x);
    }
    let mut coarse = tail0.abs();
    for w in breaks.windows(2) {
        let m = 0.5 * (w[0] + w[1]);
        coarse += (w[1] - w[0]) / 6.0 * (f(w[0])? + 4.0 * f(m)? + f(w[1])?);
    }
    let mut core = 0.0;
    let panel_tol = tolerance * coarse.max(f64::MIN_POSITIVE) / breaks.len() as f64;
    for w in breaks.windows(2) {
        core += adaptive_simpson(&mut f, w[0], w[1], panel_tol * 0.5)?;
    }

    // Exponential envelope beyond r_hi: |psi(r)| ~ |psi(r_hi)| e^{-(r-r_hi)/sqrt2}.
    let tail_inf = element.evaluate(r_hi)?.norm_sqr() / std::f64::consts::SQRT_2;

    Ok(L2Norm::Finite(tail0 + core + tail_inf))
}

/// Adaptive quadrature of `|ψ|²` plus analytic tail corrections at both
/// ends; `Infinite` when the origin exponent makes the tail divergent.
pub fn compute_l2_norm(element: &DeficiencyElement, tolerance: f64) -> Result<L2Norm> {
    compute_l2_norm_on(element, tolerance, 1e-5, 35.0)
}

/// Boundary ratio `B/A`; the Friedrichs direction is the point at
/// infinity of the von Neumann circle, not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryRatio {
    Finite(Complex64),
    Infinity,
}

impl std::fmt::Display for BoundaryRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryRatio::Finite(v) => write!(f, "{v}"),
            BoundaryRatio::Infinity => f.write_str("inf"),
        }
    }
}

/// Boundary ratio of the extension `ψ_+ - e^{iθ} ψ_-` in a limit-circle
/// sector: `λ(θ) = (B_+ - e^{iθ} B_-) / (A_+ - e^{iθ} A_-)`. Every
/// function in the extension's domain satisfies `B/A = λ(θ)` at the
/// origin. Real orders give a real λ; imaginary orders give `|λ| = 1`.
pub fn boundary_ratio(channel: &SectorChannel, theta: f64) -> Result<BoundaryRatio> {
    if !channel.is_limit_circle() {
        return Err(Error::Domain(format!(
            "sector m={} is limit point (nu^2 = {}); no boundary condition applies",
            channel.m, channel.nu_squared
        )));
    }
    let plus = boundary_data(channel, Sign::Plus)?;
    let minus = boundary_data(channel, Sign::Minus)?;
    let w = Complex64::from_polar(1.0, theta);
    let (num, den) = match (plus, minus) {
        (
            BoundaryData::PowerPair { a: ap, b: bp },
            BoundaryData::PowerPair { a: am, b: bm },
        )
        | (
            BoundaryData::LogPair { a: ap, b: bp },
            BoundaryData::LogPair { a: am, b: bm },
        ) => (bp - w * bm, ap - w * am),
        _ => {
            return Err(Error::Domain(
                "mismatched boundary branches in one sector".into(),
            ))
        }
    };
    let scale = num.norm().max(den.norm()).max(1e-300);
    if den.norm() <= 1e-13 * scale {
        return Ok(BoundaryRatio::Infinity);
    }
    Ok(BoundaryRatio::Finite(num / den))
}

/// One self-adjoint extension: a `d × d` unitary between the deficiency
/// subspaces, `d = n_±`, over the sorted sector list Γ.
///
/// Domain elements have the form `v + ψ_+ - U ψ_+` with `v` in the
/// closure domain of the minimal operator; the closure part is opaque
/// here (no graph-norm machinery), since the boundary data `(A, B)` of
/// the deficiency combination already fix all sector-diagonal physics.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSpec {
    pub dimension: usize,
    pub unitary: DMatrix<Complex64>,
    pub sector_order: Vec<i64>,
    /// Per-sector boundary ratios; present iff the unitary is diagonal.
    pub diagonal_ratios: Option<Vec<BoundaryRatio>>,
    /// Optional designated domain element: coefficients `c` of `ψ_+` and
    /// the induced `c̃ = Ũ c` of `ψ_-`.
    pub coefficients: Option<(DVector<Complex64>, DVector<Complex64>)>,
}

/// Frobenius defect `‖U†U - 1‖`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let d = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(d, d)).norm()
}

/// Validates a unitary against a deficiency report and assembles the
/// extension. Off-diagonal mass below 1e-12 is treated as diagonal and
/// the per-sector boundary ratios are derived.
pub fn make_extension(
    config: &FluxConfig,
    report: &DeficiencyReport,
    unitary: DMatrix<Complex64>,
) -> Result<ExtensionSpec> {
    let d = report.n_plus;
    if unitary.nrows() != d || unitary.ncols() != d {
        return Err(Error::DimensionMismatch {
            got: unitary.nrows().max(unitary.ncols()),
            expected: d,
        });
    }
    const UNITARITY_TOL: f64 = 1e-10;
    let defect = unitarity_defect(&unitary);
    if defect > UNITARITY_TOL {
        return Err(Error::NotUnitary {
            defect,
            tol: UNITARITY_TOL,
        });
    }

    let off_diag_mass: f64 = unitary
        .iter()
        .enumerate()
        .filter(|(idx, _)| idx / d != idx % d)
        .map(|(_, v)| v.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let diagonal_ratios = if d == 0 || off_diag_mass < 1e-12 {
        let mut ratios = Vec::with_capacity(d);
        for (j, &m) in report.gamma.iter().enumerate() {
            let channel = sector_channel(config, m);
            let theta = unitary[(j, j)].arg();
            ratios.push(boundary_ratio(&channel, theta)?);
        }
        Some(ratios)
    } else {
        None
    };

    Ok(ExtensionSpec {
        dimension: d,
        unitary,
        sector_order: report.gamma.clone(),
        diagonal_ratios,
        coefficients: None,
    })
}

impl ExtensionSpec {
    /// Designates a domain element by its `ψ_+` coefficients and stores
    /// the induced `c̃ = Ũ c`.
    pub fn with_coefficients(mut self, c: DVector<Complex64>) -> Result<Self> {
        if c.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                got: c.len(),
                expected: self.dimension,
            });
        }
        let c_tilde = &self.unitary * &c;
        self.coefficients = Some((c, c_tilde));
        Ok(self)
    }
}
