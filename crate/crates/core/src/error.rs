use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Argument outside the mathematical domain of an operation
    /// (e.g. `Re z <= 0` for the Bessel integral representation).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    /// Integer order: the two-power small-z pair degenerates and the
    /// logarithmic branch must be used instead.
    #[error("degenerate order nu = {re} + {im}i: use the logarithmic small-z branch")]
    DegenerateOrder { re: f64, im: f64 },

    #[error("alpha = {0} out of range: the phase structure requires alpha < 1")]
    AlphaOutOfRange(f64),

    #[error("requested accuracy not reached: achieved {achieved:.3e}, requested {requested:.3e}")]
    Accuracy { achieved: f64, requested: f64 },

    #[error("ODE integration failed near r = {last_r:.6e}: step size underflow")]
    IntegrationFailure { last_r: f64 },

    /// Endpoint classification could not be decided within the sampled
    /// r-range. Expected only close to the nu = 1 transition.
    #[error("endpoint classification inconclusive for sector m = {m}")]
    InconclusiveSector { m: i64 },

    #[error("matrix is not unitary: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("extension matrix is {got}x{got} but the deficiency index is {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("boundary ratio {0} is not attainable by a self-adjoint extension in this sector")]
    InvalidBoundaryRatio(String),

    #[error("sector m = {m} is not a contributing sector; Gamma = {gamma:?}")]
    SectorNotContributing { m: i64, gamma: Vec<i64> },
}

pub type Result<T> = std::result::Result<T, Error>;
