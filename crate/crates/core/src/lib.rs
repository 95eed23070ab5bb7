//! Deficiency indices, self-adjoint extensions, and bound-state spectra
//! for the planar Hamiltonian of a charged particle around a zero-radius
//! Aharonov–Bohm flux line with an added inverse-square potential,
//! `H = (i∇ + A_κ)² + α/r²` on the punctured plane.
//!
//! The number of self-adjoint extensions of this operator depends on the
//! magnetic flux κ even though the particle never meets the field. This
//! crate computes that dependence along two independent routes and keeps
//! them honest against each other:
//!
//! * [`deficiency`] — exact sector counting and the closed-form phase
//!   diagram in `(κ, α)`;
//! * [`weyl`] — a numerical limit-point/limit-circle oracle that
//!   classifies each radial operator by integrating its deficiency
//!   equation toward the endpoints (it also covers the Coulomb-perturbed
//!   variant `+ β/r`);
//! * [`specfun`] — self-contained `K_ν` for complex order, the complex
//!   gamma function, and small-z boundary coefficients;
//! * [`extensions`] — the deficiency elements `ψ_±`, their L² norms, the
//!   unitary (von Neumann) parameterization, and per-sector boundary
//!   ratios;
//! * [`spectral`] — bound states of sector-diagonal extensions, closed
//!   form against an ODE shooting oracle.
//!
//! All operations are pure functions of their arguments; every type is an
//! immutable value, safe to share across threads.
//!
//! ```
//! use abflux::{deficiency_indices, indices_via_phase_structure, FluxConfig};
//!
//! // Turning on a third of a flux quantum doubles the extension count.
//! let off = FluxConfig::new(0.0, 0.0)?;
//! let on = FluxConfig::new(1.0 / 3.0, 0.0)?;
//! assert_eq!(deficiency_indices(&off).n_plus, 1);
//! assert_eq!(deficiency_indices(&on).n_plus, 2);
//! assert_eq!(deficiency_indices(&on).gamma, vec![0, 1]);
//!
//! // The closed-form phase diagram agrees with the counting route.
//! assert_eq!(indices_via_phase_structure(&on)?, 2);
//! # Ok::<(), abflux::Error>(())
//! ```

pub mod deficiency;
pub mod error;
pub mod extensions;
pub mod flux;
mod ode;
pub mod specfun;
pub mod spectral;
pub mod weyl;

pub use deficiency::{
    deficiency_indices, indices_via_phase_structure, phase_structure, DeficiencyReport,
    PhaseCase, PhaseStructure,
};
pub use error::{Error, Result};
pub use extensions::{
    boundary_ratio, compute_l2_norm, deficiency_element, make_extension, BoundaryData,
    BoundaryRatio, DeficiencyElement, ExtensionSpec, L2Norm, Sign,
};
pub use flux::{
    contributing_sectors, flux_from_polarizability, gauge_reduce, sector_channel, FluxConfig,
    SectorChannel,
};
pub use spectral::{bound_states_closed_form, shooting_eigenvalues, BoundState, SolveMethod};
pub use weyl::{
    classify_origin, numeric_deficiency, sector_survey, solve_sector_ode, EndpointClassification,
    OriginReport, RadialPotential, SampledSolution, WeylClass, WeylVerdict,
};
