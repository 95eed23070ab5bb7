//! Cross-module invariants that fall outside the numbered acceptance
//! criteria: the deficiency-subspace dimension realized by elements, and
//! spectral continuity in the flux.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use abflux::extensions::{boundary_ratio, deficiency_element, BoundaryRatio, Sign};
use abflux::spectral::bound_states_closed_form;
use abflux::{deficiency_indices, sector_channel, FluxConfig};

/// The number of square-integrable deficiency elements across a padded
/// sector window equals the deficiency index, for either sign.
#[test]
fn basis_count_matches_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let config = FluxConfig::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-6.0..1.0),
        )
        .unwrap();
        let report = deficiency_indices(&config);
        if report.boundary_flag {
            continue;
        }
        let window = abflux::weyl::default_window(&config);
        let sign = if rng.random_range(0.0..1.0) < 0.5 { Sign::Plus } else { Sign::Minus };
        let mut finite = 0usize;
        for m in window {
            let channel = sector_channel(&config, m);
            let element = deficiency_element(&channel, sign).unwrap();
            if element.l2_norm.is_finite() {
                finite += 1;
            }
        }
        assert_eq!(
            finite, report.n_plus,
            "basis count mismatch at kappa={}, alpha={}, {sign:?}",
            config.kappa, config.alpha
        );
    }
}

/// With the boundary condition tied to a fixed unitary phase, the m = 0
/// bound-state energy moves continuously in the flux across kappa = 0,
/// where the sector order passes through the logarithmic branch.
#[test]
fn bound_state_energy_continuous_in_flux() {
    let theta = 2.0;
    let mut energies = Vec::new();
    let n = 41;
    for i in 0..n {
        let kappa = -0.2 + 0.4 * i as f64 / (n - 1) as f64;
        let channel = sector_channel(&FluxConfig::new(kappa, 0.0).unwrap(), 0);
        let lambda = boundary_ratio(&channel, theta).unwrap();
        let states = bound_states_closed_form(&channel, &lambda).unwrap();
        assert_eq!(states.len(), 1, "expected one state at kappa={kappa}");
        energies.push(states[0].energy);
    }
    let scale = energies.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let dk = 0.4 / (n - 1) as f64;
    for w in energies.windows(2) {
        let slope = (w[1] - w[0]).abs() / dk;
        assert!(
            slope < 20.0 * scale,
            "energy jump: {} -> {} over dk={dk}",
            w[0],
            w[1]
        );
    }
}

/// The eigenfunction of each closed-form state reproduces the boundary
/// ratio it was built from (residual on the von Neumann circle).
#[test]
fn bound_states_satisfy_their_boundary_condition() {
    use abflux::specfun::gamma;
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for _ in 0..40 {
        let nu = rng.random_range(0.05..0.95);
        let theta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
        let channel = sector_channel(&FluxConfig::new(0.0, nu * nu).unwrap(), 0);
        let lambda = boundary_ratio(&channel, theta).unwrap();
        let BoundaryRatio::Finite(l) = lambda else { continue };
        for state in bound_states_closed_form(&channel, &lambda).unwrap() {
            let g = (gamma(Complex64::new(-nu, 0.0)).unwrap()
                / gamma(Complex64::new(nu, 0.0)).unwrap())
            .re;
            let rho = g * (0.5 * state.mu).powf(2.0 * nu);
            assert!(
                (rho - l.re).abs() <= 1e-8 * l.norm().max(1.0),
                "boundary residual at nu={nu}, theta={theta}: rho={rho}, lambda={l}"
            );
        }
    }
}
