//! Series results against direct integration of the delay equations.

use std::f64::consts::PI;

use lensdimer::correlations::two_photon_amplitude_b;
use lensdimer::free::{emission_spectrum, photon_amplitude, Emitter, Normalization, SpectrumConfig};
use lensdimer::oracle::{b_coefficient_quadrature, convergence_order, field_amplitude_quadrature};
use lensdimer::quadrature::{integrate_real, QuadConfig};
use lensdimer::{InitialState, SystemParams, Time};

fn close(a: lensdimer::Complex64, b: lensdimer::Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn photon_amplitudes_match_quadrature_of_integrated_decay() {
    let init = InitialState::atom1();
    for (tau, kappa, w0) in [(1.0, 0.4, 0.3), (10.0, 0.2, PI), (0.4, 0.8, PI / 2.0)] {
        let p = SystemParams::free(1.0, tau, kappa, w0);
        for &omega in &[-1.3, 0.0, 0.45] {
            for &theta in &[0.0, PI / 3.0, PI / 2.0] {
                for t in [Time::Finite(2.5 * tau), Time::Infinite] {
                    let series = photon_amplitude(&p, &init, t, omega, theta).unwrap();
                    let quad = field_amplitude_quadrature(&p, &init, omega, theta, t, 1e-12).unwrap();
                    assert!(close(series, quad, 1e-8), "τ={tau} κ={kappa} ω={omega} ϑ={theta} {t:?}: {series} vs {quad}");
                }
            }
        }
    }
}

#[test]
fn two_excitation_coefficient_matches_quadrature() {
    for (tau, kappa, delta, phi_l) in [(1.0, 0.3, 0.0, 0.0), (2.0, 0.5, 0.4, 1.1), (0.5, 0.2, -0.7, PI)] {
        let p = SystemParams::free(1.0, tau, kappa, 0.9).with_drive(delta, 0.05, phi_l);
        for t in [0.5 * tau, 1.5 * tau, 4.2 * tau] {
            let series = two_photon_amplitude_b(&p, Time::Finite(t)).unwrap();
            let quad = b_coefficient_quadrature(&p, t, 1e-12).unwrap();
            assert!((series - quad).norm() <= 1e-9 * series.norm(), "t={t}: {series} vs {quad}");
        }
    }
}

#[test]
fn transverse_mode_photon_probability() {
    // the transverse mode collects ∫|b|² dω/2π; with no lens this is exactly one
    for kappa in [0.0, 0.2, 0.4] {
        let p = SystemParams::free(1.0, 10.0, kappa, 0.0);
        let cfg = SpectrumConfig {
            time: Time::Infinite,
            theta: PI / 2.0,
            source: Emitter::Both,
            normalization: Normalization::RawShape,
        };
        let f = |w: f64| emission_spectrum(&p, &InitialState::atom1(), &cfg, &[w]).unwrap().values[0];
        let qc = QuadConfig { abs_tol: 1e-10, rel_tol: 1e-8, max_intervals: 20_000 };
        // integrable tails: substitute ω = tan u
        let total = integrate_real(|u: f64| f(u.tan()) / u.cos().powi(2), -PI / 2.0 + 1e-9, PI / 2.0 - 1e-9, qc).unwrap();
        let prob = total / (2.0 * PI);
        // long-delay estimate
        let expected = 1.0 / (1.0 - kappa * kappa).sqrt();
        assert!((0.9..=1.1).contains(&prob), "κ={kappa}: {prob}");
        assert!((prob - expected).abs() < 2e-3 * expected + 0.02 * kappa, "κ={kappa}: {prob} vs {expected}");
    }
}

#[test]
fn integrator_has_fifth_order_convergence() {
    let p = SystemParams::free(1.0, 1.0, 0.5, 0.7);
    let order = convergence_order(&p, &InitialState::symmetric(), 4.0, &[4, 8, 16, 32]).unwrap();
    assert!((4.0..=6.0).contains(&order), "order {order}");
}
