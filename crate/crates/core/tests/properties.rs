//! Deterministic structural properties of the solutions.

use std::f64::consts::PI;

use lensdimer::correlations::{g2_value, plateau};
use lensdimer::driven::{first_order_excitation, rate, rate_lens_mode, steady_excitation, Detector};
use lensdimer::free::{emission_spectrum, evolve_free, free_amplitudes, Emitter, Normalization, SpectrumConfig};
use lensdimer::oracle::solve_free_dde;
use lensdimer::quadrature::{integrate_real, QuadConfig};
use lensdimer::special::{g_k, lower_incomplete_gamma};
use lensdimer::{Atom, Complex64, InitialState, SystemParams, Time};

#[test]
fn series_and_gamma_routes_agree_on_the_right_half_plane() {
    for k in 0..=12 {
        for i in 1..=25 {
            for j in -12..=12 {
                let s = Complex64::from_polar(2.0 * i as f64, 0.49 * PI * j as f64 / 12.0);
                let a = g_k(k, s).unwrap();
                let b = lower_incomplete_gamma(k + 1, s).unwrap() / s.powu(k);
                let ok = if b.norm() < 1e-2 { (a - b).norm() <= 1e-12 } else { (a - b).norm() <= 1e-10 * b.norm() };
                assert!(ok, "k={k} s={s}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn lower_gamma_recurrence() {
    for k in 1..=12u32 {
        for &s in &[
            Complex64::new(0.3, 0.1),
            Complex64::new(4.0, -2.0),
            Complex64::new(12.5, 7.0),
            Complex64::new(40.0, 0.0),
            Complex64::new(-3.0, 1.0),
        ] {
            let next = lower_incomplete_gamma(k + 1, s).unwrap();
            let cur = lower_incomplete_gamma(k, s).unwrap();
            let res = next - cur * k as f64 + s.powu(k) * (-s).exp();
            assert!(res.norm() <= 1e-12 * (1.0 + next.norm()), "k={k} s={s}: {res}");
        }
    }
}

#[test]
fn echo_reaches_the_source_only_after_two_delays() {
    for gt in [0.4, 1.0, 10.0] {
        let base = SystemParams::free(1.0, gt, 0.0, 0.7);
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 2.0 * gt / 200.0).collect();
        let lone = evolve_free(&base, &InitialState::atom1(), &times).unwrap();
        let coupled = evolve_free(&base.with_kappa(0.4), &InitialState::atom1(), &times).unwrap();
        for (i, &t) in times.iter().enumerate() {
            assert!((lone.b1[i] - coupled.b1[i]).norm() <= 1e-12);
            if t < gt {
                assert_eq!(coupled.b2[i], Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn excitation_has_left_the_emitters_after_a_hundred_lifetimes() {
    let init = InitialState::new(Complex64::new(0.6, 0.0), Complex64::from_polar(0.8, 0.3)).unwrap();
    for gt in [0.4, 1.0, 10.0] {
        for kappa in [0.0, 0.2, 0.4] {
            for w in [0.0, PI / 2.0, PI] {
                let p = SystemParams::free(1.0, gt, kappa, w);
                let (b1, b2) = free_amplitudes(&p, &init, 100.0).unwrap();
                assert!(b1.norm_sqr() + b2.norm_sqr() <= 1e-6, "γτ={gt} κ={kappa} ω0τ={w}");
            }
        }
    }
}

#[test]
fn decoupled_spectrum_carries_one_photon() {
    let p = SystemParams::free(1.0, 1.0, 0.0, 0.0);
    let cfg = SpectrumConfig { time: Time::Infinite, theta: PI / 2.0, source: Emitter::Both, normalization: Normalization::RawShape };
    let qc = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 5000 };
    let f = |u: f64| {
        let w = u.tan();
        emission_spectrum(&p, &InitialState::atom1(), &cfg, &[w]).unwrap().values[0] / u.cos().powi(2)
    };
    let total = integrate_real(f, -PI / 2.0 + 1e-12, PI / 2.0 - 1e-12, qc).unwrap() / (2.0 * PI);
    assert!((total - 1.0).abs() < 1e-3, "{total}");
}

#[test]
fn dense_output_is_continuous_across_delay_boundaries() {
    for (gt, kappa) in [(0.4, 0.8), (1.0, 0.4), (10.0, 0.2)] {
        let p = SystemParams::free(1.0, gt, kappa, 1.1);
        let sol = solve_free_dde(&p, &InitialState::symmetric(), 10.0 * gt, 1e-12).unwrap();
        assert!(sol.boundary_mismatch() <= 1e-12, "{}", sol.boundary_mismatch());
    }
}

fn driven(kappa: f64, delta: f64, wl: f64, phi_l: f64) -> SystemParams {
    SystemParams::free(1.0, 1.0, kappa, 0.0).with_drive(delta, 0.05, phi_l).with_omega_l_tau(wl)
}

#[test]
fn second_emitter_mirrors_the_first_under_reversed_laser_phase() {
    for &(k, d, wl, phi) in &[(0.3, 0.0, 0.4, 0.9), (0.6, -0.7, 2.5, -1.3), (0.1, 1.2, -0.2, 2.8)] {
        let p = driven(k, d, wl, phi);
        let m = driven(k, d, wl, -phi);
        assert!((steady_excitation(&p, Atom::Two) - steady_excitation(&m, Atom::One)).abs() <= 1e-15);
        assert!((first_order_excitation(&p, Atom::Two) - first_order_excitation(&m, Atom::One)).abs() <= 1e-15);
        assert!((rate_lens_mode(&p, Atom::Two) - rate_lens_mode(&m, Atom::One)).abs() <= 1e-15);
    }
}

#[test]
fn expansion_error_scales_as_kappa_squared() {
    for &(d, wl, phi) in &[(0.3, 0.7, 0.4), (0.0, 2.0, 0.0), (0.0, 0.0, 0.0)] {
        let c: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&k| {
                let p = driven(k, d, wl, phi);
                let s = steady_excitation(&p, Atom::One);
                (s - first_order_excitation(&p, Atom::One)).abs() / (s * k * k)
            })
            .collect();
        for v in &c[1..] {
            assert!((v / c[0] - 1.0).abs() <= 0.2, "{c:?}");
        }
    }
}

#[test]
fn rates_are_periodic_in_both_phases() {
    let detectors = [
        Detector::Incoherent,
        Detector::CoherentFarfield { detector_phase: 0.8 },
        Detector::LensMode(Atom::One),
        Detector::LensMode(Atom::Two),
        Detector::LensTotal,
    ];
    let p = driven(0.35, 0.4, 1.3, 0.6);
    for d in detectors {
        let base = rate(&p, d).value;
        for q in [p.with_omega_l_tau(p.omega_l_tau + 2.0 * PI), SystemParams { phi_l: p.phi_l + 2.0 * PI, ..p }] {
            assert!((rate(&q, d).value - base).abs() <= 1e-12 * base, "{d:?}");
        }
    }
}

#[test]
fn zero_delay_signal_depends_only_on_the_phase_difference() {
    let p = SystemParams::free(1.0, 2.0, 0.4, 0.9).with_drive(0.0, 0.05, 0.0);
    for diff in [0.0, 0.7, 2.0, PI] {
        let reference = g2_value(&p, 0.0, diff, 0.0).unwrap();
        for a in [0.3, 1.9, 4.0] {
            let v = g2_value(&p, a, a + diff, 0.0).unwrap();
            assert!((v - reference).abs() <= 1e-12 * reference.max(1e-20), "diff {diff}, a {a}");
        }
    }
}

#[test]
fn correlation_factorizes_at_long_delay() {
    let p = SystemParams::free(1.0, 1.0, 0.4, 0.6).with_drive(0.2, 0.05, 0.5);
    for (a, b) in [(0.0, 0.0), (0.4, 2.1), (PI / 2.0, -1.0)] {
        let far = g2_value(&p, a, b, 60.0 + 10.0 * p.tau).unwrap();
        let limit = plateau(&p, a, b).unwrap();
        assert!((far / limit - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn correlation_sweep_is_finite_and_nonnegative() {
    // deterministic low-discrepancy sweep
    let golden = 0.618_033_988_749_895;
    for i in 0..1000 {
        let u = |m: f64| (i as f64 * golden * m).fract();
        let p = SystemParams::free(1.0, 0.2 + 15.0 * u(1.0), 0.95 * u(2.0), 2.0 * PI * u(3.0))
            .with_drive(-2.0 + 4.0 * u(5.0), 0.05, 2.0 * PI * u(7.0));
        let v = g2_value(&p, 2.0 * PI * u(11.0), 2.0 * PI * u(13.0), 5.0 * p.tau * u(17.0)).unwrap();
        assert!(v.is_finite() && v >= 0.0, "sample {i}");
    }
}

#[test]
fn dark_fringe_transient_decays_at_the_emission_rate() {
    let p = SystemParams::free(1.0, 2.0, 0.0, 0.0).with_drive(0.0, 0.05, 0.0);
    let (t1, t2) = (1.0, 5.0);
    let g = |t| g2_value(&p, PI, PI / 2.0, t).unwrap();
    let fitted = (g(t1) / g(t2)).ln() / (t2 - t1);
    assert!((fitted - 1.0).abs() <= 0.1, "{fitted}");
}

#[test]
fn coupling_constant_is_bounded_by_kappa() {
    use lensdimer::model::coupling_k;
    for kappa in [0.05, 0.4, 0.9] {
        for delta in [-2.0, -0.3, 0.0, 0.1, 1.5] {
            for wl in [0.0, 1.0, PI] {
                let k = coupling_k(&driven(kappa, delta, wl, 0.0)).norm();
                if delta == 0.0 {
                    assert!((k - kappa).abs() <= 1e-15);
                } else {
                    assert!(k < kappa);
                }
            }
        }
    }
}
