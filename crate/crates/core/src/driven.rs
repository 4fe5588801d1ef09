//! Weak coherent drive: transient and steady excitation, elastic scattering
//! rates and fringe visibilities.
//!
//! Amplitudes are in the laser frame with the laser phase referenced to
//! emitter 1 (`e^{ik_L·r1} = 1`, `e^{ik_L·r2} = e^{iφ_L}`). With
//! `K = κ(γ/2)e^{iω_Lτ}/(γ/2 + iΔ)` the long-time amplitude of emitter 1 is
//! `−iΩ (1 − K e^{iφ_L}) / ((γ/2 + iΔ)(1 − K²))`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free::{check_time_grid, h_sums, AmplitudeTrace, Solver};
use crate::model::{coupling_k, Atom, SystemParams, Time, TWO_PI};
use crate::par::{self, Execution};

/// `(Σ_even H_k, Σ_odd H_k)` evaluated at the laser frequency.
pub fn driven_h_sums(params: &SystemParams, t: Time) -> Result<(C64, C64)> {
    h_sums(params, params.delta, params.omega_l_phase(), t)
}

/// Driven amplitudes `(c1, c2)` at time `t`, starting from both ground states.
pub fn driven_amplitudes(params: &SystemParams, t: Time) -> Result<(C64, C64)> {
    t.validate()?;
    let (e, o) = driven_h_sums(params, t)?;
    let pref = C64::new(0.0, -params.omega_rabi) / params.driven_alpha();
    let laser = C64::from_polar(1.0, params.phi_l);
    Ok((pref * (e + laser * o), pref * (laser * e + o)))
}

pub fn evolve_driven(params: &SystemParams, times: &[f64]) -> Result<AmplitudeTrace> {
    evolve_driven_with(Execution::default(), params, times)
}

pub fn evolve_driven_with(exec: Execution, params: &SystemParams, times: &[f64]) -> Result<AmplitudeTrace> {
    params.validate()?;
    check_time_grid(times)?;
    let values = par::try_map(exec, times, |&t| driven_amplitudes(params, Time::Finite(t)))?;
    let (b1, b2) = values.into_iter().unzip();
    Ok(AmplitudeTrace { times: times.to_vec(), b1, b2, solver: Solver::Series, tau: params.tau })
}

fn laser_sign(atom: Atom) -> f64 {
    match atom {
        Atom::One => 1.0,
        Atom::Two => -1.0,
    }
}

/// Steady-state amplitude of one emitter (closed form of the long-time limit).
pub fn steady_amplitude(params: &SystemParams, atom: Atom) -> C64 {
    let k = coupling_k(params);
    let alpha = params.driven_alpha();
    let laser = C64::from_polar(1.0, laser_sign(atom) * params.phi_l);
    let gauge = match atom {
        Atom::One => C64::new(1.0, 0.0),
        Atom::Two => C64::from_polar(1.0, params.phi_l),
    };
    C64::new(0.0, -params.omega_rabi) * gauge * (1.0 - k * laser) / (alpha * (1.0 - k * k))
}

/// Long-time excited-state population. Independent of `γτ` at fixed `ω_L τ`.
pub fn steady_excitation(params: &SystemParams, atom: Atom) -> f64 {
    steady_amplitude(params, atom).norm_sqr()
}

/// First-order expansion in κ of [`steady_excitation`]:
/// `Ω²/(γ²/4+Δ²) · (1 − 2κA cos(ω_Lτ ± φ_L − φ))`, `A = (γ/2)/√(γ²/4+Δ²)`, `tan φ = 2Δ/γ`.
pub fn first_order_excitation(params: &SystemParams, atom: Atom) -> f64 {
    let (a, phi) = expansion_coefficients(params);
    let free = params.omega_rabi.powi(2) / params.driven_alpha().norm_sqr();
    let arg = params.omega_l_tau + laser_sign(atom) * params.phi_l - phi;
    free * (1.0 - 2.0 * params.kappa * a * arg.cos())
}

/// Amplitude `A` and phase `φ` of the first-order corrections.
pub fn expansion_coefficients(params: &SystemParams) -> (f64, f64) {
    let half = 0.5 * params.gamma;
    (half / params.driven_alpha().norm(), (2.0 * params.delta).atan2(params.gamma))
}

/// Effective decay rate and detuning `(γ̃, Δ̃)` that reproduce the steady state
/// as a free-space formula when `φ_L = (2n+1)π`.
pub fn modified_linewidth(params: &SystemParams) -> (f64, f64) {
    let (s, c) = params.omega_l_phase().sin_cos();
    (
        params.gamma * (1.0 - params.kappa * c),
        params.delta - params.kappa * 0.5 * params.gamma * s,
    )
}

/// Detector arrangement for elastic scattering rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Detector {
    /// Far-field detector that adds the photons of both emitters incoherently.
    Incoherent,
    /// Far-field detector in a direction with `k_μ·(r1 − r2) = detector_phase`.
    CoherentFarfield { detector_phase: f64 },
    /// Lens mode of one emitter.
    LensMode(Atom),
    /// Sum of both lens modes.
    LensTotal,
}

/// A scattering rate coefficient (global coupling constants omitted).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub detector: Detector,
    pub value: f64,
    /// Per-emitter contributions where the detector resolves them.
    pub atom1: Option<f64>,
    pub atom2: Option<f64>,
    pub phi_l: f64,
    pub omega_l_tau: f64,
}

fn denominator(params: &SystemParams) -> f64 {
    let k = coupling_k(params);
    params.driven_alpha().norm_sqr() * (1.0 - k * k).norm_sqr()
}

/// Incoherent-detector coefficient of one emitter.
pub fn rate_incoherent_atom(params: &SystemParams, atom: Atom) -> f64 {
    let k = coupling_k(params);
    let laser = C64::from_polar(1.0, laser_sign(atom) * params.phi_l);
    (1.0 - k * laser).norm_sqr() / denominator(params)
}

pub fn rate_incoherent(params: &SystemParams) -> RateResult {
    let a1 = rate_incoherent_atom(params, Atom::One);
    let a2 = rate_incoherent_atom(params, Atom::Two);
    RateResult {
        detector: Detector::Incoherent,
        value: a1 + a2,
        atom1: Some(a1),
        atom2: Some(a2),
        phi_l: params.phi_l,
        omega_l_tau: params.omega_l_tau,
    }
}

/// Double-slit coefficient `4|cos φ₋ − K cos φ₊|² / ((γ²/4+Δ²)|1−K²|²)`.
pub fn rate_coherent_farfield(params: &SystemParams, phi_minus: f64, phi_plus: f64) -> f64 {
    let k = coupling_k(params);
    4.0 * (phi_minus.cos() - k * phi_plus.cos()).norm_sqr() / denominator(params)
}

/// `(φ₋, φ₊)` for a detector with `k_μ·(r1 − r2) = detector_phase`.
pub fn coherent_phases(params: &SystemParams, detector_phase: f64) -> (f64, f64) {
    (-0.5 * (params.phi_l + detector_phase), 0.5 * (detector_phase - params.phi_l))
}

/// Lens-mode coefficient of one emitter.
pub fn rate_lens_mode(params: &SystemParams, atom: Atom) -> f64 {
    let k = coupling_k(params);
    let phi = laser_sign(atom) * params.phi_l;
    let wt = params.omega_l_tau;
    4.0 * ((0.5 * (phi - wt)).cos() - k * (0.5 * (phi + wt)).cos()).norm_sqr() / denominator(params)
}

pub fn rate(params: &SystemParams, detector: Detector) -> RateResult {
    let base = |value, atom1, atom2| RateResult {
        detector,
        value,
        atom1,
        atom2,
        phi_l: params.phi_l,
        omega_l_tau: params.omega_l_tau,
    };
    match detector {
        Detector::Incoherent => rate_incoherent(params),
        Detector::CoherentFarfield { detector_phase } => {
            let (m, p) = coherent_phases(params, detector_phase);
            base(rate_coherent_farfield(params, m, p), None, None)
        }
        Detector::LensMode(atom) => {
            let a1 = rate_lens_mode(params, Atom::One);
            let a2 = rate_lens_mode(params, Atom::Two);
            let v = if atom == Atom::One { a1 } else { a2 };
            base(v, Some(a1), Some(a2))
        }
        Detector::LensTotal => {
            let a1 = rate_lens_mode(params, Atom::One);
            let a2 = rate_lens_mode(params, Atom::Two);
            base(a1 + a2, Some(a1), Some(a2))
        }
    }
}

pub fn rate_lens_total(params: &SystemParams) -> RateResult {
    rate(params, Detector::LensTotal)
}

/// Quantity varied in a rate scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanVariable {
    OmegaLTau,
    PhiL,
    DetectorPhase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateScan {
    pub variable: ScanVariable,
    pub points: Vec<f64>,
    pub rates: Vec<RateResult>,
}

impl RateScan {
    pub fn values(&self) -> Vec<f64> {
        self.rates.iter().map(|r| r.value).collect()
    }
}

pub fn rate_scan(
    exec: Execution,
    params: &SystemParams,
    detector: Detector,
    variable: ScanVariable,
    points: &[f64],
) -> Result<RateScan> {
    params.validate()?;
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("scan points"));
    }
    let rates = par::map(exec, points, |&x| {
        let mut p = *params;
        let mut d = detector;
        match variable {
            ScanVariable::OmegaLTau => p.omega_l_tau = x,
            ScanVariable::PhiL => p.phi_l = x,
            ScanVariable::DetectorPhase => d = Detector::CoherentFarfield { detector_phase: x },
        }
        rate(&p, d)
    });
    Ok(RateScan { variable, points: points.to_vec(), rates })
}

/// Fringe visibility `(max − min)/(max + min)` of a phase scan spanning at least two periods.
pub fn visibility(scan: &RateScan) -> Result<f64> {
    let n = scan.points.len();
    let span = scan.points.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - scan.points.iter().cloned().fold(f64::INFINITY, f64::min);
    // a uniform grid that omits the endpoint still covers span·n/(n−1)
    let covered = if n > 1 { span * n as f64 / (n - 1) as f64 } else { 0.0 };
    if !(covered >= 2.0 * TWO_PI * (1.0 - 1e-9)) {
        return Err(Error::DegenerateScan(format!(
            "scan spans {span:.4} rad, two full periods (4π) are required"
        )));
    }
    visibility_of(&scan.values())
}

/// `(max − min)/(max + min)` of raw values.
pub fn visibility_of(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max + min > 0.0) {
        return Err(Error::DegenerateScan("max + min vanishes".into()));
    }
    Ok((max - min) / (max + min))
}

/// Magnitudes of the Fourier harmonics `m = 1..=max_harmonic` (per 2π) of a
/// scan sampled uniformly over a whole number of periods, endpoint excluded.
pub fn fourier_harmonics(points: &[f64], values: &[f64], max_harmonic: usize) -> Vec<f64> {
    let n = values.len().max(1) as f64;
    (1..=max_harmonic)
        .map(|m| {
            let s: C64 = points
                .iter()
                .zip(values)
                .map(|(&x, &v)| C64::from_polar(v, -(m as f64) * x))
                .sum();
            2.0 * s.norm() / n
        })
        .collect()
}

/// Index (1-based, per 2π) of the strongest non-constant harmonic.
pub fn dominant_harmonic(points: &[f64], values: &[f64], max_harmonic: usize) -> usize {
    fourier_harmonics(points, values, max_harmonic)
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, &a)| if a > best.1 { (i, a) } else { best })
        .0
        + 1
}

/// Uniform grid over `[from, from + periods·2π)`.
pub fn periodic_grid(from: f64, periods: usize, points_per_period: usize) -> Vec<f64> {
    let n = periods * points_per_period;
    let step = TWO_PI / points_per_period as f64;
    (0..n).map(|i| from + i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params() -> SystemParams {
        SystemParams::free(1.0, 3.0, 0.3, 0.0).with_drive(0.7, 0.05, 0.4).with_omega_l_tau(1.1)
    }

    #[test]
    fn decoupled_transient() {
        let p = SystemParams::free(1.0, 2.0, 0.0, 0.0).with_drive(0.0, 0.05, 0.3);
        for &t in &[0.0, 0.5, 3.0, 9.0] {
            let (c1, _) = driven_amplitudes(&p, Time::Finite(t)).unwrap();
            let want = 4.0 * 0.05f64.powi(2) * (1.0 - (-0.5 * t).exp()).powi(2);
            assert!((c1.norm_sqr() - want).abs() < 1e-16);
        }
    }

    #[test]
    fn long_time_limit_matches_closed_form() {
        let p = params();
        let (c1, c2) = driven_amplitudes(&p, Time::Infinite).unwrap();
        assert!((c1 - steady_amplitude(&p, Atom::One)).norm() < 1e-16);
        assert!((c2 - steady_amplitude(&p, Atom::Two)).norm() < 1e-16);
        // slowest transient decays at ≈0.21γ for these parameters
        let (f1, _) = driven_amplitudes(&p, Time::Finite(120.0)).unwrap();
        assert!((f1.norm_sqr() / steady_excitation(&p, Atom::One) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn antiphase_drive_has_free_space_form() {
        let p = params();
        let q = SystemParams { phi_l: PI, ..p };
        let (g, d) = modified_linewidth(&q);
        let want = q.omega_rabi.powi(2) / (g * g / 4.0 + d * d);
        assert!((steady_excitation(&q, Atom::One) - want).abs() < 1e-15);
    }

    #[test]
    fn first_order_error_is_quadratic() {
        let p = params();
        let err = |kappa: f64| {
            let q = p.with_kappa(kappa);
            (steady_excitation(&q, Atom::One) - first_order_excitation(&q, Atom::One)).abs()
        };
        let r1 = err(0.3) / err(0.03);
        let r2 = err(0.03) / err(0.003);
        assert!((70.0..130.0).contains(&r1), "{r1}");
        assert!((90.0..110.0).contains(&r2), "{r2}");
    }

    #[test]
    fn incoherent_rate_reduces_to_free_space() {
        let p = params().with_kappa(0.0);
        let r = rate_incoherent(&p);
        assert!((r.atom1.unwrap() - 1.0 / (0.25 + 0.49)).abs() < 1e-15);
        assert!((r.value - 2.0 / (0.25 + 0.49)).abs() < 1e-15);
    }

    #[test]
    fn double_slit_limit_and_reference_point() {
        let p = params().with_kappa(0.0);
        let v = rate_coherent_farfield(&p, 0.6, 1.3);
        assert!((v - 4.0 * 0.6f64.cos().powi(2) / (0.25 + 0.49)).abs() < 1e-15);
        let q = SystemParams { delta: 0.0, omega_l_tau: 0.0, kappa: 0.4, ..p };
        let want = 4.0 * 0.16 / (0.25 * (1.0f64 - 0.16).powi(2));
        assert!((rate_coherent_farfield(&q, PI / 2.0, 0.0) - want).abs() < 1e-12);
    }

    #[test]
    fn backscatter_is_a_maximum_for_normal_incidence() {
        for kappa in [0.0, 0.2, 0.4] {
            for phi_l in [0.0, PI] {
                let p = SystemParams { kappa, phi_l, ..params() };
                let f = |psi: f64| rate(&p, Detector::CoherentFarfield { detector_phase: psi }).value;
                let c = f(phi_l);
                assert!(c > f(phi_l - 1e-3) && c > f(phi_l + 1e-3));
            }
        }
    }

    #[test]
    fn visibility_needs_two_periods() {
        let p = params();
        let pts: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let scan = rate_scan(Execution::Sequential, &p, Detector::LensTotal, ScanVariable::OmegaLTau, &pts).unwrap();
        assert!(matches!(visibility(&scan), Err(Error::DegenerateScan(_))));
        assert!(visibility_of(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn decoupled_lens_visibility() {
        for phi_l in [0.0, 0.5, 1.2, 2.0, PI] {
            let p = SystemParams { kappa: 0.0, phi_l, ..params() };
            let pts = periodic_grid(0.0, 2, 400);
            let scan = rate_scan(Execution::Sequential, &p, Detector::LensTotal, ScanVariable::OmegaLTau, &pts).unwrap();
            assert!((visibility(&scan).unwrap() - phi_l.cos().abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn harmonic_detection() {
        let pts = periodic_grid(0.0, 2, 64);
        let vals: Vec<f64> = pts.iter().map(|x| 1.0 + 0.01 * x.cos() + 0.2 * (2.0 * x).cos()).collect();
        assert_eq!(dominant_harmonic(&pts, &vals, 4), 2);
        let h = fourier_harmonics(&pts, &vals, 3);
        assert!((h[1] - 0.2).abs() < 1e-12 && (h[0] - 0.01).abs() < 1e-12);
    }
}
