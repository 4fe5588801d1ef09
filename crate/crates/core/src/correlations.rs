//! Intensity-intensity correlations of the weakly driven pair.
//!
//! Two far-field detectors see the emitters with relative phases `φ1` and
//! `φ2`. After a first click in the steady state at detector 1 the system is
//! left in a superposition of the ground state and both single excitations,
//! which then evolves freely under the delayed coupling. The correlation at
//! delay `t'` combines the driven round-trip sums `H_k(t', ω_L)` with the free
//! sums `I_k(t')`:
//!
//! ```text
//! G²(t') ∝ | F(φ1) [(1 + e^{i(φ2+φ_L)}) ΣH_even + (e^{iφ_L} + e^{iφ2}) ΣH_odd]
//!          + e^{i(φ_L − Δt')} (1 − K cos φ_L) [(e^{iφ1} + e^{iφ2}) ΣI_even + (1 + e^{i(φ1+φ2)}) ΣI_odd] |²
//! ```
//!
//! with `F(φ) = 1 + e^{i(φ+φ_L)} − K(e^{iφ_L} + e^{iφ})` the steady-state field
//! factor of a detector at phase `φ`. As `t' → ∞` the first bracket tends to
//! `F(φ2)/(1 − K²)` and the second vanishes, so `G²` factorizes into the
//! product of the two single-detector intensities.

use num_complex::Complex64 as C64;

use crate::driven::driven_h_sums;
use crate::error::{Error, Result};
use crate::free::{free_amplitudes, round_trips};
use crate::model::{coupling_k, InitialState, SystemParams, Time};
use crate::par::{self, Execution};
use crate::special::ln_factorial;

/// Steady-state field factor `F(φ)` of a detector at relative phase `φ`.
pub fn detector_factor(params: &SystemParams, phi: f64) -> C64 {
    let k = coupling_k(params);
    let l = C64::from_polar(1.0, params.phi_l);
    let d = C64::from_polar(1.0, phi);
    1.0 + l * d - k * (l + d)
}

/// Steady intensity `|c1 + e^{iφ} c2|²` seen by a detector at phase `φ`.
pub fn detector_intensity(params: &SystemParams, phi: f64) -> f64 {
    let k = coupling_k(params);
    let amp = C64::new(0.0, -params.omega_rabi) * detector_factor(params, phi)
        / (params.driven_alpha() * (1.0 - k * k));
    amp.norm_sqr()
}

fn g2_prefactor(params: &SystemParams) -> f64 {
    let k = coupling_k(params);
    let g2 = params.gamma * params.gamma + 4.0 * params.delta * params.delta;
    16.0 * params.omega_rabi.powi(4) / (g2 * g2 * (1.0 - k * k).norm_sqr())
}

/// `G²(t')` for detector phases `φ1` (first click) and `φ2`.
pub fn g2_value(params: &SystemParams, phi1: f64, phi2: f64, tprime: f64) -> Result<f64> {
    if !(tprime.is_finite() && tprime >= 0.0) {
        return Err(Error::ParameterOutOfRange("delay must be finite and >= 0".into()));
    }
    let k = coupling_k(params);
    let e = |x: f64| C64::from_polar(1.0, x);
    let (he, ho) = driven_h_sums(params, Time::Finite(tprime))?;
    let (ie, io) = free_amplitudes(params, &InitialState::atom1(), tprime)?;
    let driven = detector_factor(params, phi1)
        * ((1.0 + e(phi2 + params.phi_l)) * he + (e(params.phi_l) + e(phi2)) * ho);
    let free = e(params.phi_l - params.delta * tprime)
        * (1.0 - k * params.phi_l.cos())
        * ((e(phi1) + e(phi2)) * ie + (1.0 + e(phi1 + phi2)) * io);
    Ok(g2_prefactor(params) * (driven + free).norm_sqr())
}

/// Correlation trace over delays. `normalized` is `None` when the single
/// detector intensities vanish (dark fringe).
#[derive(Debug, Clone, PartialEq)]
pub struct G2Result {
    pub tprimes: Vec<f64>,
    pub raw: Vec<f64>,
    pub normalized: Option<Vec<f64>>,
    pub phi1: f64,
    pub phi2: f64,
    pub params_hash: String,
}

pub fn g2(params: &SystemParams, phi1: f64, phi2: f64, tprimes: &[f64]) -> Result<G2Result> {
    g2_with(Execution::default(), params, phi1, phi2, tprimes)
}

pub fn g2_with(
    exec: Execution,
    params: &SystemParams,
    phi1: f64,
    phi2: f64,
    tprimes: &[f64],
) -> Result<G2Result> {
    params.validate()?;
    if tprimes.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !(phi1.is_finite() && phi2.is_finite()) {
        return Err(Error::NonFinite("detector phase"));
    }
    let raw = par::try_map(exec, tprimes, |&t| g2_value(params, phi1, phi2, t))?;
    let normalized = plateau(params, phi1, phi2).ok().map(|d| raw.iter().map(|v| v / d).collect());
    Ok(G2Result {
        tprimes: tprimes.to_vec(),
        raw,
        normalized,
        phi1,
        phi2,
        params_hash: params_fingerprint(params, phi1, phi2),
    })
}

/// Product of the two single-detector intensities, the `t' → ∞` value of `G²`.
pub fn plateau(params: &SystemParams, phi1: f64, phi2: f64) -> Result<f64> {
    let d = detector_intensity(params, phi1) * detector_intensity(params, phi2);
    let scale = (params.omega_rabi / params.driven_alpha().norm()).powi(4);
    if !(d > 1e-24 * scale) {
        return Err(Error::ZeroDenominator(format!(
            "single-detector intensities vanish at φ1 = {phi1}, φ2 = {phi2}"
        )));
    }
    Ok(d)
}

/// `G²(t')` divided by its factorized long-delay value.
pub fn g2_normalized(params: &SystemParams, phi1: f64, phi2: f64, tprimes: &[f64]) -> Result<G2Result> {
    params.validate()?;
    plateau(params, phi1, phi2)?;
    g2(params, phi1, phi2, tprimes)
}

fn params_fingerprint(params: &SystemParams, phi1: f64, phi2: f64) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for v in [
        params.gamma,
        params.tau,
        params.kappa,
        params.omega0_tau,
        params.omega_l_tau,
        params.delta,
        params.omega_rabi,
        params.phi_l,
        phi1,
        phi2,
    ] {
        h.update(v.to_bits().to_le_bytes());
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// `J_k`-type round-trip term of the two-excitation amplitude, scaled by `exp(ln_scale)`:
/// `e^{-z} Σ_{n = k+2, k+4, ...} z^n / n!`.
fn parity_tail(k: u32, z: C64, ln_scale: C64) -> C64 {
    if z.norm() == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let ln_z = z.ln();
    if z.norm() <= k as f64 + 8.0 {
        let n0 = k + 2;
        let mut term = (ln_scale - z + ln_z * n0 as f64 - ln_factorial(n0)).exp();
        let mut sum = term;
        let z2 = z * z;
        let mut n = n0 as f64;
        for _ in 0..crate::special::MAX_TERMS {
            term *= z2 / ((n + 1.0) * (n + 2.0));
            n += 2.0;
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        // ½(1 + (−1)^k e^{−2z}) − e^{−z} Σ_{m ≡ k (mod 2), m ≤ k} z^m/m!
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut out = 0.5 * ln_scale.exp() * (1.0 + sign * (-2.0 * z).exp());
        let mut m = k as i64;
        while m >= 0 {
            out -= (ln_scale - z + ln_z * m as f64 - ln_factorial(m as u32)).exp();
            m -= 2;
        }
        out
    }
}

/// Two-excitation coefficient `B(t)` of the driven pair (laser phase referenced to emitter 1).
pub fn two_photon_amplitude_b(params: &SystemParams, t: Time) -> Result<C64> {
    params.validate()?;
    t.validate()?;
    let k = coupling_k(params);
    let alpha = params.driven_alpha();
    let l = C64::from_polar(1.0, params.phi_l);
    let pref = -(params.omega_rabi * params.omega_rabi) / (alpha * alpha);
    let (even, odd) = match t {
        Time::Infinite => {
            let d = 1.0 - k * k;
            (0.5 / d, -0.5 * k / d)
        }
        Time::Finite(t) => {
            let n = if params.kappa == 0.0 { 0 } else { round_trips(t, params.tau)? };
            let ln_mk = (-k).ln();
            let mut even = C64::new(0.0, 0.0);
            let mut odd = C64::new(0.0, 0.0);
            for j in 0..=n {
                let tj = t - j as f64 * params.tau;
                if tj < 0.0 {
                    break;
                }
                let scale = if j == 0 { C64::new(0.0, 0.0) } else { ln_mk * j as f64 };
                let term = parity_tail(j, alpha * tj, scale);
                if j % 2 == 0 {
                    even += term;
                } else {
                    odd += term;
                }
            }
            (even, odd)
        }
    };
    Ok(pref * (2.0 * l * even + (1.0 + l * l) * odd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params() -> SystemParams {
        SystemParams::free(1.0, 20.0, 0.4, PI).with_drive(0.0, 0.05, 0.0)
    }

    #[test]
    fn zero_delay_two_detector_formula() {
        let p = params();
        for (a, b) in [(0.0, 0.0), (0.3, 1.9), (2.0, -1.0)] {
            let got = g2_value(&p, a, b, 0.0).unwrap();
            let want = 64.0 * 0.05f64.powi(4) * (0.5 * (a - b)).cos().powi(2)
                / (1.0 + 0.16 + 0.8 * p.omega0_tau.cos());
            assert!((got - want).abs() <= 1e-12 * want.max(1e-30), "{got} {want}");
        }
    }

    #[test]
    fn long_delay_factorizes() {
        let p = SystemParams::free(1.0, 1.5, 0.3, 0.4).with_drive(0.6, 0.05, 0.9);
        let r = g2(&p, 0.7, 2.1, &[200.0]).unwrap();
        assert!((r.normalized.unwrap()[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dark_fringe_normalization_is_undefined() {
        let p = params();
        assert!(matches!(g2_normalized(&p, PI, 0.5, &[1.0]), Err(Error::ZeroDenominator(_))));
        let r = g2(&p, PI, 0.5, &[1.0]).unwrap();
        assert!(r.normalized.is_none());
        assert_eq!(r.params_hash.len(), 16);
    }

    #[test]
    fn decoupled_b_coefficient() {
        let p = SystemParams::free(1.0, 2.0, 0.0, 0.0).with_drive(0.4, 0.05, 0.8);
        let a = p.driven_alpha();
        for t in [0.0, 0.7, 3.0, 40.0] {
            let got = two_photon_amplitude_b(&p, Time::Finite(t)).unwrap();
            let want = -(0.05 * 0.05) * C64::from_polar(1.0, 0.8) * (1.0 - (-a * t).exp()).powi(2) / (a * a);
            assert!((got - want).norm() < 1e-16, "t={t}");
        }
    }

    #[test]
    fn b_coefficient_converges_to_limit() {
        let p = SystemParams::free(1.0, 1.3, 0.4, 0.0).with_drive(0.3, 0.05, 1.2);
        let fin = two_photon_amplitude_b(&p, Time::Finite(150.0)).unwrap();
        let inf = two_photon_amplitude_b(&p, Time::Infinite).unwrap();
        assert!((fin - inf).norm() < 1e-13);
        let k = coupling_k(&p);
        let a = p.driven_alpha();
        let closed = -(0.05 * 0.05) * C64::from_polar(1.0, 1.2) * (1.0 - k * 1.2f64.cos()) / (a * a * (1.0 - k * k));
        assert!((inf - closed).norm() < 1e-16);
    }

    #[test]
    fn parity_tail_branches_agree() {
        let z = C64::new(9.5, 1.0);
        for k in [0u32, 1, 2] {
            // k + 8 >= |z| selects the series for k = 2 but the closed form for k = 0, 1
            let series = {
                let mut s = C64::new(0.0, 0.0);
                let mut n = k + 2;
                while n < 120 {
                    s += (-z + z.ln() * n as f64 - ln_factorial(n)).exp();
                    n += 2;
                }
                s
            };
            assert!((parity_tail(k, z, C64::new(0.0, 0.0)) - series).norm() < 1e-13);
        }
    }
}
