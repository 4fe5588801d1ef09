//! Undriven dynamics: excitation amplitudes and the emitted single-photon field.
//!
//! The excitation amplitudes are finite sums over round trips through the
//! lens, `b_j(t) = Σ_k I_k(t)` with
//! `I_k(t) = (−κγ/2 e^{iω0τ})^k / k! · t_k^k e^{−γ t_k/2} Θ(t_k)`, `t_k = t − kτ`.
//! Even `k` feed an emitter from its own initial amplitude, odd `k` from its
//! partner's. The field amplitude of a mode at frequency ω uses the analogous
//! `H_k = K'^k P(k+1, (γ/2 + iδ) t_k)` with `K' = −κ(γ/2)e^{iωτ}/(γ/2 + iδ)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{wrap_phase, InitialState, SystemParams, Time};
use crate::par::{self, Execution};
use crate::special::{ln_factorial, scaled_gamma_p, MAX_ORDER};

/// Which solver produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Solver {
    Series,
    DelayEquation,
}

/// Complex amplitudes of both emitters on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub times: Vec<f64>,
    pub b1: Vec<C64>,
    pub b2: Vec<C64>,
    pub solver: Solver,
    pub tau: f64,
}

impl AmplitudeTrace {
    pub fn populations(&self) -> Vec<(f64, f64)> {
        self.b1.iter().zip(&self.b2).map(|(a, b)| (a.norm_sqr(), b.norm_sqr())).collect()
    }

    pub fn times_over_tau(&self) -> Vec<f64> {
        self.times.iter().map(|t| t / self.tau).collect()
    }

    /// Largest pointwise amplitude difference to another trace on the same grid.
    pub fn max_abs_difference(&self, other: &AmplitudeTrace) -> f64 {
        self.b1
            .iter()
            .zip(&other.b1)
            .chain(self.b2.iter().zip(&other.b2))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Amplitudes of the `(|eg> ± |ge>)/√2` channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTrace {
    pub times: Vec<f64>,
    pub c_plus: Vec<C64>,
    pub c_minus: Vec<C64>,
}

pub(crate) fn check_time_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("time grid"));
    }
    if times[0] < 0.0 || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::UnsortedGrid);
    }
    Ok(())
}

pub(crate) fn round_trips(t: f64, tau: f64) -> Result<u32> {
    let n = (t / tau).floor();
    if n > MAX_ORDER as f64 {
        return Err(Error::ParameterOutOfRange(format!(
            "t/τ = {:.0} needs more than {MAX_ORDER} round trips",
            t / tau
        )));
    }
    Ok(n as u32)
}

fn check(params: &SystemParams) -> Result<()> {
    params.validate()
}

/// The `k`-th round-trip contribution `I_k(t)`.
pub fn i_k_term(k: u32, t: f64, params: &SystemParams) -> C64 {
    let tk = t - k as f64 * params.tau;
    if tk < 0.0 {
        return C64::new(0.0, 0.0);
    }
    let decay = -0.5 * params.gamma * tk;
    if k == 0 {
        return C64::new(decay.exp(), 0.0);
    }
    if params.kappa == 0.0 || tk == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let kf = k as f64;
    let ln_mag = kf * ((0.5 * params.kappa * params.gamma).ln() + tk.ln()) - ln_factorial(k) + decay;
    C64::from_polar(ln_mag.exp(), kf * (params.omega0_phase() + PI))
}

/// `(Σ_even I_k, Σ_odd I_k)` at time `t`.
pub fn i_sums(t: f64, params: &SystemParams) -> Result<(C64, C64)> {
    let n = round_trips(t, params.tau)?;
    let mut even = C64::new(0.0, 0.0);
    let mut odd = C64::new(0.0, 0.0);
    let top = if params.kappa == 0.0 { 0 } else { n };
    for k in 0..=top {
        let term = i_k_term(k, t, params);
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
    }
    Ok((even, odd))
}

/// Excitation amplitudes `(b1, b2)` at a single time.
pub fn free_amplitudes(params: &SystemParams, init: &InitialState, t: f64) -> Result<(C64, C64)> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::ParameterOutOfRange("time must be finite and >= 0".into()));
    }
    let (e, o) = i_sums(t, params)?;
    Ok((init.alpha1 * e + init.alpha2 * o, init.alpha2 * e + init.alpha1 * o))
}

pub fn evolve_free(params: &SystemParams, init: &InitialState, times: &[f64]) -> Result<AmplitudeTrace> {
    evolve_free_with(Execution::default(), params, init, times)
}

pub fn evolve_free_with(
    exec: Execution,
    params: &SystemParams,
    init: &InitialState,
    times: &[f64],
) -> Result<AmplitudeTrace> {
    check(params)?;
    check_time_grid(times)?;
    let values = par::try_map(exec, times, |&t| free_amplitudes(params, init, t))?;
    let (b1, b2) = values.into_iter().unzip();
    Ok(AmplitudeTrace { times: times.to_vec(), b1, b2, solver: Solver::Series, tau: params.tau })
}

/// Evolve the symmetric and antisymmetric channels, `C±(t) = C±(0) Σ (±1)^k I_k(t)`.
pub fn evolve_symmetric_channels(
    params: &SystemParams,
    c_plus0: C64,
    c_minus0: C64,
    times: &[f64],
) -> Result<ChannelTrace> {
    check(params)?;
    check_time_grid(times)?;
    let mut c_plus = Vec::with_capacity(times.len());
    let mut c_minus = Vec::with_capacity(times.len());
    for &t in times {
        let (e, o) = i_sums(t, params)?;
        c_plus.push(c_plus0 * (e + o));
        c_minus.push(c_minus0 * (e - o));
    }
    Ok(ChannelTrace { times: times.to_vec(), c_plus, c_minus })
}

/// Round-trip sums `(Σ_even H_k, Σ_odd H_k)` for a field mode with detuning
/// `δ = ω0 − ω` and propagation phase `ωτ`.
pub(crate) fn h_sums(params: &SystemParams, delta_mu: f64, omega_tau: f64, t: Time) -> Result<(C64, C64)> {
    let alpha = C64::new(0.5 * params.gamma, delta_mu);
    let kp = -C64::from_polar(0.5 * params.kappa * params.gamma, omega_tau) / alpha;
    let t = match t {
        Time::Infinite => {
            let d = C64::new(1.0, 0.0) - kp * kp;
            return Ok((1.0 / d, kp / d));
        }
        Time::Finite(t) => t,
    };
    let n = if params.kappa == 0.0 { 0 } else { round_trips(t, params.tau)? };
    let ln_kp = C64::new((0.5 * params.kappa * params.gamma).ln(), wrap_phase(omega_tau) + PI) - alpha.ln();
    let mut even = C64::new(0.0, 0.0);
    let mut odd = C64::new(0.0, 0.0);
    for k in 0..=n {
        let tk = t - k as f64 * params.tau;
        if tk < 0.0 {
            break;
        }
        let scale = if k == 0 { C64::new(0.0, 0.0) } else { ln_kp * k as f64 };
        let term = scaled_gamma_p(k, alpha * tk, scale);
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
    }
    Ok((even, odd))
}

/// The `k`-th round-trip term `H_k(t, ω)` of the emitted field, with `omega`
/// measured from the atomic resonance.
pub fn h_k_term(k: u32, t: f64, omega: f64, params: &SystemParams) -> C64 {
    let tk = t - k as f64 * params.tau;
    if tk < 0.0 || (k > 0 && params.kappa == 0.0) {
        return C64::new(0.0, 0.0);
    }
    let alpha = C64::new(0.5 * params.gamma, -omega);
    let omega_tau = params.omega0_phase() + omega * params.tau;
    let kp = -C64::from_polar(0.5 * params.kappa * params.gamma, omega_tau) / alpha;
    let scale = if k == 0 { C64::new(0.0, 0.0) } else { kp.ln() * k as f64 };
    scaled_gamma_p(k, alpha * tk, scale)
}

/// Phase of the second emitter's field relative to the first in direction ϑ.
pub fn emission_phase(params: &SystemParams, omega: f64, theta: f64) -> f64 {
    (params.omega0_phase() + omega * params.tau) * theta.cos()
}

/// Field amplitudes `(b^(1), b^(2))` radiated by each emitter into the mode at
/// `omega` (measured from resonance), without the geometric phase between them.
pub fn atom_photon_amplitudes(
    params: &SystemParams,
    init: &InitialState,
    t: Time,
    omega: f64,
) -> Result<(C64, C64)> {
    t.validate()?;
    if !omega.is_finite() {
        return Err(Error::NonFinite("frequency"));
    }
    let delta_mu = -omega;
    let omega_tau = params.omega0_phase() + omega * params.tau;
    let (e, o) = h_sums(params, delta_mu, omega_tau, t)?;
    let inv_alpha = 1.0 / C64::new(0.5 * params.gamma, delta_mu);
    Ok((
        inv_alpha * (init.alpha1 * e + init.alpha2 * o),
        inv_alpha * (init.alpha2 * e + init.alpha1 * o),
    ))
}

/// Combined single-photon amplitude in direction ϑ from the emitter axis.
pub fn photon_amplitude(
    params: &SystemParams,
    init: &InitialState,
    t: Time,
    omega: f64,
    theta: f64,
) -> Result<C64> {
    let (a1, a2) = atom_photon_amplitudes(params, init, t, omega)?;
    Ok(a1 + a2 * C64::from_polar(1.0, emission_phase(params, omega, theta)))
}

/// Which emitter's field enters a spectrum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Emitter {
    #[default]
    Both,
    Atom1,
    Atom2,
}

/// Spectrum scaling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// `|b(ω)|²` as computed, coupling constant set to one.
    #[default]
    RawShape,
    /// Divided by the peak `4/γ²` of an isolated emitter.
    FreeSpacePeak,
}

impl Normalization {
    pub fn factor(self, gamma: f64) -> f64 {
        match self {
            Normalization::RawShape => 1.0,
            Normalization::FreeSpacePeak => 0.25 * gamma * gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConfig {
    pub time: Time,
    pub theta: f64,
    pub source: Emitter,
    pub normalization: Normalization,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            time: Time::Infinite,
            theta: PI / 2.0,
            source: Emitter::Both,
            normalization: Normalization::RawShape,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Frequencies measured from the atomic resonance.
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub config: SpectrumConfig,
}

pub fn emission_spectrum(
    params: &SystemParams,
    init: &InitialState,
    config: &SpectrumConfig,
    omegas: &[f64],
) -> Result<SpectrumResult> {
    emission_spectrum_with(Execution::default(), params, init, config, omegas)
}

pub fn emission_spectrum_with(
    exec: Execution,
    params: &SystemParams,
    init: &InitialState,
    config: &SpectrumConfig,
    omegas: &[f64],
) -> Result<SpectrumResult> {
    check(params)?;
    config.time.validate()?;
    if omegas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let scale = config.normalization.factor(params.gamma);
    let values = par::try_map(exec, omegas, |&w| {
        let (a1, a2) = atom_photon_amplitudes(params, init, config.time, w)?;
        let amp = match config.source {
            Emitter::Atom1 => a1,
            Emitter::Atom2 => a2,
            Emitter::Both => a1 + a2 * C64::from_polar(1.0, emission_phase(params, w, config.theta)),
        };
        Ok(amp.norm_sqr() * scale)
    })?;
    Ok(SpectrumResult { omegas: omegas.to_vec(), values, config: *config })
}

/// Long-time spectrum of the symmetric state on a (ϑ, ω) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrum {
    pub thetas: Vec<f64>,
    pub omegas: Vec<f64>,
    /// One row per angle.
    pub values: Vec<Vec<f64>>,
}

pub fn two_atom_angular_spectrum(
    params: &SystemParams,
    omegas: &[f64],
    thetas: &[f64],
    normalization: Normalization,
) -> Result<AngularSpectrum> {
    two_atom_angular_spectrum_with(Execution::default(), params, omegas, thetas, normalization)
}

pub fn two_atom_angular_spectrum_with(
    exec: Execution,
    params: &SystemParams,
    omegas: &[f64],
    thetas: &[f64],
    normalization: Normalization,
) -> Result<AngularSpectrum> {
    check(params)?;
    if omegas.is_empty() || thetas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let init = InitialState::symmetric();
    let scale = normalization.factor(params.gamma);
    let per_omega = par::try_map(exec, omegas, |&w| atom_photon_amplitudes(params, &init, Time::Infinite, w))?;
    let values = par::map(exec, thetas, |&th| {
        omegas
            .iter()
            .zip(&per_omega)
            .map(|(&w, (a1, a2))| {
                (a1 + a2 * C64::from_polar(1.0, emission_phase(params, w, th))).norm_sqr() * scale
            })
            .collect()
    });
    Ok(AngularSpectrum { thetas: thetas.to_vec(), omegas: omegas.to_vec(), values })
}
