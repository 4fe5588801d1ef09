//! System parameters, initial states and the lens geometry.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d, QuadConfig};

pub const TWO_PI: f64 = 2.0 * PI;

/// Reduce a phase to `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TWO_PI);
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Physical parameters of the lens-coupled emitter pair.
///
/// Rates and frequencies share one unit (usually `γ = 1`), `tau` is the
/// inverse of that unit. Phases are in radians; `omega0_tau` and
/// `omega_l_tau` may be given unreduced, they are wrapped where used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub gamma: f64,
    pub tau: f64,
    pub kappa: f64,
    pub omega0_tau: f64,
    pub omega_l_tau: f64,
    pub delta: f64,
    pub omega_rabi: f64,
    pub phi_l: f64,
}

/// Non-fatal parameter conditions worth reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamWarning {
    /// Ω exceeds 0.1 γ, outside the weak-drive regime the driven results assume.
    StrongDrive { ratio: f64 },
    /// `ω0 τ − ω_L τ` differs from `Δ τ` modulo 2π.
    PhaseMismatch { residual: f64 },
}

impl fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::StrongDrive { ratio } => {
                write!(f, "Ω/γ = {ratio:.3} exceeds 0.1; weak-drive results may not apply")
            }
            Self::PhaseMismatch { residual } => write!(
                f,
                "ω0τ − ω_Lτ differs from Δτ by {residual:.3e} rad (mod 2π)"
            ),
        }
    }
}

impl SystemParams {
    /// Undriven system: `Δ = Ω = φ_L = 0`, `ω_L τ = ω0 τ`.
    pub fn free(gamma: f64, tau: f64, kappa: f64, omega0_tau: f64) -> Self {
        Self {
            gamma,
            tau,
            kappa,
            omega0_tau,
            omega_l_tau: omega0_tau,
            delta: 0.0,
            omega_rabi: 0.0,
            phi_l: 0.0,
        }
    }

    /// Add a weak drive; `ω_L τ` is set to `ω0 τ − Δ τ`.
    pub fn with_drive(mut self, delta: f64, omega_rabi: f64, phi_l: f64) -> Self {
        self.delta = delta;
        self.omega_rabi = omega_rabi;
        self.phi_l = phi_l;
        self.omega_l_tau = self.omega0_tau - delta * self.tau;
        self
    }

    /// Override the laser propagation phase independently of `ω0 τ`.
    pub fn with_omega_l_tau(mut self, omega_l_tau: f64) -> Self {
        self.omega_l_tau = omega_l_tau;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma", self.gamma),
            ("tau", self.tau),
            ("kappa", self.kappa),
            ("omega0_tau", self.omega0_tau),
            ("omega_l_tau", self.omega_l_tau),
            ("delta", self.delta),
            ("omega_rabi", self.omega_rabi),
            ("phi_l", self.phi_l),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::ParameterOutOfRange(format!("{name} must be finite")));
            }
        }
        if self.gamma <= 0.0 {
            return Err(Error::ParameterOutOfRange(format!("gamma = {} must be > 0", self.gamma)));
        }
        if self.tau <= 0.0 {
            return Err(Error::ParameterOutOfRange(format!("tau = {} must be > 0", self.tau)));
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(Error::ParameterOutOfRange(format!(
                "kappa = {} must lie in [0, 1)",
                self.kappa
            )));
        }
        if self.omega_rabi < 0.0 {
            return Err(Error::ParameterOutOfRange("omega_rabi must be >= 0".into()));
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<ParamWarning> {
        let mut out = Vec::new();
        let ratio = self.omega_rabi / self.gamma;
        if ratio > 0.1 {
            out.push(ParamWarning::StrongDrive { ratio });
        }
        let mismatch = wrap_phase(self.omega0_tau - self.omega_l_tau - self.delta * self.tau);
        let residual = mismatch.min(TWO_PI - mismatch);
        if residual > 1e-9 {
            out.push(ParamWarning::PhaseMismatch { residual });
        }
        out
    }

    pub fn gamma_tau(&self) -> f64 {
        self.gamma * self.tau
    }

    pub fn omega0_phase(&self) -> f64 {
        wrap_phase(self.omega0_tau)
    }

    pub fn omega_l_phase(&self) -> f64 {
        wrap_phase(self.omega_l_tau)
    }

    /// `γ/2 + iΔ`.
    pub fn driven_alpha(&self) -> C64 {
        C64::new(0.5 * self.gamma, self.delta)
    }
}

/// Complex amplitudes of `|e,g>` and `|g,e>` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub alpha1: C64,
    pub alpha2: C64,
}

impl InitialState {
    /// Fails unless `|α1|² + |α2|² = 1` within 1e-12.
    pub fn new(alpha1: C64, alpha2: C64) -> Result<Self> {
        let norm = alpha1.norm_sqr() + alpha2.norm_sqr();
        if !norm.is_finite() {
            return Err(Error::NonFinite("initial amplitudes"));
        }
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::ParameterOutOfRange(format!(
                "initial state norm {norm} differs from 1"
            )));
        }
        Ok(Self { alpha1, alpha2 })
    }

    /// Rescale arbitrary amplitudes to unit norm.
    pub fn normalized(alpha1: C64, alpha2: C64) -> Result<Self> {
        let n = (alpha1.norm_sqr() + alpha2.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::ParameterOutOfRange("initial amplitudes are all zero".into()));
        }
        Self::new(alpha1 / n, alpha2 / n)
    }

    pub fn atom1() -> Self {
        Self { alpha1: C64::new(1.0, 0.0), alpha2: C64::new(0.0, 0.0) }
    }

    pub fn atom2() -> Self {
        Self { alpha1: C64::new(0.0, 0.0), alpha2: C64::new(1.0, 0.0) }
    }

    pub fn symmetric() -> Self {
        let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { alpha1: a, alpha2: a }
    }

    pub fn antisymmetric() -> Self {
        let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { alpha1: a, alpha2: -a }
    }

    /// Amplitudes of the `(|eg> ± |ge>)/√2` channels.
    pub fn channels(&self) -> (C64, C64) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ((self.alpha1 + self.alpha2) * s, (self.alpha1 - self.alpha2) * s)
    }
}

/// One of the two emitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Atom {
    One,
    Two,
}

/// Evaluation time for quantities defined at finite `t` or in the long-time limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Time {
    Finite(f64),
    Infinite,
}

impl Time {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Time::Finite(t) if !t.is_finite() => Err(Error::NonFinite("time")),
            Time::Finite(t) if t < 0.0 => Err(Error::ParameterOutOfRange("time must be >= 0".into())),
            _ => Ok(()),
        }
    }
}

/// The delayed coupling constant `K = κ (γ/2) e^{iω_L τ} / (γ/2 + iΔ)`.
pub fn coupling_k(params: &SystemParams) -> C64 {
    let phase = C64::from_polar(1.0, params.omega_l_phase());
    phase * (params.kappa * 0.5 * params.gamma) / params.driven_alpha()
}

/// Lens aperture and dipole orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensGeometry {
    /// Half opening angle θ0 of the collection cone, radians in `(0, π]`.
    pub half_angle: f64,
    /// Angle between the dipole and the lens axis, radians.
    pub dipole_angle: f64,
}

/// Fraction of spontaneous emission collected by a cone of half angle θ0.
///
/// `κ = (3/8π) ∫_cone (1 − (d̂·n̂)²) dΩ`, integrated numerically so that any
/// dipole orientation is handled.
pub fn kappa_from_geometry(geom: &LensGeometry) -> Result<f64> {
    let theta0 = geom.half_angle;
    if !theta0.is_finite() || theta0 <= 0.0 || theta0 > PI + 1e-12 {
        return Err(Error::ParameterOutOfRange(format!(
            "half angle {theta0} must lie in (0, π]"
        )));
    }
    if !geom.dipole_angle.is_finite() {
        return Err(Error::NonFinite("dipole angle"));
    }
    let (sb, cb) = geom.dipole_angle.sin_cos();
    let cfg = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 500 };
    let integral = integrate_2d(
        |theta, phi| {
            let (st, ct) = theta.sin_cos();
            let proj = sb * st * phi.cos() + cb * ct;
            (1.0 - proj * proj) * st
        },
        (0.0, theta0.min(PI)),
        (0.0, TWO_PI),
        cfg,
    )?;
    Ok(3.0 / (8.0 * PI) * integral)
}

/// Closed form of [`kappa_from_geometry`] for a dipole along the lens axis.
pub fn kappa_axis_closed_form(half_angle: f64) -> f64 {
    let c = half_angle.cos();
    0.75 * (2.0 / 3.0 - c + c * c * c / 3.0)
}

/// Values read from a `key = value` parameter file. Absent keys are `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamFile {
    pub gamma: Option<f64>,
    pub tau: Option<f64>,
    pub kappa: Option<f64>,
    pub omega0_tau: Option<f64>,
    pub omega_l_tau: Option<f64>,
    pub delta: Option<f64>,
    pub omega_rabi: Option<f64>,
    pub phi_l: Option<f64>,
    pub alpha1_re: Option<f64>,
    pub alpha1_im: Option<f64>,
    pub alpha2_re: Option<f64>,
    pub alpha2_im: Option<f64>,
}

impl ParamFile {
    /// Parse `key = value` lines. `#` starts a comment; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::ParamFile(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::ParamFile(format!("line {}: `{}` is not a number", lineno + 1, value.trim()))
            })?;
            let slot = match key {
                "gamma" => &mut out.gamma,
                "tau" => &mut out.tau,
                "kappa" => &mut out.kappa,
                "omega0_tau" => &mut out.omega0_tau,
                "omega_l_tau" => &mut out.omega_l_tau,
                "delta" => &mut out.delta,
                "omega_rabi" => &mut out.omega_rabi,
                "phi_l" => &mut out.phi_l,
                "alpha1_re" => &mut out.alpha1_re,
                "alpha1_im" => &mut out.alpha1_im,
                "alpha2_re" => &mut out.alpha2_re,
                "alpha2_im" => &mut out.alpha2_im,
                other => {
                    return Err(Error::ParamFile(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            };
            if slot.replace(value).is_some() {
                return Err(Error::ParamFile(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        Ok(out)
    }
}
