//! Physical parameters from defaults, an optional parameter file and flags, in that order of precedence.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use lensdimer::model::ParamFile;
use lensdimer::{Complex64, InitialState, SystemParams};
use serde_json::{json, Value};

use crate::error::{range, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitPreset {
    Atom1,
    Atom2,
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Parameter file with `key = value` lines; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Decay rate γ (sets the unit of rates; default 1).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Propagation delay τ.
    #[arg(long, conflicts_with = "gamma_tau")]
    pub tau: Option<f64>,
    /// Delay as the dimensionless product γτ.
    #[arg(long)]
    pub gamma_tau: Option<f64>,
    /// Fraction of emission redirected onto the other emitter, 0 <= κ < 1.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "omega0_tau_over_pi")]
    pub omega0_tau: Option<f64>,
    /// Resonance propagation phase ω0τ in units of π.
    #[arg(long, allow_hyphen_values = true)]
    pub omega0_tau_over_pi: Option<f64>,
    /// Laser propagation phase; defaults to ω0τ − Δτ.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "omega_l_tau_over_pi")]
    pub omega_l_tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_l_tau_over_pi: Option<f64>,
    /// Laser detuning Δ = ω_L − ω0.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Rabi frequency Ω.
    #[arg(long)]
    pub omega_rabi: Option<f64>,
    /// Laser phase difference between the emitters.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "phi_l_over_pi")]
    pub phi_l: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_l_over_pi: Option<f64>,
    /// Initial amplitude of emitter 1 as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "init")]
    pub alpha1: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "init")]
    pub alpha2: Option<Complex64>,
    /// Named initial state.
    #[arg(long, value_enum)]
    pub init: Option<InitPreset>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|_| format!("`{x}` is not a number"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err("expected `re` or `re,im`".into()),
    }
}

/// Fully resolved inputs of a run.
#[derive(Debug, Clone, Copy)]
pub struct Resolved {
    pub params: SystemParams,
    pub init: InitialState,
}

impl Resolved {
    pub fn to_json(self) -> Value {
        json!({
            "gamma": self.params.gamma,
            "tau": self.params.tau,
            "kappa": self.params.kappa,
            "omega0_tau": self.params.omega0_tau,
            "omega_l_tau": self.params.omega_l_tau,
            "delta": self.params.delta,
            "omega_rabi": self.params.omega_rabi,
            "phi_l": self.params.phi_l,
            "alpha1": [self.init.alpha1.re, self.init.alpha1.im],
            "alpha2": [self.init.alpha2.re, self.init.alpha2.im],
        })
    }
}

fn pick(flag: Option<f64>, over_pi: Option<f64>, file: Option<f64>) -> Option<f64> {
    flag.or(over_pi.map(|x| x * PI)).or(file)
}

impl SystemArgs {
    /// `default_rabi` applies when neither the file nor a flag gives Ω.
    pub fn resolve(&self, default_rabi: f64) -> CliResult<Resolved> {
        let file = match &self.params {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                ParamFile::parse(&text)?
            }
            None => ParamFile::default(),
        };
        let gamma = self.gamma.or(file.gamma).unwrap_or(1.0);
        let tau = match (self.tau, self.gamma_tau) {
            (Some(t), _) => t,
            (None, Some(gt)) => gt / gamma,
            (None, None) => file.tau.unwrap_or(1.0),
        };
        let omega0_tau = pick(self.omega0_tau, self.omega0_tau_over_pi, file.omega0_tau).unwrap_or(0.0);
        let delta = self.delta.or(file.delta).unwrap_or(0.0);
        let omega_l_tau =
            pick(self.omega_l_tau, self.omega_l_tau_over_pi, file.omega_l_tau).unwrap_or(omega0_tau - delta * tau);
        let params = SystemParams {
            gamma,
            tau,
            kappa: self.kappa.or(file.kappa).unwrap_or(0.0),
            omega0_tau,
            omega_l_tau,
            delta,
            omega_rabi: self.omega_rabi.or(file.omega_rabi).unwrap_or(default_rabi * gamma),
            phi_l: pick(self.phi_l, self.phi_l_over_pi, file.phi_l).unwrap_or(0.0),
        };
        params.validate()?;
        let init = match self.init {
            Some(InitPreset::Atom1) => InitialState::atom1(),
            Some(InitPreset::Atom2) => InitialState::atom2(),
            Some(InitPreset::Symmetric) => InitialState::symmetric(),
            Some(InitPreset::Antisymmetric) => InitialState::antisymmetric(),
            None => {
                let from_file = |re: Option<f64>, im: Option<f64>| {
                    (re.is_some() || im.is_some()).then(|| Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0)))
                };
                let a1 = self.alpha1.or(from_file(file.alpha1_re, file.alpha1_im));
                let a2 = self.alpha2.or(from_file(file.alpha2_re, file.alpha2_im));
                match (a1, a2) {
                    (None, None) => InitialState::atom1(),
                    (a1, a2) => InitialState::new(a1.unwrap_or_default(), a2.unwrap_or_default())?,
                }
            }
        };
        Ok(Resolved { params, init })
    }
}

pub fn require_points(n: usize, min: usize, what: &str) -> CliResult<()> {
    if n < min {
        return Err(range(format!("{what} needs at least {min} points")));
    }
    Ok(())
}

/// `n` points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { b } else { a + i as f64 * step }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_flags() {
        assert_eq!(parse_complex("0.6").unwrap(), Complex64::new(0.6, 0.0));
        assert_eq!(parse_complex("0, -0.8").unwrap(), Complex64::new(0.0, -0.8));
        assert!(parse_complex("1,2,3").is_err());
    }

    #[test]
    fn linspace_hits_both_ends() {
        let x = linspace(0.0, 0.3, 4);
        assert_eq!(x.len(), 4);
        assert_eq!(x[3], 0.3);
        assert!((x[1] - 0.1).abs() < 1e-16);
    }
}
