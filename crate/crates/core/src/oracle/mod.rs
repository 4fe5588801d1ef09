//! Direct numerical integration of the delay differential equations.
//!
//! This module is the independent reference for the series solutions: it
//! integrates the equations of motion themselves and never calls the
//! round-trip sums.
//!
//! Free evolution:
//! `ḃ_j = −(γ/2) b_j − κ(γ/2) e^{iω0τ} b_{3−j}(t−τ) Θ(t−τ)`.
//!
//! Driven evolution in the laser frame:
//! `ċ_j = −(γ/2 + iΔ) c_j − κ(γ/2) e^{iω_Lτ} c_{3−j}(t−τ) Θ(t−τ) − iΩ e^{iθ_j}`,
//! where the laser phases `θ_j` depend on the chosen [`Gauge`].

pub mod dopri;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::free::{check_time_grid, AmplitudeTrace, Solver};
use crate::model::{InitialState, SystemParams, Time};
use crate::quadrature::{integrate, QuadConfig};

pub use dopri::{DdeConfig, DdeSolution, State};

/// Smallest tolerance accepted by the oracle entry points.
pub const MIN_TOL: f64 = 1e-12;

/// Where the laser phase is referenced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// `θ_1 = −φ_L/2`, `θ_2 = +φ_L/2`.
    Symmetric,
    /// `θ_1 = 0`, `θ_2 = φ_L`; the convention of the series solutions.
    AtomOneOrigin,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol >= MIN_TOL) {
        return Err(Error::ParameterOutOfRange(format!(
            "tolerance {tol:e} must be finite and >= {MIN_TOL:e}"
        )));
    }
    Ok(())
}

fn free_rhs(params: &SystemParams) -> impl Fn(f64, &State, &State) -> State {
    let decay = -0.5 * params.gamma;
    let feed = -C64::from_polar(0.5 * params.kappa * params.gamma, params.omega0_tau);
    move |_, y, d| [y[0] * decay + feed * d[1], y[1] * decay + feed * d[0]]
}

fn driven_rhs(params: &SystemParams, gauge: Gauge) -> impl Fn(f64, &State, &State) -> State {
    let decay = -C64::new(0.5 * params.gamma, params.delta);
    let feed = -C64::from_polar(0.5 * params.kappa * params.gamma, params.omega_l_tau);
    let (t1, t2) = match gauge {
        Gauge::Symmetric => (-0.5 * params.phi_l, 0.5 * params.phi_l),
        Gauge::AtomOneOrigin => (0.0, params.phi_l),
    };
    let s1 = C64::new(0.0, -params.omega_rabi) * C64::from_polar(1.0, t1);
    let s2 = C64::new(0.0, -params.omega_rabi) * C64::from_polar(1.0, t2);
    move |_, y, d| [y[0] * decay + feed * d[1] + s1, y[1] * decay + feed * d[0] + s2]
}

/// Dense solution of the free equations on `[0, t_end]`.
pub fn solve_free_dde(params: &SystemParams, init: &InitialState, t_end: f64, tol: f64) -> Result<DdeSolution> {
    params.validate()?;
    check_tol(tol)?;
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::ParameterOutOfRange("end time must be finite and >= 0".into()));
    }
    dopri::solve(free_rhs(params), [init.alpha1, init.alpha2], params.tau, t_end, DdeConfig::with_tol(tol))
}

/// Free solution continued until both amplitudes stay below `threshold` for a
/// whole delay interval.
pub fn solve_free_dde_until_decayed(
    params: &SystemParams,
    init: &InitialState,
    tol: f64,
    threshold: f64,
) -> Result<DdeSolution> {
    params.validate()?;
    check_tol(tol)?;
    let tau = params.tau;
    let cap = 1e6 / params.gamma;
    let min_t = 40.0 / params.gamma;
    dopri::solve_until(
        free_rhs(params),
        [init.alpha1, init.alpha2],
        tau,
        cap,
        DdeConfig::with_tol(tol),
        |sol| {
            let t1 = sol.t_end();
            if t1 < min_t {
                return false;
            }
            (0..=16).all(|i| {
                let y = sol.eval(t1 - tau * i as f64 / 16.0);
                y[0].norm().max(y[1].norm()) < threshold
            })
        },
    )
}

fn sample(sol: &DdeSolution, times: &[f64], tau: f64) -> AmplitudeTrace {
    let (b1, b2) = times.iter().map(|&t| {
        let y = sol.eval(t);
        (y[0], y[1])
    }).unzip();
    AmplitudeTrace { times: times.to_vec(), b1, b2, solver: Solver::DelayEquation, tau }
}

/// Free amplitudes on a time grid from direct integration.
pub fn integrate_free_dde(params: &SystemParams, init: &InitialState, times: &[f64], tol: f64) -> Result<AmplitudeTrace> {
    check_time_grid(times)?;
    let sol = solve_free_dde(params, init, *times.last().unwrap_or(&0.0), tol)?;
    Ok(sample(&sol, times, params.tau))
}

/// Dense solution of the driven equations from both ground states.
pub fn solve_driven_dde(params: &SystemParams, t_end: f64, tol: f64, gauge: Gauge) -> Result<DdeSolution> {
    params.validate()?;
    check_tol(tol)?;
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::ParameterOutOfRange("end time must be finite and >= 0".into()));
    }
    let zero = C64::new(0.0, 0.0);
    dopri::solve(driven_rhs(params, gauge), [zero, zero], params.tau, t_end, DdeConfig::with_tol(tol))
}

/// Driven amplitudes on a time grid from direct integration.
pub fn integrate_driven_dde(params: &SystemParams, times: &[f64], tol: f64, gauge: Gauge) -> Result<AmplitudeTrace> {
    check_time_grid(times)?;
    let sol = solve_driven_dde(params, *times.last().unwrap_or(&0.0), tol, gauge)?;
    Ok(sample(&sol, times, params.tau))
}

/// Convert a symmetric-gauge driven trace to the emitter-1 reference.
pub fn to_atom_one_origin(trace: &AmplitudeTrace, phi_l: f64) -> AmplitudeTrace {
    let g = C64::from_polar(1.0, 0.5 * phi_l);
    AmplitudeTrace {
        b1: trace.b1.iter().map(|c| c * g).collect(),
        b2: trace.b2.iter().map(|c| c * g).collect(),
        ..trace.clone()
    }
}

fn quad_over_steps<F: Fn(f64) -> C64>(sol: &DdeSolution, upto: f64, f: F, cfg: QuadConfig) -> Result<C64> {
    let mut total = C64::new(0.0, 0.0);
    for (a, b) in sol.step_intervals() {
        if a >= upto {
            break;
        }
        let b = b.min(upto);
        if b > a {
            total += integrate(&f, a, b, cfg)?.0;
        }
    }
    Ok(total)
}

/// Field amplitude of the mode at `omega` (measured from resonance) in
/// direction ϑ, by quadrature of the integrated amplitudes:
/// `∫_0^t e^{i(ω−ω0)t'} (b1(t') + e^{iψ} b2(t')) dt'`.
pub fn field_amplitude_quadrature(
    params: &SystemParams,
    init: &InitialState,
    omega: f64,
    theta: f64,
    t: Time,
    tol: f64,
) -> Result<C64> {
    t.validate()?;
    let sol = match t {
        Time::Finite(t) => solve_free_dde(params, init, t, tol)?,
        Time::Infinite => solve_free_dde_until_decayed(params, init, tol, 1e-15)?,
    };
    let upto = sol.t_end();
    // relative phase of the second emitter's wave in direction ϑ
    let psi = (params.omega0_phase() + omega * params.tau) * theta.cos();
    let rel = C64::from_polar(1.0, psi);
    let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 200 };
    quad_over_steps(
        &sol,
        upto,
        |s| {
            let y = sol.eval(s);
            C64::from_polar(1.0, omega * s) * (y[0] + rel * y[1])
        },
        cfg,
    )
}

/// Two-excitation coefficient by quadrature of the integrated driven amplitudes:
/// `B(t) = −iΩ ∫_0^t e^{−2(γ/2+iΔ)(t−t')} (e^{iφ_L} c1(t') + c2(t')) dt'`.
pub fn b_coefficient_quadrature(params: &SystemParams, t: f64, tol: f64) -> Result<C64> {
    let sol = solve_driven_dde(params, t, tol, Gauge::AtomOneOrigin)?;
    let alpha = params.driven_alpha();
    let l = C64::from_polar(1.0, params.phi_l);
    let cfg = QuadConfig { abs_tol: 1e-16, rel_tol: 1e-13, max_intervals: 200 };
    let integral = quad_over_steps(
        &sol,
        t,
        |s| {
            let y = sol.eval(s);
            (-2.0 * alpha * (t - s)).exp() * (l * y[0] + y[1])
        },
        cfg,
    )?;
    Ok(C64::new(0.0, -params.omega_rabi) * integral)
}

/// Observed convergence order from fixed-step runs: least-squares slope of
/// `ln(error)` against `ln(h)` for the free equations, with errors measured
/// against an adaptive run at [`MIN_TOL`].
pub fn convergence_order(params: &SystemParams, init: &InitialState, t_end: f64, steps_per_delay: &[usize]) -> Result<f64> {
    if steps_per_delay.len() < 3 || steps_per_delay.contains(&0) {
        return Err(Error::ParameterOutOfRange("need at least three positive step counts".into()));
    }
    let reference = solve_free_dde(params, init, t_end, MIN_TOL)?;
    let probe: Vec<f64> = (1..=64).map(|i| t_end * i as f64 / 64.0).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &n in steps_per_delay {
        let h = params.tau / n as f64;
        let cfg = DdeConfig { tol: 1e6, max_steps: 100_000_000, h_max: h };
        let sol = dopri::solve(free_rhs(params), [init.alpha1, init.alpha2], params.tau, t_end, cfg)?;
        let err = probe
            .iter()
            .map(|&t| {
                let (a, b) = (sol.eval(t), reference.eval(t));
                (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
            })
            .fold(0.0, f64::max);
        xs.push(h.ln());
        ys.push(err.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_free_decay() {
        let p = SystemParams::free(1.0, 1.0, 0.0, 0.0);
        let times: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let tr = integrate_free_dde(&p, &InitialState::atom1(), &times, 1e-12).unwrap();
        for (t, b) in times.iter().zip(&tr.b1) {
            assert!((b.norm() - (-0.5 * t).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_loose_inputs() {
        let p = SystemParams::free(1.0, 1.0, 0.2, 0.0);
        assert!(integrate_free_dde(&p, &InitialState::atom1(), &[0.0, 1.0], 1e-14).is_err());
        assert!(integrate_free_dde(&p, &InitialState::atom1(), &[1.0, 0.0], 1e-10).is_err());
    }

    #[test]
    fn first_echo_arrives_after_one_delay() {
        let p = SystemParams::free(1.0, 2.0, 0.4, 0.0);
        let tr = integrate_free_dde(&p, &InitialState::atom1(), &[1.0, 2.0, 2.5], 1e-12).unwrap();
        assert!(tr.b2[0].norm() < 1e-14 && tr.b2[1].norm() < 1e-12);
        let want = 0.2 * 0.5 * (-0.25f64).exp();
        assert!((tr.b2[2].norm() - want).abs() < 1e-10);
    }

    #[test]
    fn gauges_differ_by_a_global_phase() {
        let p = SystemParams::free(1.0, 0.8, 0.4, 0.3).with_drive(0.2, 0.05, 1.1);
        let times = [0.5, 1.7, 4.0];
        let sym = integrate_driven_dde(&p, &times, 1e-12, Gauge::Symmetric).unwrap();
        let r1 = integrate_driven_dde(&p, &times, 1e-12, Gauge::AtomOneOrigin).unwrap();
        assert!(to_atom_one_origin(&sym, p.phi_l).max_abs_difference(&r1) < 1e-12);
    }

    #[test]
    fn order_is_about_five() {
        let p = SystemParams::free(1.0, 1.0, 0.4, 0.5);
        let order = convergence_order(&p, &InitialState::atom1(), 4.0, &[4, 8, 16, 32]).unwrap();
        assert!((4.0..=6.0).contains(&order), "{order}");
    }
}
