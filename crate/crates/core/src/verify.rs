//! Acceptance checks shared by the test suite and `lensdimer verify`.
//!
//! Each check returns a [`CheckOutcome`] with the measured error and the
//! pinned tolerance. Rendering never includes timing so reports can be
//! compared byte for byte; wall-clock time is kept in [`CheckOutcome::elapsed`].

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;

use crate::correlations::g2_value;
use crate::driven::{
    dominant_harmonic, driven_amplitudes, expansion_coefficients, periodic_grid, rate_incoherent, rate_scan,
    steady_excitation, visibility, Detector, ScanVariable,
};
use crate::free::{emission_spectrum_with, evolve_free_with, Emitter, Normalization, SpectrumConfig};
use crate::model::{kappa_axis_closed_form, kappa_from_geometry, Atom, InitialState, LensGeometry, SystemParams, Time};
use crate::oracle::{integrate_driven_dde, integrate_free_dde, to_atom_one_origin, Gauge};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} {:<22} {}  measured {:>10.3e}  tol {:>9.2e}  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.measured,
            self.tolerance,
            self.detail
        )
    }
}

/// Which checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    /// Series versus delay-equation integration only.
    Oracle,
    /// Closed-form and limit checks, no delay-equation runs.
    ClosedForm,
}

struct Timer(Instant);

impl Timer {
    fn start() -> Self {
        Timer(Instant::now())
    }

    fn finish(
        self,
        id: &'static str,
        name: &'static str,
        passed: bool,
        measured: f64,
        tolerance: f64,
        detail: String,
    ) -> CheckOutcome {
        CheckOutcome { id, name, passed, measured, tolerance, detail, elapsed: self.0.elapsed() }
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates as a failure
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

fn oracle_init() -> InitialState {
    InitialState::new(C64::new(0.6, 0.0), C64::from_polar(0.8, 0.3)).expect("normalized")
}

fn oracle_grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for gt in [10.0, 0.4, 1.0] {
        for kappa in [0.0, 0.2, 0.4, 0.8] {
            for w in [0.0, PI / 2.0, PI] {
                out.push((gt, kappa, w));
            }
        }
    }
    out
}

fn oracle_times(tau: f64) -> Vec<f64> {
    (0..=400).map(|i| i as f64 * tau / 40.0).collect()
}

/// Series versus direct integration, free decay.
pub fn check_oracle_free(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let init = oracle_init();
    let errors = par::map(exec, &oracle_grid(), |&(gt, kappa, w)| {
        let p = SystemParams::free(1.0, gt, kappa, w);
        let times = oracle_times(p.tau);
        let series = evolve_free_with(Execution::Sequential, &p, &init, &times);
        let dde = integrate_free_dde(&p, &init, &times, 1e-12);
        match (series, dde) {
            (Ok(a), Ok(b)) => a.max_abs_difference(&b),
            _ => f64::NAN,
        }
    });
    let err = max_of(errors);
    let within = timer.0.elapsed() < Duration::from_secs(30);
    let detail = format!("36 parameter sets, t in [0, 10τ]{}", if within { "" } else { ", runtime over 30 s" });
    timer.finish("C01", "oracle-free", err <= 1e-8 && within, err, 1e-8, detail)
}

/// Series versus direct integration, weak drive (symmetric-gauge integration converted back).
pub fn check_oracle_driven(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let errors = par::map(exec, &oracle_grid(), |&(gt, kappa, wl)| {
        let p = SystemParams::free(1.0, gt, kappa, wl + 0.3 * gt)
            .with_drive(0.3, 0.05, 0.7);
        let times = oracle_times(p.tau);
        let series = crate::driven::evolve_driven_with(Execution::Sequential, &p, &times);
        let dde = integrate_driven_dde(&p, &times, 1e-12, Gauge::Symmetric);
        match (series, dde) {
            (Ok(a), Ok(b)) => a.max_abs_difference(&to_atom_one_origin(&b, p.phi_l)),
            _ => f64::NAN,
        }
    });
    let err = max_of(errors);
    let within = timer.0.elapsed() < Duration::from_secs(30);
    let detail = format!(
        "36 parameter sets, Ω = 0.05γ, Δ = 0.3γ, φ_L = 0.7{}",
        if within { "" } else { ", runtime over 30 s" }
    );
    timer.finish("C02", "oracle-driven", err <= 1e-8 && within, err, 1e-8, detail)
}

/// Decoupled limit of the decay and of the long-time spectrum.
pub fn check_free_space_limits(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let init = oracle_init();
    let mut decay_err: f64 = 0.0;
    for gt in [0.4, 1.0, 10.0] {
        let p = SystemParams::free(1.0, gt, 0.0, 1.0);
        let times = oracle_times(p.tau);
        let series = evolve_free_with(exec, &p, &init, &times);
        let dde = integrate_free_dde(&p, &init, &times, 1e-12);
        match (series, dde) {
            (Ok(s), Ok(d)) => {
                for (i, &t) in times.iter().enumerate() {
                    let want = init.alpha1.norm() * (-0.5 * t).exp();
                    decay_err = decay_err.max((s.b1[i].norm() - want).abs()).max((d.b1[i].norm() - want).abs());
                }
            }
            _ => decay_err = f64::NAN,
        }
    }
    let omegas: Vec<f64> = (-800..=800).map(|i| i as f64 * 0.025).collect();
    let p = SystemParams::free(1.0, 10.0, 0.0, 0.0);
    let cfg = SpectrumConfig {
        time: Time::Infinite,
        theta: PI / 2.0,
        source: Emitter::Both,
        normalization: Normalization::FreeSpacePeak,
    };
    let spec_err = match emission_spectrum_with(exec, &p, &InitialState::atom1(), &cfg, &omegas) {
        Ok(s) => max_of(s.omegas.iter().zip(&s.values).map(|(w, v)| {
            let lorentz = 0.25 / (0.25 + w * w);
            (v - lorentz).abs() / lorentz
        })),
        Err(_) => f64::NAN,
    };
    let passed = decay_err <= 1e-10 && spec_err <= 1e-12;
    let detail = format!("decay error {decay_err:.2e} (tol 1e-10), spectrum relative error {spec_err:.2e} (tol 1e-12)");
    timer.finish("C03", "free-space-limits", passed, decay_err, 1e-10, detail)
}

/// Long-time driven population against the closed-form steady state.
pub fn check_steady_state(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let mut grid = Vec::new();
    for kappa in [0.0, 0.2, 0.4] {
        for delta in [0.0, 0.5, 1.0] {
            for phi_l in [0.0, PI / 2.0, PI] {
                grid.push((kappa, delta, phi_l));
            }
        }
    }
    let base = |tau: f64, kappa: f64, delta: f64, phi_l: f64| {
        SystemParams::free(1.0, tau, kappa, 0.6 + delta * tau).with_drive(delta, 0.05, phi_l)
    };
    let evolved = |tau: f64| {
        max_of(par::map(exec, &grid, |&(kappa, delta, phi_l)| {
            let p = base(tau, kappa, delta, phi_l);
            match driven_amplitudes(&p, Time::Finite(60.0 + 10.0 * tau)) {
                Ok((c1, c2)) => {
                    let r1 = (c1.norm_sqr() / steady_excitation(&p, Atom::One) - 1.0).abs();
                    let r2 = (c2.norm_sqr() / steady_excitation(&p, Atom::Two) - 1.0).abs();
                    r1.max(r2)
                }
                Err(_) => f64::NAN,
            }
        }))
    };
    let rel = evolved(1.0);
    let spread = max_of(grid.iter().map(|&(kappa, delta, phi_l)| {
        let v: Vec<f64> = [0.1, 1.0, 10.0]
            .iter()
            .map(|&tau| steady_excitation(&base(tau, kappa, delta, phi_l), Atom::One))
            .collect();
        let hi = v.iter().cloned().fold(f64::MIN, f64::max);
        let lo = v.iter().cloned().fold(f64::MAX, f64::min);
        (hi - lo) / hi
    }));
    let (short, long) = (evolved(0.1), evolved(10.0));
    let passed = rel <= 1e-6 && spread <= 1e-9;
    let detail = format!(
        "27 points at γτ = 1; γτ spread {spread:.1e} (tol 1e-9); evolved error at γτ = 0.1: {short:.1e}, γτ = 10: {long:.1e}"
    );
    timer.finish("C04", "steady-state", passed, rel, 1e-6, detail)
}

/// Peak of the incoherent rate relative to the decoupled value.
pub fn check_enhancement(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let p = SystemParams::free(1.0, 1.0, 0.2, 0.0).with_drive(0.0, 0.05, 0.0);
    let baseline = rate_incoherent(&p.with_kappa(0.0)).value;
    let pts = periodic_grid(0.0, 2, 1000);
    let (ratio, mean, min) = match rate_scan(exec, &p, Detector::Incoherent, ScanVariable::OmegaLTau, &pts) {
        Ok(scan) => {
            let v = scan.values();
            let max = v.iter().cloned().fold(f64::MIN, f64::max);
            let min = v.iter().cloned().fold(f64::MAX, f64::min);
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            (max / baseline, max / mean, max / min)
        }
        Err(_) => (f64::NAN, f64::NAN, f64::NAN),
    };
    let err = (ratio - 1.5).abs();
    let detail = format!(
        "peak/decoupled = {ratio:.10} vs 1.5; peak/scan mean = {mean:.10}; peak/min = {min:.10}"
    );
    timer.finish("C05", "enhancement", err <= 1e-9, err, 1e-9, detail)
}

/// Fringe visibilities of the lens-mode signal.
pub fn check_visibilities(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let pts = periodic_grid(0.0, 2, 2000);
    let lens_scan = |p: &SystemParams| {
        rate_scan(exec, p, Detector::LensTotal, ScanVariable::OmegaLTau, &pts).ok()
    };
    let v1_err = max_of((0..25).map(|j| {
        let phi_l = j as f64 * PI / 24.0;
        let p = SystemParams::free(1.0, 1.0, 1e-6, 0.0).with_drive(0.0, 0.05, phi_l);
        match lens_scan(&p).and_then(|s| visibility(&s).ok()) {
            Some(v) => (v - phi_l.cos().abs()).abs(),
            None => f64::NAN,
        }
    }));
    let mut v2_err: f64 = 0.0;
    let mut harmonics_ok = true;
    let mut worst = String::new();
    for kappa in [0.1, 0.2] {
        for delta in [0.0, 0.5, 1.0] {
            let p = SystemParams::free(1.0, 1.0, kappa, 0.0).with_drive(delta, 0.05, PI / 2.0);
            let (a, _) = expansion_coefficients(&p);
            let expected = kappa * a;
            match lens_scan(&p) {
                Some(s) => {
                    let v = visibility(&s).unwrap_or(f64::NAN);
                    harmonics_ok &= dominant_harmonic(&s.points, &s.values(), 6) == 2;
                    let e = (v - expected).abs();
                    if !(e <= v2_err) {
                        v2_err = e;
                        worst = format!("κ = {kappa}, Δ = {delta}γ: V₂ = {v:.6} vs {expected:.6}");
                    }
                }
                None => v2_err = f64::NAN,
            }
        }
    }
    let passed = v1_err <= 1e-4 && v2_err <= 1e-3 && harmonics_ok;
    let detail = format!(
        "V₁ error {v1_err:.2e} (tol 1e-4); V₂ error {v2_err:.2e} (tol 1e-3, worst {worst}); doubled fringe frequency {}",
        if harmonics_ok { "dominant" } else { "not dominant" }
    );
    timer.finish("C06", "visibilities", passed, v2_err.max(v1_err), 1e-3, detail)
}

fn g2_params(kappa: f64, gamma_tau: f64, omega0_tau: f64) -> SystemParams {
    SystemParams::free(1.0, gamma_tau, kappa, omega0_tau).with_drive(0.0, 0.05, 0.0)
}

/// Zero-delay correlation against its closed form.
pub fn check_g2_zero_delay(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let phis: Vec<f64> = (0..20).map(|j| j as f64 * 2.0 * PI / 20.0).collect();
    let omegas: Vec<f64> = (0..5).map(|j| j as f64 * 0.4 * PI).collect();
    let scale = 64.0 * 0.05f64.powi(4);
    let results = par::map(exec, &omegas, |&w| {
        let p = g2_params(0.4, 20.0, w);
        let denom = 1.0 + 0.16 + 0.8 * w.cos();
        let mut rel: f64 = 0.0;
        let mut zero: f64 = 0.0;
        for &a in &phis {
            for &b in &phis {
                let got = g2_value(&p, a, b, 0.0).unwrap_or(f64::NAN);
                let want = scale * (0.5 * (a - b)).cos().powi(2) / denom;
                if want > 1e-20 * scale {
                    rel = rel.max((got - want).abs() / want);
                } else {
                    zero = zero.max(got / scale);
                }
            }
            zero = zero.max(g2_value(&p, a, a + PI, 0.0).unwrap_or(f64::NAN) / scale);
        }
        (rel, zero)
    });
    let rel = max_of(results.iter().map(|r| r.0));
    let zero = max_of(results.iter().map(|r| r.1));
    let passed = rel <= 1e-10 && zero <= 1e-25;
    let detail = format!("20×20 phases × 5 values of ω0τ; largest value at |φ1−φ2| = π: {zero:.1e} of scale");
    timer.finish("C07", "g2-zero-delay", passed, rel, 1e-10, detail)
}

fn revival_peak(kappa: f64) -> f64 {
    let p = g2_params(kappa, 20.0, PI);
    let tau = p.tau;
    max_of((1..=400).map(|i| g2_value(&p, PI, PI / 2.0, tau + i as f64 * tau / 400.0).unwrap_or(f64::NAN)))
}

/// Dark-fringe correlation: short-delay closed form and κ² scaling of revivals.
pub fn check_g2_dark_fringe(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let kappa = 0.4;
    let p = g2_params(kappa, 20.0, PI);
    let phi2s = [0.3, PI / 2.0, 2.0, PI];
    let errs = par::map(exec, &phi2s, |&phi2| {
        max_of((1..200).map(|i| {
            let t = i as f64 * p.tau / 200.0;
            let got = g2_value(&p, PI, phi2, t).unwrap_or(f64::NAN);
            // only the direct term I_0 = e^{−γt/2} contributes before the first round trip
            let want = 32.0 * 0.05f64.powi(4) * (1.0 - phi2.cos()) * (-t).exp()
                / (1.0 + kappa * kappa + 2.0 * kappa * PI.cos());
            (got - want).abs() / want
        }))
    });
    let short = max_of(errs);
    let ratio = revival_peak(0.1) / revival_peak(0.05);
    let ratio_fig = revival_peak(0.4) / revival_peak(0.2);
    let passed = short <= 1e-10 && (ratio - 4.0).abs() <= 0.6;
    let detail = format!(
        "revival ratio κ 0.1→0.05: {ratio:.4} (4 ± 0.6); κ 0.4→0.2: {ratio_fig:.4}"
    );
    timer.finish("C08", "g2-dark-fringe", passed, short, 1e-10, detail)
}

fn local_maxima(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..ys.len() - 1 {
        if ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] {
            // parabolic refinement
            let (a, b, c) = (ys[i - 1], ys[i], ys[i + 1]);
            let h = xs[i + 1] - xs[i];
            let denom = a - 2.0 * b + c;
            let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            out.push(xs[i] + shift * h);
        }
    }
    out
}

fn fwhm(xs: &[f64], ys: &[f64]) -> f64 {
    let (imax, &peak) = ys.iter().enumerate().fold((0, &f64::MIN), |b, (i, y)| if y > b.1 { (i, y) } else { b });
    let half = 0.5 * peak;
    let cross = |range: Box<dyn Iterator<Item = usize>>, step: isize| -> f64 {
        for i in range {
            let j = (i as isize + step) as usize;
            if ys[j] < half {
                let f = (ys[i] - half) / (ys[i] - ys[j]);
                return xs[i] + f * (xs[j] - xs[i]);
            }
        }
        f64::NAN
    };
    let right = cross(Box::new(imax..ys.len() - 1), 1);
    let left = cross(Box::new((1..=imax).rev()), -1);
    right - left
}

/// Peak spacing in the multi-mode regime and linewidth in the single-mode regime.
pub fn check_spectrum_structure(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let omegas: Vec<f64> = (-6000..=6000).map(|i| i as f64 * 5e-4).collect();
    let multi = SystemParams::free(1.0, 10.0, 0.4, 0.0);
    let fsr = PI / multi.tau;
    let spacing = |source: Emitter| -> Vec<f64> {
        let cfg = SpectrumConfig { time: Time::Infinite, theta: PI / 2.0, source, normalization: Normalization::RawShape };
        match emission_spectrum_with(exec, &multi, &InitialState::atom1(), &cfg, &omegas) {
            Ok(s) => local_maxima(&s.omegas, &s.values).windows(2).map(|w| (w[1] - w[0]) / fsr).collect(),
            Err(_) => vec![f64::NAN],
        }
    };
    let combined = spacing(Emitter::Both);
    let resolved = spacing(Emitter::Atom1);
    let spacing_err = if combined.is_empty() { f64::NAN } else { max_of(combined.iter().map(|s| (s - 1.0).abs())) };
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;

    let narrow: Vec<f64> = (-4000..=4000).map(|i| i as f64 * 2.5e-3).collect();
    let widths: Vec<(f64, usize)> = [0.0, PI, PI / 2.0]
        .iter()
        .map(|&w| {
            let p = SystemParams::free(1.0, 0.4, 0.4, w);
            let cfg = SpectrumConfig {
                time: Time::Infinite,
                theta: PI / 2.0,
                source: Emitter::Atom1,
                normalization: Normalization::FreeSpacePeak,
            };
            match emission_spectrum_with(exec, &p, &InitialState::atom1(), &cfg, &narrow) {
                Ok(s) => (fwhm(&s.omegas, &s.values), local_maxima(&s.omegas, &s.values).len()),
                Err(_) => (f64::NAN, 0),
            }
        })
        .collect();
    let single_ok = widths.iter().all(|w| w.1 == 1) && widths[0].0 < 1.0 && widths[1].0 < 1.0 && widths[2].0 > 1.0;
    let passed = spacing_err <= 0.05 && single_ok;
    let detail = format!(
        "combined ϑ = π/2 spacing {:.3}·π/τ (range {:.3}..{:.3}); single-emitter spacing {:.3}·π/τ; \
         single-mode FWHM {:.3}γ (0), {:.3}γ (π), {:.3}γ (π/2), {}",
        mean(&combined),
        combined.iter().cloned().fold(f64::MAX, f64::min),
        combined.iter().cloned().fold(f64::MIN, f64::max),
        mean(&resolved),
        widths[0].0,
        widths[1].0,
        widths[2].0,
        if single_ok { "ordering as expected" } else { "ordering wrong" }
    );
    timer.finish("C09", "spectrum-structure", passed, spacing_err, 0.05, detail)
}

/// Collection fraction from the cone integral.
pub fn check_kappa_geometry(exec: Execution) -> CheckOutcome {
    let timer = Timer::start();
    let thetas: Vec<f64> = (1..=20).map(|j| j as f64 * PI / 20.0).collect();
    let axis = max_of(par::map(exec, &thetas, |&th| {
        match kappa_from_geometry(&LensGeometry { half_angle: th, dipole_angle: 0.0 }) {
            Ok(k) => (k - kappa_axis_closed_form(th)).abs(),
            Err(_) => f64::NAN,
        }
    }));
    let full = max_of([0.0, PI / 5.0, PI / 2.0].iter().map(|&b| {
        match kappa_from_geometry(&LensGeometry { half_angle: PI, dipole_angle: b }) {
            Ok(k) => (k - 1.0).abs(),
            Err(_) => f64::NAN,
        }
    }));
    let passed = axis <= 1e-10 && full <= 1e-10;
    let detail = format!("full-sphere error {full:.1e}");
    timer.finish("C10", "kappa-geometry", passed, axis, 1e-10, detail)
}

/// Run the checks of a suite in a fixed order.
pub fn run_suite(suite: Suite, exec: Execution) -> Vec<CheckOutcome> {
    let started = Instant::now();
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Oracle) {
        out.push(check_oracle_free(exec));
        out.push(check_oracle_driven(exec));
    }
    if matches!(suite, Suite::All | Suite::ClosedForm) {
        out.push(check_free_space_limits(exec));
        out.push(check_steady_state(exec));
        out.push(check_enhancement(exec));
        out.push(check_visibilities(exec));
        out.push(check_g2_zero_delay(exec));
        out.push(check_g2_dark_fringe(exec));
        out.push(check_spectrum_structure(exec));
        out.push(check_kappa_geometry(exec));
    }
    if suite == Suite::All {
        out.push(check_determinism(exec, started));
    }
    out
}

/// Re-runs a subset of checks and compares the rendered lines; total runtime must stay under five minutes.
pub fn check_determinism(exec: Execution, suite_started: Instant) -> CheckOutcome {
    let timer = Timer::start();
    let once = || {
        [
            check_free_space_limits(exec),
            check_enhancement(exec),
            check_g2_zero_delay(exec),
            check_kappa_geometry(exec),
        ]
        .iter()
        .map(CheckOutcome::line)
        .collect::<Vec<_>>()
    };
    let a = once();
    let b = once();
    let identical = a == b;
    let seq = check_enhancement(Execution::Sequential).line() == check_enhancement(Execution::Parallel).line();
    let total = suite_started.elapsed().as_secs_f64();
    let passed = identical && seq && total < 300.0;
    let detail = format!(
        "repeated runs {}, sequential/parallel {}",
        if identical { "identical" } else { "differ" },
        if seq { "identical" } else { "differ" }
    );
    timer.finish("C11", "determinism", passed, if identical && seq { 0.0 } else { 1.0 }, 0.0, detail)
}

/// Plain-text report; contains no timing information.
pub fn render_report(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        let _ = writeln!(s, "{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(s, "{} checks, {} passed, {} failed", outcomes.len(), outcomes.len() - failed, failed);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_finder_and_width() {
        let xs: Vec<f64> = (-2000..=2000).map(|i| i as f64 * 1e-3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.25 / (0.25 + (x - 0.1234) * (x - 0.1234))).collect();
        let m = local_maxima(&xs, &ys);
        assert_eq!(m.len(), 1);
        assert!((m[0] - 0.1234).abs() < 1e-5);
        assert!((fwhm(&xs, &ys) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn report_has_one_line_per_check() {
        let r = render_report(&[check_kappa_geometry(Execution::Sequential)]);
        assert_eq!(r.lines().count(), 2);
        assert!(r.starts_with("C10 kappa-geometry"));
    }
}
