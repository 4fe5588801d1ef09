//! Dormand–Prince 5(4) integrator for two-component linear delay equations
//! with a single constant delay, using the method of steps.
//!
//! Each interval `[kτ, (k+1)τ]` is integrated separately so that the
//! derivative discontinuities at multiples of the delay fall on step
//! boundaries. Delayed values are read from the dense output of the previous
//! interval.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type State = [C64; 2];

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Solver settings.
#[derive(Debug, Clone, Copy)]
pub struct DdeConfig {
    /// Mixed absolute/relative local error tolerance.
    pub tol: f64,
    pub max_steps: usize,
    /// Optional cap on the step size.
    pub h_max: f64,
}

impl DdeConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, max_steps: 20_000_000, h_max: f64::INFINITY }
    }
}

#[derive(Debug, Clone)]
struct DenseStep {
    t0: f64,
    h: f64,
    cont: [State; 5],
}

impl DenseStep {
    fn eval(&self, t: f64) -> State {
        let s = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let s1 = 1.0 - s;
        let c = &self.cont;
        let f = |i: usize| c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + c[4][i] * s1) * s) * s1) * s;
        [f(0), f(1)]
    }
}

/// Dense solution of a delay equation on `[0, t_end]`.
#[derive(Debug, Clone)]
pub struct DdeSolution {
    tau: f64,
    t_end: f64,
    /// Steps of each delay interval, in order.
    segments: Vec<Vec<DenseStep>>,
    pub accepted: usize,
    pub rejected: usize,
}

impl DdeSolution {
    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Number of accepted steps divided into the integration span.
    pub fn mean_step(&self) -> f64 {
        self.t_end / self.accepted.max(1) as f64
    }

    fn locate(steps: &[DenseStep], t: f64) -> &DenseStep {
        let i = steps.partition_point(|s| s.t0 + s.h < t);
        &steps[i.min(steps.len() - 1)]
    }

    /// State in a given delay interval; `t` is clamped to the interval.
    fn eval_in_segment(&self, seg: usize, t: f64) -> State {
        Self::locate(&self.segments[seg], t).eval(t)
    }

    /// Solution at `0 <= t <= t_end`.
    pub fn eval(&self, t: f64) -> State {
        let seg = ((t / self.tau).floor() as usize).min(self.segments.len() - 1);
        // t = kτ belongs to the end of interval k−1 as well; both agree.
        self.eval_in_segment(seg, t)
    }

    /// Largest jump of the dense output across the interval boundaries `t = kτ`.
    pub fn boundary_mismatch(&self) -> f64 {
        (1..self.segments.len())
            .map(|k| {
                let t = k as f64 * self.tau;
                let (l, r) = (self.eval_in_segment(k - 1, t), self.eval_in_segment(k, t));
                (l[0] - r[0]).norm().max((l[1] - r[1]).norm())
            })
            .fold(0.0, f64::max)
    }

    /// Piecewise-polynomial pieces `[t0, t0+h]` of the dense output.
    pub fn step_intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.segments.iter().flatten().map(|s| (s.t0, s.t0 + s.h))
    }
}

/// Integrate `y'(t) = f(t, y(t), y(t − τ))` from `y(0) = y0` with zero history.
///
/// In interval `k` the delayed argument is read from interval `k − 1` only,
/// which gives the right-continuous convention for the jump at `t = τ`.
pub fn solve<F>(rhs: F, y0: State, tau: f64, t_end: f64, cfg: DdeConfig) -> Result<DdeSolution>
where
    F: Fn(f64, &State, &State) -> State,
{
    let mut sol = DdeSolution { tau, t_end, segments: Vec::new(), accepted: 0, rejected: 0 };
    extend(&rhs, &mut sol, y0, t_end, cfg)?;
    Ok(sol)
}

/// Integrate until `stop(sol)` returns true after a completed delay interval.
pub fn solve_until<F, S>(rhs: F, y0: State, tau: f64, t_cap: f64, cfg: DdeConfig, stop: S) -> Result<DdeSolution>
where
    F: Fn(f64, &State, &State) -> State,
    S: Fn(&DdeSolution) -> bool,
{
    let mut sol = DdeSolution { tau, t_end: 0.0, segments: Vec::new(), accepted: 0, rejected: 0 };
    let mut y = y0;
    loop {
        let next = (sol.segments.len() as f64 + 1.0) * tau;
        if next > t_cap {
            return Err(Error::ParameterOutOfRange(format!(
                "solution has not reached the stopping condition by t = {t_cap}"
            )));
        }
        extend(&rhs, &mut sol, y, next, cfg)?;
        if stop(&sol) {
            return Ok(sol);
        }
        y = sol.eval(sol.t_end);
    }
}

fn extend<F>(rhs: &F, sol: &mut DdeSolution, y_start: State, t_end: f64, cfg: DdeConfig) -> Result<()>
where
    F: Fn(f64, &State, &State) -> State,
{
    let tau = sol.tau;
    let mut y = y_start;
    let mut h = sol
        .segments
        .last()
        .and_then(|s| s.last())
        .map(|s| s.h)
        .unwrap_or_else(|| (1e-3 * tau).min(t_end.max(1e-12)));
    let zero = [C64::new(0.0, 0.0); 2];
    loop {
        let seg = sol.segments.len();
        let a = seg as f64 * tau;
        if a >= t_end && !(seg == 0 && t_end == 0.0) {
            break;
        }
        let b = ((seg + 1) as f64 * tau).min(t_end);
        let mut steps = Vec::new();
        let delayed = |t: f64| -> State {
            if seg == 0 {
                zero
            } else {
                sol.eval_in_segment(seg - 1, t - tau)
            }
        };
        let (mut accepted, mut rejected) = (sol.accepted, sol.rejected);
        let mut t = a;
        let mut k1 = rhs(t, &y, &delayed(t));
        let h_floor = 1e-14 * tau.max(b.abs());
        while t < b {
            if accepted + rejected >= cfg.max_steps {
                return Err(Error::StepBudget(cfg.max_steps));
            }
            h = h.min(cfg.h_max);
            let last = t + h >= b - 1e-12 * h;
            let hs = if last { b - t } else { h };
            let mut k = [zero; 7];
            k[0] = k1;
            for i in 1..7 {
                let mut yi = y;
                for (j, kj) in k.iter().enumerate().take(i) {
                    let w = A[i][j] * hs;
                    if w != 0.0 {
                        yi[0] += kj[0] * w;
                        yi[1] += kj[1] * w;
                    }
                }
                let ti = t + C[i] * hs;
                k[i] = rhs(ti, &yi, &delayed(ti));
            }
            let y_new = {
                let mut out = y;
                for (j, kj) in k.iter().enumerate().take(6) {
                    out[0] += kj[0] * (A[6][j] * hs);
                    out[1] += kj[1] * (A[6][j] * hs);
                }
                out
            };
            let mut err = 0.0;
            for c in 0..2 {
                let e: C64 = k.iter().zip(E.iter()).map(|(kj, w)| kj[c] * (w * hs)).sum();
                let sc = cfg.tol + cfg.tol * y[c].norm().max(y_new[c].norm());
                err += (e.norm() / sc).powi(2);
            }
            let err = (0.5 * err).sqrt();
            if err <= 1.0 {
                let mut cont = [zero; 5];
                for c in 0..2 {
                    let ydiff = y_new[c] - y[c];
                    let bspl = k[0][c] * hs - ydiff;
                    cont[0][c] = y[c];
                    cont[1][c] = ydiff;
                    cont[2][c] = bspl;
                    cont[3][c] = ydiff - k[6][c] * hs - bspl;
                    cont[4][c] = k.iter().zip(D.iter()).map(|(kj, d)| kj[c] * (d * hs)).sum();
                }
                steps.push(DenseStep { t0: t, h: hs, cont });
                accepted += 1;
                t = if last { b } else { t + hs };
                y = y_new;
                k1 = k[6];
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    h = hs * fac;
                } else if fac < 1.0 {
                    h *= fac;
                }
            } else {
                rejected += 1;
                h = hs * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if h < h_floor {
                    return Err(Error::StepSizeUnderflow { t });
                }
            }
        }
        sol.accepted = accepted;
        sol.rejected = rejected;
        if steps.is_empty() {
            // zero-length final interval: keep a degenerate step so evaluation works
            steps.push(DenseStep { t0: a, h: f64::MIN_POSITIVE, cont: [y, zero, zero, zero, zero] });
        }
        sol.segments.push(steps);
        sol.t_end = b;
        if b >= t_end {
            break;
        }
    }
    Ok(())
}
