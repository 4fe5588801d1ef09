//! Confluent hypergeometric and incomplete gamma functions of integer order.
//!
//! The delayed-coupling series only ever need `1F1(k, k+1, z)` and the lower
//! incomplete gamma function `γ(k+1, s)`, so everything here is specialised to
//! integer orders. Two independent evaluation routes exist on purpose: [`g_k`]
//! (power series / finite closed form) and [`lower_incomplete_gamma`]
//! (power series / Legendre continued fraction). Tests compare the two.

use num_complex::Complex64 as C64;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Largest order accepted by the public functions.
pub const MAX_ORDER: u32 = 10_000;

/// Iteration cap for every series and continued fraction in this module.
pub const MAX_TERMS: usize = 10_000;

const TERM_EPS: f64 = 1e-17;

static LN_FACTORIAL: Lazy<Vec<f64>> = Lazy::new(|| {
    let mut table = Vec::with_capacity(171);
    let mut f = 1.0_f64;
    table.push(0.0);
    for k in 1..=170u32 {
        f *= k as f64;
        table.push(f.ln());
    }
    table
});

/// `ln(k!)`, tabulated up to 170 and via `ln Γ` above.
pub fn ln_factorial(k: u32) -> f64 {
    match LN_FACTORIAL.get(k as usize) {
        Some(v) => *v,
        None => statrs::function::gamma::ln_gamma(k as f64 + 1.0),
    }
}

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    let half = (0.5 * y).sin();
    C64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

fn check_finite(s: C64) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("complex argument"))
    }
}

fn check_order(k: u32) -> Result<()> {
    if k > MAX_ORDER {
        Err(Error::ParameterOutOfRange(format!(
            "order {k} exceeds the supported maximum {MAX_ORDER}"
        )))
    } else {
        Ok(())
    }
}

/// Radius below which the power series is used for order `k`.
fn series_radius(k: u32) -> f64 {
    k as f64 + 8.0
}

/// `G_k(s) = 1F1(k, k+1, -s) - e^{-s}`, equal to `γ(k+1, s) / s^k`.
///
/// For `k = 0` this is `1 - e^{-s}`. `G_k(s) -> k!/s^k` as `|s| -> ∞` with
/// `Re s > 0`.
pub fn g_k(k: u32, s: C64) -> Result<C64> {
    check_order(k)?;
    check_finite(s)?;
    if k == 0 {
        return Ok(-expm1(-s));
    }
    let r = s.norm();
    if r > series_radius(k) {
        return Ok(g_closed(k, s).0);
    }
    let (value, mag) = if s.re >= 0.0 { g_kummer(k, s)? } else { g_alternating(k, s)? };
    // near the imaginary axis both series cancel heavily; the closed form may do better
    if r > k as f64 {
        let (closed, closed_mag) = g_closed(k, s);
        if closed_mag < mag {
            return Ok(closed);
        }
    }
    Ok(value)
}

// Each helper returns the value and the magnitude of the largest cancelling
// contribution, a proxy for the rounding error.

// e^{-s} Σ_{m>=1} k!/(k+m)! s^m : positive-ratio terms, no cancellation for real s >= 0.
fn g_kummer(k: u32, s: C64) -> Result<(C64, f64)> {
    let mut term = s / (k as f64 + 1.0);
    let mut sum = term;
    let mut mag = term.norm();
    for m in 2..MAX_TERMS {
        term *= s / (k as f64 + m as f64);
        sum += term;
        mag += term.norm();
        if term.norm() <= TERM_EPS * sum.norm() {
            let e = (-s).exp();
            return Ok((e * sum, e.norm() * mag));
        }
    }
    Err(Error::PrecisionLoss(format!(
        "G_{k} series did not converge in {MAX_TERMS} terms"
    )))
}

// -Σ_{n>=1} n/(n+k) (-s)^n / n!
fn g_alternating(k: u32, s: C64) -> Result<(C64, f64)> {
    let z = -s;
    let mut p = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut mag = 0.0;
    for n in 1..MAX_TERMS {
        p *= z / n as f64;
        let term = p * (n as f64 / (n as f64 + k as f64));
        sum += term;
        mag += term.norm();
        if n as f64 > z.norm() && term.norm() <= TERM_EPS * sum.norm() {
            return Ok((-sum, mag));
        }
    }
    Err(Error::PrecisionLoss(format!(
        "G_{k} alternating series did not converge in {MAX_TERMS} terms"
    )))
}

// k!/s^k - e^{-s} Σ_{n=0}^{k} k!/(k-n)! s^{-n}, valid for |s| > k where the sum decreases.
fn g_closed(k: u32, s: C64) -> (C64, f64) {
    let ln_s = s.ln();
    let lead = (C64::from(ln_factorial(k)) - ln_s * k as f64).exp();
    let mut u = C64::new(1.0, 0.0);
    let mut tail = u;
    let mut mag = 1.0;
    for n in 1..=k {
        u *= (k - n + 1) as f64 / s;
        tail += u;
        mag += u.norm();
    }
    let e = (-s).exp();
    (lead - e * tail, lead.norm() + e.norm() * mag)
}

/// `exp(ln_scale) · P(k+1, s)` where `P = γ(k+1, s)/k!` is the regularized
/// lower incomplete gamma function.
///
/// The scale is folded into each term in log space, so very small prefactors
/// such as `K^k` at large `k` neither underflow prematurely nor overflow.
pub fn scaled_gamma_p(k: u32, s: C64, ln_scale: C64) -> C64 {
    let r = s.norm();
    if r == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let ln_s = s.ln();
    if r <= series_radius(k) {
        // e^{-s} Σ_{j>k} s^j / j!
        let first = (ln_scale - s + ln_s * (k as f64 + 1.0) - ln_factorial(k + 1)).exp();
        if first == C64::new(0.0, 0.0) {
            return first;
        }
        let mut term = first;
        let mut sum = first;
        let mut j = k as f64 + 1.0;
        for _ in 0..MAX_TERMS {
            j += 1.0;
            term *= s / j;
            sum += term;
            if term.norm() <= TERM_EPS * sum.norm() {
                break;
            }
        }
        sum
    } else {
        // 1 - e^{-s} Σ_{m<=k} s^m/m!, summed downward from the largest term.
        let mut term = (ln_scale - s + ln_s * k as f64 - ln_factorial(k)).exp();
        let mut sum = term;
        for m in (1..=k).rev() {
            term *= m as f64 / s;
            sum += term;
        }
        ln_scale.exp() - sum
    }
}

/// Regularized lower incomplete gamma `P(k+1, s) = γ(k+1, s)/k!`.
pub fn regularized_lower_gamma(k: u32, s: C64) -> Result<C64> {
    check_order(k)?;
    check_finite(s)?;
    Ok(scaled_gamma_p(k, s, C64::new(0.0, 0.0)))
}

/// Lower incomplete gamma `γ(a, s) = ∫_0^s u^{a-1} e^{-u} du` for integer `a >= 1`.
///
/// Evaluated independently of [`g_k`]: a definitional series near the origin,
/// the Kummer series for `|s| < a + 1`, and `Γ(a) - Γ(a, s)` from the Legendre
/// continued fraction beyond.
pub fn lower_incomplete_gamma(a: u32, s: C64) -> Result<C64> {
    if a == 0 {
        return Err(Error::ParameterOutOfRange("gamma order must be >= 1".into()));
    }
    check_order(a)?;
    check_finite(s)?;
    let r = s.norm();
    if r == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let af = a as f64;
    let value = if r <= 1.0 {
        lower_gamma_definitional(af, s)?
    } else if r < af + 1.0 {
        lower_gamma_kummer(af, s)?
    } else if s.arg().abs() > 0.9 * std::f64::consts::PI {
        // continued fraction stalls next to the branch cut; finite sum is exact here
        C64::from(ln_factorial(a - 1)).exp() - upper_incomplete_gamma(a, s)?
    } else {
        C64::from(ln_factorial(a - 1)).exp() - upper_gamma_cf(af, s)?
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::ParameterOutOfRange(format!(
            "γ({a}, s) overflows for |s| = {r:e}"
        )))
    }
}

// s^a Σ (-s)^n / (n! (a+n))
fn lower_gamma_definitional(a: f64, s: C64) -> Result<C64> {
    let mut p = C64::new(1.0, 0.0);
    let mut sum = p / a;
    for n in 1..MAX_TERMS {
        p *= -s / n as f64;
        let term = p / (a + n as f64);
        sum += term;
        if term.norm() <= TERM_EPS * sum.norm() {
            return Ok((s.ln() * a).exp() * sum);
        }
    }
    Err(Error::PrecisionLoss("γ definitional series".into()))
}

// s^a e^{-s} Σ s^n / (a (a+1) ... (a+n))
fn lower_gamma_kummer(a: f64, s: C64) -> Result<C64> {
    let mut term = C64::new(1.0 / a, 0.0);
    let mut sum = term;
    for n in 1..MAX_TERMS {
        term *= s / (a + n as f64);
        sum += term;
        if term.norm() <= TERM_EPS * sum.norm() {
            return Ok((s.ln() * a - s).exp() * sum);
        }
    }
    Err(Error::PrecisionLoss("γ Kummer series".into()))
}

// Γ(a, s) = e^{-s} s^a / (s + 1 - a - 1(1-a)/(s + 3 - a - ...)), modified Lentz.
fn upper_gamma_cf(a: f64, s: C64) -> Result<C64> {
    const TINY: f64 = 1e-300;
    let mut b = s + 1.0 - a;
    let mut c = C64::new(1.0 / TINY, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = d * an + b;
        if d.norm() < TINY {
            d = C64::new(TINY, 0.0);
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = C64::new(TINY, 0.0);
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Ok((s.ln() * a - s).exp() * h);
        }
    }
    Err(Error::PrecisionLoss(format!(
        "Γ continued fraction did not converge in {MAX_TERMS} terms"
    )))
}

/// Upper incomplete gamma `Γ(a, s) = (a-1)! e^{-s} Σ_{m<a} s^m/m!` for integer `a >= 1`.
pub fn upper_incomplete_gamma(a: u32, s: C64) -> Result<C64> {
    if a == 0 {
        return Err(Error::ParameterOutOfRange("gamma order must be >= 1".into()));
    }
    check_order(a)?;
    check_finite(s)?;
    let base = ln_factorial(a - 1);
    let mut sum = C64::from(base).exp() * (-s).exp();
    if s.norm() > 0.0 {
        let ln_s = s.ln();
        for m in 1..a {
            sum += (C64::from(base - ln_factorial(m)) - s + ln_s * m as f64).exp();
        }
    }
    Ok(sum)
}

/// `1F1(k, k+1, z) = Σ_n k/(k+n) z^n/n!` by direct summation, `k >= 1`.
///
/// Fails with [`Error::PrecisionLoss`] when cancellation between terms would
/// leave fewer than about 13 significant digits, which happens for large
/// negative real `z`. Use [`g_k`] in that regime.
pub fn hyp1f1_k_kp1(k: u32, z: C64) -> Result<C64> {
    if k == 0 {
        return Err(Error::ParameterOutOfRange("1F1(k, k+1, z) needs k >= 1".into()));
    }
    check_order(k)?;
    check_finite(z)?;
    let kf = k as f64;
    let mut p = C64::new(1.0, 0.0);
    let mut sum = p;
    let mut abs_sum = 1.0;
    for n in 1..MAX_TERMS {
        p *= z / n as f64;
        let term = p * (kf / (kf + n as f64));
        sum += term;
        abs_sum += term.norm();
        if n as f64 > z.norm() && term.norm() <= TERM_EPS * sum.norm() {
            if f64::EPSILON * abs_sum > 1e-13 * sum.norm() {
                return Err(Error::PrecisionLoss(format!(
                    "1F1({k}, {}, z) cancels by a factor {:.1e}",
                    k + 1,
                    abs_sum / sum.norm()
                )));
            }
            return Ok(sum);
        }
    }
    Err(Error::PrecisionLoss(format!(
        "1F1({k}, {}, z) did not converge in {MAX_TERMS} terms",
        k + 1
    )))
}
