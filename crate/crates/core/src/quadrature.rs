//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and refinement budget.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    let value = k * half;
    let error = ((k - g) * half).norm();
    Piece { a, b, value, error }
}

/// Integrate a complex function over `[a, b]`, returning the value and an error estimate.
pub fn integrate<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<(C64, f64)> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite("integration limits"));
    }
    if a == b {
        return Ok((C64::new(0.0, 0.0), 0.0));
    }
    let mut pieces = vec![kronrod(&mut f, a, b)];
    loop {
        let total: C64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::NonFinite("integrand"));
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if pieces.len() >= cfg.max_intervals {
            return Err(Error::QuadratureNonConvergence(format!(
                "error estimate {err:.2e} after {} subintervals on [{a}, {b}]",
                pieces.len()
            )));
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.error > best.1 { (i, p.error) } else { best });
        let worst = pieces.swap_remove(idx);
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureNonConvergence(format!(
                "interval around {mid} cannot be split further"
            )));
        }
        pieces.push(kronrod(&mut f, worst.a, mid));
        pieces.push(kronrod(&mut f, mid, worst.b));
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<f64> {
    integrate(|x| C64::new(f(x), 0.0), a, b, cfg).map(|(v, _)| v.re)
}

/// Iterated integral `∫_a^b dx ∫_c^d dy f(x, y)` with adaptive rules in both directions.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    (a, b): (f64, f64),
    (c, d): (f64, f64),
    cfg: QuadConfig,
) -> Result<f64> {
    let mut inner_err = None;
    let outer = integrate_real(
        |x| match integrate_real(|y| f(x, y), c, d, cfg) {
            Ok(v) => v,
            Err(e) => {
                inner_err.get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        cfg,
    )?;
    match inner_err {
        Some(e) => Err(e),
        None => Ok(outer),
    }
}
