//! Adaptive Gauss-Kronrod (7/15) quadrature with global bisection of the
//! worst subinterval, plus composite Simpson helpers for sampled data.

#![allow(clippy::excessive_precision)]

use crate::error::{LabError, Result};

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

/// Gauss weights at the odd-indexed Kronrod nodes (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-11,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment {
        lo,
        hi,
        value,
        error,
    }
}

/// Integrate `f` over `[lo, hi]` to `max(abs, rel * |I|)`.
///
/// Subintervals are refined largest-error first. A reversed interval yields
/// the negated integral.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: QuadTolerance) -> Result<Integral> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(LabError::InvalidInput(format!(
            "integration bounds must be finite, got [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            intervals: 0,
        });
    }
    if hi < lo {
        return integrate(f, hi, lo, tol).map(|r| Integral {
            value: -r.value,
            ..r
        });
    }

    let mut segments = vec![kronrod15(&f, lo, hi)];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= tol.abs.max(tol.rel * total.abs()) {
            return Ok(Integral {
                value: total,
                abs_error: error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= tol.max_intervals {
            return Err(LabError::Quadrature {
                estimate: total,
                error,
                intervals: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| {
                if s.error > acc.1 {
                    (i, s.error)
                } else {
                    acc
                }
            });
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // Interval at floating-point resolution; accept what we have.
            let total: f64 = segments.iter().map(|s| s.value).sum::<f64>() + seg.value;
            let error: f64 = segments.iter().map(|s| s.error).sum::<f64>() + seg.error;
            return Err(LabError::Quadrature {
                estimate: total,
                error,
                intervals: segments.len() + 1,
            });
        }
        segments.push(kronrod15(&f, seg.lo, mid));
        segments.push(kronrod15(&f, mid, seg.hi));
    }
}

/// Composite Simpson rule on uniformly spaced samples (odd count, at least 3).
pub fn simpson_uniform(values: &[f64], step: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(LabError::InvalidInput(format!(
            "Simpson rule needs an odd number (>= 3) of samples, got {n}"
        )));
    }
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(acc * step / 3.0)
}

/// Composite Simpson rule for `f` on `[lo, hi]` with `panels` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let panels = panels.max(2) + panels % 2;
    let h = (hi - lo) / panels as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + h * i as f64);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_degree_22_polynomial() {
        // Kronrod 15 integrates degree <= 22 exactly.
        let seg = kronrod15(&|x: f64| x.powi(22), -1.0, 1.0);
        assert!((seg.value - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let eps = 1e-3_f64;
        let r = integrate(|x| 1.0 / (x * x + eps * eps), -1.0, 1.0, QuadTolerance::default()).unwrap();
        let exact = 2.0 * (1.0 / eps).atan() / eps;
        assert!((r.value - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let r = integrate(f64::exp, 1.0, 0.0, QuadTolerance::default()).unwrap();
        assert!((r.value + (std::f64::consts::E - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn simpson_uniform_rejects_even_count() {
        assert!(simpson_uniform(&[1.0, 2.0], 0.5).is_err());
        let v: Vec<f64> = (0..5).map(|i| (i as f64 * 0.25).powi(3)).collect();
        assert!((simpson_uniform(&v, 0.25).unwrap() - 0.25).abs() < 1e-15);
    }
}
