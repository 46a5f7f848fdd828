//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_599_0,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_489_0,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_intervals: 2000,
        }
    }
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    for j in 0..7 {
        let x = half * XGK[j];
        let s = f(center - x) + f(center + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    // QUADPACK-style scaling of the raw Gauss/Kronrod difference.
    let err = if err > 0.0 {
        err * (200.0 * err / value.abs().max(f64::MIN_POSITIVE))
            .powf(1.5)
            .min(1.0)
    } else {
        0.0
    };
    (value, err.max(50.0 * f64::EPSILON * value.abs()))
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest
/// error estimate until the global estimate meets the tolerance.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = kronrod15(&mut f, a, b);
    intervals.push((a, b, v, e));
    let mut evaluations = 15;
    loop {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error: err,
            });
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(Quadrature {
                value: total,
                error: err,
                evaluations,
            });
        }
        if intervals.len() >= opts.max_intervals {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error: err,
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            // Interval exhausted at machine resolution.
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error: err,
            });
        }
        let (v1, e1) = kronrod15(&mut f, lo, mid);
        let (v2, e2) = kronrod15(&mut f, mid, hi);
        evaluations += 30;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Composite Simpson rule on uniformly spaced samples. Falls back to the
/// trapezoid rule on the last panel when the sample count is even.
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        _ => {
            let panels = if n % 2 == 1 { n - 1 } else { n - 2 };
            let mut sum = values[0] + values[panels];
            for (i, v) in values.iter().enumerate().take(panels).skip(1) {
                sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = sum * h / 3.0;
            if panels < n - 1 {
                total += 0.5 * h * (values[n - 2] + values[n - 1]);
            }
            total
        }
    }
}
