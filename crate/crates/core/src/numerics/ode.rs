//! Adaptive Dormand–Prince 5(4) integrator for small autonomous systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            initial_step: 1e-3,
            max_steps: 5_000_000,
        }
    }
}

/// Samples at the requested output times, and whether integration stopped
/// early because `exit` fired.
#[derive(Debug, Clone)]
pub struct OdeSolution<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub exited: bool,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(y)` from `t0` through each time in `outputs`
/// (monotone, all on the same side of `t0`). Steps are clipped to land on
/// every output time. Integration halts before the first accepted step
/// whose state satisfies `exit`; that state is not recorded.
pub fn integrate<const N: usize, F, X>(
    f: F,
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    opts: OdeOptions,
    exit: X,
) -> Result<OdeSolution<N>>
where
    F: Fn(&[f64; N]) -> [f64; N],
    X: Fn(&[f64; N]) -> bool,
{
    let mut sol = OdeSolution {
        times: Vec::with_capacity(outputs.len()),
        states: Vec::with_capacity(outputs.len()),
        exited: false,
    };
    let Some(&last) = outputs.last() else {
        return Ok(sol);
    };
    let dir = if last >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.initial_step.abs() * dir;
    let mut k1 = f(&y);
    let mut steps = 0usize;

    for &target in outputs {
        while (target - t) * dir > 0.0 {
            if steps >= opts.max_steps {
                return Err(Error::Integration(format!(
                    "step budget of {} exhausted at t = {t}",
                    opts.max_steps
                )));
            }
            let remaining = target - t;
            let clipped = (h * dir > remaining * dir).then_some(remaining);
            let step = clipped.unwrap_or(h);

            let k2 = f(&axpy(&y, &[(A21, &k1)], step));
            let k3 = f(&axpy(&y, &[(A31, &k1), (A32, &k2)], step));
            let k4 = f(&axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], step));
            let k5 = f(&axpy(
                &y,
                &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
                step,
            ));
            let k6 = f(&axpy(
                &y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                step,
            ));
            let y_new = axpy(
                &y,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
                step,
            );
            let k7 = f(&y_new);

            let mut err = 0.0f64;
            for i in 0..N {
                let e = step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / scale).abs());
            }
            steps += 1;
            if err <= 1.0 || step.abs() < 1e-14 {
                if exit(&y_new) {
                    // Keep the last state inside the domain.
                    if sol.times.last() != Some(&t) && t != t0 {
                        sol.times.push(t);
                        sol.states.push(y);
                    }
                    sol.exited = true;
                    return Ok(sol);
                }
                t = if clipped.is_some() { target } else { t + step };
                y = y_new;
                k1 = k7;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // Clipped steps do not shrink the nominal step.
            if clipped.is_none() || err > 1.0 {
                h = step * factor;
            }
        }
        sol.times.push(t);
        sol.states.push(y);
    }
    Ok(sol)
}
