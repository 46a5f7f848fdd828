use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{structural_energy, DomainKind, StrutProfile};
use crate::error::{Error, Result};
use crate::systems::{AmplitudeExpansion, StrutParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOptions {
    /// Collocation nodes per wavelength (even).
    pub nodes: usize,
    /// Offset of the first node from `x = 0`.
    pub shift: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    pub tol: f64,
}

impl Default for PeriodicOptions {
    fn default() -> Self {
        Self {
            nodes: 64,
            shift: 0.0,
            max_iter: 50,
            max_halvings: 8,
            tol: 1e-10,
        }
    }
}

/// Fourier differentiation matrix of order `m` on `n` equispaced nodes of a
/// period `wavelength`.
fn diff_matrix(n: usize, m: u32, wavelength: f64) -> DMatrix<f64> {
    let kappa = 2.0 * PI / wavelength;
    let half = n / 2;
    DMatrix::from_fn(n, n, |i, j| {
        let d = (i as f64 - j as f64) * wavelength / n as f64;
        let mut sum = if m == 0 { 1.0 } else { 0.0 };
        for k in 1..half {
            let w = kappa * k as f64;
            let (s, c) = (w * d).sin_cos();
            sum += 2.0
                * match m % 4 {
                    0 => w.powi(m as i32) * c,
                    1 => -w.powi(m as i32) * s,
                    2 => -w.powi(m as i32) * c,
                    _ => w.powi(m as i32) * s,
                };
        }
        if m.is_multiple_of(2) {
            let w = kappa * half as f64;
            let sign = if m.is_multiple_of(4) { 1.0 } else { -1.0 };
            sum += sign * w.powi(m as i32) * (w * d).cos();
        }
        sum / n as f64
    })
}

/// Trigonometric interpolant of periodic samples `values` on `x0 + j h`.
fn trig_interpolate(values: &[f64], x0: f64, wavelength: f64, x: f64) -> f64 {
    let n = values.len();
    let kappa = 2.0 * PI / wavelength;
    let h = wavelength / n as f64;
    let half = n / 2;
    let mut out = 0.0;
    for k in 0..=half {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let (s, c) = (kappa * k as f64 * (x0 + h * j as f64)).sin_cos();
            re += v * c;
            im += v * s;
        }
        let weight = if k == 0 || (n.is_multiple_of(2) && k == half) {
            1.0
        } else {
            2.0
        };
        let (s, c) = (kappa * k as f64 * x).sin_cos();
        out += weight * (re * c + im * s);
    }
    out / n as f64
}

/// The two-term expansion at the uniform fixed-point amplitude, sampled on
/// the collocation nodes.
pub fn periodic_guess(
    params: &StrutParams,
    wavelength: f64,
    opts: &PeriodicOptions,
) -> Result<StrutProfile> {
    check(wavelength, opts)?;
    let n = opts.nodes;
    let h = wavelength / n as f64;
    let kappa = 2.0 * PI / wavelength;
    let expansion = AmplitudeExpansion::periodic(params);
    let jets: Vec<[f64; 5]> = (0..n)
        .map(|j| expansion.jet(kappa * (opts.shift + h * j as f64)))
        .collect();
    let mut profile = StrutProfile {
        kind: DomainKind::Periodic { wavelength },
        load: params.load,
        c: params.c,
        x0: opts.shift,
        h,
        y: jets.iter().map(|j| j[0]).collect(),
        dy: jets.iter().map(|j| j[1] * kappa).collect(),
        d2y: jets.iter().map(|j| j[2] * kappa.powi(2)).collect(),
        d3y: jets.iter().map(|j| j[3] * kappa.powi(3)).collect(),
        residual: f64::NAN,
        energy: 0.0,
    };
    profile.energy = structural_energy(&profile, params.load);
    Ok(profile)
}

fn check(wavelength: f64, opts: &PeriodicOptions) -> Result<()> {
    if !(wavelength > 0.0 && wavelength.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    if opts.nodes < 8 || opts.nodes % 2 == 1 {
        return Err(Error::InvalidParameter(
            "collocation needs an even node count of at least 8".into(),
        ));
    }
    Ok(())
}

/// One-wavelength solution by Fourier collocation. Translations are removed
/// by `Σ y_j sin(2π x_j/Λ) = 0`, which keeps a crest at `x = 0`, and the
/// system is bordered with the translation mode of the guess.
pub fn solve_periodic(
    params: &StrutParams,
    wavelength: f64,
    guess: &StrutProfile,
    opts: &PeriodicOptions,
) -> Result<StrutProfile> {
    check(wavelength, opts)?;
    match guess.kind {
        DomainKind::Periodic { wavelength: w } if (w - wavelength).abs() <= 1e-12 * wavelength => {}
        _ => {
            return Err(Error::InvalidParameter(
                "periodic solve needs a guess of the same wavelength".into(),
            ))
        }
    }
    let (load, c) = (params.load, params.c);
    let n = opts.nodes;
    let h = wavelength / n as f64;
    let kappa = 2.0 * PI / wavelength;
    let xs: Vec<f64> = (0..n).map(|j| opts.shift + h * j as f64).collect();
    let same_grid = guess.len() == n && (guess.x0 - opts.shift).abs() < 1e-15;
    let y0: Vec<f64> = if same_grid {
        guess.y.clone()
    } else {
        xs.iter()
            .map(|&x| trig_interpolate(&guess.y, guess.x0, wavelength, x))
            .collect()
    };

    let d1 = diff_matrix(n, 1, wavelength);
    let d2 = diff_matrix(n, 2, wavelength);
    let d4 = &d2 * &d2;
    let linear = &d4 + &d2 * load + DMatrix::identity(n, n);
    let phase: Vec<f64> = xs.iter().map(|&x| (kappa * x).sin()).collect();
    let mode = &d1 * DVector::from_vec(y0.clone());

    let eval = |y: &DVector<f64>, sigma: f64| -> (DVector<f64>, f64) {
        let mut r = &linear * y + &mode * sigma;
        for j in 0..n {
            r[j] -= c * y[j] * y[j];
        }
        let ph: f64 = (0..n).map(|j| phase[j] * y[j]).sum::<f64>() / n as f64;
        let norm = r.amax().max(ph.abs());
        let mut full = DVector::zeros(n + 1);
        full.rows_mut(0, n).copy_from(&r);
        full[n] = ph;
        (full, norm)
    };

    let mut y = DVector::from_vec(y0);
    let mut sigma = 0.0;
    let (mut r, mut norm) = eval(&y, sigma);
    let mut iter = 0;
    while norm > opts.tol {
        if iter == opts.max_iter {
            return Err(Error::NewtonDivergence {
                iterations: iter,
                residual: norm,
            });
        }
        iter += 1;
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        jac.view_mut((0, 0), (n, n)).copy_from(&linear);
        for j in 0..n {
            jac[(j, j)] -= 2.0 * c * y[j];
            jac[(j, n)] = mode[j];
            jac[(n, j)] = phase[j] / n as f64;
        }
        let step = jac
            .lu()
            .solve(&(-&r))
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or(Error::FoldEncountered { p: load })?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let ty = &y + step.rows(0, n) * lambda;
            let ts = sigma + lambda * step[n];
            let (tr, tnorm) = eval(&ty, ts);
            if tnorm < norm {
                y = ty;
                sigma = ts;
                r = tr;
                norm = tnorm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            if norm < 100.0 * opts.tol {
                break;
            }
            return Err(Error::NewtonDivergence {
                iterations: iter,
                residual: norm,
            });
        }
    }

    let dy = &d1 * &y;
    let d2y = &d2 * &y;
    let d3y = &d1 * &d2y;
    let mut profile = StrutProfile {
        kind: DomainKind::Periodic { wavelength },
        load,
        c,
        x0: opts.shift,
        h,
        y: y.iter().copied().collect(),
        dy: dy.iter().copied().collect(),
        d2y: d2y.iter().copied().collect(),
        d3y: d3y.iter().copied().collect(),
        residual: norm,
        energy: 0.0,
    };
    profile.energy = structural_energy(&profile, load);
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(load: f64, shift: f64) -> StrutProfile {
        let params = StrutParams::new(1.0, load).unwrap();
        let opts = PeriodicOptions {
            shift,
            ..Default::default()
        };
        let guess = periodic_guess(&params, 2.0 * PI, &opts).unwrap();
        solve_periodic(&params, 2.0 * PI, &guess, &opts).unwrap()
    }

    #[test]
    fn differentiation_is_exact_on_low_modes() {
        let (n, w) = (16, 3.0);
        let kappa = 2.0 * PI / w;
        let xs: Vec<f64> = (0..n).map(|j| w * j as f64 / n as f64).collect();
        let f = DVector::from_iterator(
            n,
            xs.iter()
                .map(|&x| (3.0 * kappa * x).sin() + (kappa * x).cos()),
        );
        let d4 = diff_matrix(n, 4, w) * &f;
        let d3 = diff_matrix(n, 3, w) * &f;
        for (j, &x) in xs.iter().enumerate() {
            let e4 =
                (3.0 * kappa).powi(4) * (3.0 * kappa * x).sin() + kappa.powi(4) * (kappa * x).cos();
            let e3 = -(3.0 * kappa).powi(3) * (3.0 * kappa * x).cos()
                + kappa.powi(3) * (kappa * x).sin();
            assert!((d4[j] - e4).abs() < 1e-9 * e4.abs().max(1.0));
            assert!((d3[j] - e3).abs() < 1e-10 * e3.abs().max(1.0));
        }
    }

    #[test]
    fn interpolant_reproduces_samples_and_period() {
        let n = 12;
        let vals: Vec<f64> = (0..n)
            .map(|j| (j as f64 * 0.7).sin() + 0.1 * j as f64)
            .collect();
        for (j, v) in vals.iter().enumerate() {
            let x = 0.2 + 5.0 * j as f64 / n as f64;
            assert!((trig_interpolate(&vals, 0.2, 5.0, x) - v).abs() < 1e-12);
        }
        let a = trig_interpolate(&vals, 0.2, 5.0, 1.234);
        assert!((a - trig_interpolate(&vals, 0.2, 5.0, 6.234)).abs() < 1e-12);
    }

    #[test]
    fn converged_wave_has_small_residual_and_positive_energy() {
        for load in [1.95, 1.8, 1.5] {
            let p = solve(load, 0.0);
            assert!(p.residual < 1e-8, "P={load}: {}", p.residual);
            assert!(p.energy > 0.0, "P={load}: energy {}", p.energy);
            assert!(p.y[0] > 0.0);
        }
    }

    #[test]
    fn small_amplitude_shape_follows_expansion() {
        let load = 1.99;
        let p = solve(load, 0.0);
        let params = StrutParams::new(1.0, load).unwrap();
        let eps = params.epsilon();
        let a = (18.0f64 / 19.0).sqrt();
        for (j, &y) in p.y.iter().enumerate() {
            let x = p.x(j);
            let expected = eps * a * x.cos() + eps * eps * a * a * (9.0 + (2.0 * x).cos()) / 18.0;
            assert!(
                (y - expected).abs() < 5.0 * eps.powi(3),
                "x={x}: {y} vs {expected}"
            );
        }
    }

    #[test]
    fn energy_invariant_under_grid_shift() {
        let a = solve(1.6, 0.0);
        let b = solve(1.6, 0.37);
        assert!(((a.energy - b.energy) / a.energy).abs() < 1e-8);
    }
}
