use serde::{Deserialize, Serialize};

use super::{decay_mode, structural_energy, DomainKind, StrutProfile};
use crate::error::{Error, Result};
use crate::numerics::banded::BandMatrix;
use crate::systems::{strut_reconstruct, AmplitudeExpansion, ReconstructGrid, StrutParams};

/// Half-line discretization and Newton settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizedOptions {
    /// Grid points on `[0, X∞]`.
    pub points: usize,
    /// `X∞` is the smallest integer with `e^{−a X∞}` below this.
    pub decay_tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Newton stops once the residual max-norm falls below this.
    pub tol: f64,
}

impl Default for LocalizedOptions {
    fn default() -> Self {
        Self {
            points: 4096,
            decay_tol: 1e-10,
            max_iter: 50,
            max_halvings: 8,
            tol: 1e-10,
        }
    }
}

impl LocalizedOptions {
    pub fn half_length(&self, load: f64) -> f64 {
        let (a, _) = decay_mode(load);
        (-self.decay_tol.ln() / a).ceil()
    }
}

const D2: [f64; 5] = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
const D1: [f64; 5] = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];

/// Index of a grid value, possibly a ghost: even reflection at the origin
/// and the decaying linear mode beyond `X∞`.
#[derive(Clone, Copy)]
struct Ghosts {
    n: usize,
    /// Beyond the end, `v[n-1+k] = w[k].0 v[n-2] + w[k].1 v[n-1]`.
    w: [(f64, f64); 3],
}

impl Ghosts {
    fn new(n: usize, load: f64, h: f64) -> Self {
        let (a, b) = decay_mode(load);
        let rho = (-a * h).exp();
        let (t, r2) = (2.0 * rho * (b * h).cos(), rho * rho);
        // v_{k+1} = t v_k − r2 v_{k−1}, expressed in (v_{n−2}, v_{n−1}).
        let mut w = [(0.0, 0.0); 3];
        let (mut prev, mut cur) = ((1.0, 0.0), (0.0, 1.0));
        for slot in &mut w {
            let next = (t * cur.0 - r2 * prev.0, t * cur.1 - r2 * prev.1);
            *slot = next;
            prev = cur;
            cur = next;
        }
        Self { n, w }
    }

    /// Terms `(index, weight)` expressing entry `i` in grid unknowns.
    fn resolve(&self, i: isize) -> [(usize, f64); 2] {
        let n = self.n as isize;
        if i < 0 {
            [((-i) as usize, 1.0), (0, 0.0)]
        } else if i < n {
            [(i as usize, 1.0), (0, 0.0)]
        } else {
            let (a, b) = self.w[(i - n) as usize];
            [(self.n - 2, a), (self.n - 1, b)]
        }
    }

    fn value(&self, v: &[f64], i: isize) -> f64 {
        self.resolve(i).iter().map(|&(j, w)| w * v[j]).sum()
    }

    fn apply(&self, v: &[f64], i: usize, stencil: &[f64; 5]) -> f64 {
        stencil
            .iter()
            .enumerate()
            .map(|(k, s)| s * self.value(v, i as isize + k as isize - 2))
            .sum()
    }
}

/// Residuals `D2y − u` and `D2u + P u + y − c y²` with `u ≈ y″`.
fn residual(y: &[f64], u: &[f64], g: &Ghosts, h: f64, load: f64, c: f64) -> (Vec<f64>, f64) {
    let n = y.len();
    let mut r = vec![0.0; 2 * n];
    let mut norm = 0.0f64;
    let ih2 = 1.0 / (h * h);
    for i in 0..n {
        let r0 = g.apply(y, i, &D2) * ih2 - u[i];
        let r1 = g.apply(u, i, &D2) * ih2 + load * u[i] + y[i] - c * y[i] * y[i];
        r[2 * i] = r0;
        r[2 * i + 1] = r1;
        norm = norm.max(r0.abs()).max(r1.abs());
    }
    (r, norm)
}

fn jacobian(y: &[f64], g: &Ghosts, h: f64, load: f64, c: f64) -> BandMatrix {
    let n = y.len();
    let ih2 = 1.0 / (h * h);
    let mut jac = BandMatrix::zeros(2 * n, 4, 4);
    for i in 0..n {
        for (k, s) in D2.iter().enumerate() {
            for (j, w) in g.resolve(i as isize + k as isize - 2) {
                if w != 0.0 {
                    jac.add(2 * i, 2 * j, s * w * ih2);
                    jac.add(2 * i + 1, 2 * j + 1, s * w * ih2);
                }
            }
        }
        jac.add(2 * i, 2 * i + 1, -1.0);
        jac.add(2 * i + 1, 2 * i + 1, load);
        jac.add(2 * i + 1, 2 * i, 1.0 - 2.0 * c * y[i]);
    }
    jac
}

/// Cubic Hermite resampling of `(values, slopes)` given on `x0 + i h`.
fn hermite(values: &[f64], slopes: &[f64], x0: f64, h: f64, x: f64) -> f64 {
    let n = values.len();
    let t = (x - x0) / h;
    if t <= 0.0 {
        return values[0];
    }
    if t >= (n - 1) as f64 {
        return 0.0;
    }
    let i = (t.floor() as usize).min(n - 2);
    let s = t - i as f64;
    let (s2, s3) = (s * s, s * s * s);
    (2.0 * s3 - 3.0 * s2 + 1.0) * values[i]
        + (s3 - 2.0 * s2 + s) * h * slopes[i]
        + (-2.0 * s3 + 3.0 * s2) * values[i + 1]
        + (s3 - s2) * h * slopes[i + 1]
}

/// The two-term expansion of the homoclinic envelope on the solver grid.
pub fn localized_guess(params: &StrutParams, opts: &LocalizedOptions) -> Result<StrutProfile> {
    let x_max = opts.half_length(params.load);
    strut_reconstruct(
        &AmplitudeExpansion::homoclinic(params),
        ReconstructGrid::HalfLine {
            x_max,
            points: opts.points,
        },
    )
}

/// Newton solution of the strut equation on `[0, X∞]` with `y′(0) = y‴(0) = 0`
/// and the far field confined to the decaying linear mode. The guess may
/// come from any half-line grid and is resampled.
pub fn solve_localized(
    params: &StrutParams,
    guess: &StrutProfile,
    opts: &LocalizedOptions,
) -> Result<StrutProfile> {
    if guess.kind != DomainKind::HalfLineSymmetric || guess.len() < 2 {
        return Err(Error::InvalidParameter(
            "localized solve needs a half-line guess".into(),
        ));
    }
    if opts.points < 8 {
        return Err(Error::InvalidParameter(
            "half-line grid needs at least 8 points".into(),
        ));
    }
    let (load, c) = (params.load, params.c);
    let n = opts.points;
    let x_max = opts.half_length(load);
    let h = x_max / (n - 1) as f64;
    let g = Ghosts::new(n, load, h);

    let xs = (0..n).map(|i| h * i as f64);
    let mut y: Vec<f64> = xs
        .clone()
        .map(|x| hermite(&guess.y, &guess.dy, guess.x0, guess.h, x))
        .collect();
    let mut u: Vec<f64> = xs
        .map(|x| hermite(&guess.d2y, &guess.d3y, guess.x0, guess.h, x))
        .collect();

    let (mut r, mut norm) = residual(&y, &u, &g, h, load, c);
    let mut iter = 0;
    while norm > opts.tol {
        if iter == opts.max_iter {
            return Err(Error::NewtonDivergence {
                iterations: iter,
                residual: norm,
            });
        }
        iter += 1;
        let mut step: Vec<f64> = r.iter().map(|v| -v).collect();
        jacobian(&y, &g, h, load, c)
            .solve(&mut step)
            .map_err(|e| match e {
                Error::SingularMatrix { .. } => Error::FoldEncountered { p: load },
                other => other,
            })?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let ty: Vec<f64> = (0..n).map(|i| y[i] + lambda * step[2 * i]).collect();
            let tu: Vec<f64> = (0..n).map(|i| u[i] + lambda * step[2 * i + 1]).collect();
            let (tr, tnorm) = residual(&ty, &tu, &g, h, load, c);
            if tnorm < norm {
                y = ty;
                u = tu;
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

    let ih = 1.0 / h;
    let dy: Vec<f64> = (0..n).map(|i| g.apply(&y, i, &D1) * ih).collect();
    let d3y: Vec<f64> = (0..n).map(|i| g.apply(&u, i, &D1) * ih).collect();
    let mut profile = StrutProfile {
        kind: DomainKind::HalfLineSymmetric,
        load,
        c,
        x0: 0.0,
        h,
        y,
        dy,
        d2y: u,
        d3y,
        residual: norm,
        energy: 0.0,
    };
    profile.energy = structural_energy(&profile, load);
    Ok(profile)
}
