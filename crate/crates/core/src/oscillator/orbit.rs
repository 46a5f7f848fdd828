use serde::{Deserialize, Serialize};

use super::{check_load, fixed_points, DomainEnd, EngineConfig, Oscillator, Stability};
use crate::error::{Error, Result};
use crate::numerics::ode::{self, OdeOptions};
use crate::numerics::roots::brent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub s: f64,
    pub q: f64,
    pub dq: f64,
    /// `½ μ q′² + V(q)`.
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub samples: Vec<OrbitSample>,
    /// The trajectory left the deflection domain and was truncated.
    pub exited: bool,
}

impl Orbit {
    /// Largest `|H(s) − H(s₀)|` over the samples.
    pub fn energy_drift(&self) -> f64 {
        let h0 = self.samples.first().map_or(0.0, |s| s.h);
        self.samples
            .iter()
            .map(|s| (s.h - h0).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrates `μ q″ = −V′(q; p)` from `(q0, v0)` at `s_span.0` to
/// `s_span.1`, recording `samples` equally spaced points (including both
/// ends). Either direction in `s` is allowed.
pub fn orbit_integrate<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    q0: f64,
    v0: f64,
    s_span: (f64, f64),
    samples: usize,
    opts: OdeOptions,
) -> Result<Orbit> {
    check_load(sys, p)?;
    let dom = sys.deflection_domain(p);
    let limit = match dom.end {
        DomainEnd::Unbounded => 10.0 * dom.upper,
        _ => dom.upper,
    };
    if !(q0.abs() <= limit && v0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "initial state ({q0}, {v0}) outside the deflection domain"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let mu = sys.mass();
    let (s0, s1) = s_span;
    let outputs: Vec<f64> = (1..samples)
        .map(|i| s0 + (s1 - s0) * i as f64 / (samples - 1) as f64)
        .collect();
    let rhs = |y: &[f64; 2]| [y[1], -sys.potential_deriv(y[0], p) / mu];
    let sol = ode::integrate(rhs, s0, [q0, v0], &outputs, opts, |y| y[0].abs() > limit)?;
    let energy = |q: f64, v: f64| 0.5 * mu * v * v + sys.potential(q, p);
    let mut out = Vec::with_capacity(samples);
    out.push(OrbitSample {
        s: s0,
        q: q0,
        dq: v0,
        h: energy(q0, v0),
    });
    for (s, y) in sol.times.iter().zip(&sol.states) {
        out.push(OrbitSample {
            s: *s,
            q: y[0],
            dq: y[1],
            h: energy(y[0], y[1]),
        });
    }
    Ok(Orbit {
        samples: out,
        exited: sol.exited,
    })
}

/// A contour of constant oscillator energy in the `(q, q′)` plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub level: f64,
    pub points: Vec<(f64, f64)>,
    /// Both ends of the underlying `q`-interval are turning points.
    pub closed: bool,
}

/// Level sets `½ μ q′² + V(q) = h` over `|q| ≤ upper`, one entry per level.
/// The separatrix level `h = 0` is always included; `resolution` sets the
/// number of `q` samples per contour branch.
pub fn phase_portrait<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    levels: &[f64],
    resolution: usize,
    cfg: &EngineConfig,
) -> Result<Vec<(f64, Vec<Polyline>)>> {
    check_load(sys, p)?;
    if let Some(bad) = levels.iter().find(|h| !h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite energy level {bad}"
        )));
    }
    let mut all: Vec<f64> = levels.to_vec();
    if !all.contains(&0.0) {
        all.push(0.0);
    }
    all.sort_by(f64::total_cmp);
    all.dedup();

    let upper = sys.deflection_domain(p).upper;
    let mu = sys.mass();
    let resolution = resolution.max(8);
    let centers: Vec<f64> = fixed_points(sys, p, cfg)?
        .into_iter()
        .filter(|e| e.stability == Stability::UnstableStructure)
        .flat_map(|e| {
            if e.q == 0.0 {
                vec![0.0]
            } else {
                vec![-e.q, e.q]
            }
        })
        .collect();

    let mut out = Vec::with_capacity(all.len());
    for &h in &all {
        let f = |q: f64| h - sys.potential(q, p);
        let tol = 1e-12 * h.abs().max(1.0);
        let mut curves = Vec::new();
        let points: Vec<&f64> = centers.iter().filter(|&&c| f(c).abs() <= tol).collect();
        for &c in &points {
            curves.push(Polyline {
                level: h,
                points: vec![(*c, 0.0)],
                closed: true,
            });
        }

        let n = 4 * resolution;
        let grid: Vec<f64> = (0..=n)
            .map(|i| -upper + 2.0 * upper * i as f64 / n as f64)
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&q| f(q)).collect();
        let mut i = 0;
        while i <= n {
            if vals[i] < 0.0 {
                i += 1;
                continue;
            }
            let start = i;
            while i < n && vals[i + 1] >= 0.0 {
                i += 1;
            }
            let end = i;
            let left_open = start == 0;
            let right_open = end == n;
            let a = if left_open {
                grid[0]
            } else {
                brent(f, grid[start - 1], grid[start], cfg.root_tol, 200)?
            };
            let b = if right_open {
                grid[n]
            } else {
                brent(f, grid[end], grid[end + 1], cfg.root_tol, 200)?
            };
            i += 1;
            if b - a < 1e-6 && points.iter().any(|&&c| c >= a - 1e-6 && c <= b + 1e-6) {
                continue;
            }
            let qs: Vec<f64> = (0..=resolution)
                .map(|k| a + (b - a) * k as f64 / resolution as f64)
                .collect();
            let speed = |q: f64| (2.0 * f(q).max(0.0) / mu).sqrt();
            let mut pts: Vec<(f64, f64)> = qs.iter().map(|&q| (q, speed(q))).collect();
            pts.extend(qs.iter().rev().map(|&q| (q, -speed(q))));
            curves.push(Polyline {
                level: h,
                points: pts,
                closed: !left_open && !right_open,
            });
        }
        out.push((h, curves));
    }
    Ok(out)
}
