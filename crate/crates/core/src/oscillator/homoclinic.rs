use serde::{Deserialize, Serialize};

use super::{fixed_points, Branch, DomainEnd, EngineConfig, Oscillator, Stability};
use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, Quadrature};
use crate::numerics::roots::brent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopKind {
    /// Simple zero of `V`: the orbit turns with zero speed.
    Simple,
    /// The orbit reaches a closed domain end with `V < 0` and is reflected.
    Endpoint,
    /// At the bifurcation load the loop has shrunk onto the origin.
    Collapsed,
}

/// Fate of the saddle loop from the trivial state at one load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum HomoclinicStatus {
    Loop {
        q_turn: f64,
        kind: LoopKind,
    },
    /// `V` has a double zero at a structurally stable fixed point: the
    /// orbit from the origin connects to that fixed point instead of
    /// returning.
    Heteroclinic {
        q_collision: f64,
    },
    Absent {
        reason: String,
    },
}

impl HomoclinicStatus {
    pub fn turning_point(&self) -> Option<f64> {
        match self {
            HomoclinicStatus::Loop { q_turn, .. } => Some(*q_turn),
            _ => None,
        }
    }
}

/// Largest `q` below `limit` with `V(q) < 0`, searched geometrically down
/// from `limit`. Used as the left end of a bracket starting at the origin.
fn negative_near_origin<S: Oscillator + ?Sized>(sys: &S, p: f64, limit: f64) -> Option<f64> {
    let mut q = 1e-3 * limit;
    for _ in 0..12 {
        if sys.potential(q, p) < 0.0 {
            return Some(q);
        }
        q *= 0.1;
    }
    None
}

/// Locates the turning point of the homoclinic loop at load `p`.
pub fn homoclinic_turning_point<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    cfg: &EngineConfig,
) -> Result<HomoclinicStatus> {
    let eqs = fixed_points(sys, p, cfg)?;
    let dom = sys.deflection_domain(p);
    let v = |q: f64| sys.potential(q, p);

    match eqs[0].stability {
        Stability::UnstableStructure => {
            return Ok(HomoclinicStatus::Absent {
                reason: "trivial state is structurally unstable".into(),
            })
        }
        Stability::Degenerate => {
            let probe = dom.upper * 1e-4;
            if v(probe) > 0.0 {
                return Ok(HomoclinicStatus::Loop {
                    q_turn: 0.0,
                    kind: LoopKind::Collapsed,
                });
            }
        }
        Stability::StableStructure => {}
    }

    let bracket = |left: Option<f64>, right: f64| -> Result<HomoclinicStatus> {
        let a = match left {
            Some(a) => a,
            None => match negative_near_origin(sys, p, right) {
                Some(a) => a,
                None => {
                    return Ok(HomoclinicStatus::Absent {
                        reason: "potential is not negative next to the trivial state".into(),
                    })
                }
            },
        };
        let q_turn = brent(v, a, right, cfg.root_tol, 300)?;
        Ok(HomoclinicStatus::Loop {
            q_turn,
            kind: LoopKind::Simple,
        })
    };

    let mut left: Option<f64> = None;
    for eq in eqs.iter().skip(1) {
        match eq.stability {
            Stability::UnstableStructure => left = Some(eq.q),
            Stability::Degenerate => {}
            Stability::StableStructure => {
                let level = v(eq.q);
                if level.abs() <= cfg.heteroclinic_tol {
                    return Ok(HomoclinicStatus::Heteroclinic { q_collision: eq.q });
                }
                if level > 0.0 {
                    return bracket(left, eq.q);
                }
            }
        }
    }

    let end = dom.upper;
    let v_end = v(end);
    match dom.end {
        DomainEnd::Closed if v_end < 0.0 => Ok(HomoclinicStatus::Loop {
            q_turn: end,
            kind: LoopKind::Endpoint,
        }),
        _ if v_end > 0.0 => bracket(left, end),
        _ => Ok(HomoclinicStatus::Absent {
            reason: "no level-zero crossing of V before the domain end; the saddle loop \
                     is destroyed"
                .into(),
        }),
    }
}

fn barrier_integrand<S: Oscillator + ?Sized>(sys: &S, p: f64) -> impl Fn(f64) -> f64 + '_ {
    let two_mu = 2.0 * sys.mass();
    move |q| (two_mu * (-sys.potential(q, p)).max(0.0)).sqrt()
}

/// `2 ∫₀^{q_end} √(2μ(−V)) dq` without endpoint substitution; suited to a
/// double zero at `q_end` or a reflecting domain end.
pub fn heteroclinic_barrier<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    q_end: f64,
    cfg: &EngineConfig,
) -> Result<f64> {
    let g = barrier_integrand(sys, p);
    Ok(2.0 * integrate(g, 0.0, q_end, cfg.quad())?.value)
}

/// Structural energy of the localized state relative to the trivial one:
/// `E = 2 ∫₀^{q_t} √(2μ(−V(q; p))) dq`.
pub fn localized_barrier<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    cfg: &EngineConfig,
) -> Result<f64> {
    match homoclinic_turning_point(sys, p, cfg)? {
        HomoclinicStatus::Loop {
            kind: LoopKind::Collapsed,
            ..
        } => Ok(0.0),
        HomoclinicStatus::Loop {
            q_turn,
            kind: LoopKind::Endpoint,
        } => heteroclinic_barrier(sys, p, q_turn, cfg),
        HomoclinicStatus::Heteroclinic { q_collision } => {
            heteroclinic_barrier(sys, p, q_collision, cfg)
        }
        HomoclinicStatus::Loop {
            q_turn,
            kind: LoopKind::Simple,
        } => {
            let g = barrier_integrand(sys, p);
            let split = 0.5 * q_turn;
            let inner = integrate(&g, 0.0, split, cfg.quad())?.value;
            // q = q_t − u² removes the square-root zero at the turning point.
            let outer = integrate(
                |u| 2.0 * u * g(q_turn - u * u),
                0.0,
                (q_turn - split).sqrt(),
                cfg.quad(),
            )?
            .value;
            Ok(2.0 * (inner + outer))
        }
        HomoclinicStatus::Absent { reason } => Err(Error::NoHomoclinic { p, reason }),
    }
}

/// Energy of `n_waves` periodic waves of the fixed-point state on `branch`,
/// measured from the trivial state.
pub fn periodic_wave_energy<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    branch: Branch,
    n_waves: u32,
    cfg: &EngineConfig,
) -> Result<f64> {
    let eqs = fixed_points(sys, p, cfg)?;
    let eq = eqs
        .iter()
        .find(|e| e.branch == branch)
        .ok_or_else(|| Error::BranchAbsent {
            requested: branch.as_str().into(),
            p,
            available: eqs.iter().map(|e| e.branch.as_str().to_string()).collect(),
        })?;
    Ok(f64::from(n_waves) * sys.wavelength(p) * (-sys.potential(eq.q, p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// Symmetric pulse, turning point at `s = 0`.
    Pulse,
    /// Monotone front joining the origin to the collision fixed point.
    Front,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub s: f64,
    pub q: f64,
    pub dq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledProfile {
    pub p: f64,
    pub kind: ProfileKind,
    pub q_peak: f64,
    pub samples: Vec<ProfileSample>,
}

/// Relative truncation level of profile tails.
const TAIL: f64 = 1e-8;
const MAX_SAMPLES: usize = 5_000_000;

/// Arc lengths only need the profile's own accuracy; near the tails the
/// integrand is limited by roundoff in `V` before the quadrature target.
fn accept_rounded(r: Result<Quadrature>) -> Result<f64> {
    match r {
        Ok(q) => Ok(q.value),
        Err(Error::QuadratureNonConvergence { estimate, error })
            if error <= 1e-8 * estimate.abs() =>
        {
            Ok(estimate)
        }
        Err(e) => Err(e),
    }
}

struct Marcher<'a, S: Oscillator + ?Sized> {
    sys: &'a S,
    p: f64,
    cfg: &'a EngineConfig,
    /// Simple turning point whose square-root singularity needs substitution.
    turn: Option<f64>,
    /// Double zero of `V` (heteroclinic end point).
    anchor: Option<f64>,
}

/// Five-point Gauss–Legendre nodes and weights on `[-1, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

impl<S: Oscillator + ?Sized> Marcher<'_, S> {
    /// `−V(q)`; near a double zero `q_c` it is `∫_q^{q_c} V′`, which keeps
    /// its relative accuracy where the direct difference of terms does not.
    fn depth(&self, q: f64) -> f64 {
        match self.anchor {
            Some(c) if (q - c).abs() < 0.1 * c.abs() => {
                let (mid, half) = (0.5 * (q + c), 0.5 * (c - q));
                half * GL5
                    .iter()
                    .map(|&(x, w)| w * self.sys.potential_deriv(mid + half * x, self.p))
                    .sum::<f64>()
            }
            _ => -self.sys.potential(q, self.p),
        }
    }

    fn speed(&self, q: f64) -> f64 {
        (2.0 * self.depth(q).max(0.0) / self.sys.mass()).sqrt()
    }

    /// Arc length `∫ dq / q′` between `lo < hi`.
    fn arc(&self, lo: f64, hi: f64) -> Result<f64> {
        if hi <= lo {
            return Ok(0.0);
        }
        match self.turn {
            Some(t) if hi >= t => {
                let w = |u: f64| {
                    let sp = self.speed(t - u * u);
                    if sp > 0.0 {
                        2.0 * u / sp
                    } else {
                        // Limit 2u / (u √(2|V′(t)|/μ)) as u → 0.
                        let slope = self.sys.potential_deriv(t, self.p).abs();
                        2.0 / (2.0 * slope / self.sys.mass()).sqrt()
                    }
                };
                accept_rounded(integrate(w, 0.0, (t - lo).sqrt(), self.cfg.quad()))
            }
            _ => accept_rounded(integrate(|q| 1.0 / self.speed(q), lo, hi, self.cfg.quad())),
        }
    }

    /// Marches away from `q0` (at arc length 0) in steps of `ds`, moving `q`
    /// towards `target` until within `stop` of it.
    fn march(&self, q0: f64, target: f64, ds: f64, stop: f64) -> Result<Vec<(f64, f64)>> {
        let dir = if target < q0 { -1.0 } else { 1.0 };
        let mut out = vec![(0.0, q0)];
        let mut q_prev = q0;
        let mut k = 1usize;
        while (q_prev - target).abs() > stop {
            if out.len() > MAX_SAMPLES {
                return Err(Error::InvalidParameter(format!(
                    "profile would exceed {MAX_SAMPLES} samples; increase the arc-length spacing"
                )));
            }
            // Arc length accumulated from q_prev to q.
            let seg = |q: f64| -> Result<f64> {
                if dir < 0.0 {
                    self.arc(q, q_prev)
                } else {
                    self.arc(q_prev, q)
                }
            };
            let (mut lo, mut hi) = if dir < 0.0 {
                (target, q_prev)
            } else {
                (q_prev, target)
            };
            let sp = self.speed(q_prev);
            let mut q = if sp > 0.0 {
                q_prev + dir * sp * ds
            } else {
                // Leaving a turning point: q ≈ q_t − ½ |V′| s² / μ.
                let acc = self.sys.potential_deriv(q_prev, self.p).abs() / self.sys.mass();
                q_prev + dir * 0.5 * acc * ds * ds
            };
            if !(q > lo && q < hi) {
                q = 0.5 * (lo + hi);
            }
            let mut converged = false;
            for _ in 0..100 {
                let f = seg(q)? - ds;
                if f.abs() <= 1e-13 * ds.max(1.0) {
                    converged = true;
                    break;
                }
                // seg grows as q moves away from q_prev.
                let towards_target = f < 0.0;
                if towards_target == (dir < 0.0) {
                    hi = q;
                } else {
                    lo = q;
                }
                let slope = 1.0 / self.speed(q).max(1e-300);
                let mut next = q + dir * (-f) / slope;
                if !(next > lo && next < hi) || !next.is_finite() {
                    next = 0.5 * (lo + hi);
                }
                if (next - q).abs() <= 1e-15 * q.abs().max(1e-300) {
                    q = next;
                    converged = true;
                    break;
                }
                q = next;
            }
            if !converged {
                return Err(Error::QuadratureNonConvergence {
                    estimate: q,
                    error: f64::NAN,
                });
            }
            out.push((k as f64 * ds, q));
            q_prev = q;
            k += 1;
        }
        Ok(out)
    }
}

/// Samples the localized state in arc length with spacing `ds`.
///
/// A saddle loop gives a symmetric pulse with the turning point at `s = 0`;
/// at a heteroclinic load the profile is the monotone front, centred where
/// `q = q_c/√2`. Tails are cut where `q` is within `1e-8 q_peak` of its
/// asymptote.
pub fn localized_profile<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    ds: f64,
    cfg: &EngineConfig,
) -> Result<SampledProfile> {
    if !(ds > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "arc-length spacing {ds} must be positive"
        )));
    }
    let status = homoclinic_turning_point(sys, p, cfg)?;
    let mut m = Marcher {
        sys,
        p,
        cfg,
        turn: None,
        anchor: None,
    };
    match status {
        HomoclinicStatus::Absent { reason } => Err(Error::NoHomoclinic { p, reason }),
        HomoclinicStatus::Loop {
            kind: LoopKind::Collapsed,
            ..
        } => Ok(SampledProfile {
            p,
            kind: ProfileKind::Pulse,
            q_peak: 0.0,
            samples: vec![ProfileSample {
                s: 0.0,
                q: 0.0,
                dq: 0.0,
            }],
        }),
        HomoclinicStatus::Loop { q_turn, kind } => {
            if kind == LoopKind::Simple {
                m.turn = Some(q_turn);
            }
            let half = m.march(q_turn, 0.0, ds, TAIL * q_turn)?;
            let mut samples = Vec::with_capacity(2 * half.len() - 1);
            for &(s, q) in half.iter().rev() {
                samples.push(ProfileSample {
                    s: -s,
                    q,
                    dq: m.speed(q),
                });
            }
            for &(s, q) in half.iter().skip(1) {
                samples.push(ProfileSample {
                    s,
                    q,
                    dq: -m.speed(q),
                });
            }
            Ok(SampledProfile {
                p,
                kind: ProfileKind::Pulse,
                q_peak: q_turn,
                samples,
            })
        }
        HomoclinicStatus::Heteroclinic { q_collision } => {
            m.anchor = Some(q_collision);
            let mid = q_collision / std::f64::consts::SQRT_2;
            let up = m.march(mid, q_collision, ds, TAIL * q_collision)?;
            let down = m.march(mid, 0.0, ds, TAIL * q_collision)?;
            let mut samples = Vec::with_capacity(up.len() + down.len());
            for &(s, q) in down.iter().rev() {
                samples.push(ProfileSample {
                    s: -s,
                    q,
                    dq: m.speed(q),
                });
            }
            for &(s, q) in up.iter().skip(1) {
                samples.push(ProfileSample {
                    s,
                    q,
                    dq: m.speed(q),
                });
            }
            Ok(SampledProfile {
                p,
                kind: ProfileKind::Front,
                q_peak: q_collision,
                samples,
            })
        }
    }
}
