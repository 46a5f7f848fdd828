use super::fixed::{nontrivial_roots, second_derivative};
use super::{
    check_load, fixed_points, heteroclinic_barrier, homoclinic_turning_point, Branch, EngineConfig,
    Interval, MaxwellResult, Oscillator, Stability,
};
use crate::error::{Error, Result};
use crate::numerics::roots::brent;

const LOAD_SCAN: usize = 64;

fn check_bracket<S: Oscillator + ?Sized>(sys: &S, bracket: Interval) -> Result<()> {
    if !(bracket.lo.is_finite() && bracket.hi.is_finite() && bracket.lo < bracket.hi) {
        return Err(Error::InvalidParameter(format!(
            "load bracket [{}, {}] must be finite and increasing",
            bracket.lo, bracket.hi
        )));
    }
    check_load(sys, bracket.lo)?;
    check_load(sys, bracket.hi)
}

fn load_grid(bracket: Interval) -> Vec<f64> {
    (0..=LOAD_SCAN)
        .map(|i| bracket.lo + (bracket.hi - bracket.lo) * i as f64 / LOAD_SCAN as f64)
        .collect()
}

/// Load at which the α and β fixed points merge, located by bisection on
/// the number of nontrivial roots. `None` when no pair of roots is born or
/// annihilated inside `bracket`.
pub fn fold_load<S: Oscillator + ?Sized>(
    sys: &S,
    bracket: Interval,
    cfg: &EngineConfig,
) -> Result<Option<f64>> {
    check_bracket(sys, bracket)?;
    let count = |p: f64| nontrivial_roots(sys, p, cfg).map(|r| r.len());
    let grid = load_grid(bracket);
    let counts = grid.iter().map(|&p| count(p)).collect::<Result<Vec<_>>>()?;
    for i in 0..grid.len() - 1 {
        // A grid load exactly at the fold sees one double root; bridge it.
        let j = if counts[i].abs_diff(counts[i + 1]) == 2 {
            i + 1
        } else if counts[i + 1] != counts[i]
            && i + 2 < grid.len()
            && counts[i].abs_diff(counts[i + 2]) == 2
        {
            i + 2
        } else {
            continue;
        };
        let (mut lo, mut hi) = (grid[i], grid[j]);
        let c_lo = counts[i];
        while hi - lo > 0.25 * cfg.root_tol.max(1e-13) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count(mid)? == c_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok(Some(0.5 * (lo + hi)));
    }
    Ok(None)
}

/// Newton correction of a structurally stable fixed point near `q_guess`.
pub fn track_beta<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    q_guess: f64,
    cfg: &EngineConfig,
) -> Option<f64> {
    let upper = sys.deflection_domain(p).upper;
    let mut q = q_guess;
    for _ in 0..60 {
        let f = sys.potential_deriv(q, p);
        let df = second_derivative(sys, q, p, cfg.fd_step);
        if df >= 0.0 || !df.is_finite() {
            return None;
        }
        let step = f / df;
        q -= step;
        if !(q > 0.0 && q < upper) {
            return None;
        }
        if step.abs() <= cfg.root_tol {
            let stable = super::classify(sys, q, p, cfg) == Stability::StableStructure;
            return stable.then_some(q);
        }
    }
    None
}

fn beta_at<S: Oscillator + ?Sized>(sys: &S, p: f64, cfg: &EngineConfig) -> Result<Option<f64>> {
    Ok(fixed_points(sys, p, cfg)?
        .into_iter()
        .find(|e| e.branch == Branch::Beta)
        .map(|e| e.q))
}

/// Natural-parameter continuation of β from `(p0, q0)` towards `p_end`,
/// halving the step when the corrector fails. Returns `(p, q_β, V(q_β))`.
fn continue_beta<S: Oscillator + ?Sized>(
    sys: &S,
    p0: f64,
    q0: f64,
    p_end: f64,
    cfg: &EngineConfig,
) -> Vec<(f64, f64, f64)> {
    let mut path = vec![(p0, q0, sys.potential(q0, p0))];
    let span = (p_end - p0).abs();
    if span == 0.0 {
        return path;
    }
    let dir = (p_end - p0).signum();
    let mut step = span / LOAD_SCAN as f64;
    let (mut p, mut q) = (p0, q0);
    let mut slope = 0.0;
    while (p_end - p) * dir > 0.0 && step > cfg.root_tol {
        let p_next = if (p_end - p).abs() < step {
            p_end
        } else {
            p + dir * step
        };
        let guess = q + slope * (p_next - p);
        match track_beta(sys, p_next, guess, cfg) {
            Some(q_next) => {
                slope = (q_next - q) / (p_next - p);
                path.push((p_next, q_next, sys.potential(q_next, p_next)));
                p = p_next;
                q = q_next;
            }
            None => step *= 0.5,
        }
    }
    path
}

/// Maxwell load: where the restabilized periodic state β has the same
/// energy as the trivial state, `V(q_β(p); p) = 0`.
pub fn maxwell_load<S: Oscillator + ?Sized>(
    sys: &S,
    bracket: Interval,
    cfg: &EngineConfig,
) -> Result<MaxwellResult> {
    check_bracket(sys, bracket)?;
    let grid = load_grid(bracket);
    let mut has_beta = Vec::with_capacity(grid.len());
    for &p in &grid {
        has_beta.push(beta_at(sys, p, cfg)?);
    }
    if has_beta.iter().all(Option::is_none) {
        return Err(Error::NoMaxwell {
            reason: "no restabilized periodic path".into(),
        });
    }
    // Seed far from the fold: the β load farthest from any β-free load.
    let distance_to_gap = |i: usize| {
        grid.iter()
            .zip(&has_beta)
            .filter(|(_, b)| b.is_none())
            .map(|(p, _)| (p - grid[i]).abs())
            .fold(f64::INFINITY, f64::min)
    };
    let seed = (0..grid.len())
        .filter(|&i| has_beta[i].is_some())
        .max_by(|&a, &b| distance_to_gap(a).total_cmp(&distance_to_gap(b)))
        .expect("at least one β load");
    let (p0, q0) = (grid[seed], has_beta[seed].expect("seed has β"));

    let mut path = continue_beta(sys, p0, q0, bracket.lo, cfg);
    path.reverse();
    path.extend(
        continue_beta(sys, p0, q0, bracket.hi, cfg)
            .into_iter()
            .skip(1),
    );

    let crossing = path
        .windows(2)
        .find(|w| w[0].2 == 0.0 || (w[0].2.signum() != w[1].2.signum() && w[1].2 != 0.0));
    let Some(w) = crossing else {
        return Err(Error::NoMaxwell {
            reason: "restabilized periodic path never reaches the trivial energy level".into(),
        });
    };
    let (pa, qa, _) = w[0];
    let (pb, qb, _) = w[1];
    let level = |p: f64| {
        let guess = qa + (qb - qa) * (p - pa) / (pb - pa);
        track_beta(sys, p, guess, cfg).map_or(f64::NAN, |q| sys.potential(q, p))
    };
    let p_m = if w[0].2 == 0.0 {
        pa
    } else {
        brent(level, pa, pb, cfg.root_tol, 300)?
    };
    let q_collision = track_beta(sys, p_m, qa + (qb - qa) * (p_m - pa) / (pb - pa), cfg).ok_or(
        Error::NoMaxwell {
            reason: "lost the restabilized periodic path at the Maxwell load".into(),
        },
    )?;
    let e_star = heteroclinic_barrier(sys, p_m, q_collision, cfg)?;
    let p_l = fold_load(sys, bracket, cfg)?;
    let result = MaxwellResult {
        p_m,
        q_collision,
        e_star,
        p_l,
    };
    let gap = collision_gap(sys, &result, 1e-6, cfg)?;
    if gap.is_none_or(|g| g > 1e-2 * q_collision.max(1.0)) {
        return Err(Error::NoMaxwell {
            reason: format!(
                "homoclinic turning point does not approach the collision deflection \
                 (gap {gap:?})"
            ),
        });
    }
    Ok(result)
}

/// `|q_turn(p_M ± δ) − q_collision|` on whichever side of the Maxwell load
/// the saddle loop exists; `None` if it exists on neither.
pub fn collision_gap<S: Oscillator + ?Sized>(
    sys: &S,
    maxwell: &MaxwellResult,
    delta: f64,
    cfg: &EngineConfig,
) -> Result<Option<f64>> {
    let dom = sys.load_domain();
    for p in [maxwell.p_m + delta, maxwell.p_m - delta] {
        if !dom.contains(p) {
            continue;
        }
        if let Some(q) = homoclinic_turning_point(sys, p, cfg)?.turning_point() {
            return Ok(Some((q - maxwell.q_collision).abs()));
        }
    }
    Ok(None)
}
