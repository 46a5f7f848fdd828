use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{
    continue_path, localized_guess, periodic_guess, solve_localized, solve_periodic,
    LocalizedOptions, PeriodicOptions, StepControl, StrutProfile, Termination,
};
use crate::error::{Error, Result};
use crate::oscillator::BarrierPoint;
use crate::systems::{StrutParams, P_CRITICAL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrutSolverOptions {
    pub localized: LocalizedOptions,
    pub periodic: PeriodicOptions,
    pub step: StepControl,
    /// Load at which both paths are first solved from the expansion guess;
    /// lower loads are reached by continuation.
    pub start_load: f64,
}

impl Default for StrutSolverOptions {
    fn default() -> Self {
        Self {
            localized: LocalizedOptions::default(),
            periodic: PeriodicOptions::default(),
            step: StepControl::default(),
            start_load: 1.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrutBarrierTable {
    /// One row per requested load, in the requested order.
    pub rows: Vec<BarrierPoint>,
    /// `(load, reason)` for every row with a missing barrier.
    pub notes: Vec<(f64, String)>,
    /// Fixed wavelength of the periodic path.
    pub wavelength: f64,
}

/// Solves one path at every load: loads at or above the start load directly
/// from the expansion, the rest by descending continuation.
fn sweep<G, S>(
    loads: &[f64],
    c: f64,
    start_load: f64,
    step: &StepControl,
    guess: G,
    mut solve: S,
) -> Vec<Result<StrutProfile>>
where
    G: Fn(&StrutParams) -> Result<StrutProfile>,
    S: FnMut(&StrutParams, &StrutProfile) -> Result<StrutProfile>,
{
    let mut out: Vec<Result<StrutProfile>> = loads
        .iter()
        .map(|&p| {
            Err(Error::Continuation {
                p,
                reason: "not reached".into(),
            })
        })
        .collect();
    let direct = |p: f64, solve: &mut S| -> Result<StrutProfile> {
        let params = StrutParams::new(c, p)?;
        let g = guess(&params)?;
        solve(&params, &g)
    };
    let mut below: Vec<usize> = Vec::new();
    for (i, &p) in loads.iter().enumerate() {
        if p >= start_load {
            out[i] = direct(p, &mut solve);
        } else {
            below.push(i);
        }
    }
    if below.is_empty() {
        return out;
    }
    below.sort_by(|&a, &b| loads[b].total_cmp(&loads[a]));
    let mut current = match direct(start_load, &mut solve) {
        Ok(s) => s,
        Err(e) => {
            for i in below {
                out[i] = Err(Error::Continuation {
                    p: loads[i],
                    reason: format!("start solve at P = {start_load} failed: {e}"),
                });
            }
            return out;
        }
    };
    for (k, &i) in below.iter().enumerate() {
        let target = loads[i];
        let path = continue_path(current.clone(), target, step, |p, prev| {
            let params = StrutParams::new(c, p)?;
            solve(&params, prev)
        });
        match path.termination {
            Termination::Completed => {
                current = path.last().clone();
                out[i] = Ok(current.clone());
            }
            Termination::Fold { load, .. } => {
                for &j in &below[k..] {
                    out[j] = Err(Error::FoldEncountered { p: load });
                }
                return out;
            }
            Termination::MinStep { load, message } => {
                for &j in &below[k..] {
                    out[j] = Err(Error::Continuation {
                        p: loads[j],
                        reason: format!("stalled at P = {load}: {message}"),
                    });
                }
                return out;
            }
        }
    }
    out
}

/// Localized solution of the full strut equation at one load, reached by
/// continuation from the start load when the load lies below it.
pub fn strut_localized(c: f64, load: f64, opts: &StrutSolverOptions) -> Result<StrutProfile> {
    StrutParams::new(c, load)?;
    sweep(
        &[load],
        c,
        opts.start_load,
        &opts.step,
        |pr| localized_guess(pr, &opts.localized),
        |pr, g| solve_localized(pr, g, &opts.localized),
    )
    .remove(0)
}

/// Barrier table of the full strut equation: `e_lambda` is the localized
/// energy, `e_alpha_per_wave` the energy of one `2π` wave. `q_turn` and
/// `q_alpha` hold the respective peak deflections.
pub fn strut_barrier_diagram(
    loads: &[f64],
    c: f64,
    n_waves: u32,
    opts: &StrutSolverOptions,
) -> Result<StrutBarrierTable> {
    if n_waves == 0 {
        return Err(Error::InvalidParameter(
            "number of waves must be at least 1".into(),
        ));
    }
    if let Some(&p) = loads.iter().find(|&&p| !(p > 0.0 && p < P_CRITICAL)) {
        return Err(Error::LoadOutOfDomain {
            p,
            lo: 0.0,
            hi: P_CRITICAL,
        });
    }
    StrutParams::new(c, opts.start_load)?;
    let wavelength = 2.0 * PI;
    let localized = sweep(
        loads,
        c,
        opts.start_load,
        &opts.step,
        |pr| localized_guess(pr, &opts.localized),
        |pr, g| solve_localized(pr, g, &opts.localized),
    );
    let periodic = sweep(
        loads,
        c,
        opts.start_load,
        &opts.step,
        |pr| periodic_guess(pr, wavelength, &opts.periodic),
        |pr, g| solve_periodic(pr, wavelength, g, &opts.periodic),
    );

    let mut rows = Vec::with_capacity(loads.len());
    let mut notes = Vec::new();
    for (k, &p) in loads.iter().enumerate() {
        let mut row = BarrierPoint::empty(p, n_waves);
        match &localized[k] {
            Ok(s) => {
                row.e_lambda = Some(s.energy);
                row.q_turn = Some(s.peak());
            }
            Err(e) => notes.push((p, format!("localized: {e}"))),
        }
        match &periodic[k] {
            Ok(s) => {
                row = row.with_alpha(s.energy);
                row.q_alpha = Some(s.peak());
            }
            Err(e) => notes.push((p, format!("periodic: {e}"))),
        }
        rows.push(row);
    }
    Ok(StrutBarrierTable {
        rows,
        notes,
        wavelength,
    })
}
