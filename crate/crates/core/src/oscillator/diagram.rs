use serde::{Deserialize, Serialize};

use super::{
    fixed_points, heteroclinic_barrier, homoclinic_turning_point, localized_barrier, BarrierPoint,
    Branch, EngineConfig, HomoclinicStatus, Oscillator,
};
use crate::error::{Error, Result};

/// Row label of a bifurcation diagram: the equilibrium branches plus the
/// localized path λ (reported through its turning point).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathLabel {
    Tau,
    Alpha,
    Beta,
    Gamma,
    Lambda,
}

impl PathLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PathLabel::Tau => "tau",
            PathLabel::Alpha => "alpha",
            PathLabel::Beta => "beta",
            PathLabel::Gamma => "gamma",
            PathLabel::Lambda => "lambda",
        }
    }
}

impl From<Branch> for PathLabel {
    fn from(b: Branch) -> Self {
        match b {
            Branch::Tau => PathLabel::Tau,
            Branch::Alpha => PathLabel::Alpha,
            Branch::Beta => PathLabel::Beta,
            Branch::Gamma => PathLabel::Gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationRow {
    pub p: f64,
    pub path: PathLabel,
    pub q: f64,
}

pub fn bifurcation_diagram<S: Oscillator + ?Sized>(
    sys: &S,
    loads: &[f64],
    cfg: &EngineConfig,
) -> Result<Vec<BifurcationRow>> {
    let mut rows = Vec::new();
    for &p in loads {
        for eq in fixed_points(sys, p, cfg)? {
            rows.push(BifurcationRow {
                p,
                path: eq.branch.into(),
                q: eq.q,
            });
        }
        let lambda = match homoclinic_turning_point(sys, p, cfg)? {
            HomoclinicStatus::Loop { q_turn, .. } => Some(q_turn),
            HomoclinicStatus::Heteroclinic { q_collision } => Some(q_collision),
            HomoclinicStatus::Absent { .. } => None,
        };
        if let Some(q) = lambda {
            rows.push(BifurcationRow {
                p,
                path: PathLabel::Lambda,
                q,
            });
        }
    }
    Ok(rows)
}

/// Localized and periodic barriers at each load. `e_lambda` is absent
/// wherever the saddle loop does not exist.
pub fn barrier_diagram<S: Oscillator + ?Sized>(
    sys: &S,
    loads: &[f64],
    n_waves: u32,
    cfg: &EngineConfig,
) -> Result<Vec<BarrierPoint>> {
    if n_waves == 0 {
        return Err(Error::InvalidParameter(
            "number of waves must be at least 1".into(),
        ));
    }
    let mut rows = Vec::with_capacity(loads.len());
    for &p in loads {
        let eqs = fixed_points(sys, p, cfg)?;
        let mut row = BarrierPoint::empty(p, n_waves);
        let find = |b: Branch| eqs.iter().find(|e| e.branch == b).map(|e| e.q);
        row.q_alpha = find(Branch::Alpha);
        row.q_beta = find(Branch::Beta);
        if let Some(q) = row.q_alpha {
            row = row.with_alpha(sys.wavelength(p) * (-sys.potential(q, p)));
        }
        match homoclinic_turning_point(sys, p, cfg)? {
            HomoclinicStatus::Loop { q_turn, .. } => {
                row.q_turn = Some(q_turn);
                row.e_lambda = Some(localized_barrier(sys, p, cfg)?);
            }
            HomoclinicStatus::Heteroclinic { q_collision } => {
                row.q_turn = Some(q_collision);
                row.e_lambda = Some(heteroclinic_barrier(sys, p, q_collision, cfg)?);
            }
            HomoclinicStatus::Absent { .. } => {}
        }
        rows.push(row);
    }
    Ok(rows)
}
