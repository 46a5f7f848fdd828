//! Cubic–quintic canonical oscillator with a fold and a Maxwell load.
//!
//! `V(q; p) = −½(p_c − p) q² + ¼ q⁴ − (γ/6) q⁶`, unit mass. The quartic term
//! makes the periodic path fall from the bifurcation; the sextic term makes
//! it restabilize, so all three critical loads are finite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{DeflectionDomain, DomainEnd, Interval, Oscillator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gamma: f64,
    pub p_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    params: ModelParams,
}

pub fn make_model(params: ModelParams) -> Result<Model> {
    if !(params.gamma > 0.0 && params.gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "model gamma must be positive, got {}",
            params.gamma
        )));
    }
    if !params.p_c.is_finite() {
        return Err(Error::InvalidParameter("model p_c must be finite".into()));
    }
    Ok(Model { params })
}

impl Model {
    pub fn params(&self) -> ModelParams {
        self.params
    }

    /// Squared deflections `q² = [1 ∓ √(1 − 4γ(p_c − p))]/(2γ)` of the α and
    /// β fixed points, when real.
    pub fn fixed_point_squares(&self, p: f64) -> Option<(f64, f64)> {
        let ModelParams { gamma, p_c } = self.params;
        let disc = 1.0 - 4.0 * gamma * (p_c - p);
        (disc >= 0.0).then(|| {
            let r = disc.sqrt();
            ((1.0 - r) / (2.0 * gamma), (1.0 + r) / (2.0 * gamma))
        })
    }
}

impl Oscillator for Model {
    fn name(&self) -> &str {
        "model"
    }

    fn potential(&self, q: f64, p: f64) -> f64 {
        let ModelParams { gamma, p_c } = self.params;
        let q2 = q * q;
        q2 * (-0.5 * (p_c - p) + q2 * (0.25 - gamma * q2 / 6.0))
    }

    fn potential_deriv(&self, q: f64, p: f64) -> f64 {
        let ModelParams { gamma, p_c } = self.params;
        let q2 = q * q;
        q * (-(p_c - p) + q2 * (1.0 - gamma * q2))
    }

    fn mass(&self) -> f64 {
        1.0
    }

    /// Conventional `2π`; the surrogate has no physical carrier wave.
    fn wavelength(&self, _p: f64) -> f64 {
        2.0 * std::f64::consts::PI
    }

    fn load_domain(&self) -> Interval {
        Interval::real_line()
    }

    fn deflection_domain(&self, p: f64) -> DeflectionDomain {
        let ModelParams { gamma, p_c } = self.params;
        // Every root of V′ and the level-zero crossing satisfy q² below this.
        let bound = (1.0 + (1.0 - 4.0 * gamma * (p_c - p)).abs().sqrt()) / (2.0 * gamma);
        DeflectionDomain {
            upper: 1.5 * bound.sqrt(),
            end: DomainEnd::Unbounded,
        }
    }
}

/// Closed-form critical loads of the cubic–quintic model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelClosedForms {
    pub p_l: f64,
    pub p_m: f64,
    pub q_m: f64,
    pub e_star: f64,
}

pub fn model_closed_forms(params: ModelParams) -> Result<ModelClosedForms> {
    make_model(params)?;
    let ModelParams { gamma, p_c } = params;
    Ok(ModelClosedForms {
        p_l: p_c - 1.0 / (4.0 * gamma),
        p_m: p_c - 3.0 / (16.0 * gamma),
        q_m: (3.0 / (4.0 * gamma)).sqrt(),
        e_star: 3.0 * 3f64.sqrt() / 32.0 * gamma.powf(-1.5),
    })
}

/// Logistic heteroclinic orbit at the Maxwell load:
/// `q(s)² = q_M² / (1 + e^{−r s})`, `r = √3 / (2√γ)`.
pub fn model_heteroclinic(params: ModelParams, s: f64) -> f64 {
    let q_m = (3.0 / (4.0 * params.gamma)).sqrt();
    let r = 3f64.sqrt() / (2.0 * params.gamma.sqrt());
    q_m / (1.0 + (-r * s).exp()).sqrt()
}

/// `dq/ds` of [`model_heteroclinic`].
pub fn model_heteroclinic_slope(params: ModelParams, s: f64) -> f64 {
    let r = 3f64.sqrt() / (2.0 * params.gamma.sqrt());
    let e = (-r * s).exp();
    0.5 * r * e / (1.0 + e) * model_heteroclinic(params, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CANON: ModelParams = ModelParams {
        gamma: 0.75,
        p_c: 1.0,
    };

    #[test]
    fn maxwell_level_condition() {
        let m = make_model(CANON).unwrap();
        assert_eq!(m.potential(1.0, 0.75), 0.0);
        assert!(m.potential_deriv(1.0, 0.75).abs() < 1e-15);
    }

    #[test]
    fn evenness_is_exact() {
        let m = make_model(CANON).unwrap();
        for q in [0.1, 0.37, 1.2, 2.5] {
            assert_eq!(m.potential(q, 0.8), m.potential(-q, 0.8));
        }
    }

    #[test]
    fn bifurcation_load_potential() {
        let m = make_model(CANON).unwrap();
        let q: f64 = 0.4;
        let expected = 0.25 * q.powi(4) - 0.125 * q.powi(6);
        assert!((m.potential(q, 1.0) - expected).abs() < 1e-16);
    }

    #[test]
    fn closed_forms_canonical() {
        let cf = model_closed_forms(CANON).unwrap();
        assert!((cf.p_l - 2.0 / 3.0).abs() < 1e-15);
        assert!((cf.p_m - 0.75).abs() < 1e-15);
        assert!((cf.q_m - 1.0).abs() < 1e-15);
        assert!((cf.e_star - 0.25).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_other_gammas() {
        let cf = model_closed_forms(ModelParams {
            gamma: 3.0 / 16.0,
            p_c: 1.0,
        })
        .unwrap();
        assert!((cf.q_m - 2.0).abs() < 1e-15 && cf.p_m.abs() < 1e-15);
        let cf = model_closed_forms(ModelParams {
            gamma: 3.0,
            p_c: 1.0,
        })
        .unwrap();
        assert!((cf.e_star - 1.0 / 32.0).abs() < 1e-16);
    }

    #[test]
    fn heteroclinic_midpoint_and_limits() {
        assert!((model_heteroclinic(CANON, 0.0) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(model_heteroclinic(CANON, -60.0) < 1e-12);
        assert!((model_heteroclinic(CANON, 60.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_gamma() {
        assert!(make_model(ModelParams {
            gamma: 0.0,
            p_c: 1.0
        })
        .is_err());
    }
}
