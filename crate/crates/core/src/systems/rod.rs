//! Free, stretched and twisted isotropic rod.
//!
//! Scaled with bending stiffness `B = 1` and tension `T = 1`, so the load
//! parameter is `m = M/√(BT)`, lengths are in units of `√(B/T)` and energies
//! in `√(BT)`. The oscillator coordinate is the Euler angle `θ` between the
//! tangent and the loading axis, in radians. The additive constant `M²/2C`
//! is dropped, so `V(0; m) = 0` and `C` enters no computation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{DeflectionDomain, DomainEnd, Interval, Oscillator};

/// Distance by which the deflection domain stops short of `θ = π`.
pub const POLE_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RodParams {
    /// Torsional stiffness `C`; carried for completeness only.
    #[serde(default = "unit")]
    pub torsional_stiffness: f64,
}

fn unit() -> f64 {
    1.0
}

impl Default for RodParams {
    fn default() -> Self {
        Self {
            torsional_stiffness: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rod {
    params: RodParams,
}

pub fn make_rod(params: RodParams) -> Result<Rod> {
    if !(params.torsional_stiffness > 0.0) {
        return Err(Error::InvalidParameter(
            "torsional stiffness must be positive".into(),
        ));
    }
    Ok(Rod { params })
}

impl Rod {
    pub fn params(&self) -> RodParams {
        self.params
    }

    /// Precession rate `ψ′ = M / (B (1 + cos θ))` of the helix at load `m`,
    /// obtained from stationarity of the energy density in `ψ′`.
    pub fn helix_precession(m: f64) -> Option<f64> {
        (m > 0.0 && m < 2.0).then(|| {
            let cos_h = m - 1.0;
            m / (1.0 + cos_h)
        })
    }
}

impl Oscillator for Rod {
    fn name(&self) -> &str {
        "rod"
    }

    fn potential(&self, theta: f64, m: f64) -> f64 {
        // (m²/2)(1 − cos θ)/(1 + cos θ) − (1 − cos θ), written in half angles.
        let (s, c) = (0.5 * theta).sin_cos();
        let t = s / c;
        0.5 * m * m * t * t - 2.0 * s * s
    }

    fn potential_deriv(&self, theta: f64, m: f64) -> f64 {
        // (s/c³)(m²/2 − 2c⁴) with 1 − c⁴ = s²(1 + c²), free of cancellation at m = 2.
        let (s, c) = (0.5 * theta).sin_cos();
        let (s2, c2) = (s * s, c * c);
        s / (c2 * c) * (0.5 * (m * m - 4.0) + 2.0 * s2 * (1.0 + c2))
    }

    fn mass(&self) -> f64 {
        1.0
    }

    /// One helical repeat `2π/ψ′`. Outside `0 < m < 2` there is no helix
    /// and the limiting value `2π` is returned.
    fn wavelength(&self, m: f64) -> f64 {
        Rod::helix_precession(m).map_or(2.0 * PI, |rate| 2.0 * PI / rate)
    }

    fn load_domain(&self) -> Interval {
        Interval::new(0.0, f64::INFINITY)
    }

    fn deflection_domain(&self, m: f64) -> DeflectionDomain {
        if m == 0.0 {
            DeflectionDomain {
                upper: PI,
                end: DomainEnd::Closed,
            }
        } else {
            DeflectionDomain {
                upper: PI - POLE_GAP,
                end: DomainEnd::Singular,
            }
        }
    }
}

/// Helix angle, homoclinic turning angle and one-wave helix energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RodClosedForms {
    pub theta_h: f64,
    pub theta_max: f64,
    pub e_wave: f64,
}

/// `θ_h = arccos(m − 1)`, `θ_max = arccos(m²/2 − 1)`, `e_wave = π(2 − m)²`.
pub fn rod_closed_forms(m: f64) -> Result<RodClosedForms> {
    if !(m > 0.0 && m < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "rod closed forms need 0 < m < 2, got {m}"
        )));
    }
    Ok(RodClosedForms {
        theta_h: (m - 1.0).acos(),
        theta_max: (0.5 * m * m - 1.0).acos(),
        e_wave: PI * (2.0 - m).powi(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rod() -> Rod {
        make_rod(RodParams::default()).unwrap()
    }

    #[test]
    fn potential_at_helix_angle() {
        assert!((rod().potential(PI / 2.0, 1.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn untwisted_potential_is_nonpositive() {
        let r = rod();
        for k in 0..=20 {
            let th = PI * k as f64 / 20.0;
            let v = r.potential(th, 0.0);
            assert!((v + (1.0 - th.cos())).abs() < 1e-14 && v <= 0.0);
        }
    }

    #[test]
    fn trivial_state_positive_near_zero_at_bifurcation() {
        let r = rod();
        for th in [1e-3, 1e-2, 0.1, 0.5] {
            assert!(r.potential(th, 2.0) >= 0.0);
        }
    }

    #[test]
    fn closed_forms() {
        let cf = rod_closed_forms(1.0).unwrap();
        assert!((cf.theta_h - PI / 2.0).abs() < 1e-15);
        assert!((cf.theta_max - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((cf.e_wave - PI).abs() < 1e-15);
        let cf = rod_closed_forms(0.5).unwrap();
        assert!((cf.theta_h - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((cf.theta_max - (-0.875f64).acos()).abs() < 1e-15);
        assert!((cf.theta_max - 2.636_232_143_305_636).abs() < 1e-12);
        assert!((cf.e_wave - 2.25 * PI).abs() < 1e-14);
        let near = rod_closed_forms(2.0 - 1e-12).unwrap();
        assert!(near.theta_h < 1e-5 && near.theta_max < 1e-5 && near.e_wave < 1e-20);
        assert!(rod_closed_forms(2.0).is_err());
        assert!(rod_closed_forms(0.0).is_err());
    }

    #[test]
    fn helix_wavelength_is_two_pi() {
        let r = rod();
        for m in [0.1, 0.5, 1.0, 1.5, 1.99] {
            assert!((r.wavelength(m) - 2.0 * PI).abs() < 1e-12);
        }
    }

    /// ψ′ = M/(B(1 + cos θ)) makes the energy density stationary in ψ′ once
    /// the twist equals M/C.
    #[test]
    fn precession_rate_is_stationary() {
        let (b, c_tor) = (1.0, 2.5);
        for m in [0.4, 1.0, 1.7] {
            let theta = (m - 1.0f64).acos();
            let psi = Rod::helix_precession(m).unwrap();
            // Hold the twist at M/C: φ′ = M/C − ψ′ cos θ.
            let density = |dpsi: f64| {
                let dphi = m / c_tor - dpsi * theta.cos();
                let tau = dphi + dpsi * theta.cos();
                let kappa2 = dpsi * dpsi * theta.sin().powi(2);
                0.5 * b * kappa2 + 0.5 * c_tor * tau * tau + (1.0 - theta.cos()) - m * (dphi + dpsi)
            };
            let h = 1e-5;
            let slope = (density(psi + h) - density(psi - h)) / (2.0 * h);
            assert!(slope.abs() < 1e-9, "m={m}: slope {slope}");
        }
    }
}
