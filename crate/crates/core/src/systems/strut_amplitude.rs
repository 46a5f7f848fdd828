//! Envelope oscillator of the strut on a softening foundation.
//!
//! With `EI = k = 1` the strut equation is `y'''' + P y'' + y − c y² = 0`,
//! the critical load is `P_C = 2` with carrier `cos x`, and near `P_C` the
//! slowly modulated amplitude `A(X)`, `X = εx`, `ε = √(P_C − P)` obeys
//! `2P_C A_XX − A + (19c²/18) A³ = 0`: a particle of mass `2P_C = 4` in
//! `V(A) = −½A² + ¼(19c²/18)A⁴`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{DeflectionDomain, DomainEnd, Interval, Oscillator};

/// Critical load in scaled units.
pub const P_CRITICAL: f64 = 2.0;
/// Exponent of the foundation nonlinearity `c yᵐ`; only the quadratic
/// foundation is supported.
pub const FOUNDATION_EXPONENT: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrutParams {
    /// Foundation softening coefficient `c`.
    pub c: f64,
    /// Axial load `P`, `0 < P < 2`.
    pub load: f64,
}

impl StrutParams {
    pub fn new(c: f64, load: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "foundation c must be positive, got {c}"
            )));
        }
        if !(load > 0.0 && load < P_CRITICAL) {
            return Err(Error::InvalidParameter(format!(
                "strut load must lie in (0, 2), got {load}"
            )));
        }
        Ok(Self { c, load })
    }

    /// `ε = √(P_C − P)`.
    pub fn epsilon(&self) -> f64 {
        (P_CRITICAL - self.load).sqrt()
    }
}

/// Cubic coefficient of the amplitude equation, `19c²/18` (k = 1).
pub fn amplitude_cubic(c: f64) -> f64 {
    19.0 * c * c / 18.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrutAmplitude {
    c: f64,
    kappa: f64,
}

pub fn make_strut_amplitude(c: f64) -> Result<StrutAmplitude> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "foundation c must be positive, got {c}"
        )));
    }
    Ok(StrutAmplitude {
        c,
        kappa: amplitude_cubic(c),
    })
}

impl StrutAmplitude {
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Quartic coefficient of `V(A)`: `¼ · 19c²/18 = 19c²/72`.
    pub fn quartic_coefficient(&self) -> f64 {
        0.25 * self.kappa
    }

    /// Peak `√(2·18/19)/c` of the homoclinic envelope.
    pub fn homoclinic_peak(&self) -> f64 {
        (2.0 / self.kappa).sqrt()
    }

    /// Envelope decay rate `ω/√(2P_C) = 1/2` of `A = A_max sech(rX)`.
    pub fn homoclinic_rate(&self) -> f64 {
        1.0 / self.mass().sqrt()
    }
}

impl Oscillator for StrutAmplitude {
    fn name(&self) -> &str {
        "strut-amplitude"
    }

    fn potential(&self, a: f64, _p: f64) -> f64 {
        let a2 = a * a;
        a2 * (-0.5 + 0.25 * self.kappa * a2)
    }

    fn potential_deriv(&self, a: f64, _p: f64) -> f64 {
        a * (-1.0 + self.kappa * a * a)
    }

    fn mass(&self) -> f64 {
        2.0 * P_CRITICAL
    }

    /// One carrier wave `2π` in `x` measured on the slow scale `X = εx`.
    fn wavelength(&self, p: f64) -> f64 {
        2.0 * PI * (P_CRITICAL - p).max(0.0).sqrt()
    }

    fn load_domain(&self) -> Interval {
        Interval::new(f64::MIN_POSITIVE, P_CRITICAL - f64::EPSILON)
    }

    fn deflection_domain(&self, _p: f64) -> DeflectionDomain {
        DeflectionDomain {
            upper: 2.0 * self.homoclinic_peak(),
            end: DomainEnd::Unbounded,
        }
    }
}
