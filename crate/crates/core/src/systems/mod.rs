//! Concrete oscillators: the strut amplitude equation, the twisted rod and
//! a quintic model with a Maxwell load.

mod expansion;
mod model;
mod rod;
mod strut_amplitude;

pub use expansion::{strut_reconstruct, AmplitudeExpansion, Envelope, ReconstructGrid};
pub use model::{
    make_model, model_closed_forms, model_heteroclinic, model_heteroclinic_slope, Model,
    ModelClosedForms, ModelParams,
};
pub use rod::{make_rod, rod_closed_forms, Rod, RodClosedForms, RodParams, POLE_GAP};
pub use strut_amplitude::{
    amplitude_cubic, make_strut_amplitude, StrutAmplitude, StrutParams, FOUNDATION_EXPONENT,
    P_CRITICAL,
};

use crate::oscillator::{DeflectionDomain, Interval, Oscillator};

/// Any of the built-in oscillators.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    StrutAmplitude(StrutAmplitude),
    Rod(Rod),
    Model(Model),
}

macro_rules! dispatch {
    ($self:ident, $s:ident => $e:expr) => {
        match $self {
            System::StrutAmplitude($s) => $e,
            System::Rod($s) => $e,
            System::Model($s) => $e,
        }
    };
}

impl Oscillator for System {
    fn name(&self) -> &str {
        dispatch!(self, s => s.name())
    }
    fn potential(&self, q: f64, p: f64) -> f64 {
        dispatch!(self, s => s.potential(q, p))
    }
    fn potential_deriv(&self, q: f64, p: f64) -> f64 {
        dispatch!(self, s => s.potential_deriv(q, p))
    }
    fn mass(&self) -> f64 {
        dispatch!(self, s => s.mass())
    }
    fn wavelength(&self, p: f64) -> f64 {
        dispatch!(self, s => s.wavelength(p))
    }
    fn load_domain(&self) -> Interval {
        dispatch!(self, s => s.load_domain())
    }
    fn deflection_domain(&self, p: f64) -> DeflectionDomain {
        dispatch!(self, s => s.deflection_domain(p))
    }
}

impl From<StrutAmplitude> for System {
    fn from(s: StrutAmplitude) -> Self {
        System::StrutAmplitude(s)
    }
}

impl From<Rod> for System {
    fn from(s: Rod) -> Self {
        System::Rod(s)
    }
}

impl From<Model> for System {
    fn from(s: Model) -> Self {
        System::Model(s)
    }
}
