//! Equivalent-oscillator engine.
//!
//! A long structure whose equilibria obey a conservative second-order ODE in
//! the axial coordinate is treated as a particle in the potential
//! `V(q; p)`. Fixed points of the particle are periodic structural states,
//! saddle loops from the origin are localized states, and the structural
//! energy of either is an integral over the orbit. Stability is reversed:
//! a structurally stable state sits at a maximum of `V`.

mod diagram;
mod fixed;
mod homoclinic;
mod maxwell;
mod orbit;

pub use diagram::{barrier_diagram, bifurcation_diagram, BifurcationRow, PathLabel};
pub use fixed::{classify, fixed_points, second_derivative};
pub use homoclinic::{
    heteroclinic_barrier, homoclinic_turning_point, localized_barrier, localized_profile,
    periodic_wave_energy, HomoclinicStatus, LoopKind, ProfileKind, ProfileSample, SampledProfile,
};
pub use maxwell::{collision_gap, fold_load, maxwell_load, track_beta};
pub use orbit::{orbit_integrate, phase_portrait, Orbit, OrbitSample, Polyline};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::QuadOptions;

/// Closed load interval; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub const fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// How the deflection domain ends at `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainEnd {
    /// `upper` itself is admissible and an orbit reaching it is reflected.
    Closed,
    /// The potential diverges as `q → upper`; `upper` is already pulled
    /// back from the singularity.
    Singular,
    /// The domain continues; `upper` only bounds the root scan and is
    /// chosen beyond every fixed point and level-zero crossing.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeflectionDomain {
    pub upper: f64,
    pub end: DomainEnd,
}

/// An evaluable one-degree-of-freedom oscillator family `V(q; p)`.
///
/// Implementations store potentials with `V(0; p) = 0`, and kinetic
/// density `½ μ q′²`.
pub trait Oscillator {
    fn name(&self) -> &str;
    fn potential(&self, q: f64, p: f64) -> f64;
    fn potential_deriv(&self, q: f64, p: f64) -> f64;
    fn mass(&self) -> f64;
    /// Length of one periodic wave at load `p`.
    fn wavelength(&self, p: f64) -> f64;
    fn load_domain(&self) -> Interval;
    fn deflection_domain(&self, p: f64) -> DeflectionDomain;
}

impl<T: Oscillator + ?Sized> Oscillator for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn potential(&self, q: f64, p: f64) -> f64 {
        (**self).potential(q, p)
    }
    fn potential_deriv(&self, q: f64, p: f64) -> f64 {
        (**self).potential_deriv(q, p)
    }
    fn mass(&self) -> f64 {
        (**self).mass()
    }
    fn wavelength(&self, p: f64) -> f64 {
        (**self).wavelength(p)
    }
    fn load_domain(&self) -> Interval {
        (**self).load_domain()
    }
    fn deflection_domain(&self, p: f64) -> DeflectionDomain {
        (**self).deflection_domain(p)
    }
}

/// Numerical settings shared by the engine operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Grid points used to scan `V′` for sign changes.
    pub scan_points: usize,
    /// Absolute tolerance on roots in `q` and `p`.
    pub root_tol: f64,
    pub quad_rel: f64,
    /// `|V″|` below this classifies an equilibrium as degenerate.
    pub degenerate_tol: f64,
    /// `|V|` at a structurally stable fixed point below this is treated as
    /// the heteroclinic (double-zero) condition.
    pub heteroclinic_tol: f64,
    /// Finite-difference step for `V″`.
    pub fd_step: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            scan_points: 512,
            root_tol: 1e-12,
            quad_rel: 1e-10,
            degenerate_tol: 1e-7,
            heteroclinic_tol: 1e-12,
            fd_step: 1e-5,
        }
    }
}

impl EngineConfig {
    pub(crate) fn quad(&self) -> QuadOptions {
        QuadOptions {
            rel_tol: self.quad_rel,
            abs_tol: 1e-15,
            max_intervals: 4000,
        }
    }
}

/// Structural stability, read off the oscillator potential with the
/// familiar rule reversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    /// Local maximum of `V`.
    StableStructure,
    /// Local minimum of `V`.
    UnstableStructure,
    Degenerate,
}

/// Equilibrium path labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Trivial fundamental state.
    Tau,
    /// Unstable periodic path from the bifurcation down to the fold.
    Alpha,
    /// Restabilized periodic path after the fold.
    Beta,
    /// Unstable periodic path beyond a second fold.
    Gamma,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Tau => "tau",
            Branch::Alpha => "alpha",
            Branch::Beta => "beta",
            Branch::Gamma => "gamma",
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(Branch::Tau),
            "alpha" => Ok(Branch::Alpha),
            "beta" => Ok(Branch::Beta),
            "gamma" => Ok(Branch::Gamma),
            other => Err(Error::InvalidParameter(format!("unknown branch '{other}'"))),
        }
    }
}

/// A fixed point of the oscillator at one load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub q: f64,
    pub p: f64,
    pub stability: Stability,
    pub branch: Branch,
}

/// One row of a shock-sensitivity diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrierPoint {
    pub p: f64,
    pub e_lambda: Option<f64>,
    pub e_alpha_per_wave: Option<f64>,
    pub n_waves: u32,
    pub e_alpha_n: Option<f64>,
    pub q_turn: Option<f64>,
    pub q_alpha: Option<f64>,
    pub q_beta: Option<f64>,
}

impl BarrierPoint {
    pub fn empty(p: f64, n_waves: u32) -> Self {
        Self {
            p,
            e_lambda: None,
            e_alpha_per_wave: None,
            n_waves,
            e_alpha_n: None,
            q_turn: None,
            q_alpha: None,
            q_beta: None,
        }
    }

    /// Sets the per-wave barrier and its exact `N`-wave multiple.
    pub fn with_alpha(mut self, per_wave: f64) -> Self {
        self.e_alpha_per_wave = Some(per_wave);
        self.e_alpha_n = Some(f64::from(self.n_waves) * per_wave);
        self
    }
}

/// Maxwell load and the heteroclinic barrier there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxwellResult {
    pub p_m: f64,
    pub q_collision: f64,
    pub e_star: f64,
    pub p_l: Option<f64>,
}

pub(crate) fn check_load<S: Oscillator + ?Sized>(sys: &S, p: f64) -> Result<()> {
    let dom = sys.load_domain();
    if !p.is_finite() || !dom.contains(p) {
        return Err(Error::LoadOutOfDomain {
            p,
            lo: dom.lo,
            hi: dom.hi,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn wave_count_scales_alpha_exactly(n in 1u32..1000, e in 0.0f64..1e3) {
            let row = BarrierPoint::empty(0.5, n).with_alpha(e);
            prop_assert_eq!(row.e_alpha_n, Some(f64::from(n) * e));
            let one = BarrierPoint::empty(0.5, 1).with_alpha(e);
            prop_assert_eq!(one.e_alpha_n, one.e_alpha_per_wave);
        }
    }

    #[test]
    fn interval_membership() {
        assert!(Interval::real_line().contains(-1e300));
        assert!(Interval::new(0.0, 1.0).contains(1.0));
        assert!(!Interval::new(0.0, 1.0).contains(f64::NAN));
    }
}
