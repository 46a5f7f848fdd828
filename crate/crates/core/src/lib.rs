//! Energy barriers of long elastic structures near post-buckling, computed
//! through the equivalent-oscillator analogy: fixed points, homoclinic and
//! heteroclinic orbits, Maxwell and fold loads, and a direct solver for the
//! strut on a softening foundation.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop,
    clippy::type_complexity
)]

pub mod cli;
pub mod error;
pub mod numerics;
pub mod oscillator;
pub mod strut;
pub mod systems;

pub use error::{Error, Result};
pub use oscillator::{EngineConfig, Oscillator};
pub use systems::System;
