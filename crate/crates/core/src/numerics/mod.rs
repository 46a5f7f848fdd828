//! Numerical building blocks shared by the oscillator engine and the strut solver.

pub mod banded;
pub mod ode;
pub mod quadrature;
pub mod roots;
