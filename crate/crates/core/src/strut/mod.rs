//! Direct solution of the strut equation `y'''' + P y'' + y − c y² = 0`.
//!
//! Localized states are solved on a symmetric half-line with finite
//! differences; periodic states on one wavelength by Fourier collocation.
//! Structural energies are `∫ [½y″² + ½y² − (c/3)y³ − ½P y′²] dx`.

mod continuation;
mod diagram;
mod localized;
mod periodic;

pub use continuation::{
    continue_path, ContinuationPath, PathPoint, PathState, StepControl, Termination,
};
pub use diagram::{strut_barrier_diagram, strut_localized, StrutBarrierTable, StrutSolverOptions};
pub use localized::{localized_guess, solve_localized, LocalizedOptions};
pub use periodic::{periodic_guess, solve_periodic, PeriodicOptions};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum DomainKind {
    /// `x ∈ [0, X∞]`, even about `x = 0`; energies cover the whole line.
    HalfLineSymmetric,
    /// One wavelength with periodic ends; energies are per wave.
    Periodic { wavelength: f64 },
}

/// A sampled strut deflection on the uniform grid `x_i = x0 + i h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrutProfile {
    pub kind: DomainKind,
    pub load: f64,
    pub c: f64,
    pub x0: f64,
    pub h: f64,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
    pub d2y: Vec<f64>,
    pub d3y: Vec<f64>,
    /// Max-norm of the strut-equation residual on the grid.
    pub residual: f64,
    pub energy: f64,
}

impl StrutProfile {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.h * i as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Largest `|y|`.
    pub fn amplitude(&self) -> f64 {
        self.y.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `y(0)` for a half-line profile, or the largest deflection otherwise.
    pub fn peak(&self) -> f64 {
        match self.kind {
            DomainKind::HalfLineSymmetric => self.y[0],
            DomainKind::Periodic { .. } => self.y.iter().copied().fold(f64::MIN, f64::max),
        }
    }

    /// Linear interpolation of `y` at `x`; zero beyond a half-line grid.
    pub fn sample(&self, x: f64) -> f64 {
        let x = match self.kind {
            DomainKind::HalfLineSymmetric => x.abs(),
            DomainKind::Periodic { .. } => x,
        };
        let t = (x - self.x0) / self.h;
        if t < 0.0 || !t.is_finite() {
            return self.y.first().copied().unwrap_or(0.0);
        }
        let i = t.floor() as usize;
        if i + 1 >= self.len() {
            return 0.0;
        }
        let f = t - i as f64;
        self.y[i] * (1.0 - f) + self.y[i + 1] * f
    }

    /// The half-line profile reflected onto `[−X∞, X∞]` as `(x, y)` pairs.
    pub fn mirrored(&self) -> Vec<(f64, f64)> {
        let n = self.len();
        let mut out = Vec::with_capacity(2 * n - 1);
        for i in (1..n).rev() {
            out.push((-self.x(i), self.y[i]));
        }
        for i in 0..n {
            out.push((self.x(i), self.y[i]));
        }
        out
    }
}

/// Roots of `λ⁴ + Pλ² + 1 = 0`, the characteristic equation of the strut
/// linearized about `y = 0`, ordered `[λ, −λ, λ̄, −λ̄]` with `λ` in the
/// closed first quadrant.
pub fn linearization_roots(load: f64) -> [Complex64; 4] {
    let disc = Complex64::new(load * load - 4.0, 0.0).sqrt();
    let mut lambda = [
        ((Complex64::new(-load, 0.0) + disc) / 2.0).sqrt(),
        ((Complex64::new(-load, 0.0) - disc) / 2.0).sqrt(),
    ];
    for l in &mut lambda {
        if l.re < 0.0 {
            *l = -*l;
        }
        if l.im < 0.0 && l.re == 0.0 {
            *l = -*l;
        }
    }
    // For |P| < 2 the two square roots are conjugate; keep the one with
    // non-negative imaginary part first.
    let first = if lambda[0].im >= lambda[1].im {
        lambda[0]
    } else {
        lambda[1]
    };
    let second = if lambda[0].im >= lambda[1].im {
        lambda[1]
    } else {
        lambda[0]
    };
    if load.abs() < 2.0 {
        [first, -first, first.conj(), -first.conj()]
    } else {
        [first, -first, second, -second]
    }
}

/// Decay rate `a` and wavenumber `b` of the far field `e^{−a x} cos(b x)`
/// for `0 < P < 2`.
pub(crate) fn decay_mode(load: f64) -> (f64, f64) {
    let l = linearization_roots(load)[0];
    (l.re.abs(), l.im.abs())
}

/// Structural energy density `½y″² + ½y² − (c/3)y³ − ½P y′²`.
fn energy_density(y: f64, dy: f64, d2y: f64, c: f64, load: f64) -> f64 {
    0.5 * d2y * d2y + 0.5 * y * y - c * y * y * y / 3.0 - 0.5 * load * dy * dy
}

/// Structural energy of a profile at `load`, by the trapezoid rule: doubled
/// over the symmetric half-line, or over one period.
pub fn structural_energy(profile: &StrutProfile, load: f64) -> f64 {
    let n = profile.len();
    if n == 0 {
        return 0.0;
    }
    let f = |i: usize| energy_density(profile.y[i], profile.dy[i], profile.d2y[i], profile.c, load);
    match profile.kind {
        DomainKind::HalfLineSymmetric => {
            let inner: f64 = (1..n - 1).map(f).sum();
            let ends = if n > 1 {
                0.5 * (f(0) + f(n - 1))
            } else {
                0.5 * f(0)
            };
            2.0 * profile.h * (inner + ends)
        }
        DomainKind::Periodic { .. } => profile.h * (0..n).map(f).sum::<f64>(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_roots(load: f64) {
        for r in linearization_roots(load) {
            let v = r.powi(4) + load * r * r + 1.0;
            assert!(v.norm() < 1e-12, "P={load}: residual {}", v.norm());
        }
    }

    #[test]
    fn roots_solve_characteristic_equation() {
        for load in [-1.0, 0.0, 0.5, 1.0, 1.9, 2.0, 2.5, 3.0, 10.0] {
            check_roots(load);
        }
    }

    #[test]
    fn roots_at_unit_load_are_sixth_roots() {
        let r = linearization_roots(1.0);
        assert!((r[0] - Complex64::new(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-14);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-14);
            assert!((z.re.abs() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn roots_coalesce_at_critical_load() {
        for z in linearization_roots(2.0) {
            assert!(z.re.abs() < 1e-7 && (z.im.abs() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn roots_above_critical_are_imaginary() {
        let r = linearization_roots(3.0);
        let mut mags: Vec<f64> = r.iter().map(|z| z.im.abs()).collect();
        mags.sort_by(f64::total_cmp);
        let small = ((3.0 - 5f64.sqrt()) / 2.0).sqrt();
        let large = ((3.0 + 5f64.sqrt()) / 2.0).sqrt();
        for z in r {
            assert!(z.re.abs() < 1e-14);
        }
        assert!((mags[0] - small).abs() < 1e-14 && (mags[3] - large).abs() < 1e-14);
    }

    #[test]
    fn trivial_profile_has_zero_energy() {
        let p = StrutProfile {
            kind: DomainKind::HalfLineSymmetric,
            load: 1.5,
            c: 1.0,
            x0: 0.0,
            h: 0.1,
            y: vec![0.0; 10],
            dy: vec![0.0; 10],
            d2y: vec![0.0; 10],
            d3y: vec![0.0; 10],
            residual: 0.0,
            energy: 0.0,
        };
        assert_eq!(structural_energy(&p, 1.5), 0.0);
    }
}
