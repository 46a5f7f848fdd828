//! Two-term reconstruction `y = ε A(εx) cos x + ε² c A²(εx)(9 + cos 2x)/18`
//! of a strut deflection from a slowly varying amplitude.

use serde::{Deserialize, Serialize};

use super::strut_amplitude::{amplitude_cubic, StrutParams, P_CRITICAL};
use crate::error::{Error, Result};
use crate::oscillator::SampledProfile;
use crate::strut::{structural_energy, DomainKind, StrutProfile};

/// Values and the first four derivatives of a function at a point.
type Jet = [f64; 5];

const BINOMIAL: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

fn jet_mul(a: &Jet, b: &Jet) -> Jet {
    let mut out = [0.0; 5];
    for (n, o) in out.iter_mut().enumerate() {
        for k in 0..=n {
            *o += BINOMIAL[n][k] * a[k] * b[n - k];
        }
    }
    out
}

fn jet_scale(a: &Jet, s: f64) -> Jet {
    a.map(|v| v * s)
}

fn jet_add(a: &Jet, b: &Jet) -> Jet {
    let mut out = *a;
    for (o, v) in out.iter_mut().zip(b) {
        *o += v;
    }
    out
}

/// Slow amplitude `A(X)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Envelope {
    Constant {
        amplitude: f64,
    },
    /// `A(X) = amplitude · sech(rate · X)`.
    Sech {
        amplitude: f64,
        rate: f64,
    },
    /// An orbit of the amplitude oscillator sampled at increasing `X`, with
    /// slopes; zero outside the sampled range. Higher derivatives come from
    /// the amplitude equation `4A″ = A − (19c²/18)A³`.
    Sampled {
        x: Vec<f64>,
        a: Vec<f64>,
        da: Vec<f64>,
    },
}

impl Envelope {
    /// `[A, A′, A″, A‴, A⁗]` at slow coordinate `x`.
    fn jet(&self, x: f64, kappa: f64) -> Jet {
        match self {
            Envelope::Constant { amplitude } => [*amplitude, 0.0, 0.0, 0.0, 0.0],
            Envelope::Sech { amplitude, rate } => {
                let u = rate * x;
                let s = 1.0 / u.cosh();
                let t = u.tanh();
                let (s2, r) = (s * s, *rate);
                [
                    amplitude * s,
                    -amplitude * r * s * t,
                    amplitude * r * r * s * (1.0 - 2.0 * s2),
                    amplitude * r.powi(3) * s * t * (6.0 * s2 - 1.0),
                    amplitude * r.powi(4) * s * (1.0 - 20.0 * s2 + 24.0 * s2 * s2),
                ]
            }
            Envelope::Sampled { x: xs, a, da } => {
                let n = xs.len();
                if n < 2 || x < xs[0] || x > xs[n - 1] {
                    return [0.0; 5];
                }
                let i = match xs.partition_point(|&v| v <= x) {
                    0 => 0,
                    k if k >= n => n - 2,
                    k => k - 1,
                };
                let h = xs[i + 1] - xs[i];
                let t = (x - xs[i]) / h;
                let (t2, t3) = (t * t, t * t * t);
                let val = (2.0 * t3 - 3.0 * t2 + 1.0) * a[i]
                    + (t3 - 2.0 * t2 + t) * h * da[i]
                    + (-2.0 * t3 + 3.0 * t2) * a[i + 1]
                    + (t3 - t2) * h * da[i + 1];
                let slope = ((6.0 * t2 - 6.0 * t) * a[i]
                    + (3.0 * t2 - 4.0 * t + 1.0) * h * da[i]
                    + (-6.0 * t2 + 6.0 * t) * a[i + 1]
                    + (3.0 * t2 - 2.0 * t) * h * da[i + 1])
                    / h;
                let mu = 2.0 * P_CRITICAL;
                let d2 = (val - kappa * val.powi(3)) / mu;
                let d3 = (1.0 - 3.0 * kappa * val * val) * slope / mu;
                let d4 =
                    ((1.0 - 3.0 * kappa * val * val) * d2 - 6.0 * kappa * val * slope * slope) / mu;
                [val, slope, d2, d3, d4]
            }
        }
    }

    /// Builds a sampled envelope from an amplitude-oscillator orbit.
    pub fn from_profile(profile: &SampledProfile) -> Result<Self> {
        if profile.samples.len() < 2 {
            return Err(Error::InvalidParameter(
                "envelope needs at least two samples".into(),
            ));
        }
        if profile.samples.windows(2).any(|w| w[1].s <= w[0].s) {
            return Err(Error::InvalidParameter(
                "envelope samples must increase in X".into(),
            ));
        }
        Ok(Envelope::Sampled {
            x: profile.samples.iter().map(|s| s.s).collect(),
            a: profile.samples.iter().map(|s| s.q).collect(),
            da: profile.samples.iter().map(|s| s.dq).collect(),
        })
    }

    fn is_localized(&self) -> bool {
        !matches!(self, Envelope::Constant { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeExpansion {
    pub epsilon: f64,
    pub c: f64,
    pub envelope: Envelope,
}

impl AmplitudeExpansion {
    pub fn new(params: &StrutParams, envelope: Envelope) -> Self {
        Self {
            epsilon: params.epsilon(),
            c: params.c,
            envelope,
        }
    }

    /// The closed-form homoclinic envelope `√(36/19)/c · sech(X/2)`.
    pub fn homoclinic(params: &StrutParams) -> Self {
        let kappa = amplitude_cubic(params.c);
        Self::new(
            params,
            Envelope::Sech {
                amplitude: (2.0 / kappa).sqrt(),
                rate: 0.5,
            },
        )
    }

    /// The uniform envelope at the nontrivial fixed point `√(18/19)/c`.
    pub fn periodic(params: &StrutParams) -> Self {
        let kappa = amplitude_cubic(params.c);
        Self::new(
            params,
            Envelope::Constant {
                amplitude: (1.0 / kappa).sqrt(),
            },
        )
    }

    pub fn load(&self) -> f64 {
        P_CRITICAL - self.epsilon * self.epsilon
    }

    /// `[y, y′, y″, y‴, y⁗]` at fast coordinate `x`.
    pub(crate) fn jet(&self, x: f64) -> Jet {
        let eps = self.epsilon;
        let a = self.envelope.jet(eps * x, amplitude_cubic(self.c));
        let mut a_fast = a;
        let mut scale = 1.0;
        for v in a_fast.iter_mut() {
            *v *= scale;
            scale *= eps;
        }
        let (s1, c1) = x.sin_cos();
        let (s2, c2) = (2.0 * x).sin_cos();
        let carrier = [c1, -s1, -c1, s1, c1];
        let second = [9.0 + c2, -2.0 * s2, -4.0 * c2, 8.0 * s2, 16.0 * c2];
        let y1 = jet_mul(&a_fast, &carrier);
        let a_sq = jet_mul(&a_fast, &a_fast);
        let y2 = jet_scale(&jet_mul(&a_sq, &second), self.c / 18.0);
        jet_add(&jet_scale(&y1, eps), &jet_scale(&y2, eps * eps))
    }
}

/// Sampling of a reconstructed profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ReconstructGrid {
    /// `points` nodes on `[0, x_max]`.
    HalfLine { x_max: f64, points: usize },
    /// `points` nodes on `[0, 2π)`.
    Periodic { points: usize },
}

/// Evaluates the two-term expansion and its derivatives analytically on a
/// fast grid, with the residual of the full strut equation at `P = 2 − ε²`.
pub fn strut_reconstruct(
    expansion: &AmplitudeExpansion,
    grid: ReconstructGrid,
) -> Result<StrutProfile> {
    if !(expansion.epsilon > 0.0 && expansion.epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "expansion scale must be positive, got {}",
            expansion.epsilon
        )));
    }
    let (kind, h, n) = match grid {
        ReconstructGrid::HalfLine { x_max, points } => {
            if points < 2 || !(x_max > 0.0) {
                return Err(Error::InvalidParameter(
                    "half-line grid needs x_max > 0 and 2+ points".into(),
                ));
            }
            (
                DomainKind::HalfLineSymmetric,
                x_max / (points - 1) as f64,
                points,
            )
        }
        ReconstructGrid::Periodic { points } => {
            if points < 4 {
                return Err(Error::InvalidParameter(
                    "periodic grid needs at least 4 points".into(),
                ));
            }
            if expansion.envelope.is_localized() {
                return Err(Error::InvalidParameter(
                    "a periodic grid needs a constant envelope".into(),
                ));
            }
            let wavelength = 2.0 * std::f64::consts::PI;
            (
                DomainKind::Periodic { wavelength },
                wavelength / points as f64,
                points,
            )
        }
    };
    let load = expansion.load();
    let c = expansion.c;
    let mut profile = StrutProfile {
        kind,
        load,
        c,
        x0: 0.0,
        h,
        y: Vec::with_capacity(n),
        dy: Vec::with_capacity(n),
        d2y: Vec::with_capacity(n),
        d3y: Vec::with_capacity(n),
        residual: 0.0,
        energy: 0.0,
    };
    for i in 0..n {
        let j = expansion.jet(h * i as f64);
        profile.y.push(j[0]);
        profile.dy.push(j[1]);
        profile.d2y.push(j[2]);
        profile.d3y.push(j[3]);
        let r = j[4] + load * j[2] + j[0] - c * j[0] * j[0];
        profile.residual = profile.residual.max(r.abs());
    }
    profile.energy = structural_energy(&profile, load);
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{localized_profile, EngineConfig};
    use crate::systems::make_strut_amplitude;

    fn params(eps2: f64) -> StrutParams {
        StrutParams::new(1.0, 2.0 - eps2).unwrap()
    }

    #[test]
    fn zero_envelope_gives_zero_profile() {
        let e = AmplitudeExpansion::new(&params(0.2), Envelope::Constant { amplitude: 0.0 });
        let p = strut_reconstruct(
            &e,
            ReconstructGrid::HalfLine {
                x_max: 10.0,
                points: 50,
            },
        )
        .unwrap();
        assert!(p.y.iter().chain(&p.d3y).all(|&v| v == 0.0));
        assert_eq!(p.energy, 0.0);
    }

    #[test]
    fn second_order_field_at_origin() {
        let pr = params(0.2);
        let a0 = 1.2;
        let e = AmplitudeExpansion::new(&pr, Envelope::Constant { amplitude: a0 });
        let y0 = e.jet(0.0)[0];
        let eps = pr.epsilon();
        assert!((y0 - eps * a0 - eps * eps * 10.0 * a0 * a0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn sech_jet_matches_finite_differences() {
        let env = Envelope::Sech {
            amplitude: 1.3,
            rate: 0.7,
        };
        let h = 1e-3;
        for x in [-2.0, -0.3, 0.0, 0.8, 3.1] {
            let j = env.jet(x, 1.0);
            let jp = env.jet(x + h, 1.0);
            let jm = env.jet(x - h, 1.0);
            for k in 0..4 {
                let fd = (jp[k] - jm[k]) / (2.0 * h);
                assert!(
                    (fd - j[k + 1]).abs() < 1e-5,
                    "order {k} at {x}: {fd} vs {}",
                    j[k + 1]
                );
            }
        }
    }

    #[test]
    fn jet_matches_finite_differences_of_y() {
        let e = AmplitudeExpansion::homoclinic(&params(0.3));
        let h = 1e-3;
        for x in [0.0, 0.7, 2.5, 9.0] {
            let j = e.jet(x);
            let jp = e.jet(x + h);
            let jm = e.jet(x - h);
            for k in 0..4 {
                let fd = (jp[k] - jm[k]) / (2.0 * h);
                assert!((fd - j[k + 1]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn sech_envelope_solves_amplitude_equation() {
        let pr = params(0.2);
        let e = AmplitudeExpansion::homoclinic(&pr);
        let kappa = amplitude_cubic(pr.c);
        for x in [0.0, 0.5, 1.5, 4.0] {
            let j = e.envelope.jet(x, kappa);
            assert!((4.0 * j[2] - j[0] + kappa * j[0].powi(3)).abs() < 1e-14);
        }
    }

    #[test]
    fn sampled_envelope_tracks_sech() {
        let pr = params(0.2);
        let sys = make_strut_amplitude(pr.c).unwrap();
        let orbit = localized_profile(&sys, pr.load, 0.02, &EngineConfig::default()).unwrap();
        let sampled = Envelope::from_profile(&orbit).unwrap();
        let exact = AmplitudeExpansion::homoclinic(&pr).envelope;
        let kappa = amplitude_cubic(pr.c);
        for x in [0.0, 0.013, 1.0, 3.3, 10.0] {
            let a = sampled.jet(x, kappa);
            let b = exact.jet(x, kappa);
            for k in 0..5 {
                assert!(
                    (a[k] - b[k]).abs() < 1e-7,
                    "order {k} at {x}: {} vs {}",
                    a[k],
                    b[k]
                );
            }
        }
    }

    #[test]
    fn residual_scales_as_cube_of_epsilon() {
        let residual = |eps: f64| {
            let e = AmplitudeExpansion::homoclinic(&params(eps * eps));
            let x_max = 40.0 / eps;
            let points = (x_max / 0.01) as usize;
            strut_reconstruct(&e, ReconstructGrid::HalfLine { x_max, points })
                .unwrap()
                .residual
        };
        let ratio = residual(0.1) / residual(0.05);
        assert!((ratio - 8.0).abs() < 1.6, "ratio {ratio}");
    }

    #[test]
    fn periodic_grid_rejects_localized_envelope() {
        let e = AmplitudeExpansion::homoclinic(&params(0.2));
        assert!(strut_reconstruct(&e, ReconstructGrid::Periodic { points: 64 }).is_err());
    }
}
