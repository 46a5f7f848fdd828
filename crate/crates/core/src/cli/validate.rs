//! Built-in oracle suite run by `shocksens validate`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::ode::OdeOptions;
use crate::oscillator::{
    barrier_diagram, fixed_points, homoclinic_turning_point, localized_barrier, localized_profile,
    maxwell_load, orbit_integrate, periodic_wave_energy, second_derivative, Branch, EngineConfig,
    Interval, Oscillator,
};
use crate::strut::linearization_roots;
use crate::systems::{
    make_model, make_rod, make_strut_amplitude, model_closed_forms, model_heteroclinic, Model,
    ModelParams, Rod, RodParams,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: String,
    pub passed: bool,
    /// Error text when the computation itself failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, name: String, observed: f64, expected: String, passed: bool) {
        self.checks.push(Check {
            name,
            observed,
            expected,
            passed,
            error: None,
        });
    }

    fn close(&mut self, name: impl Into<String>, observed: Result<f64>, expected: f64, tol: f64) {
        self.record(
            name.into(),
            observed,
            format!("{expected} ± {tol:e}"),
            |x| (x - expected).abs() <= tol,
        );
    }

    fn rel(&mut self, name: impl Into<String>, observed: Result<f64>, expected: f64, tol: f64) {
        self.record(
            name.into(),
            observed,
            format!("{expected} (rel {tol:e})"),
            |x| ((x - expected) / expected).abs() <= tol,
        );
    }

    fn within(&mut self, name: impl Into<String>, observed: Result<f64>, lo: f64, hi: f64) {
        self.record(name.into(), observed, format!("in [{lo}, {hi}]"), |x| {
            x >= lo && x <= hi
        });
    }

    fn below(&mut self, name: impl Into<String>, observed: Result<f64>, bound: f64) {
        self.record(name.into(), observed, format!("< {bound:e}"), |x| x < bound);
    }

    fn record(
        &mut self,
        name: String,
        observed: Result<f64>,
        expected: String,
        ok: impl Fn(f64) -> bool,
    ) {
        match observed {
            Ok(x) => self.push(name, x, expected, ok(x)),
            Err(e) => self.checks.push(Check {
                name,
                observed: f64::NAN,
                expected,
                passed: false,
                error: Some(e.to_string()),
            }),
        }
    }
}

fn model(gamma: f64) -> Model {
    make_model(ModelParams { gamma, p_c: 1.0 }).expect("valid model")
}

fn rod() -> Rod {
    make_rod(RodParams::default()).expect("valid rod")
}

fn branch_q<S: Oscillator + ?Sized>(sys: &S, p: f64, b: Branch, cfg: &EngineConfig) -> Result<f64> {
    let eqs = fixed_points(sys, p, cfg)?;
    eqs.iter()
        .find(|e| e.branch == b)
        .map(|e| e.q)
        .ok_or_else(|| crate::Error::BranchAbsent {
            requested: b.as_str().into(),
            p,
            available: eqs.iter().map(|e| e.branch.as_str().into()).collect(),
        })
}

fn turning<S: Oscillator + ?Sized>(sys: &S, p: f64, cfg: &EngineConfig) -> Result<f64> {
    homoclinic_turning_point(sys, p, cfg)?
        .turning_point()
        .ok_or(crate::Error::NoHomoclinic {
            p,
            reason: "no simple turning point".into(),
        })
}

/// Sup-norm error and largest energy drift of the Maxwell-load heteroclinic
/// of the model, shot from both ends of `[−span, span]`.
///
/// The left half starts at `s = −span` on the unstable eigendirection of
/// the origin and runs forward to `s = 0`; the right half starts at
/// `s = span` on the stable eigendirection of `q_M` and runs backward.
/// Both are compared with the logistic closed form on `samples` points.
pub fn heteroclinic_shooting(params: ModelParams, span: f64, samples: usize) -> Result<(f64, f64)> {
    let sys = make_model(params)?;
    let cf = model_closed_forms(params)?;
    let (p, mu) = (cf.p_m, sys.mass());
    let h = 1e-4;
    let rate = |q: f64| (-second_derivative(&sys, q, p, h) / mu).sqrt();
    let opts = OdeOptions::default();

    let q_left = model_heteroclinic(params, -span);
    let left = orbit_integrate(
        &sys,
        p,
        q_left,
        rate(0.0) * q_left,
        (-span, 0.0),
        samples,
        opts,
    )?;
    let q_right = model_heteroclinic(params, span);
    let right = orbit_integrate(
        &sys,
        p,
        q_right,
        rate(cf.q_m) * (cf.q_m - q_right),
        (span, 0.0),
        samples,
        opts,
    )?;
    let mut err = 0.0f64;
    for o in [&left, &right] {
        for s in &o.samples {
            err = err.max((s.q - model_heteroclinic(params, s.s)).abs());
        }
    }
    Ok((err, left.energy_drift().max(right.energy_drift())))
}

/// Barrier as the arc-length integral `∫ μ q′² ds` over the sampled
/// profile, for comparison with the deflection quadrature.
fn arc_barrier<S: Oscillator + ?Sized>(sys: &S, p: f64, cfg: &EngineConfig) -> Result<f64> {
    let prof = localized_profile(sys, p, 1e-3, cfg)?;
    let mu = sys.mass();
    Ok(prof
        .samples
        .windows(2)
        .map(|w| 0.5 * (w[1].s - w[0].s) * mu * (w[0].dq * w[0].dq + w[1].dq * w[1].dq))
        .sum())
}

pub fn run_checks() -> Vec<Check> {
    let cfg = EngineConfig::default();
    let mut s = Suite { checks: Vec::new() };

    for gamma in [0.75, 3.0 / 16.0, 3.0] {
        let m = model(gamma);
        let cf = model_closed_forms(m.params()).expect("closed forms");
        let bracket = Interval::new(1.0 - 1.0 / gamma, 1.0);
        let mx = maxwell_load(&m, bracket, &cfg);
        let tag = format!("model gamma={gamma}");
        s.close(
            format!("{tag}: p_M"),
            mx.clone().map(|r| r.p_m),
            cf.p_m,
            1e-8,
        );
        s.close(
            format!("{tag}: q_collision"),
            mx.clone().map(|r| r.q_collision),
            cf.q_m,
            1e-6,
        );
        s.close(
            format!("{tag}: E*"),
            mx.clone().map(|r| r.e_star),
            cf.e_star,
            1e-8,
        );
        s.close(
            format!("{tag}: p_L"),
            mx.and_then(|r| {
                r.p_l.ok_or(crate::Error::NoMaxwell {
                    reason: "no fold".into(),
                })
            }),
            cf.p_l,
            1e-8,
        );
    }

    let m = model(0.75);
    let x = (0.25 - (0.0625f64 - 0.25 * 0.1).sqrt()) / 0.25;
    s.close(
        "model p=0.9: turning point",
        turning(&m, 0.9, &cfg),
        x.sqrt(),
        1e-10,
    );
    let onset = |p: f64| {
        homoclinic_turning_point(&m, p, &cfg)
            .map(|h| f64::from(u8::from(h.turning_point().is_some())))
    };
    s.close(
        "model p=p_M-1e-3: homoclinic absent",
        onset(0.749),
        0.0,
        0.0,
    );
    s.close(
        "model p=p_M+1e-3: homoclinic present",
        onset(0.751),
        1.0,
        0.0,
    );

    let r = rod();
    s.close(
        "rod m=1: helix angle",
        branch_q(&r, 1.0, Branch::Alpha, &cfg),
        PI / 2.0,
        1e-10,
    );
    s.close(
        "rod m=1: turning point",
        turning(&r, 1.0, &cfg),
        2.0 * PI / 3.0,
        1e-10,
    );
    for k in 1..=7 {
        let mm = 0.25 * k as f64;
        s.close(
            format!("rod m={mm}: turning point"),
            turning(&r, mm, &cfg),
            (mm * mm / 2.0 - 1.0).acos(),
            1e-10,
        );
        s.rel(
            format!("rod m={mm}: wave energy"),
            periodic_wave_energy(&r, mm, Branch::Alpha, 1, &cfg),
            PI * (2.0 - mm).powi(2),
            1e-8,
        );
    }
    s.close(
        "rod m=0: localized barrier",
        localized_barrier(&r, 0.0, &cfg),
        8.0,
        1e-6,
    );
    s.rel(
        "rod m=1.99: localized barrier",
        localized_barrier(&r, 1.99, &cfg),
        8.0 / 3.0 * 0.01f64.powf(1.5),
        0.05,
    );
    s.within(
        "rod m=1: barrier / wave energy",
        localized_barrier(&r, 1.0, &cfg).map(|e| e / PI),
        0.7,
        0.95,
    );

    let roots = linearization_roots(1.0);
    s.push(
        "strut P=1: complex root quadruple".into(),
        roots[0].re,
        "all roots with Re != 0 and Im != 0".into(),
        roots.iter().all(|z| z.re.abs() > 0.1 && z.im.abs() > 0.1),
    );
    let roots = linearization_roots(2.0);
    let worst = roots
        .iter()
        .map(|z| z.re.abs() + (z.im.abs() - 1.0).abs())
        .fold(0.0, f64::max);
    s.below("strut P=2: double roots at ±i", Ok(worst), 1e-6);
    let roots = linearization_roots(3.0);
    let worst = roots.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    s.below("strut P=3: purely imaginary roots", Ok(worst), 1e-12);
    let sa = make_strut_amplitude(1.0).expect("valid strut");
    s.close(
        "strut amplitude c=1: homoclinic peak",
        turning(&sa, 1.5, &cfg),
        (36.0f64 / 19.0).sqrt(),
        1e-10,
    );

    let shot = heteroclinic_shooting(
        ModelParams {
            gamma: 0.75,
            p_c: 1.0,
        },
        20.0,
        4001,
    );
    s.below(
        "model heteroclinic: shooting vs logistic",
        shot.clone().map(|x| x.0),
        1e-6,
    );
    s.below("model heteroclinic: energy drift", shot.map(|x| x.1), 1e-9);
    let orbit = orbit_integrate(&m, 0.9, 0.0, 1e-6, (0.0, 60.0), 6001, OdeOptions::default());
    s.below(
        "model p=0.9: homoclinic energy drift",
        orbit.map(|o| o.energy_drift()),
        1e-9,
    );

    for (name, sys, p) in [
        ("model p=0.9", &m as &dyn Oscillator, 0.9),
        ("rod m=1", &r, 1.0),
    ] {
        let both =
            localized_barrier(sys, p, &cfg).and_then(|e| Ok((e, arc_barrier(sys, p, &cfg)?)));
        s.below(
            format!("{name}: two-way barrier equality"),
            both.map(|(a, b)| ((a - b) / a).abs()),
            1e-6,
        );
    }

    let rows = barrier_diagram(&r, &[1.0], 20, &cfg);
    s.close(
        "rod m=1: 20-wave linearity",
        rows.map(|v| {
            v[0].e_alpha_n.unwrap_or(f64::NAN) - 20.0 * v[0].e_alpha_per_wave.unwrap_or(f64::NAN)
        }),
        0.0,
        0.0,
    );
    s.checks
}
