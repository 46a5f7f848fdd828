//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails when the set of failing criteria differs from
//! `KNOWN_FAILURES`, so a regression or a newly passing criterion both
//! show up.

#![allow(clippy::type_complexity)]

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use shocksens::cli::validate::heteroclinic_shooting;
use shocksens::numerics::ode::OdeOptions;
use shocksens::oscillator::{
    barrier_diagram, fixed_points, homoclinic_turning_point, localized_barrier, localized_profile,
    maxwell_load, orbit_integrate, periodic_wave_energy, Branch, EngineConfig, Interval,
};
use shocksens::strut::{
    solve_localized, strut_barrier_diagram, strut_localized, StrutSolverOptions,
};
use shocksens::systems::{
    make_model, make_rod, make_strut_amplitude, strut_reconstruct, AmplitudeExpansion, Model,
    ModelParams, ReconstructGrid, Rod, RodParams, StrutParams, System,
};
use shocksens::Oscillator;

/// Criterion 7, first clause, cannot hold: the direct-vs-reconstruction
/// energy gap changes sign between ε² = 0.4 and 0.2, so its magnitude is
/// smaller at 0.4 than at 0.2.
const KNOWN_FAILURES: &[u32] = &[7];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(checks: Vec<(bool, String)>) -> Outcome {
    let passed = checks.iter().all(|c| c.0);
    let detail = checks
        .into_iter()
        .map(|(ok, s)| if ok { s } else { format!("[failed] {s}") })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Vec<(bool, String)>) -> Vec<(bool, String)> {
    let t = Instant::now();
    let mut checks = f();
    let elapsed = t.elapsed();
    checks.push((
        elapsed < limit,
        format!("runtime {:.3}s < {:?}", elapsed.as_secs_f64(), limit),
    ));
    checks
}

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

fn model(gamma: f64) -> Model {
    make_model(ModelParams { gamma, p_c: 1.0 }).unwrap()
}

fn rod() -> Rod {
    make_rod(RodParams::default()).unwrap()
}

fn close(name: &str, x: f64, expected: f64, tol: f64) -> (bool, String) {
    (
        (x - expected).abs() <= tol,
        format!("{name} = {x:.12} (want {expected:.12} ± {tol:e})"),
    )
}

/// Independent check of the closed forms: at `p_M` the point `q_M` is a
/// double zero of `V`, and at `p_L` the deflection where `V′ = V″ = 0`
/// exists. Both are residuals of the quintic, evaluated by hand.
fn closed_form_residuals(gamma: f64) -> (f64, f64) {
    let p_c = 1.0;
    let v = |q: f64, p: f64| -0.5 * (p_c - p) * q * q + 0.25 * q.powi(4) - gamma / 6.0 * q.powi(6);
    let dv = |q: f64, p: f64| -(p_c - p) * q + q.powi(3) - gamma * q.powi(5);
    let d2v = |q: f64, p: f64| -(p_c - p) + 3.0 * q * q - 5.0 * gamma * q.powi(4);
    let (p_m, q_m) = (p_c - 3.0 / (16.0 * gamma), (3.0 / (4.0 * gamma)).sqrt());
    let maxwell = v(q_m, p_m).abs().max(dv(q_m, p_m).abs());
    let p_l = p_c - 1.0 / (4.0 * gamma);
    // Brute force: the smallest |V′/q| + |V″| over a fine grid at p_L.
    let fold = (1..200_000)
        .map(|i| 3.0 * i as f64 / 200_000.0)
        .map(|q| (dv(q, p_l) / q).abs() + d2v(q, p_l).abs())
        .fold(f64::INFINITY, f64::min);
    (maxwell, fold)
}

fn criterion_1() -> Outcome {
    let mut checks = Vec::new();
    for gamma in [0.75, 3.0 / 16.0, 3.0] {
        let (res_m, res_l) = closed_form_residuals(gamma);
        checks.push((
            res_m < 1e-12 && res_l < 1e-3,
            format!("gamma={gamma}: closed-form residuals {res_m:.1e}, {res_l:.1e}"),
        ));
    }
    checks.extend(timed(Duration::from_secs(1), || {
        let m = maxwell_load(&model(0.75), Interval::new(-0.5, 1.0), &cfg()).unwrap();
        vec![
            close("p_L", m.p_l.unwrap(), 2.0 / 3.0, 1e-8),
            close("p_M", m.p_m, 0.75, 1e-8),
            close("q_collision", m.q_collision, 1.0, 1e-6),
            close("E*", m.e_star, 0.25, 1e-6),
        ]
    }));
    for gamma in [3.0 / 16.0, 3.0] {
        checks.extend(timed(Duration::from_secs(1), || {
            let m =
                maxwell_load(&model(gamma), Interval::new(1.0 - 1.0 / gamma, 1.0), &cfg()).unwrap();
            let e = 3.0 * 3f64.sqrt() / 32.0 * gamma.powf(-1.5);
            vec![close(&format!("E*(gamma={gamma})"), m.e_star, e, 1e-8)]
        }));
    }
    outcome(checks)
}

fn criterion_2() -> Outcome {
    let m = model(0.75);
    let c = cfg();
    let mx = maxwell_load(&m, Interval::new(-0.5, 1.0), &c).unwrap();
    let exists = |p: f64| {
        homoclinic_turning_point(&m, p, &c)
            .unwrap()
            .turning_point()
            .is_some()
    };
    let p = mx.p_m + 1e-4;
    let e_lambda = localized_barrier(&m, p, &c).unwrap();
    let rows = |n| barrier_diagram(&m, &[p], n, &c).unwrap().remove(0);
    let (r20, r40) = (rows(20), rows(40));
    let ratio20 = r20.e_alpha_n.unwrap() / e_lambda;
    let ratio40 = r40.e_alpha_n.unwrap() / e_lambda;
    let below = barrier_diagram(&m, &[mx.p_m - 1e-3], 20, &c)
        .unwrap()
        .remove(0);
    outcome(vec![
        (
            !exists(mx.p_m - 1e-3),
            "homoclinic absent at p_M - 1e-3".into(),
        ),
        (
            exists(mx.p_m + 1e-3),
            "homoclinic present at p_M + 1e-3".into(),
        ),
        close("e_lambda(p_M + 1e-4)", e_lambda, mx.e_star, 1e-2),
        (
            below.e_lambda.is_none() && below.e_alpha_n.is_some(),
            "only the periodic barrier is finite below p_M".into(),
        ),
        (ratio20 > 5.0, format!("N=20 ratio {ratio20:.4} > 5")),
        (
            (ratio40 / ratio20 - 2.0).abs() < 1e-12,
            format!("ratio linear in N ({ratio40:.4} at N=40)"),
        ),
    ])
}

fn criterion_3() -> Outcome {
    let r = rod();
    let c = cfg();
    outcome(timed(Duration::from_secs(1), || {
        let alpha = fixed_points(&r, 1.0, &c)
            .unwrap()
            .into_iter()
            .find(|e| e.branch == Branch::Alpha)
            .unwrap();
        let turn = homoclinic_turning_point(&r, 1.0, &c)
            .unwrap()
            .turning_point()
            .unwrap();
        let mut checks = vec![
            close("theta_h(1)", alpha.q, PI / 2.0, 1e-10),
            close("theta_max(1)", turn, 2.0 * PI / 3.0, 1e-10),
        ];
        let worst = (1..=7)
            .map(|k| 0.25 * k as f64)
            .map(|m| {
                let e = periodic_wave_energy(&r, m, Branch::Alpha, 1, &c).unwrap();
                let want = PI * (2.0 - m).powi(2);
                ((e - want) / want).abs()
            })
            .fold(0.0, f64::max);
        checks.push((
            worst < 1e-8,
            format!("wave energy worst rel. error {worst:.1e}"),
        ));
        checks.push(close(
            "E_lambda(0)",
            localized_barrier(&r, 0.0, &c).unwrap(),
            8.0,
            1e-6,
        ));
        let e = localized_barrier(&r, 1.99, &c).unwrap();
        let want = 8.0 / 3.0 * 0.01f64.powf(1.5);
        checks.push((
            ((e - want) / want).abs() < 0.05,
            format!("E_lambda(1.99) = {e:.6e} vs {want:.6e}"),
        ));
        checks
    }))
}

fn criterion_4() -> Outcome {
    let rod_ratio = localized_barrier(&rod(), 1.0, &cfg()).unwrap() / PI;
    let table = strut_barrier_diagram(&[1.5], 1.0, 1, &StrutSolverOptions::default()).unwrap();
    let row = &table.rows[0];
    let strut_ratio = row.e_lambda.unwrap() / row.e_alpha_per_wave.unwrap();
    outcome(vec![
        (
            (0.7..=0.95).contains(&rod_ratio),
            format!("rod ratio at m=1: {rod_ratio:.6}"),
        ),
        (
            (rod_ratio - 0.871982).abs() < 1e-6,
            "rod ratio matches the refined quadrature oracle 0.871982".into(),
        ),
        (
            (0.5..=2.0).contains(&strut_ratio),
            format!("strut ratio at P=1.5: {strut_ratio:.4}"),
        ),
    ])
}

fn criterion_5() -> Outcome {
    let (err, drift) = heteroclinic_shooting(
        ModelParams {
            gamma: 0.75,
            p_c: 1.0,
        },
        20.0,
        4001,
    )
    .unwrap();
    outcome(vec![
        (err < 1e-6, format!("sup error over |s| <= 20: {err:.2e}")),
        (drift < 1e-9, format!("energy drift {drift:.1e}")),
    ])
}

fn gradient_worst(sys: &System, (plo, phi): (f64, f64), (qlo, qhi): (f64, f64)) -> f64 {
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..50 {
        let q = qlo + (qhi - qlo) * i as f64 / 49.0;
        for j in 0..20 {
            let p = plo + (phi - plo) * j as f64 / 19.0;
            let fd = (sys.potential(q + h, p) - sys.potential(q - h, p)) / (2.0 * h);
            let d = sys.potential_deriv(q, p);
            worst = worst.max((fd - d).abs() / d.abs().max(1.0));
        }
    }
    worst
}

fn criterion_6() -> Outcome {
    let c = cfg();
    let m = model(0.75);
    let r = rod();
    let mut checks = Vec::new();

    let orbits = [
        orbit_integrate(&m, 0.9, 0.0, 1e-6, (0.0, 60.0), 6001, OdeOptions::default()).unwrap(),
        orbit_integrate(&r, 1.0, 0.0, 1e-6, (0.0, 60.0), 6001, OdeOptions::default()).unwrap(),
        orbit_integrate(&r, 1.0, 1.0, 0.3, (0.0, -15.0), 300, OdeOptions::default()).unwrap(),
    ];
    let drift = orbits.iter().map(|o| o.energy_drift()).fold(0.0, f64::max);
    let (_, shot) = heteroclinic_shooting(
        ModelParams {
            gamma: 0.75,
            p_c: 1.0,
        },
        20.0,
        4001,
    )
    .unwrap();
    checks.push((
        drift.max(shot) < 1e-9,
        format!("Hamiltonian drift {:.1e}", drift.max(shot)),
    ));

    let mut worst = 0.0f64;
    for (sys, p) in [(&m as &dyn Oscillator, 0.9), (&r, 1.0), (&r, 1.9)] {
        let prof = localized_profile(sys, p, 1e-3, &c).unwrap();
        let mu = sys.mass();
        let e_s: f64 = prof
            .samples
            .windows(2)
            .map(|w| 0.5 * (w[1].s - w[0].s) * mu * (w[0].dq.powi(2) + w[1].dq.powi(2)))
            .sum();
        let e_q = localized_barrier(sys, p, &c).unwrap();
        worst = worst.max(((e_s - e_q) / e_q).abs());
    }
    checks.push((
        worst < 1e-6,
        format!("two-way barrier worst rel. gap {worst:.1e}"),
    ));

    let linear = [1u32, 5, 20, 137].iter().all(|&n| {
        let row = barrier_diagram(&r, &[1.0], n, &c).unwrap().remove(0);
        row.e_alpha_n == Some(f64::from(n) * row.e_alpha_per_wave.unwrap())
    });
    checks.push((linear, "N-wave linearity exact".into()));

    let systems: [(System, (f64, f64), (f64, f64)); 3] = [
        (model(0.75).into(), (-1.0, 1.5), (-1.6, 1.6)),
        (rod().into(), (0.05, 1.95), (-2.5, 2.5)),
        (
            make_strut_amplitude(1.0).unwrap().into(),
            (0.05, 1.95),
            (-3.0, 3.0),
        ),
    ];
    for (sys, pr, qr) in &systems {
        let g = gradient_worst(sys, *pr, *qr);
        checks.push((g < 1e-6, format!("{} gradient check {g:.1e}", sys.name())));
    }
    outcome(checks)
}

fn criterion_7() -> Outcome {
    let opts = StrutSolverOptions::default();
    outcome(timed(Duration::from_secs(30), || {
        let mut gaps = Vec::new();
        for eps2 in [0.4, 0.2, 0.1] {
            let load = 2.0 - eps2;
            let direct = strut_localized(1.0, load, &opts).unwrap();
            let eps = f64::sqrt(eps2);
            let x_max = 40.0 / eps;
            let recon = strut_reconstruct(
                &AmplitudeExpansion::homoclinic(&StrutParams::new(1.0, load).unwrap()),
                ReconstructGrid::HalfLine {
                    x_max,
                    points: (x_max / 0.01) as usize,
                },
            )
            .unwrap();
            gaps.push(((direct.energy - recon.energy) / direct.energy).abs());
        }
        let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
        let residual = |eps: f64| {
            let x_max = 40.0 / eps;
            let e =
                AmplitudeExpansion::homoclinic(&StrutParams::new(1.0, 2.0 - eps * eps).unwrap());
            strut_reconstruct(
                &e,
                ReconstructGrid::HalfLine {
                    x_max,
                    points: (x_max / 0.01) as usize,
                },
            )
            .unwrap()
            .residual
        };
        let ratio = residual(0.1) / residual(0.05);
        // The direct solver must also resolve the guess-to-solution step.
        let params = StrutParams::new(1.0, 1.9).unwrap();
        let guess = shocksens::strut::localized_guess(&params, &opts.localized).unwrap();
        let solved = solve_localized(&params, &guess, &opts.localized).unwrap();
        vec![
            (
                monotone,
                format!(
                    "relative energy gaps {:.4}, {:.4}, {:.4} at eps^2 = 0.4, 0.2, 0.1 (monotone decrease required)",
                    gaps[0], gaps[1], gaps[2]
                ),
            ),
            ((ratio - 8.0).abs() <= 1.6, format!("residual ratio under eps halving {ratio:.3}")),
            (solved.residual < 1e-8, format!("direct residual {:.1e}", solved.residual)),
        ]
    }))
}

fn criterion_8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_shocksens");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let validate = run(&["validate"]);
    let rod = run(&["maxwell", "--system", "rod"]);
    let dir = tempfile::tempdir().unwrap();
    let mut identical = true;
    for (args, ext) in [
        (
            vec![
                "barrier", "--system", "model", "--p-min", "0.65", "--p-max", "0.95", "--steps",
                "7",
            ],
            "csv",
        ),
        (
            vec![
                "barrier", "--system", "rod", "--p-min", "0.5", "--p-max", "1.9", "--steps", "5",
                "--format", "json",
            ],
            "json",
        ),
        (
            vec![
                "bifurcation",
                "--system",
                "strut-direct",
                "--p-min",
                "1.7",
                "--p-max",
                "1.9",
                "--steps",
                "3",
            ],
            "csv",
        ),
    ] {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("{}-{k}.{ext}", args[2]));
            let mut full = args.clone();
            full.extend(["--out", path.to_str().unwrap()]);
            let st = run(&full);
            identical &= st.status.success();
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        identical &= !outputs[0].is_empty() && outputs[0] == outputs[1];
    }
    outcome(vec![
        (
            validate.status.success(),
            format!("validate exit {:?}", validate.status.code()),
        ),
        (
            rod.status.code() == Some(4)
                && String::from_utf8_lossy(&rod.stderr).contains("no restabilized periodic path"),
            format!("maxwell on rod exit {:?}", rod.status.code()),
        ),
        (identical, "repeated runs byte-identical".into()),
    ])
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failing = Vec::new();
    for (n, f) in criteria {
        let o = f();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {n}: {}", o.detail);
        if !o.passed {
            failing.push(n);
        }
    }
    if failing == KNOWN_FAILURES {
        println!("acceptance: failing set {failing:?} matches the documented set");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing set {failing:?} differs from the documented set {KNOWN_FAILURES:?}");
        ExitCode::FAILURE
    }
}
