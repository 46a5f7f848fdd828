use shocksens::strut::{
    linearization_roots, periodic_guess, solve_periodic, strut_barrier_diagram, strut_localized,
    PeriodicOptions, StrutSolverOptions,
};
use shocksens::systems::StrutParams;

#[test]
fn localized_solution_reached_by_continuation() {
    let opts = StrutSolverOptions::default();
    let prof = strut_localized(1.0, 1.2, &opts).unwrap();
    assert!(prof.residual < 1e-8);
    assert!(prof.energy > 0.0);
    assert_eq!(prof.load, 1.2);
    // Symmetric about x = 0 with the crest there.
    assert!(prof.dy[0].abs() < 1e-12);
    assert!(prof.y[0] > prof.y[1]);
}

#[test]
fn far_field_decays_at_linear_rate() {
    let prof = strut_localized(1.0, 1.8, &StrutSolverOptions::default()).unwrap();
    let a = linearization_roots(1.8)[0].re;
    let env = |x: f64| prof.sample(x).abs().max(prof.sample(x + 0.5).abs());
    let (x1, x2) = (20.0, 30.0);
    let observed = (env(x1) / env(x2)).ln() / (x2 - x1);
    assert!((observed - a).abs() < 0.15 * a, "{observed} vs {a}");
}

#[test]
fn barriers_fall_as_load_rises() {
    let loads = [1.3, 1.5, 1.7, 1.9];
    let t = strut_barrier_diagram(&loads, 1.0, 5, &StrutSolverOptions::default()).unwrap();
    assert!(t.notes.is_empty());
    for w in t.rows.windows(2) {
        assert!(w[1].e_lambda.unwrap() < w[0].e_lambda.unwrap());
        assert!(w[1].e_alpha_per_wave.unwrap() < w[0].e_alpha_per_wave.unwrap());
    }
}

#[test]
fn softer_foundation_lowers_barrier() {
    let opts = StrutSolverOptions::default();
    let a = strut_localized(1.0, 1.8, &opts).unwrap();
    let b = strut_localized(1.5, 1.8, &opts).unwrap();
    assert!(b.energy < a.energy);
    // y → (c'/c) y maps solutions for c' onto those for c.
    assert!((b.peak() * 1.5 - a.peak()).abs() < 1e-8);
}

#[test]
fn periodic_refinement_agrees() {
    let params = StrutParams::new(1.0, 1.6).unwrap();
    let solve = |nodes: usize| {
        let opts = PeriodicOptions {
            nodes,
            ..Default::default()
        };
        let guess = periodic_guess(&params, 2.0 * std::f64::consts::PI, &opts).unwrap();
        solve_periodic(&params, 2.0 * std::f64::consts::PI, &guess, &opts)
            .unwrap()
            .energy
    };
    let (coarse, fine) = (solve(32), solve(64));
    assert!(((coarse - fine) / fine).abs() < 1e-10);
}
