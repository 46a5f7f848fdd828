use super::{check_load, Branch, EngineConfig, Equilibrium, Oscillator, Stability};
use crate::error::{Error, Result};
use crate::numerics::roots::{brent, golden_min};

/// Central-difference `V″` from the analytic `V′`.
pub fn second_derivative<S: Oscillator + ?Sized>(sys: &S, q: f64, p: f64, h: f64) -> f64 {
    (sys.potential_deriv(q + h, p) - sys.potential_deriv(q - h, p)) / (2.0 * h)
}

pub fn classify<S: Oscillator + ?Sized>(sys: &S, q: f64, p: f64, cfg: &EngineConfig) -> Stability {
    let v2 = second_derivative(sys, q, p, cfg.fd_step);
    if v2.abs() < cfg.degenerate_tol {
        Stability::Degenerate
    } else if v2 < 0.0 {
        Stability::StableStructure
    } else {
        Stability::UnstableStructure
    }
}

/// Scan grid over `(0, upper]`, geometrically refined towards the origin so
/// that roots emerging from the trivial state are caught early.
fn scan_grid(upper: f64, n: usize) -> Vec<f64> {
    let h = upper / n as f64;
    let mut grid: Vec<f64> = (1..=6).rev().map(|k| h * 10f64.powi(-k)).collect();
    grid.extend((1..=n).map(|i| h * i as f64));
    grid
}

/// Roots of `V′(·, p)` in `(0, upper)`, ascending, without classification.
pub(crate) fn nontrivial_roots<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    cfg: &EngineConfig,
) -> Result<Vec<f64>> {
    let dom = sys.deflection_domain(p);
    let grid = scan_grid(dom.upper, cfg.scan_points.max(8));
    let vals: Vec<f64> = grid.iter().map(|&q| sys.potential_deriv(q, p)).collect();
    let df = |q: f64| sys.potential_deriv(q, p);
    let bracket_err = |what: &str| Error::RootBracketing {
        what: format!("{what} of {} at p = {p}", sys.name()),
        scanned: grid.windows(2).map(|w| (w[0], w[1])).collect(),
    };

    let mut roots = Vec::new();
    for i in 0..grid.len() - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        let (fa, fb) = (vals[i], vals[i + 1]);
        if !fa.is_finite() || !fb.is_finite() {
            continue;
        }
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let r =
                brent(df, a, b, cfg.root_tol, 200).map_err(|_| bracket_err("V′ sign change"))?;
            roots.push(r);
        }
        // Tangency: |V′| dips between neighbours without a sign change.
        if i >= 1 {
            let (fl, fm, fr) = (vals[i - 1], fa, fb);
            let same = fl.signum() == fm.signum() && fm.signum() == fr.signum() && fm != 0.0;
            if same && fm.abs() < fl.abs() && fm.abs() <= fr.abs() {
                let s = fm.signum();
                let (lo, hi) = (grid[i - 1], b);
                let (qx, fx) = golden_min(|q| s * df(q), lo, hi, cfg.root_tol.max(1e-14));
                let scale = fl.abs().max(fr.abs()).max(1e-300);
                if fx < 0.0 {
                    let r1 = brent(df, lo, qx, cfg.root_tol, 200)
                        .map_err(|_| bracket_err("V′ tangency (left)"))?;
                    let r2 = brent(df, qx, hi, cfg.root_tol, 200)
                        .map_err(|_| bracket_err("V′ tangency (right)"))?;
                    roots.push(r1);
                    roots.push(r2);
                } else if fx.abs() <= 1e-15 * scale {
                    roots.push(qx);
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * cfg.root_tol);
    roots.retain(|&q| q > 0.0 && q < dom.upper);
    Ok(roots)
}

/// All fixed points at load `p`: the trivial state first, then nontrivial
/// roots of `V′` ascending in `q`, each classified and labelled.
pub fn fixed_points<S: Oscillator + ?Sized>(
    sys: &S,
    p: f64,
    cfg: &EngineConfig,
) -> Result<Vec<Equilibrium>> {
    check_load(sys, p)?;
    let roots = nontrivial_roots(sys, p, cfg)?;
    let mut out = Vec::with_capacity(roots.len() + 1);
    out.push(Equilibrium {
        q: 0.0,
        p,
        stability: classify(sys, 0.0, p, cfg),
        branch: Branch::Tau,
    });
    let mut seen_beta = false;
    for q in roots {
        let stability = classify(sys, q, p, cfg);
        let residual = sys.potential_deriv(q, p).abs();
        let curvature = second_derivative(sys, q, p, cfg.fd_step).abs();
        if residual > 1e-10 * curvature.max(1.0) {
            return Err(Error::RootBracketing {
                what: format!("fixed point at q = {q} has |V′| = {residual:e}"),
                scanned: vec![(q, q)],
            });
        }
        let branch = match stability {
            Stability::StableStructure => {
                seen_beta = true;
                Branch::Beta
            }
            _ if seen_beta => Branch::Gamma,
            _ => Branch::Alpha,
        };
        out.push(Equilibrium {
            q,
            p,
            stability,
            branch,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{make_model, make_rod, ModelParams, RodParams};
    use std::f64::consts::PI;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn model_at_maxwell_load() {
        let m = make_model(ModelParams {
            gamma: 0.75,
            p_c: 1.0,
        })
        .unwrap();
        let eqs = fixed_points(&m, 0.75, &cfg()).unwrap();
        assert_eq!(eqs.len(), 3);
        assert_eq!((eqs[0].q, eqs[0].branch), (0.0, Branch::Tau));
        assert_eq!(eqs[0].stability, Stability::StableStructure);
        assert!((eqs[1].q - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(eqs[1].branch, Branch::Alpha);
        assert_eq!(eqs[1].stability, Stability::UnstableStructure);
        assert!((eqs[2].q - 1.0).abs() < 1e-12);
        assert_eq!(eqs[2].branch, Branch::Beta);
        for e in &eqs {
            assert!(m.potential_deriv(e.q, 0.75).abs() < 1e-10);
        }
    }

    #[test]
    fn rod_has_single_helix() {
        let r = make_rod(RodParams::default()).unwrap();
        for m in [0.25, 0.5, 1.0, 1.5, 1.75] {
            let eqs = fixed_points(&r, m, &cfg()).unwrap();
            assert_eq!(eqs.len(), 2, "m={m}");
            assert!((eqs[1].q - (m - 1.0f64).acos()).abs() < 1e-10);
            assert_eq!(eqs[1].branch, Branch::Alpha);
        }
        let eqs = fixed_points(&r, 1.0, &cfg()).unwrap();
        assert!((eqs[1].q - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn rod_bifurcation_point_is_degenerate() {
        let r = make_rod(RodParams::default()).unwrap();
        let eqs = fixed_points(&r, 2.0, &cfg()).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].stability, Stability::Degenerate);
    }

    #[test]
    fn model_above_bifurcation_keeps_beta_only() {
        let m = make_model(ModelParams {
            gamma: 0.75,
            p_c: 1.0,
        })
        .unwrap();
        let eqs = fixed_points(&m, 1.2, &cfg()).unwrap();
        assert_eq!(eqs[0].stability, Stability::UnstableStructure);
        assert_eq!(eqs.len(), 2);
        let (_, big) = m.fixed_point_squares(1.2).unwrap();
        assert!((eqs[1].q - big.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn out_of_domain_load_is_rejected() {
        let r = make_rod(RodParams::default()).unwrap();
        assert!(fixed_points(&r, -0.5, &cfg()).is_err());
    }
}
