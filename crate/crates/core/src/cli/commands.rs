use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::config::{Format, RunConfig, SystemKind};
use super::output::{render, DiagramFile, Header, MaxwellMeta, Note, PhaseRow, ProfileRow};
use super::validate::{run_checks, Check};
use super::CliError;
use crate::error::Error;
use crate::oscillator::{
    barrier_diagram, bifurcation_diagram, collision_gap, localized_profile, maxwell_load,
    phase_portrait, BarrierPoint, BifurcationRow, Interval, Oscillator, PathLabel, ProfileKind,
};
use crate::strut::{strut_barrier_diagram, strut_localized, StrutBarrierTable, StrutSolverOptions};
use crate::systems::System;

/// Rendered output and the exit code to finish with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

const NO_BETA: &str = "no restabilized periodic path";

fn unsupported(msg: impl Into<String>) -> CliError {
    CliError::new(4, msg)
}

/// Fails with exit code 3 when more than half of the loads failed.
fn check_failures(notes: &[Note], loads: usize) -> Result<(), CliError> {
    let failed: BTreeSet<u64> = notes.iter().map(|n| n.p.to_bits()).collect();
    if 2 * failed.len() > loads {
        let first = notes.first().map(|n| n.reason.as_str()).unwrap_or_default();
        return Err(CliError::new(
            3,
            format!(
                "solver failed at {} of {} loads; first failure: {first}",
                failed.len(),
                loads
            ),
        ));
    }
    Ok(())
}

fn strut_table(cfg: &RunConfig, loads: &[f64]) -> Result<StrutBarrierTable, CliError> {
    Ok(strut_barrier_diagram(
        loads,
        cfg.param("c"),
        cfg.n_waves,
        &StrutSolverOptions::default(),
    )?)
}

fn strut_notes(table: &StrutBarrierTable) -> Vec<Note> {
    table
        .notes
        .iter()
        .map(|(p, reason)| Note {
            p: *p,
            reason: reason.clone(),
        })
        .collect()
}

fn maxwell_meta(sys: &System, cfg: &RunConfig) -> Option<MaxwellMeta> {
    maxwell_load(sys, cfg.maxwell_bracket(None), &cfg.engine())
        .ok()
        .map(|m| MaxwellMeta {
            p_m: m.p_m,
            p_l: m.p_l,
            e_star: m.e_star,
        })
}

pub fn barrier(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let loads = cfg.sweep.loads();
    let engine = cfg.engine();
    let header = Header::new("barrier", cfg).with("n_waves", cfg.n_waves);
    let file = match cfg.oscillator()? {
        Some(sys) => {
            let mut rows = Vec::with_capacity(loads.len());
            let mut notes = Vec::new();
            for &p in &loads {
                match barrier_diagram(&sys, &[p], cfg.n_waves, &engine) {
                    Ok(mut r) => rows.push(r.remove(0)),
                    Err(e) => {
                        notes.push(Note {
                            p,
                            reason: e.to_string(),
                        });
                        rows.push(BarrierPoint::empty(p, cfg.n_waves));
                    }
                }
            }
            check_failures(&notes, loads.len())?;
            DiagramFile {
                header,
                rows,
                notes,
                maxwell: maxwell_meta(&sys, cfg),
            }
        }
        None => {
            let table = strut_table(cfg, &loads)?;
            let notes = strut_notes(&table);
            check_failures(&notes, loads.len())?;
            DiagramFile {
                header,
                rows: table.rows,
                notes,
                maxwell: None,
            }
        }
    };
    Ok(Outcome::ok(render(&file, cfg.output.format)))
}

pub fn bifurcation(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let loads = cfg.sweep.loads();
    let engine = cfg.engine();
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    match cfg.oscillator()? {
        Some(sys) => {
            for &p in &loads {
                match bifurcation_diagram(&sys, &[p], &engine) {
                    Ok(r) => rows.extend(r),
                    Err(e) => notes.push(Note {
                        p,
                        reason: e.to_string(),
                    }),
                }
            }
        }
        None => {
            let table = strut_table(cfg, &loads)?;
            notes = strut_notes(&table);
            for row in &table.rows {
                rows.push(BifurcationRow {
                    p: row.p,
                    path: PathLabel::Tau,
                    q: 0.0,
                });
                for (path, q) in [
                    (PathLabel::Alpha, row.q_alpha),
                    (PathLabel::Lambda, row.q_turn),
                ] {
                    if let Some(q) = q {
                        rows.push(BifurcationRow { p: row.p, path, q });
                    }
                }
            }
        }
    }
    check_failures(&notes, loads.len())?;
    let file: DiagramFile<BifurcationRow> = DiagramFile {
        header: Header::new("bifurcation", cfg),
        rows,
        notes,
        maxwell: None,
    };
    Ok(Outcome::ok(render(&file, cfg.output.format)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxwellReport {
    pub header: Header,
    pub p_l: Option<f64>,
    pub p_m: f64,
    pub q_collision: f64,
    pub e_star: f64,
    /// `|V(q_collision; p_M)|`.
    pub residual_potential: f64,
    /// `|q_turn(p_M + δ) − q_collision|`.
    pub collision_gap: Option<f64>,
    pub collision_delta: f64,
}

pub fn maxwell(cfg: &RunConfig, bracket: Option<(f64, f64)>) -> Result<Outcome, CliError> {
    let Some(sys) = cfg.oscillator()? else {
        return Err(unsupported(format!(
            "{NO_BETA} for the direct strut equation"
        )));
    };
    let engine = cfg.engine();
    let Interval { lo, hi } = cfg.maxwell_bracket(bracket);
    if !(lo < hi) {
        return Err(CliError::new(2, format!("empty load bracket [{lo}, {hi}]")));
    }
    let m = maxwell_load(&sys, Interval::new(lo, hi), &engine)?;
    let delta = 1e-6;
    let report = MaxwellReport {
        header: Header::new("maxwell", cfg).with(
            "bracket",
            format!("[{}, {}]", super::output::num(lo), super::output::num(hi)),
        ),
        p_l: m.p_l,
        p_m: m.p_m,
        q_collision: m.q_collision,
        e_star: m.e_star,
        residual_potential: sys.potential(m.q_collision, m.p_m).abs(),
        collision_gap: collision_gap(&sys, &m, delta, &engine)?,
        collision_delta: delta,
    };
    let text = match cfg.output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            use super::output::{num, opt};
            let h = &report.header;
            let mut lines = vec![
                format!("# {} {}", h.tool, h.version),
                format!("# command: {}", h.command),
                format!("# system: {}", h.system),
                format!(
                    "# parameters: {}",
                    serde_json::to_string(&h.parameters).expect("map")
                ),
                format!("# units: {}", h.units),
            ];
            lines.extend(h.extra.iter().map(|(k, v)| format!("# {k}: {v}")));
            lines.push("quantity,value".into());
            for (k, v) in [
                ("p_l", opt(report.p_l)),
                ("p_m", num(report.p_m)),
                ("q_collision", num(report.q_collision)),
                ("e_star", num(report.e_star)),
                ("residual_potential", num(report.residual_potential)),
                ("collision_gap", opt(report.collision_gap)),
                ("collision_delta", num(report.collision_delta)),
            ] {
                lines.push(format!("{k},{v}"));
            }
            lines.join("\n") + "\n"
        }
    };
    Ok(Outcome::ok(text))
}

fn check_point_load(cfg: &RunConfig, load: f64) -> Result<(), CliError> {
    let dom = cfg.load_domain()?;
    let inside = match cfg.system {
        SystemKind::StrutDirect | SystemKind::StrutAmplitude => load > 0.0 && load < 2.0,
        _ => dom.contains(load),
    };
    if !load.is_finite() || !inside {
        return Err(Error::LoadOutOfDomain {
            p: load,
            lo: dom.lo,
            hi: dom.hi,
        }
        .into());
    }
    Ok(())
}

pub fn phase(
    cfg: &RunConfig,
    load: f64,
    levels: &[f64],
    resolution: usize,
) -> Result<Outcome, CliError> {
    let Some(sys) = cfg.oscillator()? else {
        return Err(unsupported("phase portraits need an oscillator system"));
    };
    check_point_load(cfg, load)?;
    if resolution < 2 {
        return Err(CliError::new(2, "resolution must be at least 2"));
    }
    let portrait = phase_portrait(&sys, load, levels, resolution, &cfg.engine())?;
    let mut rows = Vec::new();
    for (level, curves) in &portrait {
        for (k, c) in curves.iter().enumerate() {
            rows.extend(c.points.iter().map(|&(q, dq)| PhaseRow {
                level: *level,
                curve: k,
                closed: c.closed,
                q,
                dq,
            }));
        }
    }
    let file = DiagramFile {
        header: Header::new("phase", cfg).with("load", super::output::num(load)),
        rows,
        notes: vec![],
        maxwell: None,
    };
    Ok(Outcome::ok(render(&file, cfg.output.format)))
}

pub fn profile(cfg: &RunConfig, load: f64, ds: f64) -> Result<Outcome, CliError> {
    check_point_load(cfg, load)?;
    if !(ds > 0.0 && ds.is_finite()) {
        return Err(CliError::new(
            2,
            format!("sample spacing must be positive, got {ds}"),
        ));
    }
    let header = Header::new("profile", cfg).with("load", super::output::num(load));
    let (rows, header) = match cfg.oscillator()? {
        Some(sys) => {
            let prof = localized_profile(&sys, load, ds, &cfg.engine())?;
            let kind = match prof.kind {
                ProfileKind::Pulse => "pulse",
                ProfileKind::Front => "front",
            };
            let rows = prof
                .samples
                .iter()
                .map(|s| ProfileRow {
                    s: s.s,
                    q: s.q,
                    dq: s.dq,
                })
                .collect();
            (
                rows,
                header
                    .with("kind", kind)
                    .with("peak", super::output::num(prof.q_peak)),
            )
        }
        None => {
            let prof = strut_localized(cfg.param("c"), load, &StrutSolverOptions::default())?;
            let n = prof.len();
            let mut rows: Vec<ProfileRow> = (1..n)
                .rev()
                .map(|i| ProfileRow {
                    s: -prof.x(i),
                    q: prof.y[i],
                    dq: -prof.dy[i],
                })
                .collect();
            rows.extend((0..n).map(|i| ProfileRow {
                s: prof.x(i),
                q: prof.y[i],
                dq: prof.dy[i],
            }));
            let header = header
                .with("kind", "strut-localized")
                .with("peak", super::output::num(prof.peak()))
                .with("energy", super::output::num(prof.energy))
                .with("residual", super::output::num(prof.residual))
                .with(
                    "columns",
                    "s is the axial coordinate x, q the deflection y, dq = y'",
                );
            (rows, header)
        }
    };
    let file = DiagramFile {
        header,
        rows,
        notes: vec![],
        maxwell: None,
    };
    Ok(Outcome::ok(render(&file, cfg.output.format)))
}

pub fn validate(format: Format) -> Outcome {
    let checks: Vec<Check> = run_checks();
    let passed = checks.iter().all(|c| c.passed);
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&checks).expect("checks serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut lines: Vec<String> = checks
                .iter()
                .map(|c| {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    let mut line = format!(
                        "{status} {}: observed {:.12e}, expected {}",
                        c.name, c.observed, c.expected
                    );
                    if let Some(e) = &c.error {
                        line.push_str(&format!(" ({e})"));
                    }
                    line
                })
                .collect();
            let n_pass = checks.iter().filter(|c| c.passed).count();
            lines.push(format!("{n_pass}/{} checks passed", checks.len()));
            lines.join("\n") + "\n"
        }
    };
    Outcome {
        text,
        code: if passed { 0 } else { 1 },
    }
}
