use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{Format, RunConfig, Tolerances};
use crate::oscillator::{BarrierPoint, BifurcationRow};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub system: String,
    pub parameters: BTreeMap<String, f64>,
    pub units: String,
    pub wavelength: String,
    pub tolerances: Tolerances,
    /// Extra key/value lines, in insertion order.
    #[serde(default)]
    pub extra: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        Self {
            tool: "shocksens".into(),
            version: VERSION.into(),
            command: command.into(),
            system: cfg.system.as_str().into(),
            parameters: cfg.parameters.clone(),
            units: cfg.system.units().into(),
            wavelength: cfg.system.wavelength_convention().into(),
            tolerances: cfg.tolerances,
            extra: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.push((key.into(), value.to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Note {
    pub p: f64,
    pub reason: String,
}

/// Maxwell metadata appended to barrier files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxwellMeta {
    pub p_m: f64,
    pub p_l: Option<f64>,
    pub e_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramFile<R> {
    pub header: Header,
    pub rows: Vec<R>,
    #[serde(default)]
    pub notes: Vec<Note>,
    #[serde(default)]
    pub maxwell: Option<MaxwellMeta>,
}

/// A row with a fixed CSV column set.
pub trait CsvRow {
    const COLUMNS: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

/// 17 significant digits; round-trips every finite `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl CsvRow for BarrierPoint {
    const COLUMNS: &'static [&'static str] = &[
        "p",
        "e_lambda",
        "e_alpha_per_wave",
        "n_waves",
        "e_alpha_n",
        "q_turn",
        "q_alpha",
        "q_beta",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            num(self.p),
            opt(self.e_lambda),
            opt(self.e_alpha_per_wave),
            self.n_waves.to_string(),
            opt(self.e_alpha_n),
            opt(self.q_turn),
            opt(self.q_alpha),
            opt(self.q_beta),
        ]
    }
}

impl CsvRow for BifurcationRow {
    const COLUMNS: &'static [&'static str] = &["p", "branch", "q"];
    fn fields(&self) -> Vec<String> {
        vec![num(self.p), self.path.as_str().into(), num(self.q)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub level: f64,
    pub curve: usize,
    pub closed: bool,
    pub q: f64,
    pub dq: f64,
}

impl CsvRow for PhaseRow {
    const COLUMNS: &'static [&'static str] = &["level", "curve", "closed", "q", "dq"];
    fn fields(&self) -> Vec<String> {
        vec![
            num(self.level),
            self.curve.to_string(),
            self.closed.to_string(),
            num(self.q),
            num(self.dq),
        ]
    }
}

/// A sample of a localized profile: arc length (or axial coordinate),
/// deflection and slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub s: f64,
    pub q: f64,
    pub dq: f64,
}

impl CsvRow for ProfileRow {
    const COLUMNS: &'static [&'static str] = &["s", "q", "dq"];
    fn fields(&self) -> Vec<String> {
        vec![num(self.s), num(self.q), num(self.dq)]
    }
}

fn header_lines(h: &Header) -> Vec<String> {
    let mut lines = vec![
        format!("# {} {}", h.tool, h.version),
        format!("# command: {}", h.command),
        format!("# system: {}", h.system),
        format!(
            "# parameters: {}",
            serde_json::to_string(&h.parameters).expect("numeric map serializes")
        ),
        format!("# units: {}", h.units),
        format!("# wavelength: {}", h.wavelength),
        format!(
            "# tolerances: quadrature_rel={}, root_abs={}",
            num(h.tolerances.quadrature_rel),
            num(h.tolerances.root_abs)
        ),
    ];
    lines.extend(h.extra.iter().map(|(k, v)| format!("# {k}: {v}")));
    lines
}

pub fn to_csv<R: CsvRow>(file: &DiagramFile<R>) -> String {
    let mut lines = header_lines(&file.header);
    lines.push(R::COLUMNS.join(","));
    lines.extend(file.rows.iter().map(|r| r.fields().join(",")));
    for n in &file.notes {
        lines.push(format!(
            "# note: p={}, {}",
            num(n.p),
            n.reason.replace('\n', " ")
        ));
    }
    if let Some(m) = file.maxwell {
        lines.push(format!(
            "# maxwell: p_M={}, p_L={}, E*={}",
            num(m.p_m),
            opt(m.p_l),
            num(m.e_star)
        ));
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

pub fn render<R: CsvRow + Serialize>(file: &DiagramFile<R>, format: Format) -> String {
    match format {
        Format::Csv => to_csv(file),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(file).expect("diagram serializes");
            s.push('\n');
            s
        }
    }
}
