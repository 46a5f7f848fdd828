use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{EngineConfig, Interval};
use crate::systems::{
    make_model, make_rod, make_strut_amplitude, model_closed_forms, ModelParams, RodParams, System,
    P_CRITICAL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    StrutAmplitude,
    StrutDirect,
    Rod,
    Model,
}

impl SystemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::StrutAmplitude => "strut-amplitude",
            SystemKind::StrutDirect => "strut-direct",
            SystemKind::Rod => "rod",
            SystemKind::Model => "model",
        }
    }

    fn allowed_keys(self) -> &'static [&'static str] {
        match self {
            SystemKind::StrutAmplitude | SystemKind::StrutDirect => &["c"],
            SystemKind::Rod => &["m", "torsional_stiffness"],
            SystemKind::Model => &["gamma", "p_c"],
        }
    }

    fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            SystemKind::StrutAmplitude | SystemKind::StrutDirect => &[("c", 1.0)],
            SystemKind::Rod => &[("torsional_stiffness", 1.0)],
            SystemKind::Model => &[("gamma", 0.75), ("p_c", 1.0)],
        }
    }

    pub fn units(self) -> &'static str {
        match self {
            SystemKind::StrutAmplitude => {
                "EI = k = 1 so P_C = 2; energies of the amplitude oscillator on the slow scale X = eps x"
            }
            SystemKind::StrutDirect => "EI = k = 1 so P_C = 2; structural energies per unit EI, lengths in (EI/k)^(1/4)",
            SystemKind::Rod => "B = T = 1; energies in units of sqrt(B T), lengths in sqrt(B/T), load m = M/sqrt(B T)",
            SystemKind::Model => "dimensionless model units",
        }
    }

    pub fn wavelength_convention(self) -> &'static str {
        match self {
            SystemKind::StrutAmplitude => {
                "one 2 pi carrier wave in the slow variable: 2 pi sqrt(2 - p)"
            }
            SystemKind::StrutDirect => "one wave of length 2 pi",
            SystemKind::Rod => "one helical repeat 2 pi / psi' = 2 pi",
            SystemKind::Model => "fixed wave length 2 pi",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for SystemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strut-amplitude" => Ok(SystemKind::StrutAmplitude),
            "strut-direct" => Ok(SystemKind::StrutDirect),
            "rod" => Ok(SystemKind::Rod),
            "model" => Ok(SystemKind::Model),
            other => Err(Error::InvalidParameter(format!("unknown system '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
}

impl Sweep {
    /// `steps` equally spaced loads including both ends.
    pub fn loads(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.p_max
                } else {
                    self.p_min + (self.p_max - self.p_min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub quadrature_rel: f64,
    pub root_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let e = EngineConfig::default();
        Self {
            quadrature_rel: e.quad_rel,
            root_abs: e.root_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// Everything one invocation needs, after defaults are filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub system: SystemKind,
    pub parameters: BTreeMap<String, f64>,
    pub sweep: Sweep,
    pub n_waves: u32,
    pub tolerances: Tolerances,
    pub output: OutputSpec,
}

pub const DEFAULT_WAVES: u32 = 5;
pub const DEFAULT_STEPS: usize = 41;

/// Parses `--params`: inline JSON when it starts with `{`, else a path to
/// a JSON file. The document is a flat map of numbers.
pub fn parse_params(arg: Option<&str>) -> Result<BTreeMap<String, f64>> {
    let Some(arg) = arg else {
        return Ok(BTreeMap::new());
    };
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| {
            Error::InvalidParameter(format!("cannot read parameter file '{arg}': {e}"))
        })?
    };
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParameter(format!("bad parameter JSON: {e}")))
}

/// Merges user parameters over the system defaults, rejecting unknown keys
/// and non-finite values.
pub fn resolve_params(
    system: SystemKind,
    given: BTreeMap<String, f64>,
) -> Result<BTreeMap<String, f64>> {
    let mut out: BTreeMap<String, f64> = system
        .defaults()
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    for (k, v) in given {
        if !system.allowed_keys().contains(&k.as_str()) {
            return Err(Error::InvalidParameter(format!(
                "unknown parameter '{k}' for system {system}; allowed: {:?}",
                system.allowed_keys()
            )));
        }
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "parameter '{k}' must be finite"
            )));
        }
        out.insert(k, v);
    }
    Ok(out)
}

impl RunConfig {
    pub fn param(&self, key: &str) -> f64 {
        self.parameters[key]
    }

    pub fn engine(&self) -> EngineConfig {
        EngineConfig {
            quad_rel: self.tolerances.quadrature_rel,
            root_tol: self.tolerances.root_abs,
            ..EngineConfig::default()
        }
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            gamma: self.param("gamma"),
            p_c: self.param("p_c"),
        }
    }

    /// The oscillator for this system; `None` for the direct strut solver.
    pub fn oscillator(&self) -> Result<Option<System>> {
        Ok(Some(match self.system {
            SystemKind::StrutAmplitude => make_strut_amplitude(self.param("c"))?.into(),
            SystemKind::Rod => make_rod(RodParams {
                torsional_stiffness: self.param("torsional_stiffness"),
            })?
            .into(),
            SystemKind::Model => make_model(self.model_params())?.into(),
            SystemKind::StrutDirect => return Ok(None),
        }))
    }

    /// Admissible loads of the system.
    pub fn load_domain(&self) -> Result<Interval> {
        Ok(match self.oscillator()? {
            Some(sys) => crate::oscillator::Oscillator::load_domain(&sys),
            None => Interval::new(0.0, P_CRITICAL),
        })
    }

    /// Default sweep when `--p-min`/`--p-max` are omitted.
    pub fn default_range(system: SystemKind, params: &BTreeMap<String, f64>) -> (f64, f64) {
        match system {
            SystemKind::Model => {
                let (gamma, p_c) = (params["gamma"], params["p_c"]);
                (p_c - 1.0 / (2.0 * gamma), p_c)
            }
            SystemKind::Rod => (0.05, 1.95),
            SystemKind::StrutAmplitude => (0.05, 1.95),
            SystemKind::StrutDirect => (0.5, 1.95),
        }
    }

    /// Load bracket searched for fold and Maxwell loads.
    pub fn maxwell_bracket(&self, explicit: Option<(f64, f64)>) -> Interval {
        if let Some((lo, hi)) = explicit {
            return Interval::new(lo, hi);
        }
        match self.system {
            SystemKind::Model => match model_closed_forms(self.model_params()) {
                Ok(_) => {
                    let (gamma, p_c) = (self.param("gamma"), self.param("p_c"));
                    Interval::new(p_c - 1.0 / gamma, p_c)
                }
                Err(_) => Interval::new(-1.0, 1.0),
            },
            SystemKind::Rod => Interval::new(0.0, 2.0),
            SystemKind::StrutAmplitude | SystemKind::StrutDirect => {
                Interval::new(1e-3, P_CRITICAL - 1e-3)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let Sweep {
            p_min,
            p_max,
            steps,
        } = self.sweep;
        if !(p_min.is_finite() && p_max.is_finite()) {
            return Err(Error::InvalidParameter("sweep ends must be finite".into()));
        }
        if p_min >= p_max {
            return Err(Error::InvalidParameter(format!(
                "p_min ({p_min}) must be below p_max ({p_max})"
            )));
        }
        if steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "steps must be at least 2, got {steps}"
            )));
        }
        if self.n_waves < 1 {
            return Err(Error::InvalidParameter(
                "number of waves must be at least 1".into(),
            ));
        }
        let Tolerances {
            quadrature_rel,
            root_abs,
        } = self.tolerances;
        if !(quadrature_rel > 0.0 && root_abs > 0.0) {
            return Err(Error::InvalidParameter(
                "tolerances must be positive".into(),
            ));
        }
        self.oscillator()?;
        if self.system == SystemKind::StrutDirect && !(self.param("c") > 0.0) {
            return Err(Error::InvalidParameter(
                "foundation c must be positive".into(),
            ));
        }
        let dom = self.load_domain()?;
        let open_strut = matches!(
            self.system,
            SystemKind::StrutDirect | SystemKind::StrutAmplitude
        );
        let inside = |p: f64| {
            if open_strut {
                p > 0.0 && p < P_CRITICAL
            } else {
                dom.contains(p)
            }
        };
        for p in [p_min, p_max] {
            if !inside(p) {
                return Err(Error::LoadOutOfDomain {
                    p,
                    lo: dom.lo,
                    hi: dom.hi,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(system: SystemKind, p_min: f64, p_max: f64, steps: usize) -> RunConfig {
        let parameters = resolve_params(system, BTreeMap::new()).unwrap();
        RunConfig {
            system,
            parameters,
            sweep: Sweep {
                p_min,
                p_max,
                steps,
            },
            n_waves: DEFAULT_WAVES,
            tolerances: Tolerances::default(),
            output: OutputSpec {
                path: None,
                format: Format::Csv,
            },
        }
    }

    #[test]
    fn sweep_includes_both_ends() {
        let loads = Sweep {
            p_min: 0.65,
            p_max: 0.95,
            steps: 7,
        }
        .loads();
        assert_eq!(loads.len(), 7);
        assert_eq!(loads[0], 0.65);
        assert_eq!(loads[6], 0.95);
        assert!((loads[1] - 0.70).abs() < 1e-15);
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(config(SystemKind::Model, 0.6, 0.9, 7).validate().is_ok());
        assert!(config(SystemKind::Model, 0.6, 0.9, 1).validate().is_err());
        assert!(config(SystemKind::Model, 0.9, 0.6, 7).validate().is_err());
        assert!(config(SystemKind::Rod, -0.5, 1.0, 7).validate().is_err());
        assert!(config(SystemKind::StrutDirect, 1.0, 2.0, 7)
            .validate()
            .is_err());
        let mut c = config(SystemKind::Rod, 0.5, 1.5, 7);
        c.tolerances.root_abs = 0.0;
        assert!(c.validate().is_err());
        c.tolerances.root_abs = 1e-12;
        c.n_waves = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn params_merge_over_defaults() {
        let p = parse_params(Some(r#"{"gamma": 3.0}"#)).unwrap();
        let r = resolve_params(SystemKind::Model, p).unwrap();
        assert_eq!(r["gamma"], 3.0);
        assert_eq!(r["p_c"], 1.0);
        let bad = parse_params(Some(r#"{"c": 1.0}"#)).unwrap();
        assert!(resolve_params(SystemKind::Model, bad).is_err());
        assert!(parse_params(Some("{not json")).is_err());
        assert!(parse_params(Some("/definitely/not/here.json")).is_err());
    }

    #[test]
    fn params_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        std::fs::write(&path, r#"{"c": 0.5}"#).unwrap();
        let p = parse_params(Some(path.to_str().unwrap())).unwrap();
        assert_eq!(p["c"], 0.5);
    }

    #[test]
    fn system_names_round_trip() {
        for s in [
            SystemKind::StrutAmplitude,
            SystemKind::StrutDirect,
            SystemKind::Rod,
            SystemKind::Model,
        ] {
            assert_eq!(s.as_str().parse::<SystemKind>().unwrap(), s);
        }
    }
}
