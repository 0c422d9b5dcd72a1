//! Flat `key=value` run configuration.
//!
//! ```text
//! # comment
//! model.g0=0.1
//! process.alpha0=1
//! initial.c00=0.5 0
//! field=poisson
//! sweep.nbar=1,10,100
//! ```
//!
//! Missing keys take their defaults. If `model.nbar` is given without
//! `model.n_max`, the truncation follows [`default_truncation`].
//! [`RunConfig::to_canonical`] writes every key in a fixed order with
//! shortest round-trip floats, so parse → serialize is a fixed point.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::closed_form::{log_grid, Variant};
use crate::dynamics::ProcessParams;
use crate::error::{Error, Result};
use crate::model::{default_truncation, initial_state, FieldState, ModelParams, StateVector};

const SPIN_KEYS: [&str; 4] = ["initial.c00", "initial.c01", "initial.c10", "initial.c11"];

/// Which n̄ values `sweep` evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepGrid {
    List(Vec<f64>),
    Log { from: f64, to: f64, points: usize },
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid::Log {
            from: 1.0,
            to: 100.0,
            points: 21,
        }
    }
}

impl SweepGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            SweepGrid::List(v) => Ok(v.clone()),
            SweepGrid::Log { from, to, points } => log_grid(*from, *to, *points),
        }
    }
}

/// Photon-number distribution of the initial field, as written in a config.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    /// Poissonian with mean `model.nbar`.
    Poisson,
    Fock(usize),
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    pub process: ProcessParams,
    /// Spin amplitudes for |00⟩, |01⟩, |10⟩, |11⟩.
    pub initial: [Complex64; 4],
    pub field: FieldSpec,
    pub output: PathBuf,
    pub variant: Variant,
    pub sweep: SweepGrid,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelParams::default(),
            process: ProcessParams::default(),
            initial: [Complex64::new(0.5, 0.0); 4],
            field: FieldSpec::Poisson,
            output: PathBuf::from("out"),
            variant: Variant::Repaired,
            sweep: SweepGrid::default(),
        }
    }
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidParameters(format!("config line {line}: {msg}"))
}

fn num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| bad(line, format!("cannot parse {key} value {v:?}")))
}

fn list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| num(line, key, x)).collect()
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = HashSet::new();
        let mut log = (None, None, None);
        let mut list_grid = None;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| bad(line, "expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(bad(line, format!("duplicate key {key}")));
            }
            let m = &mut cfg.model;
            let p = &mut cfg.process;
            match key {
                "model.omega0" => m.omega0 = num(line, key, value)?,
                "model.omega" => m.omega = num(line, key, value)?,
                "model.omega_f" => m.omega_f = num(line, key, value)?,
                "model.g0" => m.g0 = num(line, key, value)?,
                "model.k_f" => m.k_f = num(line, key, value)?,
                "model.nbar" => m.nbar = num(line, key, value)?,
                "model.n_max" => m.n_max = num(line, key, value)?,
                "process.alpha0" => p.alpha0 = num(line, key, value)?,
                "process.dt" => p.dt = num(line, key, value)?,
                "process.t_max" => p.t_max = num(line, key, value)?,
                "process.n_traj" => p.n_traj = num(line, key, value)?,
                "process.seed" => p.seed = num(line, key, value)?,
                k if SPIN_KEYS.contains(&k) => {
                    let idx = SPIN_KEYS.iter().position(|s| *s == k).unwrap_or_default();
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let [re, im] = parts[..] else {
                        return Err(bad(line, format!("{key} needs \"re im\"")));
                    };
                    cfg.initial[idx] = Complex64::new(num(line, key, re)?, num(line, key, im)?);
                }
                "field" => {
                    let mut words = value.splitn(2, char::is_whitespace);
                    cfg.field = match (words.next(), words.next()) {
                        (Some("poisson"), None) => FieldSpec::Poisson,
                        (Some("fock"), Some(n)) => FieldSpec::Fock(num(line, key, n)?),
                        (Some("custom"), Some(ps)) => FieldSpec::Custom(list(line, key, ps)?),
                        _ => {
                            return Err(bad(
                                line,
                                format!(
                                "field must be poisson, fock N or custom p0,p1,... (got {value:?})"
                            ),
                            ))
                        }
                    };
                }
                "variant" => cfg.variant = value.parse().map_err(|e| bad(line, e))?,
                "output" => cfg.output = PathBuf::from(value),
                "sweep.nbar" => list_grid = Some(list(line, key, value)?),
                "sweep.log_from" => log.0 = Some(num(line, key, value)?),
                "sweep.log_to" => log.1 = Some(num(line, key, value)?),
                "sweep.points" => log.2 = Some(num(line, key, value)?),
                other => return Err(bad(line, format!("unknown key {other}"))),
            }
        }

        if seen.contains("model.nbar") && !seen.contains("model.n_max") {
            cfg.model.n_max = default_truncation(cfg.model.nbar);
        }
        cfg.sweep = match (list_grid, log) {
            (Some(_), (Some(_), _, _) | (_, Some(_), _) | (_, _, Some(_))) => {
                return Err(Error::InvalidParameters(
                    "config: sweep.nbar cannot be combined with sweep.log_*".into(),
                ))
            }
            (Some(v), _) => SweepGrid::List(v),
            (None, (None, None, None)) => SweepGrid::default(),
            (None, (from, to, points)) => {
                let SweepGrid::Log {
                    from: f0,
                    to: t0,
                    points: p0,
                } = SweepGrid::default()
                else {
                    unreachable!()
                };
                SweepGrid::Log {
                    from: from.unwrap_or(f0),
                    to: to.unwrap_or(t0),
                    points: points.unwrap_or(p0),
                }
            }
        };
        Ok(cfg)
    }

    pub fn to_canonical(&self) -> String {
        let m = &self.model;
        let p = &self.process;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("model.omega0", format!("{:?}", m.omega0));
        kv("model.omega", format!("{:?}", m.omega));
        kv("model.omega_f", format!("{:?}", m.omega_f));
        kv("model.g0", format!("{:?}", m.g0));
        kv("model.k_f", format!("{:?}", m.k_f));
        kv("model.nbar", format!("{:?}", m.nbar));
        kv("model.n_max", m.n_max.to_string());
        kv("process.alpha0", format!("{:?}", p.alpha0));
        kv("process.dt", format!("{:?}", p.dt));
        kv("process.t_max", format!("{:?}", p.t_max));
        kv("process.n_traj", p.n_traj.to_string());
        kv("process.seed", p.seed.to_string());
        for (k, c) in SPIN_KEYS.iter().zip(&self.initial) {
            kv(k, format!("{:?} {:?}", c.re, c.im));
        }
        kv(
            "field",
            match &self.field {
                FieldSpec::Poisson => "poisson".to_string(),
                FieldSpec::Fock(n) => format!("fock {n}"),
                FieldSpec::Custom(ps) => format!("custom {}", join(ps)),
            },
        );
        kv("variant", self.variant.to_string());
        kv("output", self.output.display().to_string());
        match &self.sweep {
            SweepGrid::List(v) => kv("sweep.nbar", join(v)),
            SweepGrid::Log { from, to, points } => {
                kv("sweep.log_from", format!("{from:?}"));
                kv("sweep.log_to", format!("{to:?}"));
                kv("sweep.points", points.to_string());
            }
        }
        s
    }

    pub fn field_state(&self) -> FieldState {
        match &self.field {
            FieldSpec::Poisson => FieldState::Poisson {
                nbar: self.model.nbar,
            },
            FieldSpec::Fock(n) => FieldState::Fock(*n),
            FieldSpec::Custom(ps) => FieldState::Custom(ps.clone()),
        }
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        initial_state(self.initial, &self.field_state(), self.model.n_max)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.process.validate()?;
        self.initial_state().map(|_| ())
    }
}
