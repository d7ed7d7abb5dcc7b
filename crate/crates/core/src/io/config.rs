//! Run configuration: a flat `key = value` file with dotted keys.
//!
//! ```text
//! # linear coin, theta(t) = theta0 + omega t
//! schedule.kind = linear
//! schedule.theta0 = pi/4
//! schedule.omega = pi/60
//! steps = 300
//! step.T = 1
//! initial = symmetric
//! output.dir = out
//! output.formats = csv,json,pgm
//! ```
//!
//! Values given on the command line replace file values key by key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;

use super::angle::{parse_angle, parse_angle_list};
use crate::analytic::DEFAULT_GRID_SPACING;
use crate::error::{Error, Result};
use crate::schedule::{PhaseSchedule, StepParams};
use crate::trajectory::DEFAULT_K_MAX;
use crate::walk::{Spinor, WalkConfig};

const KNOWN_KEYS: &[&str] = &[
    "schedule.kind",
    "schedule.theta0",
    "schedule.omega",
    "schedule.table",
    "steps",
    "step.T",
    "step.X",
    "initial",
    "initial.r",
    "initial.l",
    "analytic.w",
    "analytic.grid_spacing",
    "trajectory.k_max",
    "output.dir",
    "output.formats",
    "sweep.theta0",
    "sweep.omega",
];

/// Where a value came from, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Line(usize),
    Flag,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Line(n) => write!(f, "line {n}"),
            Source::Flag => f.write_str("command line"),
        }
    }
}

/// Raw key/value pairs before interpretation.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, (String, Source)>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = Self::default();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Parse { line, message: format!("expected key = value, got {content:?}") });
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::Parse { line, message: format!("unknown key {key:?}") });
            }
            if let Some((_, Source::Line(first))) = map.entries.get(key) {
                return Err(Error::Parse { line, message: format!("{key} already set on line {first}") });
            }
            map.entries.insert(key.to_string(), (value.trim().to_string(), Source::Line(line)));
        }
        Ok(map)
    }

    /// Sets `key` from a command-line flag, replacing any file value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (value.into(), Source::Flag));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn require(&self, key: &str) -> Result<(&str, Source)> {
        self.entries
            .get(key)
            .map(|(v, s)| (v.as_str(), *s))
            .ok_or_else(|| Error::InvalidConfig(format!("missing required key {key}")))
    }

    fn parse_with<T>(&self, key: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((value, source)) => parse(value).map(Some).ok_or_else(|| {
                Error::InvalidConfig(format!("{key} ({source}): expected {what}, got {value:?}"))
            }),
        }
    }

    fn angle(&self, key: &str) -> Result<Option<f64>> {
        self.parse_with(key, "an angle", parse_angle)
    }

    fn require_angle(&self, key: &str) -> Result<f64> {
        self.require(key)?;
        Ok(self.angle(key)?.expect("presence checked"))
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        self.parse_with(key, "a finite number", |v| v.parse::<f64>().ok().filter(|x| x.is_finite()))
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        self.parse_with(key, "a non-negative integer", |v| v.parse().ok())
    }

    fn complex(&self, key: &str) -> Result<Option<Complex64>> {
        self.parse_with(key, "re,im", |v| {
            let (re, im) = v.split_once(',')?;
            let re: f64 = re.trim().parse().ok()?;
            let im: f64 = im.trim().parse().ok()?;
            (re.is_finite() && im.is_finite()).then(|| Complex64::new(re, im))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputFormat {
    Csv,
    Json,
    Pgm,
}

impl OutputFormat {
    fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            "pgm" => Some(Self::Pgm),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Pgm => "pgm",
        }
    }
}

/// Output directory and the formats to write there.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl OutputSpec {
    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        let dir = PathBuf::from(map.get("output.dir").unwrap_or("out"));
        let formats = map
            .parse_with("output.formats", "a list drawn from csv,json,pgm", |v| {
                let mut list: Vec<OutputFormat> = v.split(',').map(OutputFormat::parse).collect::<Option<_>>()?;
                list.sort();
                list.dedup();
                Some(list)
            })?
            .unwrap_or_else(|| vec![OutputFormat::Csv, OutputFormat::Json]);
        if formats.is_empty() {
            return Err(Error::InvalidConfig("output.formats must not be empty".into()));
        }
        Ok(Self { dir, formats })
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }
}

pub fn schedule_from_map(map: &ConfigMap) -> Result<PhaseSchedule> {
    let (kind, source) = map.require("schedule.kind")?;
    match kind {
        "constant" => PhaseSchedule::constant(map.require_angle("schedule.theta0")?),
        "linear" => PhaseSchedule::linear(
            map.require_angle("schedule.theta0")?,
            map.require_angle("schedule.omega")?,
        ),
        "sinusoidal" => PhaseSchedule::sinusoidal(
            map.require_angle("schedule.theta0")?,
            map.require_angle("schedule.omega")?,
        ),
        "tabulated" => {
            map.require("schedule.table")?;
            let table = map
                .parse_with("schedule.table", "a comma-separated angle list", parse_angle_list)?
                .expect("presence checked");
            PhaseSchedule::tabulated(table)
        }
        other => Err(Error::InvalidConfig(format!(
            "schedule.kind ({source}): expected constant, linear, sinusoidal or tabulated, got {other:?}"
        ))),
    }
}

/// Everything a simulation, analytic or trajectory run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub schedule: PhaseSchedule,
    pub steps: usize,
    pub step_params: StepParams,
    /// Internal state placed at site 0.
    pub initial: Spinor,
    pub w: f64,
    pub grid_spacing: f64,
    pub k_max: usize,
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        let schedule = schedule_from_map(map)?;
        map.require("steps")?;
        let steps = map.count("steps")?.expect("presence checked");
        let step_params = StepParams::new(
            map.float("step.T")?.unwrap_or(1.0),
            map.float("step.X")?.unwrap_or(1.0),
        )?;
        let config = Self {
            schedule,
            steps,
            step_params,
            initial: initial_from_map(map)?,
            w: map.float("analytic.w")?.unwrap_or(0.0),
            grid_spacing: map.float("analytic.grid_spacing")?.unwrap_or(DEFAULT_GRID_SPACING),
            k_max: map.count("trajectory.k_max")?.unwrap_or(DEFAULT_K_MAX),
            output: OutputSpec::from_map(map)?,
        };
        config.walk_config().validate()?;
        if !(config.grid_spacing > 0.0) {
            return Err(Error::InvalidConfig("analytic.grid_spacing must be positive".into()));
        }
        if config.k_max == 0 {
            return Err(Error::InvalidConfig("trajectory.k_max must be at least 1".into()));
        }
        Ok(config)
    }

    pub fn walk_config(&self) -> WalkConfig {
        WalkConfig::new(self.steps, self.schedule.clone())
            .with_step_params(self.step_params)
            .with_initial(vec![(0, self.initial)])
    }
}

fn initial_from_map(map: &ConfigMap) -> Result<Spinor> {
    let r = map.complex("initial.r")?;
    let l = map.complex("initial.l")?;
    if r.is_some() || l.is_some() {
        if let Some("symmetric" | "right" | "left") = map.get("initial") {
            return Err(Error::InvalidConfig(
                "initial names a preset but initial.r/initial.l are also given".into(),
            ));
        }
        return Ok(Spinor::new(r.unwrap_or_default(), l.unwrap_or_default()));
    }
    match map.get("initial").unwrap_or("symmetric") {
        "symmetric" => Ok(Spinor::symmetric()),
        "right" => Ok(Spinor::right()),
        "left" => Ok(Spinor::left()),
        other => Err(Error::InvalidConfig(format!(
            "initial: expected symmetric, right or left (or initial.r/initial.l), got {other:?}"
        ))),
    }
}

/// Grid of parameters for a classification sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub theta0: Vec<f64>,
    pub omega: Vec<f64>,
    pub output: OutputSpec,
}

impl SweepConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        let list = |key: &str| -> Result<Vec<f64>> {
            map.require(key)?;
            let values = map
                .parse_with(key, "a comma-separated angle list", parse_angle_list)?
                .expect("presence checked");
            if values.is_empty() {
                return Err(Error::InvalidConfig(format!("{key} must not be empty")));
            }
            Ok(values)
        };
        Ok(Self {
            theta0: list("sweep.theta0")?,
            omega: list("sweep.omega")?,
            output: OutputSpec::from_map(map)?,
        })
    }
}

/// `(θ₀, ω)` for a single classification, taken from the schedule keys.
pub fn classify_params(map: &ConfigMap) -> Result<(f64, f64)> {
    Ok((map.require_angle("schedule.theta0")?, map.require_angle("schedule.omega")?))
}
