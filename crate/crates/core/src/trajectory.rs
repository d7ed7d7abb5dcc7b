//! Closed-form walker trajectories, chain classification and
//! simulation-versus-trajectory comparison.
//!
//! Trajectories come in antisymmetric pairs `x_∓(τ) = ∓I(τ)` where
//! `I(τ) = ∫₀^τ cos θ(τ′) dτ′`; `x_plus` is the upper sign, so
//! `x_plus = −I` and `x_minus = +I`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schedule::{linear_integral, sinusoidal_integral, PhaseSchedule, OMEGA_EPS};
use crate::walk::{peak_trails, ProbabilityGrid};

/// Default truncation of the Bessel series for sinusoidal coins.
pub const DEFAULT_K_MAX: usize = 25;

/// Branches closer than this (lattice units) count as crossing.
pub const CROSSING_GAP: f64 = 1.0;

/// Tolerance on |sin θ₀| and |cos θ₀| for the classification predicates.
pub const CLASSIFY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub tau: f64,
    pub x_plus: f64,
    pub x_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

fn branches(integral: f64) -> (f64, f64) {
    (-integral, integral)
}

pub fn trajectory_linear(theta0: f64, omega: f64, tau: f64) -> (f64, f64) {
    branches(linear_integral(theta0, omega, tau))
}

/// Bessel-series trajectory for θ(τ) = θ₀ sin(ωτ), truncated at `k_max`.
pub fn trajectory_sinusoidal(theta0: f64, omega: f64, tau: f64, k_max: usize) -> (f64, f64) {
    branches(sinusoidal_integral(theta0, omega, tau, k_max.max(1)))
}

impl Trajectory {
    /// Samples both branches at each `tau` (dimensionless time).
    ///
    /// Linear and sinusoidal schedules use their closed forms; `k_max`
    /// only affects the sinusoidal series.
    pub fn from_schedule(schedule: &PhaseSchedule, taus: &[f64], k_max: usize) -> Result<Self> {
        let samples = taus
            .iter()
            .map(|&tau| {
                if !(tau >= 0.0) {
                    return Err(Error::Domain(format!("trajectory needs tau >= 0, got {tau}")));
                }
                let (x_plus, x_minus) = match schedule {
                    PhaseSchedule::Linear { theta0, omega } => trajectory_linear(*theta0, *omega, tau),
                    PhaseSchedule::Sinusoidal { theta0, omega } => {
                        trajectory_sinusoidal(*theta0, *omega, tau, k_max)
                    }
                    other => branches(other.velocity_integral(tau)?),
                };
                Ok(TrajectorySample { tau, x_plus, x_minus })
            })
            .collect::<Result<_>>()?;
        Ok(Self { samples })
    }

    /// Integer samples τ = 0, 1, …, `steps`.
    pub fn for_steps(schedule: &PhaseSchedule, steps: usize, k_max: usize) -> Result<Self> {
        let taus: Vec<f64> = (0..=steps).map(|n| n as f64).collect();
        Self::from_schedule(schedule, &taus, k_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainClass {
    LoopLine,
    CrossingLoopLoop,
    TouchingLoopLoop,
}

impl ChainClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LoopLine => "loop-line",
            Self::CrossingLoopLoop => "crossing-loop-loop",
            Self::TouchingLoopLoop => "touching-loop-loop",
        }
    }
}

impl fmt::Display for ChainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChainClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loop-line" => Ok(Self::LoopLine),
            "crossing-loop-loop" => Ok(Self::CrossingLoopLoop),
            "touching-loop-loop" => Ok(Self::TouchingLoopLoop),
            other => Err(Error::InvalidConfig(format!("unknown chain class {other:?}"))),
        }
    }
}

/// Classifies the trajectory pair of a linear schedule θ(t) = θ₀ + ωt.
///
/// The bias is −sin θ₀/ω and the amplitude 1/ω. A vanishing bias gives a
/// crossing loop-loop chain, a bias equal in magnitude to the amplitude
/// (cos θ₀ = 0) a touching loop-loop chain, anything else loop-line.
pub fn classify_chain(theta0: f64, omega: f64) -> Result<ChainClass> {
    if !theta0.is_finite() || !omega.is_finite() {
        return Err(Error::Domain("theta0 and omega must be finite".into()));
    }
    if omega.abs() < OMEGA_EPS {
        return Err(Error::NotApplicable(
            "omega = 0 gives a straight-line trajectory; chain classes are undefined".into(),
        ));
    }
    let (s, c) = theta0.sin_cos();
    Ok(if s.abs() < CLASSIFY_EPS {
        ChainClass::CrossingLoopLoop
    } else if c.abs() < CLASSIFY_EPS {
        ChainClass::TouchingLoopLoop
    } else {
        ChainClass::LoopLine
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepComparison {
    pub step: usize,
    /// Top-2 numerical peak positions.
    pub peaks: Vec<i64>,
    /// Distance from each peak to the nearer trajectory branch.
    pub offsets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub steps: Vec<StepComparison>,
    pub max_offset: f64,
    pub mean_offset: f64,
    /// Centres of runs of steps where the branches are within [`CROSSING_GAP`].
    pub crossing_times: Vec<f64>,
}

impl ComparisonReport {
    pub fn step(&self, n: usize) -> Option<&StepComparison> {
        self.steps.iter().find(|s| s.step == n)
    }
}

/// Matches the top-2 peaks of every row of `grid` against `trajectory`.
///
/// Row `n` is compared with the sample at τ = n; both must cover the same
/// steps.
pub fn compare_peaks(grid: &ProbabilityGrid, trajectory: &Trajectory) -> Result<ComparisonReport> {
    if grid.rows() == 0 {
        return Err(Error::InvalidConfig("empty probability record".into()));
    }
    if trajectory.samples.len() != grid.rows() {
        return Err(Error::InvalidConfig(format!(
            "record has {} steps but trajectory has {} samples",
            grid.rows(),
            trajectory.samples.len()
        )));
    }
    for (n, s) in trajectory.samples.iter().enumerate() {
        if (s.tau - n as f64).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "trajectory sample {n} is at tau = {}, expected {n}",
                s.tau
            )));
        }
    }

    let trails = peak_trails(grid, 2);
    let mut steps = Vec::with_capacity(trails.len());
    let mut all_offsets = Vec::new();
    for (n, (peaks, sample)) in trails.into_iter().zip(&trajectory.samples).enumerate() {
        let offsets: Vec<f64> = peaks
            .iter()
            .map(|&m| {
                let m = m as f64;
                (m - sample.x_plus).abs().min((m - sample.x_minus).abs())
            })
            .collect();
        all_offsets.extend_from_slice(&offsets);
        steps.push(StepComparison {
            step: n,
            peaks,
            offsets,
        });
    }

    let max_offset = all_offsets.iter().copied().fold(0.0, f64::max);
    let mean_offset = if all_offsets.is_empty() {
        0.0
    } else {
        all_offsets.iter().sum::<f64>() / all_offsets.len() as f64
    };

    Ok(ComparisonReport {
        steps,
        max_offset,
        mean_offset,
        crossing_times: crossing_times(trajectory),
    })
}

/// Centres of contiguous runs of samples whose branches are within [`CROSSING_GAP`].
pub fn crossing_times(trajectory: &Trajectory) -> Vec<f64> {
    let mut out = Vec::new();
    let mut run: Option<(f64, f64)> = None;
    for s in &trajectory.samples {
        if (s.x_plus - s.x_minus).abs() <= CROSSING_GAP {
            run = Some(match run {
                Some((start, _)) => (start, s.tau),
                None => (s.tau, s.tau),
            });
        } else if let Some((start, end)) = run.take() {
            out.push(0.5 * (start + end));
        }
    }
    if let Some((start, end)) = run {
        out.push(0.5 * (start + end));
    }
    out
}
