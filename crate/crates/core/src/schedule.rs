//! Time-varying coin phases.
//!
//! A [`PhaseSchedule`] gives the phase θ(t) fed into the reflection-type coin
//! `[[cos θ, sin θ], [sin θ, −cos θ]]`. The coin applied when advancing from
//! step `n` to `n + 1` uses `θ_n = θ(nT)`, starting at `n = 0`.
//!
//! [`PhaseSchedule::velocity_integral`] returns the unsigned phase-cosine
//! integral `I(τ) = ∫₀^τ cos θ(τ′) dτ′`, which is the accumulated displacement
//! every downstream module works with. Phases are never range-reduced.

use crate::error::{Error, Result};
use crate::special::{bessel_j, integrate_adaptive};

/// Below this |ω| the closed forms switch to their ω → 0 limits.
pub const OMEGA_EPS: f64 = 1e-12;

/// Above this amplitude the sinusoidal integral falls back to quadrature,
/// since the Jacobi–Anger tail needs Bessel orders beyond the validated range.
const JACOBI_ANGER_MAX_AMPLITUDE: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSchedule {
    /// θ(t) = θ₀.
    Constant { theta0: f64 },
    /// θ(t) = θ₀ + ωt.
    Linear { theta0: f64, omega: f64 },
    /// θ(t) = θ₀ sin(ωt); `theta0` is the amplitude.
    Sinusoidal { theta0: f64, omega: f64 },
    /// θ_n read from a table indexed by step; piecewise constant in between.
    Tabulated { table: Vec<f64> },
}

/// Time interval per step `T` and lattice spacing `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub time_step: f64,
    pub spacing: f64,
}

impl Default for StepParams {
    fn default() -> Self {
        Self {
            time_step: 1.0,
            spacing: 1.0,
        }
    }
}

impl StepParams {
    pub fn new(time_step: f64, spacing: f64) -> Result<Self> {
        let p = Self { time_step, spacing };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.time_step.is_finite() && self.time_step > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "step.T must be positive and finite, got {}",
                self.time_step
            )));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "step.X must be positive and finite, got {}",
                self.spacing
            )));
        }
        Ok(())
    }
}

/// Real orthogonal coin `[[cos θ, sin θ], [sin θ, −cos θ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    pub entries: [[f64; 2]; 2],
}

impl CoinMatrix {
    pub fn new(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            entries: [[c, s], [s, -c]],
        }
    }

    pub fn cos(&self) -> f64 {
        self.entries[0][0]
    }

    pub fn sin(&self) -> f64 {
        self.entries[0][1]
    }

    pub fn determinant(&self) -> f64 {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    /// `M · Mᵀ`.
    pub fn gram(&self) -> [[f64; 2]; 2] {
        let m = &self.entries;
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = m[i][0] * m[j][0] + m[i][1] * m[j][1];
            }
        }
        out
    }
}

pub fn coin_matrix(theta: f64) -> CoinMatrix {
    CoinMatrix::new(theta)
}

impl PhaseSchedule {
    pub fn constant(theta0: f64) -> Result<Self> {
        let s = Self::Constant { theta0 };
        s.validate()?;
        Ok(s)
    }

    pub fn linear(theta0: f64, omega: f64) -> Result<Self> {
        let s = Self::Linear { theta0, omega };
        s.validate()?;
        Ok(s)
    }

    pub fn sinusoidal(theta0: f64, omega: f64) -> Result<Self> {
        let s = Self::Sinusoidal { theta0, omega };
        s.validate()?;
        Ok(s)
    }

    pub fn tabulated(table: Vec<f64>) -> Result<Self> {
        let s = Self::Tabulated { table };
        s.validate()?;
        Ok(s)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::Linear { .. } => "linear",
            Self::Sinusoidal { .. } => "sinusoidal",
            Self::Tabulated { .. } => "tabulated",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("schedule.{name} must be finite, got {v}")))
            }
        };
        match self {
            Self::Constant { theta0 } => finite("theta0", *theta0),
            Self::Linear { theta0, omega } | Self::Sinusoidal { theta0, omega } => {
                finite("theta0", *theta0)?;
                finite("omega", *omega)
            }
            Self::Tabulated { table } => {
                if table.is_empty() {
                    return Err(Error::InvalidConfig("schedule.table must be non-empty".into()));
                }
                table.iter().try_for_each(|&v| finite("table", v))
            }
        }
    }

    /// The phase θ_n = θ(nT) used for the transition n → n + 1.
    pub fn phase_at(&self, n: usize, time_step: f64) -> Result<f64> {
        let t = n as f64 * time_step;
        Ok(match self {
            Self::Constant { theta0 } => *theta0,
            Self::Linear { theta0, omega } => theta0 + omega * t,
            Self::Sinusoidal { theta0, omega } => theta0 * (omega * t).sin(),
            Self::Tabulated { table } => *table.get(n).ok_or(Error::ScheduleExhausted {
                index: n,
                len: table.len(),
            })?,
        })
    }

    /// The same schedule expressed in dimensionless time τ = t/T.
    ///
    /// Frequencies pick up a factor T; tables are already indexed by step.
    pub fn in_step_units(&self, time_step: f64) -> Self {
        match self {
            Self::Linear { theta0, omega } => Self::Linear {
                theta0: *theta0,
                omega: omega * time_step,
            },
            Self::Sinusoidal { theta0, omega } => Self::Sinusoidal {
                theta0: *theta0,
                omega: omega * time_step,
            },
            other => other.clone(),
        }
    }

    /// Phase as a function of continuous dimensionless time τ.
    pub fn phase_continuous(&self, tau: f64) -> Result<f64> {
        Ok(match self {
            Self::Constant { theta0 } => *theta0,
            Self::Linear { theta0, omega } => theta0 + omega * tau,
            Self::Sinusoidal { theta0, omega } => theta0 * (omega * tau).sin(),
            Self::Tabulated { table } => {
                let idx = tau.floor().max(0.0) as usize;
                *table.get(idx).ok_or(Error::ScheduleExhausted {
                    index: idx,
                    len: table.len(),
                })?
            }
        })
    }

    /// `I(τ) = ∫₀^τ cos θ(τ′) dτ′`, unsigned; branch signs are applied by callers.
    pub fn velocity_integral(&self, tau: f64) -> Result<f64> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!(
                "velocity integral needs finite tau >= 0, got {tau}"
            )));
        }
        match self {
            Self::Constant { theta0 } => Ok(tau * theta0.cos()),
            Self::Linear { theta0, omega } => Ok(linear_integral(*theta0, *omega, tau)),
            Self::Sinusoidal { theta0, omega } => {
                if theta0.abs() <= JACOBI_ANGER_MAX_AMPLITUDE {
                    Ok(sinusoidal_integral(*theta0, *omega, tau, usize::MAX))
                } else {
                    let (a, w) = (*theta0, *omega);
                    integrate_adaptive(|t| (a * (w * t).sin()).cos(), 0.0, tau, 1e-12)
                }
            }
            Self::Tabulated { table } => {
                let whole = tau.floor();
                let frac = tau - whole;
                let whole = whole as usize;
                let needed = if frac > 0.0 { whole + 1 } else { whole };
                if needed > table.len() {
                    return Err(Error::ScheduleExhausted {
                        index: needed - 1,
                        len: table.len(),
                    });
                }
                let mut sum: f64 = table[..whole].iter().map(|t| t.cos()).sum();
                if frac > 0.0 {
                    sum += frac * table[whole].cos();
                }
                Ok(sum)
            }
        }
    }
}

/// `(sin(θ₀ + ωτ) − sin θ₀)/ω`, with the `τ cos θ₀` limit for |ω| < [`OMEGA_EPS`].
pub fn linear_integral(theta0: f64, omega: f64, tau: f64) -> f64 {
    if omega.abs() < OMEGA_EPS {
        tau * theta0.cos()
    } else {
        ((theta0 + omega * tau).sin() - theta0.sin()) / omega
    }
}

/// Jacobi–Anger form of `∫₀^τ cos(θ₀ sin ωτ′) dτ′`:
/// `J₀(θ₀)τ + Σ_{k=1..k_max} J_{2k}(θ₀) sin(2kωτ)/(kω)`.
///
/// The sum stops early once `2k` exceeds |θ₀| and the term bound
/// `|J_{2k}(θ₀)|/(2kω)` drops below 1e-12; `k_max` caps it regardless.
pub fn sinusoidal_integral(theta0: f64, omega: f64, tau: f64, k_max: usize) -> f64 {
    if omega.abs() < OMEGA_EPS {
        return tau;
    }
    // Orders above 60 are outside the validated Bessel range and negligible
    // for the amplitudes routed here.
    let k_cap = k_max.min(30);
    let mut sum = bessel_j(0, theta0).unwrap_or(0.0) * tau;
    for k in 1..=k_cap {
        let order = 2 * k;
        let j = bessel_j(order as u32, theta0).unwrap_or(0.0);
        let kw = k as f64 * omega;
        sum += j * (2.0 * kw * tau).sin() / kw;
        if order as f64 > theta0.abs() && j.abs() / (2.0 * kw.abs()) < 1e-12 {
            break;
        }
    }
    sum
}
