//! Airy function of the first kind for real arguments.
//!
//! Inside the switch radius the Maclaurin series `Ai(x) = c₁ f(x) − c₂ g(x)`
//! is used on [0, 1] only. Elsewhere it loses digits to cancellation, so
//! `y″ = x y` is integrated with local Taylor expansions in unit steps:
//! from the exact values at 0 for x < 0, and backward from the asymptotic
//! values at x = 10 for x > 1 (the direction in which Ai grows, so the
//! continuation is stable).
//!
//! Outside the radius: asymptotic expansions, the exponentially decaying
//! form for x > 0 and the oscillatory form for x < 0. Both share the
//! coefficients `u_k` and are truncated at their smallest term.

use std::f64::consts::{FRAC_PI_4, PI};

use super::SpecialFunctionConfig;
use crate::error::{Error, Result};

/// Ai(0) = 3^(−2/3)/Γ(2/3).
pub const AI_ZERO: f64 = 0.355_028_053_887_817_24;
/// −Ai′(0) = 3^(−1/3)/Γ(1/3).
const AI_PRIME_ZERO_NEG: f64 = 0.258_819_403_792_806_8;
/// Taylor coefficients per continuation step of length ≤ 1.
const TAYLOR_TERMS: usize = 42;
/// Largest argument handled by the Maclaurin series.
const MACLAURIN_MAX: f64 = 1.0;
/// Lower bound on the starting point of the backward continuation.
const ANCHOR_MIN: f64 = 10.0;

impl SpecialFunctionConfig {
    pub fn airy_ai(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("Ai(x) needs finite x, got {x}")));
        }
        let switch = self.asymptotic_switch_airy;
        Ok(if x > switch {
            self.ai_asymptotic_positive(x)
        } else if x < -switch {
            self.ai_asymptotic_negative(-x)
        } else if x < 0.0 {
            continue_ode(0.0, AI_ZERO, -AI_PRIME_ZERO_NEG, x)
        } else if x <= MACLAURIN_MAX {
            self.ai_series(x)
        } else {
            let anchor = switch.max(ANCHOR_MIN);
            let (y, dy) = self.ai_asymptotic_positive_with_derivative(anchor);
            continue_ode(anchor, y, dy, x)
        })
    }

    /// `Ai(x)·exp((2/3) x^{3/2})` for x ≥ 0, finite where Ai itself underflows.
    pub fn airy_ai_scaled(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain(format!("scaled Ai(x) needs finite x >= 0, got {x}")));
        }
        let zeta = 2.0 / 3.0 * x * x.sqrt();
        if x > self.asymptotic_switch_airy {
            let mut sum = 0.0;
            self.for_each_asymptotic_term(zeta, |k, t| sum += if k % 2 == 0 { t } else { -t });
            Ok(sum / (2.0 * PI.sqrt() * x.sqrt().sqrt()))
        } else {
            Ok(self.airy_ai(x)? * zeta.exp())
        }
    }

    fn series_floor(&self) -> f64 {
        self.target_abs_tolerance * 1e-7
    }

    fn ai_series(&self, x: f64) -> f64 {
        let x3 = x * x * x;
        let mut f_sum = 1.0;
        let mut f_term = 1.0;
        let mut g_sum = x;
        let mut g_term = x;
        for k in 1..self.series_max_terms {
            let k3 = (3 * k) as f64;
            f_term *= x3 / (k3 * (k3 - 1.0));
            g_term *= x3 / ((k3 + 1.0) * k3);
            f_sum += f_term;
            g_sum += g_term;
            let scale = f_sum.abs().max(g_sum.abs()).max(1.0);
            if f_term.abs().max(g_term.abs()) < f64::EPSILON * 1e-2 * scale + self.series_floor() {
                break;
            }
        }
        AI_ZERO * f_sum - AI_PRIME_ZERO_NEG * g_sum
    }

    /// Visits `u_k ζ^{−k}` for k = 0, 1, … and stops before the first term
    /// that grows, or once terms fall below rounding level.
    fn for_each_asymptotic_term(&self, zeta: f64, mut visit: impl FnMut(usize, f64)) {
        let inv = 1.0 / zeta;
        let mut term = 1.0;
        visit(0, term);
        for k in 1..self.series_max_terms {
            let kf = k as f64;
            let next = term * inv * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            if next > term {
                break;
            }
            visit(k, next);
            term = next;
            if term < f64::EPSILON * 1e-2 {
                break;
            }
        }
    }

    /// Ai(x) and Ai′(x) ≈ −x^{1/4} e^{−ζ}/(2√π) Σ (−1)^k v_k/ζ^k, with
    /// v_k = −(6k+1)/(6k−1) u_k.
    fn ai_asymptotic_positive_with_derivative(&self, x: f64) -> (f64, f64) {
        let zeta = 2.0 / 3.0 * x * x.sqrt();
        let quarter = x.sqrt().sqrt();
        let envelope = (-zeta).exp() / (2.0 * PI.sqrt());
        let (mut sum, mut dsum) = (0.0, 0.0);
        self.for_each_asymptotic_term(zeta, |k, t| {
            let t = if k % 2 == 0 { t } else { -t };
            let kf = k as f64;
            let v = if k == 0 { 1.0 } else { -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) };
            sum += t;
            dsum += v * t;
        });
        (envelope / quarter * sum, -envelope * quarter * dsum)
    }

    /// Ai(x) ≈ e^{−ζ}/(2√π x^{1/4}) Σ (−1)^k u_k/ζ^k with ζ = (2/3) x^{3/2}.
    fn ai_asymptotic_positive(&self, x: f64) -> f64 {
        let zeta = 2.0 / 3.0 * x * x.sqrt();
        let prefactor = (-zeta).exp() / (2.0 * PI.sqrt() * x.sqrt().sqrt());
        if prefactor == 0.0 {
            return 0.0;
        }
        let mut sum = 0.0;
        self.for_each_asymptotic_term(zeta, |k, t| sum += if k % 2 == 0 { t } else { -t });
        prefactor * sum
    }

    /// Ai(−y) ≈ [cos(ζ − π/4) Σ(−1)^j u_{2j}/ζ^{2j} + sin(ζ − π/4) Σ(−1)^j u_{2j+1}/ζ^{2j+1}] / (√π y^{1/4}).
    fn ai_asymptotic_negative(&self, y: f64) -> f64 {
        let zeta = 2.0 / 3.0 * y * y.sqrt();
        let (mut even, mut odd) = (0.0, 0.0);
        self.for_each_asymptotic_term(zeta, |k, t| {
            let signed = if (k / 2) % 2 == 0 { t } else { -t };
            if k % 2 == 0 {
                even += signed;
            } else {
                odd += signed;
            }
        });
        let phase = zeta - FRAC_PI_4;
        (phase.cos() * even + phase.sin() * odd) / (PI.sqrt() * y.sqrt().sqrt())
    }
}

/// Carries `(y, y′)` of `y″ = x y` from `start` to `end` with local Taylor
/// expansions, `a_{k+2} = (x₀ a_k + a_{k−1}) / ((k+2)(k+1))`.
fn continue_ode(start: f64, mut y: f64, mut dy: f64, end: f64) -> f64 {
    let steps = (end - start).abs().ceil().max(1.0);
    let h = (end - start) / steps;
    let mut a = [0.0; TAYLOR_TERMS];
    for i in 0..steps as usize {
        let x0 = start + i as f64 * h;
        a[0] = y;
        a[1] = dy;
        a[2] = 0.5 * x0 * y;
        for k in 1..TAYLOR_TERMS - 2 {
            a[k + 2] = (x0 * a[k] + a[k - 1]) / ((k + 2) * (k + 1)) as f64;
        }
        y = a.iter().rev().fold(0.0, |acc, c| acc * h + c);
        dy = a.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, c)| acc * h + k as f64 * c);
    }
    y
}

pub fn airy_ai(x: f64) -> Result<f64> {
    SpecialFunctionConfig::default().airy_ai(x)
}

pub fn airy_ai_scaled(x: f64) -> Result<f64> {
    SpecialFunctionConfig::default().airy_ai_scaled(x)
}
