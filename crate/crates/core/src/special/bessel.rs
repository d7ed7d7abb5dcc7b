//! Bessel functions of the first kind, integer order, real argument.
//!
//! Small |x| uses the ascending series. Larger |x| uses Miller's backward
//! recurrence started well above `max(k, |x|)` and normalized with the
//! Neumann sum `J₀ + 2 Σ J_{2j} = 1`.

use super::SpecialFunctionConfig;
use crate::error::{Error, Result};

/// Below this |x| the ascending series is used.
const SERIES_RADIUS: f64 = 6.0;

const RESCALE_ABOVE: f64 = 1e250;

impl SpecialFunctionConfig {
    pub fn bessel_j(&self, order: u32, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("J_k(x) needs finite x, got {x}")));
        }
        if x == 0.0 {
            return Ok(if order == 0 { 1.0 } else { 0.0 });
        }
        let value = if x.abs() < SERIES_RADIUS {
            self.bessel_series(order, x.abs())
        } else {
            bessel_miller(order, x.abs())
        };
        Ok(if x < 0.0 && order % 2 == 1 { -value } else { value })
    }

    fn bessel_series(&self, order: u32, x: f64) -> f64 {
        let half = 0.5 * x;
        let mut lead = 1.0;
        for k in 1..=order {
            lead *= half / k as f64;
        }
        let q = -half * half;
        let mut term = lead;
        let mut sum = lead;
        for j in 1..self.series_max_terms {
            term *= q / (j as f64 * (j as f64 + order as f64));
            sum += term;
            if term.abs() < f64::EPSILON * 1e-2 * sum.abs().max(lead) + self.target_abs_tolerance * 1e-7 {
                break;
            }
        }
        sum
    }
}

fn bessel_miller(order: u32, x: f64) -> f64 {
    let k = order as usize;
    let top = (order as f64).max(x);
    let mut start = (top + 20.0 + (40.0 * top).sqrt()) as usize;
    start += start % 2;

    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{j+1}
    let mut current = 1e-30; // J_j
    let mut norm = 0.0;
    let mut target = 0.0;
    for j in (1..=start).rev() {
        if j == k {
            target = current;
        }
        if j % 2 == 0 {
            norm += 2.0 * current;
        }
        let prev = j as f64 * two_over_x * current - next;
        next = current;
        current = prev;
        if current.abs() > RESCALE_ABOVE {
            current /= RESCALE_ABOVE;
            next /= RESCALE_ABOVE;
            norm /= RESCALE_ABOVE;
            target /= RESCALE_ABOVE;
        }
    }
    // `current` now holds the unnormalized J₀.
    norm += current;
    if k == 0 {
        target = current;
    }
    target / norm
}

pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    SpecialFunctionConfig::default().bessel_j(order, x)
}
