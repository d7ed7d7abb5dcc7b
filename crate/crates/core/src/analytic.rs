//! Long-wavelength continuum solution built on Airy kernels.
//!
//! Each internal state `A ∈ {R, L}` splits into a slowly varying mode `A⁺`
//! and an alternating mode `A⁻`, with `A_{m,n} ≈ A⁺ + (−1)ⁿ A⁻`. The modes
//! obey `∂_τ A^± = ∓cos θ(τ) (∂_ξ + ⅙ ∂_ξ³) A^±` and are propagated from
//! the first two simulated steps:
//!
//! ```text
//! A^±(ξ,τ) = ½ Σ_m (A_{m,0} ± A_{m,1}) Z^±(ξ − m, τ)
//! Z^±(ξ,τ) = |2/s|^{1/3} e^χ Ai(ζ)
//! ζ = (2/s)^{1/3} (±ξ − s + 2w⁴/s)
//! χ = (2w²/s) (±ξ − s + 4w⁴/(3s))
//! ```
//!
//! Here `s = I(τ) = ∫₀^τ cos θ dτ′` for both modes, so `A⁺` travels along
//! `ξ = +I(τ)` and `A⁻` along `ξ = −I(τ)`. The cube root inside ζ keeps the
//! sign of `s`, which keeps the kernel a solution of the wave equation when
//! the accumulated displacement turns negative. `w` is the width of a
//! Gaussian initial packet and defaults to zero, where χ vanishes.
//!
//! Schedules passed to this module must already be in step units (see
//! [`PhaseSchedule::in_step_units`]).

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::schedule::PhaseSchedule;
use crate::special::{airy_ai, airy_ai_scaled};
use crate::walk::{initialize, Spinor, WalkConfig};

/// Below this |s(τ)| the kernel prefactor is treated as divergent.
pub const SINGULAR_S: f64 = 1e-9;

/// Default ξ spacing of the evaluation grid.
pub const DEFAULT_GRID_SPACING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Slowly varying mode, weight `½(A_{m,0} + A_{m,1})`.
    Plus,
    /// Alternating mode, weight `½(A_{m,0} − A_{m,1})`.
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InternalState {
    R,
    L,
}

/// `A_{m,0}` and `A_{m,1}` at one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSite {
    pub m: i64,
    pub step0: Complex64,
    pub step1: Complex64,
}

/// Seed amplitudes for both internal states.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Seeds {
    pub right: Vec<SeedSite>,
    pub left: Vec<SeedSite>,
}

impl Seeds {
    pub fn for_state(&self, state: InternalState) -> &[SeedSite] {
        match state {
            InternalState::R => &self.right,
            InternalState::L => &self.left,
        }
    }

    pub fn step0_norm(&self) -> f64 {
        self.right
            .iter()
            .chain(&self.left)
            .map(|s| s.step0.norm_sqr())
            .sum()
    }

    fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        self.right.iter().chain(&self.left).map(|s| s.m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticParams {
    pub w: f64,
    pub grid: Vec<f64>,
    pub times: Vec<f64>,
    pub seeds: Seeds,
}

impl AnalyticParams {
    /// Integer times 0..=steps and a uniform grid over `[−(steps+5), steps+5]`.
    pub fn for_steps(seeds: Seeds, steps: usize, spacing: f64) -> Result<Self> {
        Ok(Self {
            w: 0.0,
            grid: default_grid(steps, spacing)?,
            times: (0..=steps).map(|n| n as f64).collect(),
            seeds,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !self.w.is_finite() {
            return Err(Error::InvalidConfig("analytic.w must be finite".into()));
        }
        if self.grid.iter().any(|x| !x.is_finite()) || self.grid.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidConfig("analytic grid must be strictly increasing".into()));
        }
        if self.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(Error::InvalidConfig("analytic times must be non-negative".into()));
        }
        let norm = self.seeds.step0_norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "seed amplitudes must have unit step-0 norm, got {norm}"
            )));
        }
        Ok(())
    }
}

/// Uniform grid with the given spacing over `[−(steps+5), steps+5]`.
pub fn default_grid(steps: usize, spacing: f64) -> Result<Vec<f64>> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "grid spacing must be positive, got {spacing}"
        )));
    }
    let half = (steps + 5) as f64;
    let count = (2.0 * half / spacing).round() as usize;
    Ok((0..=count).map(|i| -half + i as f64 * spacing).collect())
}

/// `Z^±(ξ, τ)`.
pub fn z_kernel(xi: f64, tau: f64, branch: Branch, schedule: &PhaseSchedule, w: f64) -> Result<f64> {
    let s = schedule.velocity_integral(tau)?;
    z_kernel_at(xi, tau, s, branch, w)
}

fn z_kernel_at(xi: f64, tau: f64, s: f64, branch: Branch, w: f64) -> Result<f64> {
    if s.abs() < SINGULAR_S {
        return Err(Error::SingularTime { tau, s });
    }
    let scale = (2.0 / s).cbrt();
    let shifted = branch.sign() * xi - s;
    let w2 = w * w;
    let w4 = w2 * w2;
    let zeta = scale * (shifted + 2.0 * w4 / s);
    let chi = 2.0 * w2 / s * (shifted + 4.0 * w4 / (3.0 * s));
    if zeta > 0.0 {
        // For small |s| both e^χ and Ai(ζ) leave the f64 range while their
        // product stays moderate, so combine the exponents first.
        let decay = 2.0 / 3.0 * zeta * zeta.sqrt();
        return Ok(scale.abs() * (chi - decay).exp() * airy_ai_scaled(zeta)?);
    }
    Ok(scale.abs() * chi.exp() * airy_ai(zeta)?)
}

/// Seeds from the exact walk: `A_{m,0}` is the initial state and `A_{m,1}`
/// the state after one step with θ₀.
pub fn seed_from_simulation(config: &WalkConfig) -> Result<Seeds> {
    let start = initialize(config)?;
    let theta0 = config.schedule.phase_at(0, config.step_params.time_step)?;
    let next = start.clone().stepped(theta0);
    let reach = next.reach() as i64;
    let mut seeds = Seeds::default();
    for m in -reach..=reach {
        let (a, b): (Spinor, Spinor) = (start.amplitude(m), next.amplitude(m));
        if a.r != Complex64::default() || b.r != Complex64::default() {
            seeds.right.push(SeedSite { m, step0: a.r, step1: b.r });
        }
        if a.l != Complex64::default() || b.l != Complex64::default() {
            seeds.left.push(SeedSite { m, step0: a.l, step1: b.l });
        }
    }
    Ok(seeds)
}

/// Kernel values `Z^±(ξ − m, τ)` for one (ξ, τ), shared by both internal states.
struct KernelRow {
    sites: Vec<i64>,
    plus: Vec<f64>,
    minus: Vec<f64>,
}

/// Memoized `Z⁺(·, τ)` for one time. `Z⁻(x) = Z⁺(−x)`, so one cache serves
/// both branches; on a uniform grid neighbouring seed sites hit the same
/// arguments.
struct KernelCache {
    tau: f64,
    s: f64,
    w: f64,
    values: HashMap<u64, f64>,
}

impl KernelCache {
    fn new(tau: f64, s: f64, w: f64) -> Self {
        Self {
            tau,
            s,
            w,
            values: HashMap::new(),
        }
    }

    fn plus(&mut self, x: f64) -> Result<f64> {
        // Fold −0.0 into 0.0 so both hash alike.
        let key = (x + 0.0).to_bits();
        if let Some(v) = self.values.get(&key) {
            return Ok(*v);
        }
        let v = z_kernel_at(x, self.tau, self.s, Branch::Plus, self.w)?;
        self.values.insert(key, v);
        Ok(v)
    }
}

impl KernelRow {
    fn new(xi: f64, sites: &[i64], cache: &mut KernelCache) -> Result<Self> {
        let mut plus = Vec::with_capacity(sites.len());
        let mut minus = Vec::with_capacity(sites.len());
        for &m in sites {
            let x = xi - m as f64;
            plus.push(cache.plus(x)?);
            minus.push(cache.plus(-x)?);
        }
        Ok(Self {
            sites: sites.to_vec(),
            plus,
            minus,
        })
    }

    fn amplitude(&self, seeds: &[SeedSite]) -> (Complex64, Complex64) {
        let mut a_plus = Complex64::default();
        let mut a_minus = Complex64::default();
        for seed in seeds {
            let j = self.sites.binary_search(&seed.m).expect("seed site in kernel row");
            a_plus += 0.5 * (seed.step0 + seed.step1) * self.plus[j];
            a_minus += 0.5 * (seed.step0 - seed.step1) * self.minus[j];
        }
        (a_plus, a_minus)
    }
}

fn seed_sites(seeds: &Seeds) -> Vec<i64> {
    let mut sites: Vec<i64> = seeds.sites().collect();
    sites.sort_unstable();
    sites.dedup();
    sites
}

/// `(A⁺(ξ,τ), A⁻(ξ,τ))` for one internal state.
pub fn analytic_amplitude(
    xi: f64,
    tau: f64,
    state: InternalState,
    params: &AnalyticParams,
    schedule: &PhaseSchedule,
) -> Result<(Complex64, Complex64)> {
    let s = schedule.velocity_integral(tau)?;
    let mut cache = KernelCache::new(tau, s, params.w);
    let row = KernelRow::new(xi, &seed_sites(&params.seeds), &mut cache)?;
    Ok(row.amplitude(params.seeds.for_state(state)))
}

/// Analytic field on `grid × times`; rows at singular times are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticField {
    pub grid: Vec<f64>,
    pub times: Vec<f64>,
    pub total: Vec<Option<f64>>,
    pub right: Vec<Option<f64>>,
    pub left: Vec<Option<f64>>,
    /// `[A⁺_R, A⁻_R, A⁺_L, A⁻_L]` per cell.
    pub amplitudes: Vec<Option<[Complex64; 4]>>,
}

impl AnalyticField {
    pub fn width(&self) -> usize {
        self.grid.len()
    }

    fn index(&self, t: usize, x: usize) -> usize {
        t * self.grid.len() + x
    }

    pub fn total_at(&self, t: usize, x: usize) -> Option<f64> {
        self.total[self.index(t, x)]
    }

    pub fn right_at(&self, t: usize, x: usize) -> Option<f64> {
        self.right[self.index(t, x)]
    }

    pub fn left_at(&self, t: usize, x: usize) -> Option<f64> {
        self.left[self.index(t, x)]
    }

    pub fn amplitudes_at(&self, t: usize, x: usize) -> Option<[Complex64; 4]> {
        self.amplitudes[self.index(t, x)]
    }

    pub fn total_row(&self, t: usize) -> &[Option<f64>] {
        let w = self.width();
        &self.total[t * w..(t + 1) * w]
    }

    pub fn is_singular(&self, t: usize) -> bool {
        self.total_row(t).iter().all(Option::is_none)
    }

    pub fn max_total(&self) -> f64 {
        self.total.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// Evaluates `P^A = |A⁺ + (−1)ⁿ A⁻|²` on every grid point, with n = round(τ).
pub fn analytic_distribution(params: &AnalyticParams, schedule: &PhaseSchedule) -> Result<AnalyticField> {
    params.validate()?;
    let sites = seed_sites(&params.seeds);
    let rows: Vec<Vec<Option<([f64; 3], [Complex64; 4])>>> = params
        .times
        .par_iter()
        .map(|&tau| -> Result<_> {
            let s = schedule.velocity_integral(tau)?;
            if s.abs() < SINGULAR_S {
                return Ok(vec![None; params.grid.len()]);
            }
            let parity = if (tau.round() as i64) % 2 == 0 { 1.0 } else { -1.0 };
            let mut cache = KernelCache::new(tau, s, params.w);
            params
                .grid
                .iter()
                .map(|&xi| {
                    let row = KernelRow::new(xi, &sites, &mut cache)?;
                    let (rp, rm) = row.amplitude(&params.seeds.right);
                    let (lp, lm) = row.amplitude(&params.seeds.left);
                    let pr = (rp + parity * rm).norm_sqr();
                    let pl = (lp + parity * lm).norm_sqr();
                    Ok(Some(([pr + pl, pr, pl], [rp, rm, lp, lm])))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let cells = params.grid.len() * params.times.len();
    let mut field = AnalyticField {
        grid: params.grid.clone(),
        times: params.times.clone(),
        total: Vec::with_capacity(cells),
        right: Vec::with_capacity(cells),
        left: Vec::with_capacity(cells),
        amplitudes: Vec::with_capacity(cells),
    };
    for cell in rows.into_iter().flatten() {
        field.total.push(cell.map(|c| c.0[0]));
        field.right.push(cell.map(|c| c.0[1]));
        field.left.push(cell.map(|c| c.0[2]));
        field.amplitudes.push(cell.map(|c| c.1));
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::AI_ZERO;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_width_kernel_reduces_to_scaled_airy() {
        let sched = PhaseSchedule::linear(0.3, 0.05).unwrap();
        let tau = 11.0;
        let s = sched.velocity_integral(tau).unwrap();
        let b = (2.0 / s).cbrt();
        for xi in [-4.0, 0.0, 2.5, 9.0] {
            let z = z_kernel(xi, tau, Branch::Plus, &sched, 0.0).unwrap();
            let expect = b.abs() * airy_ai(b * (xi - s)).unwrap();
            assert!((z - expect).abs() < 1e-15);
        }
        let z0 = z_kernel(s, tau, Branch::Plus, &sched, 0.0).unwrap();
        assert!((z0 - b.abs() * AI_ZERO).abs() < 1e-15);
        let z0 = z_kernel(-s, tau, Branch::Minus, &sched, 0.0).unwrap();
        assert!((z0 - b.abs() * AI_ZERO).abs() < 1e-15);
    }

    #[test]
    fn kernel_singular_time() {
        let sched = PhaseSchedule::linear(0.0, PI / 60.0).unwrap();
        assert!(matches!(
            z_kernel(0.0, 0.0, Branch::Plus, &sched, 0.0),
            Err(Error::SingularTime { .. })
        ));
        assert!(matches!(
            z_kernel(0.0, 120.0, Branch::Minus, &sched, 0.0),
            Err(Error::SingularTime { .. })
        ));
    }

    #[test]
    fn seeds_from_default_state() {
        let cfg = WalkConfig::new(10, PhaseSchedule::linear(PI / 4.0, PI / 60.0).unwrap());
        let seeds = seed_from_simulation(&cfg).unwrap();
        let r0 = seeds.right.iter().find(|s| s.m == 0).unwrap();
        assert_eq!(r0.step0, c(FRAC_1_SQRT_2, 0.0));
        let l0 = seeds.left.iter().find(|s| s.m == 0).unwrap();
        assert_eq!(l0.step0, c(0.0, FRAC_1_SQRT_2));
        let r1 = seeds.right.iter().find(|s| s.m == 1).unwrap();
        assert!((r1.step1 - c(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn seeds_for_diagonal_coin() {
        let cfg = WalkConfig::new(4, PhaseSchedule::constant(0.0).unwrap())
            .with_initial(vec![(0, Spinor::right())]);
        let seeds = seed_from_simulation(&cfg).unwrap();
        let r1 = seeds.right.iter().find(|s| s.m == 1).unwrap();
        assert_eq!(r1.step1, c(1.0, 0.0));
        assert!(seeds.left.is_empty());
    }

    #[test]
    fn single_seed_amplitude() {
        let sched = PhaseSchedule::constant(0.0).unwrap();
        let seeds = Seeds {
            right: vec![SeedSite { m: 0, step0: c(1.0, 0.0), step1: c(0.0, 0.0) }],
            left: vec![],
        };
        let params = AnalyticParams { w: 0.0, grid: vec![0.0], times: vec![5.0], seeds };
        let (ap, am) = analytic_amplitude(3.0, 5.0, InternalState::R, &params, &sched).unwrap();
        let zp = z_kernel(3.0, 5.0, Branch::Plus, &sched, 0.0).unwrap();
        let zm = z_kernel(3.0, 5.0, Branch::Minus, &sched, 0.0).unwrap();
        assert!((ap - c(0.5 * zp, 0.0)).norm() < 1e-15);
        assert!((am - c(0.5 * zm, 0.0)).norm() < 1e-15);
        let (lp, lm) = analytic_amplitude(3.0, 5.0, InternalState::L, &params, &sched).unwrap();
        assert_eq!((lp, lm), (c(0.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn parity_factor() {
        // A_{0,1} = 0 and A_{0,0} = 1 gives A⁺ and A⁻ with equal weights.
        let sched = PhaseSchedule::constant(0.0).unwrap();
        let seeds = Seeds {
            right: vec![SeedSite { m: 0, step0: c(1.0, 0.0), step1: c(0.0, 0.0) }],
            left: vec![],
        };
        let params = AnalyticParams { w: 0.0, grid: vec![0.0], times: vec![4.0, 5.0], seeds };
        let field = analytic_distribution(&params, &sched).unwrap();
        let z = z_kernel(0.0, 4.0, Branch::Plus, &sched, 0.0).unwrap();
        let zm = z_kernel(0.0, 4.0, Branch::Minus, &sched, 0.0).unwrap();
        let expect = (0.5 * (z + zm)).powi(2);
        assert!((field.right_at(0, 0).unwrap() - expect).abs() < 1e-15);
        let z = z_kernel(0.0, 5.0, Branch::Plus, &sched, 0.0).unwrap();
        let zm = z_kernel(0.0, 5.0, Branch::Minus, &sched, 0.0).unwrap();
        let expect = (0.5 * (z - zm)).powi(2);
        assert!((field.right_at(1, 0).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn singular_rows_are_absent() {
        let cfg = WalkConfig::new(4, PhaseSchedule::constant(0.0).unwrap());
        let seeds = seed_from_simulation(&cfg).unwrap();
        let params = AnalyticParams::for_steps(seeds, 4, 0.5).unwrap();
        let field = analytic_distribution(&params, &cfg.schedule).unwrap();
        assert!(field.is_singular(0));
        assert!(!field.is_singular(1));
        assert_eq!(field.width(), 2 * 9 * 2 + 1);
        for t in 1..field.times.len() {
            for x in 0..field.width() {
                let (p, pr, pl) = (
                    field.total_at(t, x).unwrap(),
                    field.right_at(t, x).unwrap(),
                    field.left_at(t, x).unwrap(),
                );
                assert!(p >= 0.0 && pr >= 0.0 && pl >= 0.0);
                assert!((p - pr - pl).abs() <= 1e-15 * p.max(1.0));
            }
        }
    }

    #[test]
    fn params_validation() {
        let mut p = AnalyticParams {
            w: 0.0,
            grid: vec![0.0, 1.0],
            times: vec![1.0],
            seeds: Seeds {
                right: vec![SeedSite { m: 0, step0: c(1.0, 0.0), step1: c(1.0, 0.0) }],
                left: vec![],
            },
        };
        assert!(p.validate().is_ok());
        p.grid = vec![1.0, 1.0];
        assert!(p.validate().is_err());
        p.grid = vec![0.0];
        p.times = vec![-1.0];
        assert!(p.validate().is_err());
        p.times = vec![1.0];
        p.seeds.right[0].step0 = c(0.5, 0.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn default_grid_column_count() {
        let g = default_grid(300, 0.5).unwrap();
        assert_eq!(g.len(), 2 * 305 * 2 + 1);
        assert_eq!(g[0], -305.0);
        assert_eq!(*g.last().unwrap(), 305.0);
        assert!(default_grid(10, 0.0).is_err());
    }
}
