//! Exact amplitude evolution on the integer line.
//!
//! One step applies the coin with phase θ_n and then the conditional shift:
//!
//! ```text
//! R_{m,n+1} = cos θ_n R_{m−1,n} + sin θ_n L_{m−1,n}
//! L_{m,n+1} = sin θ_n R_{m+1,n} − cos θ_n L_{m+1,n}
//! ```
//!
//! Amplitudes live in dense arrays over `[−W, W]`. Sites the walker cannot
//! reach stay exactly zero. Nothing is renormalized along the way.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::schedule::{PhaseSchedule, StepParams};

/// Allowed deviation of the initial norm from one.
pub const INITIAL_NORM_TOL: f64 = 1e-12;

/// Internal coin state at one site.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor {
    pub r: Complex64,
    pub l: Complex64,
}

impl Spinor {
    pub fn new(r: Complex64, l: Complex64) -> Self {
        Self { r, l }
    }

    /// `|0,R⟩/√2 + i|0,L⟩/√2`.
    pub fn symmetric() -> Self {
        Self::new(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
        )
    }

    pub fn right() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn left() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.r.norm_sqr() + self.l.norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    pub steps: usize,
    pub schedule: PhaseSchedule,
    pub step_params: StepParams,
    /// Occupied sites of the initial state.
    pub initial: Vec<(i64, Spinor)>,
}

impl WalkConfig {
    /// A walk starting from `|0,R⟩/√2 + i|0,L⟩/√2` with unit step parameters.
    pub fn new(steps: usize, schedule: PhaseSchedule) -> Self {
        Self {
            steps,
            schedule,
            step_params: StepParams::default(),
            initial: vec![(0, Spinor::symmetric())],
        }
    }

    pub fn with_initial(mut self, initial: Vec<(i64, Spinor)>) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_step_params(mut self, step_params: StepParams) -> Self {
        self.step_params = step_params;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        self.step_params.validate()?;
        if self.initial.is_empty() {
            return Err(Error::InvalidConfig("initial state has no occupied sites".into()));
        }
        let mut sites: Vec<i64> = self.initial.iter().map(|(m, _)| *m).collect();
        sites.sort_unstable();
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig("initial state lists a site twice".into()));
        }
        let norm: f64 = self.initial.iter().map(|(_, s)| s.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > INITIAL_NORM_TOL {
            return Err(Error::InvalidConfig(format!(
                "initial state must have unit norm, got {norm}"
            )));
        }
        Ok(())
    }
}

/// Amplitudes `R_{m,n}`, `L_{m,n}` at a single step `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    n: usize,
    /// Largest |m| that may carry amplitude.
    reach: usize,
    /// Storage covers `[−half_width, half_width]`.
    half_width: usize,
    r: Vec<Complex64>,
    l: Vec<Complex64>,
}

impl WalkState {
    /// Builds a state from explicit sites without normalization checks,
    /// with storage for `capacity_steps` further steps.
    pub fn from_sites(sites: &[(i64, Spinor)], capacity_steps: usize) -> Self {
        let reach = sites.iter().map(|(m, _)| m.unsigned_abs() as usize).max().unwrap_or(0);
        let half_width = reach + capacity_steps;
        let len = 2 * half_width + 1;
        let mut state = Self {
            n: 0,
            reach,
            half_width,
            r: vec![Complex64::default(); len],
            l: vec![Complex64::default(); len],
        };
        for (m, s) in sites {
            let i = state.index(*m);
            state.r[i] += s.r;
            state.l[i] += s.l;
        }
        state
    }

    fn index(&self, m: i64) -> usize {
        (m + self.half_width as i64) as usize
    }

    pub fn step_index(&self) -> usize {
        self.n
    }

    /// Largest |m| that may carry amplitude at the current step.
    pub fn reach(&self) -> usize {
        self.reach
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn amplitude(&self, m: i64) -> Spinor {
        if m.unsigned_abs() as usize > self.half_width {
            return Spinor::default();
        }
        let i = self.index(m);
        Spinor::new(self.r[i], self.l[i])
    }

    pub fn right_amplitudes(&self) -> &[Complex64] {
        &self.r
    }

    pub fn left_amplitudes(&self) -> &[Complex64] {
        &self.l
    }

    pub fn norm_sqr(&self) -> f64 {
        self.r.iter().chain(&self.l).map(|a| a.norm_sqr()).sum()
    }

    fn grow(&mut self, extra: usize) {
        let pad = vec![Complex64::default(); extra];
        for v in [&mut self.r, &mut self.l] {
            let mut grown = Vec::with_capacity(v.len() + 2 * extra);
            grown.extend_from_slice(&pad);
            grown.extend_from_slice(v);
            grown.extend_from_slice(&pad);
            *v = grown;
        }
        self.half_width += extra;
    }

    /// Advances one step with coin phase `theta`.
    pub fn step(&mut self, theta: f64) {
        if self.reach + 1 > self.half_width {
            self.grow((self.half_width).max(16));
        }
        let (s, c) = theta.sin_cos();
        let lo = self.index(-(self.reach as i64) - 1);
        let hi = self.index(self.reach as i64 + 1);
        let mut r_next = vec![Complex64::default(); self.r.len()];
        let mut l_next = vec![Complex64::default(); self.l.len()];
        for i in lo..=hi {
            if i > lo {
                r_next[i] = self.r[i - 1] * c + self.l[i - 1] * s;
            }
            if i < hi {
                l_next[i] = self.r[i + 1] * s - self.l[i + 1] * c;
            }
        }
        self.r = r_next;
        self.l = l_next;
        self.n += 1;
        self.reach += 1;
    }

    pub fn stepped(mut self, theta: f64) -> Self {
        self.step(theta);
        self
    }

    /// `P^R_m = |R_{m,n}|²`, `P^L_m = |L_{m,n}|²` and their sum over the stored sites.
    pub fn probabilities(&self) -> Probabilities {
        let right: Vec<f64> = self.r.iter().map(|a| a.norm_sqr()).collect();
        let left: Vec<f64> = self.l.iter().map(|a| a.norm_sqr()).collect();
        let total = right.iter().zip(&left).map(|(a, b)| a + b).collect();
        Probabilities {
            half_width: self.half_width,
            total,
            right,
            left,
        }
    }
}

/// Probability rows for one step, indexed over `[−half_width, half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Probabilities {
    pub half_width: usize,
    pub total: Vec<f64>,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

impl Probabilities {
    pub fn at(&self, m: i64) -> f64 {
        let i = m + self.half_width as i64;
        if i < 0 || i as usize >= self.total.len() {
            0.0
        } else {
            self.total[i as usize]
        }
    }
}

/// Validates the config and places the initial amplitudes.
pub fn initialize(config: &WalkConfig) -> Result<WalkState> {
    config.validate()?;
    Ok(WalkState::from_sites(&config.initial, config.steps))
}

/// Per-step probabilities on a fixed site range `[−half_width, half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityGrid {
    half_width: usize,
    rows: usize,
    values: Vec<f64>,
}

impl ProbabilityGrid {
    pub fn new(half_width: usize) -> Self {
        Self {
            half_width,
            rows: 0,
            values: Vec::new(),
        }
    }

    pub fn from_rows(half_width: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = 2 * half_width + 1;
        let mut grid = Self::new(half_width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidConfig(format!(
                    "row {i} has {} columns, expected {width}",
                    row.len()
                )));
            }
            grid.values.extend(row);
            grid.rows += 1;
        }
        Ok(grid)
    }

    pub fn push_row(&mut self, row: &[f64]) {
        debug_assert_eq!(row.len(), self.width());
        self.values.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn width(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let w = self.width();
        &self.values[n * w..(n + 1) * w]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.width().max(1))
    }

    /// Site label of column `j`.
    pub fn site(&self, column: usize) -> i64 {
        column as i64 - self.half_width as i64
    }

    pub fn get(&self, n: usize, m: i64) -> f64 {
        let j = m + self.half_width as i64;
        if j < 0 || j as usize >= self.width() || n >= self.rows {
            0.0
        } else {
            self.row(n)[j as usize]
        }
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Full spacetime record of a run: P, P^R and P^L for every step 0..=N.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeRecord {
    pub total: ProbabilityGrid,
    pub right: ProbabilityGrid,
    pub left: ProbabilityGrid,
}

impl SpacetimeRecord {
    pub fn steps(&self) -> usize {
        self.total.rows().saturating_sub(1)
    }

    pub fn half_width(&self) -> usize {
        self.total.half_width()
    }
}

/// Runs the walk, handing every state (including the initial one) to `visit`.
///
/// Only the current state is retained, so this is the streaming form of
/// [`evolve`].
pub fn evolve_with<F>(config: &WalkConfig, mut visit: F) -> Result<WalkState>
where
    F: FnMut(&WalkState) -> Result<()>,
{
    let mut state = initialize(config)?;
    visit(&state)?;
    for n in 0..config.steps {
        let theta = config.schedule.phase_at(n, config.step_params.time_step)?;
        state.step(theta);
        visit(&state)?;
    }
    Ok(state)
}

/// Runs the walk and keeps every probability row.
pub fn evolve(config: &WalkConfig) -> Result<SpacetimeRecord> {
    // Surface exhaustion before doing any work.
    if let PhaseSchedule::Tabulated { table } = &config.schedule {
        if config.steps > table.len() {
            return Err(Error::ScheduleExhausted {
                index: table.len(),
                len: table.len(),
            });
        }
    }
    let reach = config
        .initial
        .iter()
        .map(|(m, _)| m.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let half_width = reach + config.steps;
    let mut record = SpacetimeRecord {
        total: ProbabilityGrid::new(half_width),
        right: ProbabilityGrid::new(half_width),
        left: ProbabilityGrid::new(half_width),
    };
    evolve_with(config, |state| {
        let p = state.probabilities();
        debug_assert_eq!(p.half_width, half_width);
        record.total.push_row(&p.total);
        record.right.push_row(&p.right);
        record.left.push_row(&p.left);
        Ok(())
    })?;
    Ok(record)
}

/// For every row, the positions of the `k` largest local maxima.
///
/// Neighbours are taken two sites away: a walk started on one site occupies a
/// single parity class per step, so immediate neighbours are always zero.
/// Runs of equal values (such as the pair at m = ±1 of a symmetric row) count
/// as one plateau whose members are all peaks.
/// Ordering is by value (descending), then smaller |m|, then negative m first.
pub fn peak_trails(grid: &ProbabilityGrid, k: usize) -> Vec<Vec<i64>> {
    grid.iter_rows()
        .map(|row| row_peaks(row, grid.half_width(), k))
        .collect()
}

pub(crate) fn row_peaks(row: &[f64], half_width: usize, k: usize) -> Vec<i64> {
    let at = |j: isize| -> f64 {
        if j < 0 || j as usize >= row.len() {
            0.0
        } else {
            row[j as usize]
        }
    };
    // Walk each parity sublattice; a run of equal values higher than both
    // outer neighbours is a plateau and every member counts as a peak.
    let mut peaks: Vec<(f64, i64)> = Vec::new();
    let len = row.len() as isize;
    for start in 0..2 {
        let mut j = start;
        while j < len {
            let v = row[j as usize];
            let mut end = j;
            while end + 2 < len && row[(end + 2) as usize] == v {
                end += 2;
            }
            if v > 0.0 && v > at(j - 2) && v > at(end + 2) {
                peaks.extend((j..=end).step_by(2).map(|i| (v, i as i64 - half_width as i64)));
            }
            j = end + 2;
        }
    }
    peaks.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.abs().cmp(&b.1.abs()))
            .then(a.1.cmp(&b.1))
    });
    peaks.truncate(k);
    peaks.into_iter().map(|(_, m)| m).collect()
}
