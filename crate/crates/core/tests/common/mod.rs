//! Reference implementations shared by the integration tests. None of them
//! call into the library's stepping or special-function code.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qwalk::schedule::PhaseSchedule;
use qwalk::special::integrate_adaptive;
use qwalk::walk::WalkConfig;

pub const OMEGA_REF: f64 = PI / 60.0;

/// The three linear-coin configurations of the reference experiment:
/// loop-line, crossing and touching.
pub fn reference_configs() -> [(&'static str, f64); 3] {
    [("A", PI / 4.0), ("B", 0.0), ("C", 1.5 * PI)]
}

pub fn reference_walk(theta0: f64, steps: usize) -> WalkConfig {
    WalkConfig::new(steps, PhaseSchedule::linear(theta0, OMEGA_REF).unwrap())
}

/// Dense `(R, L)` amplitudes on a periodic ring of `2·half + 1` sites,
/// index `2·(m + half) + {0 for R, 1 for L}`.
pub struct DenseState {
    pub half: usize,
    pub psi: Vec<Complex64>,
}

impl DenseState {
    pub fn amplitude(&self, m: i64) -> (Complex64, Complex64) {
        let i = (m + self.half as i64) as usize;
        (self.psi[2 * i], self.psi[2 * i + 1])
    }
}

type Matrix = Vec<Vec<Complex64>>;

fn zeros(d: usize) -> Matrix {
    vec![vec![Complex64::new(0.0, 0.0); d]; d]
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut c = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// Builds the full one-step unitary `S·C(θ)` on the ring.
fn step_matrix(half: usize, theta: f64) -> Matrix {
    let sites = 2 * half + 1;
    let d = 2 * sites;
    let (c, s) = (theta.cos(), theta.sin());
    let mut coin = zeros(d);
    for i in 0..sites {
        coin[2 * i][2 * i] = c.into();
        coin[2 * i][2 * i + 1] = s.into();
        coin[2 * i + 1][2 * i] = s.into();
        coin[2 * i + 1][2 * i + 1] = (-c).into();
    }
    let mut shift = zeros(d);
    for i in 0..sites {
        let right = (i + 1) % sites;
        let left = (i + sites - 1) % sites;
        shift[2 * right][2 * i] = 1.0.into();
        shift[2 * left + 1][2 * i + 1] = 1.0.into();
    }
    matmul(&shift, &coin)
}

/// Applies the product of full step matrices `Π_n S·C(θ_n)` to a state at
/// the origin.
pub fn brute_force(phases: &[f64], r0: Complex64, l0: Complex64) -> DenseState {
    let half = phases.len().max(1);
    let d = 2 * (2 * half + 1);
    let mut total = zeros(d);
    for (i, row) in total.iter_mut().enumerate() {
        row[i] = 1.0.into();
    }
    for &theta in phases {
        total = matmul(&step_matrix(half, theta), &total);
    }
    let mut psi0 = vec![Complex64::new(0.0, 0.0); d];
    psi0[2 * half] = r0;
    psi0[2 * half + 1] = l0;
    let psi = total.iter().map(|row| row.iter().zip(&psi0).map(|(a, b)| a * b).sum()).collect();
    DenseState { half, psi }
}

/// Straightforward constant-coin walk, written independently of the library.
pub fn constant_coin_walk(theta: f64, steps: usize, r0: Complex64, l0: Complex64) -> DenseState {
    let half = steps.max(1);
    let sites = 2 * half + 1;
    let (c, s) = (theta.cos(), theta.sin());
    let mut r = vec![Complex64::new(0.0, 0.0); sites];
    let mut l = r.clone();
    r[half] = r0;
    l[half] = l0;
    for _ in 0..steps {
        let mut nr = vec![Complex64::new(0.0, 0.0); sites];
        let mut nl = nr.clone();
        for i in 0..sites {
            let (a, b) = (r[i], l[i]);
            if i + 1 < sites {
                nr[i + 1] += c * a + s * b;
            }
            if i > 0 {
                nl[i - 1] += s * a - c * b;
            }
        }
        r = nr;
        l = nl;
    }
    let psi = r.into_iter().zip(l).flat_map(|(a, b)| [a, b]).collect();
    DenseState { half, psi }
}

/// Ai(x) from `(1/2π) ∫ exp(i(t³/3 + x t)) dt` along the line Im t = η:
///
/// `Ai(x) = (1/π) ∫₀^∞ exp(η³/3 − xη − ηt²) cos(t³/3 − η²t + xt) dt`.
///
/// η = √x passes through the saddle for x > 1; η = 1/|x| for x < −1 keeps
/// the envelope below e^{4/3}, so there is no catastrophic cancellation.
pub fn airy_oracle(x: f64) -> f64 {
    let eta = if x > 1.0 {
        x.sqrt()
    } else if x < -1.0 {
        1.0 / x.abs()
    } else {
        1.0
    };
    let scale = eta.powi(3) / 3.0 - x * eta;
    let integrand = |t: f64| (scale - eta * t * t).exp() * (t * t * t / 3.0 - eta * eta * t + x * t).cos();
    // The envelope is below e^{scale − 40} beyond this point.
    let upper = (40.0 / eta).sqrt();
    let tol = 1e-15 * scale.exp().max(1e-300);
    integrate_adaptive(integrand, 0.0, upper, tol).unwrap() / PI
}

/// Bessel J_n(x) from `(1/π) ∫₀^π cos(nt − x sin t) dt`.
pub fn bessel_integral_oracle(n: u32, x: f64) -> f64 {
    let n = n as f64;
    integrate_adaptive(|t| (n * t - x * t.sin()).cos(), 0.0, PI, 1e-14).unwrap() / PI
}

/// Ascending power series for J_n(x), accumulated term by term.
pub fn bessel_series_oracle(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = (0..n).fold(1.0, |acc, k| acc * half / (k + 1) as f64);
    let mut sum = term;
    for j in 1..200 {
        term *= -half * half / (j as f64 * (j as f64 + n as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Quadrature reference for `∫₀^τ cos θ(τ′) dτ′`.
pub fn velocity_oracle(schedule: &PhaseSchedule, tau: f64) -> f64 {
    let phase = |t: f64| match *schedule {
        PhaseSchedule::Constant { theta0 } => theta0,
        PhaseSchedule::Linear { theta0, omega } => theta0 + omega * t,
        PhaseSchedule::Sinusoidal { theta0, omega } => theta0 * (omega * t).sin(),
        PhaseSchedule::Tabulated { .. } => unimplemented!("piecewise constant"),
    };
    integrate_adaptive(|t| phase(t).cos(), 0.0, tau, 1e-12).unwrap()
}

/// Least-squares slope of `(x, y)` pairs.
pub fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
