mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use common::{constant_coin_walk, velocity_oracle};
use qwalk::analytic::{analytic_amplitude, analytic_distribution, AnalyticParams, InternalState, SeedSite, Seeds};
use qwalk::io::csv::{read_grid, write_grid};
use qwalk::io::parse_angle;
use qwalk::schedule::{coin_matrix, PhaseSchedule};
use qwalk::trajectory::{classify_chain, Trajectory};
use qwalk::walk::{evolve_with, ProbabilityGrid, Spinor, WalkConfig, WalkState};

fn angle() -> impl Strategy<Value = f64> {
    -2.0 * PI..2.0 * PI
}

fn schedule() -> impl Strategy<Value = PhaseSchedule> {
    prop_oneof![
        angle().prop_map(|t| PhaseSchedule::constant(t).unwrap()),
        (angle(), -0.5..0.5f64).prop_map(|(t, w)| PhaseSchedule::linear(t, w).unwrap()),
        (angle(), -0.5..0.5f64).prop_map(|(t, w)| PhaseSchedule::sinusoidal(t, w).unwrap()),
        prop::collection::vec(angle(), 1..40).prop_map(|t| PhaseSchedule::tabulated(t).unwrap()),
    ]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn unit_spinor() -> impl Strategy<Value = Spinor> {
    (complex(), complex())
        .prop_filter("non-zero", |(a, b)| a.norm_sqr() + b.norm_sqr() > 1e-3)
        .prop_map(|(a, b)| {
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            Spinor::new(a / n, b / n)
        })
}

fn final_state(config: &WalkConfig) -> WalkState {
    evolve_with(config, |_| Ok(())).unwrap()
}

fn table_len(schedule: &PhaseSchedule) -> Option<usize> {
    match schedule {
        PhaseSchedule::Tabulated { table } => Some(table.len()),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coin_is_orthogonal_with_unit_determinant(theta in -100.0..100.0f64) {
        let coin = coin_matrix(theta);
        let g = coin.gram();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((v - want).abs() <= 1e-14);
            }
        }
        prop_assert!((coin.determinant() + 1.0).abs() <= 1e-14);
    }

    #[test]
    fn linear_velocity_integral_is_additive(theta0 in angle(), omega in -0.5..0.5f64, t1 in 0.0..200.0f64, t2 in 0.0..200.0f64) {
        let whole = PhaseSchedule::linear(theta0, omega).unwrap();
        let shifted = PhaseSchedule::linear(theta0 + omega * t1, omega).unwrap();
        let direct = whole.velocity_integral(t1 + t2).unwrap();
        let split = whole.velocity_integral(t1).unwrap() + shifted.velocity_integral(t2).unwrap();
        prop_assert!((direct - split).abs() <= 1e-10, "{direct} vs {split}");
    }

    #[test]
    fn velocity_integral_is_bounded_by_time(s in schedule(), frac in 0.0..1.0f64) {
        let tau = match table_len(&s) {
            Some(n) => frac * n as f64,
            None => frac * 400.0,
        };
        let i = s.velocity_integral(tau).unwrap();
        prop_assert!(i.abs() <= tau * (1.0 + 1e-12) + 1e-12, "|I({tau})| = {}", i.abs());
    }

    #[test]
    fn velocity_integral_matches_quadrature(theta0 in angle(), omega in -0.5..0.5f64, tau in 0.0..300.0f64) {
        for s in [PhaseSchedule::linear(theta0, omega).unwrap(), PhaseSchedule::sinusoidal(theta0, omega).unwrap()] {
            let got = s.velocity_integral(tau).unwrap();
            let want = velocity_oracle(&s, tau);
            prop_assert!((got - want).abs() <= 1e-8, "{s:?} at {tau}: {got} vs {want}");
        }
    }

    #[test]
    fn zero_frequency_is_exactly_linear_in_time(theta0 in angle(), tau in 0.0..1e4f64) {
        let s = PhaseSchedule::linear(theta0, 0.0).unwrap();
        prop_assert_eq!(s.velocity_integral(tau).unwrap(), tau * theta0.cos());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_is_unitary(s in schedule(), psi in unit_spinor(), steps in 0usize..1000) {
        let steps = table_len(&s).map_or(steps, |n| steps.min(n));
        let mut worst = 0.0f64;
        let config = WalkConfig::new(steps, s).with_initial(vec![(0, psi)]);
        evolve_with(&config, |state| {
            worst = worst.max((state.norm_sqr() - 1.0).abs());
            Ok(())
        }).unwrap();
        prop_assert!(worst <= 1e-10, "norm drift {worst:e}");
    }

    #[test]
    fn support_and_parity_are_exact(s in schedule(), psi in unit_spinor(), steps in 0usize..120) {
        let steps = table_len(&s).map_or(steps, |n| steps.min(n));
        let config = WalkConfig::new(steps, s).with_initial(vec![(0, psi)]);
        evolve_with(&config, |state| {
            let n = state.step_index() as i64;
            let hw = state.half_width() as i64;
            for m in -hw..=hw {
                if m.abs() > n || (m + n).rem_euclid(2) == 1 {
                    let a = state.amplitude(m);
                    assert_eq!(a.r, Complex64::new(0.0, 0.0), "R at m = {m}, n = {n}");
                    assert_eq!(a.l, Complex64::new(0.0, 0.0), "L at m = {m}, n = {n}");
                }
            }
            Ok(())
        }).unwrap();
    }

    #[test]
    fn evolution_is_linear(
        theta0 in angle(), omega in -0.5..0.5f64,
        a in complex(), b in complex(),
        p in unit_spinor(), q in unit_spinor(), offset in -3i64..=3,
        steps in 0usize..30,
    ) {
        let s = PhaseSchedule::linear(theta0, omega).unwrap();
        let run = |initial: Vec<(i64, Spinor)>| {
            let state = WalkState::from_sites(&initial, steps);
            let mut state = state;
            for n in 0..steps {
                state.step(s.phase_at(n, 1.0).unwrap());
            }
            state
        };
        let one = run(vec![(0, p)]);
        let two = run(vec![(offset, q)]);
        let mix = if offset == 0 {
            run(vec![(0, Spinor::new(a * p.r + b * q.r, a * p.l + b * q.l))])
        } else {
            run(vec![(0, Spinor::new(a * p.r, a * p.l)), (offset, Spinor::new(b * q.r, b * q.l))])
        };
        let hw = steps as i64 + 3;
        for m in -hw..=hw {
            let (x, y, z) = (one.amplitude(m), two.amplitude(m), mix.amplitude(m));
            prop_assert!((a * x.r + b * y.r - z.r).norm() <= 1e-12);
            prop_assert!((a * x.l + b * y.l - z.l).norm() <= 1e-12);
        }
    }

    #[test]
    fn static_coin_matches_independent_walk(theta0 in angle(), psi in unit_spinor()) {
        let steps = 50;
        let config = WalkConfig::new(steps, PhaseSchedule::linear(theta0, 0.0).unwrap())
            .with_initial(vec![(0, psi)]);
        let state = final_state(&config);
        let reference = constant_coin_walk(theta0, steps, psi.r, psi.l);
        for m in -(steps as i64)..=steps as i64 {
            let a = state.amplitude(m);
            let (r, l) = reference.amplitude(m);
            prop_assert!((a.r - r).norm() <= 1e-13 && (a.l - l).norm() <= 1e-13, "m = {m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trajectory_branches_are_antisymmetric_and_subluminal(s in schedule(), frac in 0.0..1.0f64) {
        let tau = match table_len(&s) {
            Some(n) => frac * n as f64,
            None => frac * 300.0,
        };
        let t = Trajectory::from_schedule(&s, &[tau], 25).unwrap();
        let sample = t.samples[0];
        prop_assert_eq!(sample.x_plus + sample.x_minus, 0.0);
        prop_assert!(sample.x_plus.abs() <= tau * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn linear_trajectory_amplitude_and_period(theta0 in angle(), omega in 0.01..1.0f64) {
        let period = 2.0 * PI / omega;
        let s = PhaseSchedule::linear(theta0, omega).unwrap();
        let taus: Vec<f64> = (0..=2000).map(|i| period * i as f64 / 2000.0).collect();
        let t = Trajectory::from_schedule(&s, &taus, 25).unwrap();
        let extreme = t.samples.iter().map(|x| x.x_plus.abs()).fold(0.0, f64::max);
        let want = taus.iter().map(|tau| ((theta0 + omega * tau).sin() - theta0.sin()).abs() / omega).fold(0.0, f64::max);
        prop_assert!((extreme - want).abs() <= 1e-10);
        let shifted: Vec<f64> = taus.iter().map(|tau| tau + period).collect();
        let later = Trajectory::from_schedule(&s, &shifted, 25).unwrap();
        for (a, b) in t.samples.iter().zip(&later.samples) {
            // Equal up to rounding of the shifted phase argument.
            prop_assert!((a.x_plus - b.x_plus).abs() <= 1e-12 * (1.0 + b.tau) / omega);
        }
    }

    #[test]
    fn classification_ignores_full_turns_and_frequency_scale(theta0 in angle(), omega in 0.001..1.0f64, scale in 0.1..10.0f64) {
        let base = classify_chain(theta0, omega).unwrap();
        prop_assert_eq!(classify_chain(theta0 + 2.0 * PI, omega).unwrap(), base);
        prop_assert_eq!(classify_chain(theta0, omega * scale).unwrap(), base);
    }

    #[test]
    fn analytic_branches_mirror(a in complex(), k in 1i64..4, xi in -20.0..20.0f64, tau in 1.0..59.0f64) {
        // Weights ½(A₀ ± A₁) with A₁ = 0 are equal for both branches and the
        // sites are placed symmetrically, so A⁺(ξ) = A⁻(−ξ).
        let site = |m| SeedSite { m, step0: a, step1: Complex64::new(0.0, 0.0) };
        let seeds = Seeds {
            right: vec![site(-k), site(0), site(k)],
            left: vec![],
        };
        let params = AnalyticParams { w: 0.0, grid: vec![], times: vec![], seeds };
        let s = PhaseSchedule::linear(0.0, PI / 60.0).unwrap();
        let (plus, _) = analytic_amplitude(xi, tau, InternalState::R, &params, &s).unwrap();
        let (_, minus) = analytic_amplitude(-xi, tau, InternalState::R, &params, &s).unwrap();
        prop_assert!((plus - minus).norm() <= 1e-9, "{plus} vs {minus}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn analytic_probabilities_add_up(theta0 in angle(), omega in 0.01..0.2f64, w in 0.0..1.0f64, psi in unit_spinor()) {
        let config = WalkConfig::new(30, PhaseSchedule::linear(theta0, omega).unwrap()).with_initial(vec![(0, psi)]);
        let seeds = qwalk::analytic::seed_from_simulation(&config).unwrap();
        let mut params = AnalyticParams::for_steps(seeds, 30, 1.0).unwrap();
        params.w = w;
        let field = analytic_distribution(&params, &config.schedule).unwrap();
        for ((t, r), l) in field.total.iter().zip(&field.right).zip(&field.left) {
            match (t, r, l) {
                (Some(t), Some(r), Some(l)) => {
                    prop_assert!(*t >= 0.0 && *r >= 0.0 && *l >= 0.0);
                    prop_assert!((t - (r + l)).abs() <= 1e-12 * t.max(1.0));
                }
                (None, None, None) => {}
                other => prop_assert!(false, "inconsistent cell {other:?}"),
            }
        }
    }

    #[test]
    fn csv_round_trip(half in 0usize..6, rows in 1usize..6, seed in prop::collection::vec(0.0..1.0f64, 66)) {
        let width = 2 * half + 1;
        let data: Vec<Vec<f64>> = (0..rows)
            .map(|n| (0..width).map(|c| seed[(n * width + c) % seed.len()].powi(7)).collect())
            .collect();
        let grid = ProbabilityGrid::from_rows(half, data).unwrap();
        let back = read_grid(&write_grid(&grid)).unwrap();
        prop_assert_eq!(back, grid);
    }

    #[test]
    fn angle_literals_round_trip(k in -12i32..=12, d in 1u32..=180) {
        let text = format!("{k}pi/{d}");
        let want = k as f64 * PI / d as f64;
        prop_assert_eq!(parse_angle(&text), Some(want));
        prop_assert_eq!(parse_angle(&format!("{want}")), Some(want));
    }
}
