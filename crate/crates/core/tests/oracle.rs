mod common;

use modqed::model::analytic_constant_detuning;
use modqed::oracle::{compare_series, evolve, OracleError};
use modqed::solvers::SolverConfig;
use modqed::{DetuningProfile, SystemParams};

use common::{grid, max_abs_diff, physics, regular_series, FIGURES};

#[test]
fn fig1_oracle_follows_the_cosine() {
    let (p, profile) = physics("fig1");
    let (dt, n) = grid(&p, &profile, 50.0);
    let run = evolve(&p, &profile, 0.0, dt, n).unwrap();
    let exact: Vec<f64> = run.series.times().map(|t| 0.5 * (4.0 * t).cos()).collect();
    let dev = max_abs_diff(&run.series.sz(), &exact);
    assert!(dev <= 1e-8, "deviation {dev:e}");
}

#[test]
fn initial_expectations() {
    let (p, profile) = physics("fig2");
    let run = evolve(&p, &profile, 0.0, 0.1, 2).unwrap();
    assert_eq!(run.series.state(0), &[0.5, 0.0, 0.0]);
}

#[test]
fn half_rabi_period_with_constant_detuning() {
    let p = SystemParams::new(2.5, 1.0, 1.0).unwrap();
    let omega = p.rabi_frequency();
    let half = std::f64::consts::PI / omega;
    let run = evolve(&p, &DetuningProfile::Constant, 0.0, half, 2).unwrap();
    let sz = run.series.state(1)[0];
    assert!((sz - (0.5 - 12.0 / 13.0)).abs() <= 1e-9, "{sz}");
    assert!((sz + 0.42308).abs() < 1e-5);
}

#[test]
fn closed_form_agrees_with_oracle() {
    let p = SystemParams::new(2.5, 1.0, 1.0).unwrap();
    let profile = DetuningProfile::Constant;
    let (dt, n) = grid(&p, &profile, 100.0);
    let run = evolve(&p, &profile, 0.0, dt, n).unwrap();
    let closed: Vec<f64> = run.series.times().map(|t| analytic_constant_detuning(&p, t)).collect();
    assert!(max_abs_diff(&run.series.sz(), &closed) <= 1e-8);
}

#[test]
fn norm_and_bloch_conservation_on_every_preset() {
    for name in FIGURES {
        let (p, profile) = physics(name);
        let (dt, n) = grid(&p, &profile, 100.0);
        let run = evolve(&p, &profile, 0.0, dt, n).unwrap();
        assert!(run.max_norm_drift <= 1e-8, "{name}: {:e}", run.max_norm_drift);
        let scale = p.g * p.g * (p.capital_n + 0.5);
        for y in run.series.states() {
            let b = 4.0 * y[0] * y[0] + (y[1] * y[1] + y[2] * y[2]) / scale;
            assert!((b - 1.0).abs() <= 1e-9, "{name}: B = {b}");
        }
    }
}

#[test]
fn oracle_satisfies_the_regular_equations() {
    // Fine grid and a fourth-order stencil so the differencing error stays
    // well below the residual bound.
    let (p, profile) = physics("fig2");
    let h = 1e-3;
    let n = 10_001;
    let run = evolve(&p, &profile, 0.0, h, n).unwrap();
    let k = p.coupling_constant();
    let s = &run.series;
    let deriv = |i: usize, j: usize| {
        (-s.state(j + 2)[i] + 8.0 * s.state(j + 1)[i] - 8.0 * s.state(j - 1)[i]
            + s.state(j - 2)[i])
            / (12.0 * h)
    };
    let mut worst: f64 = 0.0;
    for j in 2..n - 2 {
        let [sz, d, c] = [s.state(j)[0], s.state(j)[1], s.state(j)[2]];
        let delta = profile.detuning(&p, s.time(j));
        let r = [
            deriv(0, j) - d,
            deriv(1, j) - (delta * c - k * sz),
            deriv(2, j) + delta * d,
        ];
        worst = r.iter().fold(worst, |m, v| m.max(v.abs()));
    }
    assert!(worst <= 1e-5, "residual {worst:e}");
}

#[test]
fn regular_formulation_matches_oracle_on_fig5() {
    let (p, profile) = physics("fig5");
    let (dt, n) = grid(&p, &profile, 100.0);
    let reg = regular_series(&p, &profile, dt, n, &SolverConfig::default());
    let run = evolve(&p, &profile, 0.0, dt, n).unwrap();
    assert!(compare_series(&reg, &run.series).unwrap() <= 1e-5);
}

#[test]
fn non_fock_excitation_is_rejected() {
    let p = SystemParams::new(2.2, 1.0, 0.0).unwrap();
    assert!(matches!(
        evolve(&p, &DetuningProfile::Constant, 0.0, 0.1, 4),
        Err(OracleError::NonFockN(_))
    ));
}

#[test]
fn oracle_is_deterministic() {
    let (p, profile) = physics("fig6");
    let a = evolve(&p, &profile, 0.0, 0.05, 256).unwrap();
    let b = evolve(&p, &profile, 0.0, 0.05, 256).unwrap();
    assert_eq!(a, b);
}
