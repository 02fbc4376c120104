use qgpwave::evolve::*;
use qgpwave::observables::{energy_closed, momentum_closed};
use qgpwave::profiles::{soliton_profile, Grid, WaveProfile};
use qgpwave::regions::Params;
use std::f64::consts::PI;

fn reference(c: f64, k: f64, half: f64) -> WaveProfile {
    soliton_profile(Params::new(c, k).unwrap(), Grid::new(half, 5e-3).unwrap()).unwrap()
}

fn l2(xs: &[f64]) -> f64 {
    xs.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Relative discrete L2 error of the evolved density against the exact translate.
fn translate_error(k: f64, half: f64, h: f64, t_end: f64) -> (f64, EvolutionReport) {
    let c = 1.0;
    let prof = reference(c, k, half + 15.0);
    let grid = Grid::new(half, h).unwrap();
    let s = FieldState::from_profile(&prof, grid).unwrap();
    let (fin, rep) = run(
        s,
        RunOptions {
            t_end,
            dt: None,
            record_every: t_end,
        },
        None,
    )
    .unwrap();
    let exact = FieldState::from_profile_shifted(&prof, grid, c * t_end).unwrap();
    let diff: Vec<f64> = fin.rho.iter().zip(&exact.rho).map(|(a, b)| a - b).collect();
    let dev: Vec<f64> = exact.rho.iter().map(|r| 1.0 - r).collect();
    (l2(&diff) / l2(&dev), rep)
}

#[test]
fn from_profile_values() {
    let prof = reference(1.0, 0.0, 40.0);
    let s = FieldState::from_profile(&prof, Grid::new(30.0, 0.05).unwrap()).unwrap();
    let mid = s.len() / 2;
    assert!((s.v[mid] - 0.5).abs() < 1e-12);
    assert!((s.rho[mid] - 0.5).abs() < 1e-12);
    // Tail: eta ~ e^{-|x|} at c = 1, kappa = 0.
    assert!((1.0 - s.rho[0]).abs() < 1e-11);
    let t = FieldState::from_profile(
        &WaveProfile::trivial(
            Params::new(1.0, -1.0).unwrap(),
            Grid::new(10.0, 0.1).unwrap(),
        ),
        Grid::new(5.0, 0.1).unwrap(),
    )
    .unwrap();
    assert!(t.rho.iter().all(|&r| r == 1.0) && t.v.iter().all(|&v| v == 0.0));
    assert_eq!(t.observables(), (0.0, 0.0));
}

#[test]
fn observables_match_closed_forms() {
    for &k in &[-1e-8, -1.0] {
        let p = Params::new(1.0, k).unwrap();
        let s = FieldState::from_profile(&reference(1.0, k, 40.0), Grid::new(30.0, 0.05).unwrap())
            .unwrap();
        let (e, m) = s.observables();
        assert!((e - energy_closed(p).unwrap()).abs() < 1e-4, "{e}");
        assert!((m - momentum_closed(p).unwrap()).abs() < 1e-4, "{m}");
    }
}

#[test]
fn energy_responds_to_velocity_by_the_quadrature_weight() {
    let s = FieldState::from_profile(&reference(1.0, -1.0, 40.0), Grid::new(30.0, 0.05).unwrap())
        .unwrap();
    let i = s.len() / 2 + 7;
    let eps = 1e-3;
    let mut t = s.clone();
    t.v[i] += eps;
    let predicted = s.h * 0.5 * s.rho[i] * ((s.v[i] + eps).powi(2) - s.v[i].powi(2));
    let got = t.observables().0 - s.observables().0;
    assert!((got - predicted).abs() < 1e-15, "{got} vs {predicted}");
}

#[test]
fn translate_test_and_conservation() {
    for &k in &[-1e-8, -1.0] {
        let start = std::time::Instant::now();
        let (err, rep) = translate_error(k, 30.0, 0.05, 1.0);
        eprintln!(
            "kappa {k}: err {err:e} drift E {:e} p {:e} in {:?}",
            rep.max_energy_drift(),
            rep.max_momentum_drift(),
            start.elapsed()
        );
        assert!(err < 1e-2);
        assert!(rep.max_energy_drift() < 1e-4);
        assert!(rep.max_momentum_drift() < 1e-4);
    }
}

#[test]
fn translate_error_has_fourth_order() {
    // Wide domain so the sponge does not touch the exponential tails.
    let (e1, _) = translate_error(-1.0, 50.0, 0.2, 0.5);
    let (e2, _) = translate_error(-1.0, 50.0, 0.1, 0.5);
    let ratio = e1 / e2;
    eprintln!("order ratio {ratio} ({e1:e} / {e2:e})");
    assert!(ratio > 16.0 * 0.7 && ratio < 16.0 * 1.3);
}

#[test]
fn deficit_is_conserved_without_boundary_flux() {
    // Tails below 1e-11 at the sponge.
    let prof = reference(1.0, -1.0, 65.0);
    let s = FieldState::from_profile(&prof, Grid::new(50.0, 0.05).unwrap()).unwrap();
    let m0 = s.deficit();
    let (fin, _) = run(
        s,
        RunOptions {
            t_end: 1.0,
            dt: None,
            record_every: 0.5,
        },
        None,
    )
    .unwrap();
    eprintln!("deficit change {:e}", fin.deficit() - m0);
    assert!((fin.deficit() - m0).abs() < 1e-8);
}

#[test]
fn step_rejects_large_steps_and_vacuum() {
    let s = FieldState::background(-1.0, Grid::new(5.0, 0.1).unwrap()).unwrap();
    assert!(s.step(2.0 * s.stable_dt()).is_err());
    let mut bad = s.clone();
    bad.rho[20] = 1e-7;
    let e = bad.step(0.1 * bad.stable_dt());
    assert!(e.is_err());
    assert!(FieldState::background(0.2, Grid::new(5.0, 0.1).unwrap()).is_err());
}

#[test]
fn modulated_distance_self_shift_and_phase() {
    let prof = reference(1.0, -1.0, 40.0);
    let grid = Grid::new(30.0, 0.05).unwrap();
    let s = FieldState::from_profile(&prof, grid).unwrap();
    let d = modulated_distance(&s, &prof).unwrap();
    eprintln!("self {d:?}");
    assert!(d.distance < 1e-8);

    let shifted = FieldState::from_profile_shifted(&prof, grid, 0.7).unwrap();
    let d = modulated_distance(&shifted, &prof).unwrap();
    eprintln!("shift {d:?}");
    assert!((d.shift - 0.7).abs() < 1e-3);
    assert!(d.distance < 1e-6);

    // The state's phase is anchored at -L; rotating the reference moves the optimal phase by -pi/3.
    let d0 = modulated_distance(&s, &prof).unwrap();
    let rot = prof.rotated(PI / 3.0);
    let d = modulated_distance(&s, &rot).unwrap();
    let dphi = (d.phase - d0.phase + PI / 3.0).rem_euclid(2.0 * PI);
    eprintln!("phase {d:?}");
    assert!(d.distance < 1e-8);
    assert!(dphi.min(2.0 * PI - dphi) < 1e-8);
}

#[test]
fn stability_witness() {
    let p = Params::new(1.0, -1.0).unwrap();
    let grid = Grid::new(30.0, 0.05).unwrap();
    let start = std::time::Instant::now();
    let base = stability_experiment(p, 0.0, 5.0, grid, None, 0.25).unwrap();
    let pert = stability_experiment(p, 1e-3, 5.0, grid, None, 0.25).unwrap();
    eprintln!(
        "base max d {:e} drift {:e} {:e}; pert max d {:e} min rho {} drift {:e} {:e}; {:?}",
        base.max_distance(),
        base.max_energy_drift(),
        base.max_momentum_drift(),
        pert.max_distance(),
        pert.lowest_rho(),
        pert.max_energy_drift(),
        pert.max_momentum_drift(),
        start.elapsed()
    );
    assert!(pert.max_distance() < 50.0 * 1e-3);
    assert!(pert.lowest_rho() > 0.1);
    assert!(base.max_energy_drift() < 1e-4 && base.max_momentum_drift() < 1e-4);
    assert!(pert.max_energy_drift() < 1e-4 && pert.max_momentum_drift() < 1e-4);
}
