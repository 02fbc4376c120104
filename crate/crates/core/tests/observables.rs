use proptest::prelude::*;
use qgpwave::numerics::integrate;
use qgpwave::observables::*;
use qgpwave::profiles::{compacton_profile, cuspon_profile, soliton_profile, Grid, WaveProfile};
use qgpwave::regions::{Params, SQRT2};
use std::f64::consts::PI;

fn pr(c: f64, k: f64) -> Params {
    Params::new(c, k).unwrap()
}

fn gp_energy(c: f64) -> f64 {
    (2.0 - c * c).powf(1.5) / 3.0
}

fn gp_momentum(c: f64) -> f64 {
    let s = (2.0 - c * c).sqrt();
    PI / 2.0 - (c / s).atan() - 0.5 * c * s
}

#[test]
fn gp_soliton_by_quadrature() {
    let prof = soliton_profile(pr(1.0, 0.0), Grid::new(40.0, 1e-3).unwrap()).unwrap();
    let e = energy_quadrature(&prof, EnergyForm::TravelingWave).unwrap();
    let p = momentum_quadrature(&prof).unwrap();
    assert!((e - 1.0 / 3.0).abs() < 1e-4);
    assert!((p - (PI / 4.0 - 0.5)).abs() < 1e-4);
    // The polar form agrees for a traveling wave.
    let ep = energy_quadrature(&prof, EnergyForm::Polar).unwrap();
    assert!((ep - e).abs() < 1e-6, "{ep} vs {e}");
}

#[test]
fn trivial_profile_is_free() {
    let t = WaveProfile::trivial(pr(1.0, -1.0), Grid::new(10.0, 0.01).unwrap());
    assert_eq!(
        energy_quadrature(&t, EnergyForm::TravelingWave).unwrap(),
        0.0
    );
    assert_eq!(momentum_quadrature(&t).unwrap(), 0.0);
}

#[test]
fn closed_matches_quadrature_deep_d2() {
    let p = pr(1.0, -5.0);
    let prof = soliton_profile(p, Grid::new(40.0, 1e-3).unwrap()).unwrap();
    let e = energy_quadrature(&prof, EnergyForm::TravelingWave).unwrap();
    let m = momentum_quadrature(&prof).unwrap();
    assert!((e - energy_closed(p).unwrap()).abs() < 1e-6);
    assert!((m - momentum_closed(p).unwrap()).abs() < 1e-6);
}

#[test]
fn compacton_limit() {
    let c = 1.0;
    let p = pr(c, 0.5 - 1e-8);
    let e_lim = PI * (0.75 * c.powi(4) - 3.0 * c * c + 3.0) / (8.0 * SQRT2);
    let p_lim = PI * ((0.5 * c.powi(3) - 3.0 * c) / (4.0 * SQRT2) + 0.5);
    assert!((energy_closed(p).unwrap() - e_lim).abs() < 1e-5);
    assert!((momentum_closed(p).unwrap() - p_lim).abs() < 1e-5);
    // Independent check of the limits: quadrature of the compacton itself.
    let comp = compacton_profile(c, 1, Grid::new(5.0, 1e-3).unwrap()).unwrap();
    let ec = energy_quadrature(&comp, EnergyForm::TravelingWave).unwrap();
    let pc = momentum_quadrature(&comp).unwrap();
    assert!((ec - e_lim).abs() < 1e-8, "{ec} vs {e_lim}");
    assert!((pc - p_lim).abs() < 1e-8, "{pc} vs {p_lim}");
}

#[test]
fn gp_limit_from_both_sides() {
    for &c in &[0.5, 1.0, 1.3] {
        for &k in &[-1e-8, 1e-8] {
            let p = pr(c, k);
            assert!((energy_closed(p).unwrap() - gp_energy(c)).abs() < 1e-6);
            assert!((momentum_closed(p).unwrap() - gp_momentum(c)).abs() < 1e-6);
        }
    }
}

#[test]
fn momentum_at_small_speed() {
    let p = momentum_closed(pr(1e-8, -3.0)).unwrap();
    assert!((p - PI / 2.0).abs() < 1e-7);
}

#[test]
fn sonic_cuspon_constants() {
    let k: f64 = 1.0;
    let e = cuspon_energy_closed(pr(SQRT2, k)).unwrap();
    let p = cuspon_momentum_closed(pr(SQRT2, k)).unwrap();
    assert!((e - PI / 32.0).abs() < 1e-12);
    let want = PI * (2.0f64.sqrt() - 1.0).powi(2) / (4.0 * 2.0f64.sqrt());
    assert!((p - want).abs() < 1e-12);
    for &k in &[0.1f64, 0.3, 0.45, 0.7, 3.0] {
        let e = cuspon_energy_closed(pr(SQRT2, k)).unwrap();
        let p = cuspon_momentum_closed(pr(SQRT2, k)).unwrap();
        let s = (2.0 * k).sqrt();
        assert!((e - PI * (2.0 * k - 1.0).powi(2) / (32.0 * k.powf(1.5))).abs() < 1e-12);
        assert!((p - PI * (s - 1.0).powi(2) / (4.0 * s)).abs() < 1e-12);
    }
}

#[test]
fn cuspon_energy_by_intensity_quadrature() {
    // Energy as int_e^0 -y sqrt(N/q) dy, with the square-root endpoint at e removed by y = e + t^2.
    let (c, k) = (1.0, 0.4);
    let e = 1.0 - 0.5 / k;
    let dens = |y: f64| -y * ((1.0 - 2.0 * k + 2.0 * k * y) / (2.0 - c * c - 2.0 * y)).sqrt();
    let want = integrate(
        |t| dens(e + t * t) * 2.0 * t,
        0.0,
        (-e).sqrt(),
        1e-15,
        1e-14,
    )
    .unwrap();
    assert!((cuspon_energy_closed(pr(c, k)).unwrap() - want).abs() < 1e-10);
    let prof = cuspon_profile(pr(c, k), Grid::new(40.0, 1e-3).unwrap()).unwrap();
    let q = energy_quadrature(&prof, EnergyForm::TravelingWave).unwrap();
    assert!((q - want).abs() < 1e-6, "{q} vs {want}");
}

#[test]
fn cuspon_values_approach_sonic_constants() {
    for &k in &[0.2, 0.4] {
        let a = cuspon_energy_closed(pr(SQRT2 - 1e-6, k)).unwrap();
        let b = cuspon_energy_closed(pr(SQRT2, k)).unwrap();
        assert!((a - b).abs() < 1e-4);
        let a = cuspon_momentum_closed(pr(SQRT2 - 1e-6, k)).unwrap();
        let b = cuspon_momentum_closed(pr(SQRT2, k)).unwrap();
        assert!((a - b).abs() < 1e-4);
    }
    for &k in &[0.8, 2.0] {
        let a = cuspon_energy_closed(pr(SQRT2 + 1e-6, k)).unwrap();
        let b = cuspon_energy_closed(pr(SQRT2, k)).unwrap();
        assert!((a - b).abs() < 1e-4);
    }
}

#[test]
fn cuspons_vanish_at_critical_dispersion() {
    let e = cuspon_energy_closed(pr(1.0, 0.5 - 1e-7)).unwrap();
    let p = cuspon_momentum_closed(pr(1.0, 0.5 - 1e-7)).unwrap();
    assert!(e.abs() < 1e-5 && p.abs() < 1e-5, "{e} {p}");
}

#[test]
fn solitons_vanish_at_sonic_speed() {
    for &k in &[-3.0, 0.2] {
        let p = pr(SQRT2 - 1e-9, k);
        assert!(energy_closed(p).unwrap().abs() < 1e-6);
        assert!(momentum_closed(p).unwrap().abs() < 1e-6);
    }
}

#[test]
fn momentum_derivative_signs_and_differences() {
    assert!(dp_dc_closed(pr(1.0, 0.2)).unwrap() < 0.0);
    assert!(dp_dc_closed(pr(2.0, 1.0)).unwrap() > 0.0);
    let h = 1e-5;
    let fd = (momentum_closed(pr(1.0 + h, -5.0)).unwrap()
        - momentum_closed(pr(1.0 - h, -5.0)).unwrap())
        / (2.0 * h);
    let d = dp_dc_closed(pr(1.0, -5.0)).unwrap();
    assert!(((fd - d) / d).abs() < 1e-6, "{fd} vs {d}");
}

#[test]
fn momentum_derivative_convex_in_c_squared() {
    for &k in &[-0.5, -3.0, -50.0] {
        let n = 200;
        let vals: Vec<f64> = (1..n)
            .map(|i| {
                let c2 = 2.0 * i as f64 / n as f64;
                dp_dc_closed(pr(c2.sqrt(), k)).unwrap()
            })
            .collect();
        for w in vals.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] > 0.0, "kappa {k}");
        }
    }
}

#[test]
fn energy_is_nonnegative_for_nonpositive_kappa() {
    for i in 1..30 {
        let c = 1.4 * i as f64 / 30.0;
        for &k in &[0.0, -0.1, -10.0] {
            assert!(energy_closed(pr(c, k)).unwrap() >= 0.0);
        }
    }
}

#[test]
fn vanishing_profile_rejected() {
    let prof = soliton_profile(pr(0.0, -1.0), Grid::new(10.0, 0.01).unwrap()).unwrap();
    assert!(matches!(
        momentum_quadrature(&prof),
        Err(qgpwave::Error::Domain(_))
    ));
    assert!(matches!(
        energy_quadrature(&prof, EnergyForm::Polar),
        Err(qgpwave::Error::Vanishing(_))
    ));
}

fn d_param(region: usize, a: f64, b: f64) -> Params {
    match region {
        0 => pr(0.05 + 1.3 * a, 0.02 + 0.46 * b),
        1 => pr(0.05 + 1.3 * a, -0.01 - 30.0 * b),
        _ => pr(1.45 + 2.0 * a, 0.52 + 3.0 * b),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn energy_derivative_is_c_times_momentum_derivative(a in 0.0f64..1.0, b in 0.0f64..1.0, r in 0usize..3) {
        let p = d_param(r, a, b);
        let de = de_dc_closed(p).unwrap();
        let dp = dp_dc_closed(p).unwrap();
        prop_assert!((de - p.c * dp).abs() < 1e-8);
        // Finite differences of the closed-form energy as the oracle.
        let h = 1e-5;
        let fd = (energy_closed(pr(p.c + h, p.kappa)).unwrap() - energy_closed(pr(p.c - h, p.kappa)).unwrap()) / (2.0 * h);
        prop_assert!((fd - de).abs() < 1e-6 * (1.0 + de.abs()), "{fd} vs {de} at {p:?}");
    }
}

#[test]
fn strong_cusps_integrate_accurately() {
    // Small kappa puts the cusp intensity far from the background (eta = -24 at 0.02).
    for &(c, k) in &[(SQRT2, 0.02), (0.3, 0.02), (1.0, 0.05)] {
        let p = pr(c, k);
        let err = |h: f64| {
            let prof = cuspon_profile(p, Grid::new(40.0, h).unwrap()).unwrap();
            let e = energy_quadrature(&prof, EnergyForm::TravelingWave).unwrap()
                - cuspon_energy_closed(p).unwrap();
            let m = momentum_quadrature(&prof).unwrap() - cuspon_momentum_closed(p).unwrap();
            e.abs().max(m.abs())
        };
        let coarse = err(2e-3);
        let fine = err(1e-3);
        assert!(fine < 1e-8, "({c}, {k}): {fine:e}");
        assert!(fine < coarse, "({c}, {k}): {coarse:e} -> {fine:e}");
    }
}
