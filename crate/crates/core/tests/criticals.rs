use proptest::prelude::*;
use qgpwave::criticals::*;
use qgpwave::observables::{
    dp_dc_closed, energy_closed, energy_quadrature, momentum_closed, EnergyForm,
};
use qgpwave::profiles::{black_profile, Grid};
use qgpwave::regions::{Params, SQRT2};
use std::f64::consts::PI;

fn mom(c: f64, k: f64) -> f64 {
    momentum_closed(Params::new(c, k).unwrap()).unwrap()
}

fn en(c: f64, k: f64) -> f64 {
    energy_closed(Params::new(c, k).unwrap()).unwrap()
}

#[test]
fn c_tilde_is_where_momentum_turns() {
    // Finite differences of the momentum as an oracle independent of the p' formula.
    let ct = c_tilde(-50.0).unwrap();
    let slope = |c: f64| (mom(c + 1e-6, -50.0) - mom(c - 1e-6, -50.0)) / 2e-6;
    assert!(slope(ct - 1e-3) > 0.0);
    assert!(slope(ct + 1e-3) < 0.0);
    // Uniqueness on a 1000-point grid.
    let signs: Vec<bool> = (1..1000)
        .map(|i| {
            dp_dc_closed(Params::new(SQRT2 * i as f64 / 1000.0, -50.0).unwrap()).unwrap() > 0.0
        })
        .collect();
    assert_eq!(signs.windows(2).filter(|w| w[0] != w[1]).count(), 1);
}

#[test]
fn c_star_balances_energy() {
    for &k in &[-5.0, -10.0, -50.0] {
        let cs = c_star(k).unwrap();
        let ct = c_tilde(k).unwrap();
        assert!(0.0 < ct && ct < cs && cs < SQRT2);
        assert!((en(cs, k) - e_black(k).unwrap()).abs() < 1e-8);
        assert!(q_star(k).unwrap() > PI / 2.0);
        assert!((q_star(k).unwrap() - mom(cs, k)).abs() < 1e-12);
    }
}

#[test]
fn black_energy_matches_profile_quadrature() {
    for &k in &[-3.0, -50.0] {
        let prof = black_profile(k, Grid::new(60.0, 1e-3).unwrap()).unwrap();
        let q = energy_quadrature(&prof, EnergyForm::TravelingWave).unwrap();
        let e = e_black(k).unwrap();
        assert!((q - e).abs() < 1e-6, "kappa {k}: {q} vs {e}");
    }
}

#[test]
fn speed_of_momentum_endpoints() {
    for &k in &[-1.0, -50.0] {
        let cv = critical_values(k).unwrap();
        assert_eq!(speed_of_momentum(k, 0.0).unwrap(), SQRT2);
        assert!((speed_of_momentum(k, cv.q_star).unwrap() - cv.c_star).abs() < 1e-8);
        assert!(speed_of_momentum(k, cv.q_star * 1.01).is_err());
        assert!(speed_of_momentum(k, -0.1).is_err());
    }
}

#[test]
fn momentum_decreases_above_kappa0() {
    for &k in &[-0.1, -1.0, -3.0, -3.6] {
        let vals: Vec<f64> = (1..200).map(|i| mom(SQRT2 * i as f64 / 200.0, k)).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "kappa {k}");
        assert!(vals[0] < PI / 2.0);
    }
}

#[test]
fn diagram_has_a_cusp_only_below_kappa0() {
    let flips = |k: f64| {
        let d = energy_momentum_diagram(k, 400).unwrap();
        let dp: Vec<f64> = d.windows(2).map(|w| w[1].2 - w[0].2).collect();
        dp.windows(2)
            .filter(|w| w[0].signum() != w[1].signum())
            .count()
    };
    assert_eq!(flips(-50.0), 1);
    assert_eq!(flips(-3.0), 0);
    // At the cusp both dE and dp change sign together.
    let d = energy_momentum_diagram(-50.0, 400).unwrap();
    for w in d.windows(3) {
        let (de1, dp1) = (w[1].1 - w[0].1, w[1].2 - w[0].2);
        let (de2, dp2) = (w[2].1 - w[1].1, w[2].2 - w[1].2);
        assert_eq!(de1.signum() != de2.signum(), dp1.signum() != dp2.signum());
    }
}

#[test]
fn min_curve_properties() {
    for &k in &[-1.0, -10.0, -50.0] {
        let cv = critical_values(k).unwrap();
        let n = 200;
        let qs: Vec<f64> = (0..=n)
            .map(|i| 2.0 * cv.q_star * i as f64 / n as f64)
            .collect();
        let pts = min_curve(k, &qs).unwrap();
        for p in &pts {
            if p.q > 0.0 {
                assert!(p.e_min < SQRT2 * p.q);
            }
            if p.q > cv.q_star {
                assert_eq!(p.e_min, cv.e_black);
                assert!(p.c.is_none());
            }
        }
        assert_eq!(pts[0].e_min, 0.0);
        for w in pts.windows(2) {
            assert!((w[1].e_min - w[0].e_min).abs() <= SQRT2 * (w[1].q - w[0].q) + 1e-12);
            assert!(w[1].e_min >= w[0].e_min - 1e-12);
        }
        for w in pts.windows(3) {
            assert!(
                w[0].e_min - 2.0 * w[1].e_min + w[2].e_min <= 1e-10,
                "kappa {k} at q {}",
                w[1].q
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn momentum_round_trip(t in 0.0f64..1.0, which in 0usize..3) {
        let k = [-1.0, -10.0, -50.0][which];
        let qs = q_star(k).unwrap();
        let q = t * qs;
        let c = speed_of_momentum(k, q).unwrap();
        let back = if q == 0.0 { 0.0 } else { mom(c, k) };
        prop_assert!((back - q).abs() < 1e-9);
    }
}
