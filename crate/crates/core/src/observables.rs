//! Energy and momentum of traveling waves.
//!
//! Closed forms come from integrating the densities against the first
//! integral in the intensity variable (see [`crate::closedforms`]); the
//! quadrature routines integrate sampled profiles and serve as an
//! independent check.

use crate::closedforms::{dp_dc_formula, energy_prim, momentum_prim, ImplicitFamily};
use crate::error::{Error, Result};
use crate::numerics::{cusp_cells, gregory};
use crate::profiles::WaveProfile;
use crate::regions::{require, Params, Region};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How a set of observables was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// Energy, momentum and their speed derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "p")]
    pub momentum: f64,
    /// Only available for smooth solitons.
    #[serde(rename = "dE_dc")]
    pub de_dc: Option<f64>,
    pub dp_dc: Option<f64>,
    pub method: Method,
}

/// Which energy functional to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyForm {
    /// `(1/2) int eta^2`, valid for traveling waves.
    TravelingWave,
    /// `(1/8) int eta'^2 N/(1 - eta) + (1/2) int (1 - eta) theta'^2 + (1/4) int eta^2`
    /// for any nonvanishing field.
    Polar,
}

const SOLITON_REGIONS: [Region; 3] = [Region::D1, Region::D2, Region::D3];
const CUSPON_REGIONS: [Region; 4] = [Region::D1, Region::D3, Region::BMinus, Region::BPlus];

fn closed_difference(fam: &ImplicitFamily, prim: fn(&ImplicitFamily, f64) -> f64) -> f64 {
    prim(fam, 0.0) - prim(fam, fam.anchor())
}

/// Energy of the smooth soliton (the black soliton at `c = 0`).
pub fn energy_closed(p: Params) -> Result<f64> {
    require(p, &SOLITON_REGIONS, "soliton energy")?;
    Ok(closed_difference(&ImplicitFamily::soliton(p)?, energy_prim))
}

/// Momentum of the smooth soliton. At `c = 0` this returns the limit
/// `p(0+) = pi/2`; the black soliton itself has no momentum in this sense.
pub fn momentum_closed(p: Params) -> Result<f64> {
    require(p, &SOLITON_REGIONS, "soliton momentum")?;
    if p.c == 0.0 {
        return Ok(0.5 * PI);
    }
    Ok(closed_difference(
        &ImplicitFamily::soliton(p)?,
        momentum_prim,
    ))
}

/// Energy of the cuspon.
pub fn cuspon_energy_closed(p: Params) -> Result<f64> {
    require(p, &CUSPON_REGIONS, "cuspon energy")?;
    Ok(closed_difference(&ImplicitFamily::cuspon(p)?, energy_prim))
}

/// Momentum of the cuspon.
pub fn cuspon_momentum_closed(p: Params) -> Result<f64> {
    require(p, &CUSPON_REGIONS, "cuspon momentum")?;
    Ok(closed_difference(
        &ImplicitFamily::cuspon(p)?,
        momentum_prim,
    ))
}

/// Speed derivative of the soliton momentum.
pub fn dp_dc_closed(p: Params) -> Result<f64> {
    require(p, &SOLITON_REGIONS, "momentum derivative")?;
    if p.c == 0.0 {
        return Err(Error::Domain("the momentum derivative needs c > 0".into()));
    }
    Ok(dp_dc_formula(p.c, p.kappa))
}

/// Speed derivative of the soliton energy, `c p'(c)`.
pub fn de_dc_closed(p: Params) -> Result<f64> {
    Ok(p.c * dp_dc_closed(p)?)
}

/// All closed-form observables of the smooth soliton.
pub fn soliton_observables(p: Params) -> Result<Observables> {
    Ok(Observables {
        energy: energy_closed(p)?,
        momentum: momentum_closed(p)?,
        de_dc: Some(de_dc_closed(p)?),
        dp_dc: Some(dp_dc_closed(p)?),
        method: Method::ClosedForm,
    })
}

/// Closed-form energy and momentum of the cuspon.
pub fn cuspon_observables(p: Params) -> Result<Observables> {
    Ok(Observables {
        energy: cuspon_energy_closed(p)?,
        momentum: cuspon_momentum_closed(p)?,
        de_dc: None,
        dp_dc: None,
        method: Method::ClosedForm,
    })
}

/// Whether the tails decay algebraically (sonic cuspons) rather than exponentially.
fn algebraic_tails(profile: &WaveProfile) -> bool {
    matches!(profile.params.region(), Region::BMinus | Region::BPlus)
}

/// Integral of sampled `f` over the whole line.
///
/// The grid is split at singular and nondifferentiable points. Each piece
/// uses the Gregory rule on its uniform part and, next to a split point, a
/// product rule in `|x - x0|^{1/3}` over six cells. The tails beyond the
/// grid are added from an exponential fit of the last samples, or from a
/// power-law fit for algebraically decaying profiles.
pub fn integrate_samples(profile: &WaveProfile, f: &[f64]) -> Result<f64> {
    let xs = &profile.xs;
    let n = xs.len();
    if f.len() != n || n < 16 {
        return Err(Error::Grid(
            "need at least 16 samples matching the grid".into(),
        ));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid("grid is not strictly increasing".into()));
    }
    let mut breaks: Vec<usize> = vec![0];
    for b in profile
        .singular_points
        .iter()
        .chain(&profile.nondiff_points)
    {
        if let Some(i) = xs
            .iter()
            .position(|x| (x - b).abs() <= 1e-12 * (1.0 + b.abs()))
        {
            if i > 0 && i < n - 1 {
                breaks.push(i);
            }
        }
    }
    breaks.push(n - 1);
    breaks.sort_unstable();
    breaks.dedup();

    let mut total = 0.0;
    for (k, w) in breaks.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let cusp_left = k > 0;
        let cusp_right = k + 2 < breaks.len();
        total += piece(&xs[a..=b], &f[a..=b], cusp_left, cusp_right)?;
    }
    total += tail(profile, f, true) + tail(profile, f, false);
    Ok(total)
}

fn piece(xs: &[f64], f: &[f64], cusp_left: bool, cusp_right: bool) -> Result<f64> {
    // Cells near a cusp handled in the s variable; the Gregory rule only
    // starts where the |x|^(2/3) terms have flattened out.
    const MIN_CELLS: usize = 6;
    const CUSP_SPAN: f64 = 0.3;
    let m = xs.len();
    let mut lo = 0;
    let mut hi = m - 1;
    let mut acc = 0.0;
    if cusp_left && cusp_right && m <= 2 * MIN_CELLS + 1 {
        return Err(Error::Grid(
            "too few samples between two singular points".into(),
        ));
    }
    let h = (xs[m - 1] - xs[0]).abs() / (m - 1) as f64;
    let sides = usize::from(cusp_left) + usize::from(cusp_right);
    let cells = if sides == 0 {
        0
    } else {
        ((CUSP_SPAN / h).ceil() as usize)
            .min((m - 1) / (sides + 1))
            .max(MIN_CELLS)
    };
    if cusp_left && m > cells {
        acc += cusp_cells(xs, f, cells);
        lo = cells;
    }
    if cusp_right && m > cells {
        let rx: Vec<f64> = xs[m - 1 - cells - 4.min(m - 1 - cells)..]
            .iter()
            .rev()
            .copied()
            .collect();
        let rf: Vec<f64> = f[m - 1 - cells - 4.min(m - 1 - cells)..]
            .iter()
            .rev()
            .copied()
            .collect();
        acc -= cusp_cells(&rx, &rf, cells);
        hi = m - 1 - cells;
    }
    if hi > lo {
        let h = (xs[hi] - xs[lo]) / (hi - lo) as f64;
        let uniform = xs[lo..=hi]
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-6 * h);
        if !uniform {
            return Err(Error::Grid(
                "quadrature needs a uniform grid away from singular points".into(),
            ));
        }
        acc += gregory(&f[lo..=hi], h);
    }
    Ok(acc)
}

/// Integral of `f` beyond one end of the grid.
fn tail(profile: &WaveProfile, f: &[f64], right: bool) -> f64 {
    let n = f.len();
    if algebraic_tails(profile) {
        return algebraic_tail(profile, f, right);
    }
    let (i0, i1) = if right { (n - 1, n - 11) } else { (0, 10) };
    let (x0, x1) = (profile.xs[i0].abs(), profile.xs[i1].abs());
    let (f0, f1) = (f[i0], f[i1]);
    if f0 == 0.0 || f1 == 0.0 || f0.signum() != f1.signum() || f0.abs() >= f1.abs() {
        return 0.0;
    }
    let lambda = (f1 / f0).ln() / (x0 - x1);
    f0 / lambda
}

/// Tail of an algebraically decaying `f`, modeled as `sum_{k=4}^{9} a_k (X/x)^k`
/// through six samples on `0.5 X <= |x| <= X` and integrated exactly.
fn algebraic_tail(profile: &WaveProfile, f: &[f64], right: bool) -> f64 {
    const POWERS: [i32; 6] = [4, 5, 6, 7, 8, 9];
    let xs = &profile.xs;
    let n = xs.len();
    let x_end = if right { xs[n - 1] } else { xs[0] };
    let big = x_end.abs();
    let mut a = [[0.0; 6]; 6];
    let mut b = [0.0; 6];
    for (row, r) in [1.0, 0.9, 0.8, 0.7, 0.6, 0.5].iter().enumerate() {
        let i = xs.partition_point(|&x| x < r * x_end).min(n - 1);
        let t = big / xs[i].abs();
        for (col, &k) in POWERS.iter().enumerate() {
            a[row][col] = t.powi(k);
        }
        b[row] = f[i];
    }
    match solve(a, b) {
        Some(coef) => {
            big * coef
                .iter()
                .zip(POWERS)
                .map(|(c, k)| c / (k - 1) as f64)
                .sum::<f64>()
        }
        None => 0.0,
    }
}

/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..N {
            let m = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let s: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Energy of a sampled profile.
pub fn energy_quadrature(profile: &WaveProfile, form: EnergyForm) -> Result<f64> {
    let k = profile.params.kappa;
    match form {
        EnergyForm::TravelingWave => {
            let f: Vec<f64> = profile.eta.iter().map(|e| 0.5 * e * e).collect();
            integrate_samples(profile, &f)
        }
        EnergyForm::Polar => {
            check_nonvanishing(profile)?;
            let f: Vec<f64> = (0..profile.len())
                .map(|i| {
                    let e = profile.eta[i];
                    let de = derivative(&profile.xs, &profile.eta, i);
                    let dt = derivative(&profile.xs, &profile.theta, i);
                    de * de * (1.0 - 2.0 * k + 2.0 * k * e) / (8.0 * (1.0 - e))
                        + 0.5 * (1.0 - e) * dt * dt
                        + 0.25 * e * e
                })
                .collect();
            integrate_samples(profile, &f)
        }
    }
}

/// Momentum `(c/4) int eta^2/(1 - eta)` of a sampled traveling wave.
pub fn momentum_quadrature(profile: &WaveProfile) -> Result<f64> {
    let c = profile.params.c;
    if !(c > 0.0) {
        return Err(Error::Domain("momentum quadrature needs c > 0".into()));
    }
    check_nonvanishing(profile)?;
    let f: Vec<f64> = profile
        .eta
        .iter()
        .map(|e| 0.25 * c * e * e / (1.0 - e))
        .collect();
    integrate_samples(profile, &f)
}

/// Smallest `|u|` accepted by the polar formulas.
pub const VANISHING_THRESHOLD: f64 = 1e-8;

fn check_nonvanishing(profile: &WaveProfile) -> Result<()> {
    let m = profile.min_modulus();
    if m < VANISHING_THRESHOLD {
        return Err(Error::Vanishing(format!("min |u| = {m:e}")));
    }
    Ok(())
}

/// Five-point central difference on uniform stretches, one-sided at the ends.
fn derivative(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    let n = xs.len();
    if i >= 2 && i + 2 < n {
        let h = xs[i + 1] - xs[i];
        if ((xs[i] - xs[i - 1]) - h).abs() <= 1e-9 * h
            && ((xs[i + 2] - xs[i + 1]) - h).abs() <= 1e-9 * h
        {
            return (ys[i - 2] - 8.0 * ys[i - 1] + 8.0 * ys[i + 1] - ys[i + 2]) / (12.0 * h);
        }
    }
    crate::numerics::diff1(xs, ys, i.clamp(1, n - 2))
}

/// Observables of a sampled profile by quadrature.
pub fn observables_quadrature(profile: &WaveProfile) -> Result<Observables> {
    Ok(Observables {
        energy: energy_quadrature(profile, EnergyForm::TravelingWave)?,
        momentum: momentum_quadrature(profile)?,
        de_dc: None,
        dp_dc: None,
        method: Method::Quadrature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gp_values() {
        let p = Params::new(1.0, 0.0).unwrap();
        assert!((energy_closed(p).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let want = PI / 2.0 - (1.0f64).atan() - 0.5;
        assert!((momentum_closed(p).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn zero_speed_momentum_limit() {
        let p = Params::new(0.0, -3.0).unwrap();
        assert_eq!(momentum_closed(p).unwrap(), PI / 2.0);
        assert!(dp_dc_closed(p).is_err());
    }
}
