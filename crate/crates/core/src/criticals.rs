//! Critical dispersion and speeds for `kappa < 0`, the inverse of the
//! momentum map and the energy-momentum minimization curve.
//!
//! For `kappa < 0` the soliton momentum starts at `p(0+) = pi/2`. When
//! `kappa >= kappa0` it decreases on the whole speed range. Below `kappa0`
//! it first increases up to `c_tilde`, where `p'` changes sign, and the
//! soliton energy returns to the black-soliton value at `c_star`.

use crate::closedforms::{dp_dc_formula, w_of_kappa};
use crate::error::{Error, Result};
use crate::numerics::bisect;
use crate::observables::{energy_closed, momentum_closed};
use crate::regions::{Params, SQRT2};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Speed used to evaluate the `c -> 0+` limits of the closed forms.
pub const C_ZERO_PLUS: f64 = 1e-8;

const ROOT_TOL: f64 = 1e-12;

/// Upper end of the speed brackets, just below the sonic speed.
const C_TOP: f64 = SQRT2 * (1.0 - 1e-11);

/// Critical values at one `kappa < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub kappa: f64,
    pub kappa0: f64,
    pub c_tilde: Option<f64>,
    pub c_star: f64,
    pub q_star: f64,
    #[serde(rename = "E_black")]
    pub e_black: f64,
}

/// One point of the minimization curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinCurvePoint {
    pub q: f64,
    #[serde(rename = "E_min")]
    pub e_min: f64,
    /// Speed of the minimizing soliton; absent on the flat part.
    pub c: Option<f64>,
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa < 0.0) || !kappa.is_finite() {
        return Err(Error::Param(format!("need kappa < 0, got {kappa}")));
    }
    Ok(())
}

/// The zero of `w` (the momentum derivative at `c = 0`), near `-3.636`.
pub fn kappa0() -> f64 {
    static K0: OnceLock<f64> = OnceLock::new();
    *K0.get_or_init(|| {
        let w = |k: f64| w_of_kappa(k).expect("w is defined for kappa < 0");
        bisect(w, -100.0, -1e-3, 1e-12).expect("w changes sign on (-100, -1e-3)")
    })
}

/// Black-soliton energy, the `c -> 0+` limit of the soliton energy.
pub fn e_black(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    energy_closed(Params::new(C_ZERO_PLUS, kappa)?)
}

/// The speed in `(0, sqrt 2)` where `p'` changes sign; only for `kappa < kappa0`.
pub fn c_tilde(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    let k0 = kappa0();
    if kappa >= k0 {
        return Err(Error::Param(format!(
            "p' keeps its sign for kappa >= kappa0 = {k0}, got {kappa}"
        )));
    }
    bisect(|c| dp_dc_formula(c, kappa), C_ZERO_PLUS, C_TOP, ROOT_TOL)
}

/// Largest speed whose soliton energy equals the black-soliton energy
/// (`0` when `kappa >= kappa0`).
pub fn c_star(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if kappa >= kappa0() {
        return Ok(0.0);
    }
    let ct = c_tilde(kappa)?;
    let e0 = e_black(kappa)?;
    let energy = |c: f64| {
        energy_closed(Params { c, kappa })
            .map(|e| e - e0)
            .unwrap_or(f64::NAN)
    };
    bisect(energy, ct, C_TOP, ROOT_TOL)
}

/// Momentum at which the minimization curve becomes flat.
pub fn q_star(kappa: f64) -> Result<f64> {
    let cs = c_star(kappa)?;
    if cs == 0.0 {
        Ok(0.5 * PI)
    } else {
        momentum_closed(Params { c: cs, kappa })
    }
}

/// All critical values at `kappa`.
pub fn critical_values(kappa: f64) -> Result<CriticalValues> {
    check_kappa(kappa)?;
    let k0 = kappa0();
    let c_tilde = if kappa < k0 {
        Some(c_tilde(kappa)?)
    } else {
        None
    };
    let c_star = c_star(kappa)?;
    let q_star = if c_star == 0.0 {
        0.5 * PI
    } else {
        momentum_closed(Params { c: c_star, kappa })?
    };
    Ok(CriticalValues {
        kappa,
        kappa0: k0,
        c_tilde,
        c_star,
        q_star,
        e_black: e_black(kappa)?,
    })
}

/// The speed `c` in `[c_star, sqrt 2]` carrying momentum `q`, for `0 <= q <= q_star`.
pub fn speed_of_momentum(kappa: f64, q: f64) -> Result<f64> {
    let cv = critical_values(kappa)?;
    speed_of_momentum_with(&cv, q)
}

fn speed_of_momentum_with(cv: &CriticalValues, q: f64) -> Result<f64> {
    if !(q >= 0.0) || q > cv.q_star * (1.0 + 1e-12) {
        return Err(Error::Range(format!(
            "momentum {q} outside [0, {}]",
            cv.q_star
        )));
    }
    if q == 0.0 {
        return Ok(SQRT2);
    }
    if q >= cv.q_star {
        return Ok(cv.c_star);
    }
    let kappa = cv.kappa;
    let lo = cv.c_star.max(C_ZERO_PLUS);
    let g = |c: f64| {
        momentum_closed(Params { c, kappa })
            .map(|p| p - q)
            .unwrap_or(f64::NAN)
    };
    bisect(g, lo, C_TOP, 1e-15)
}

/// The minimal energy at fixed momentum for each `q` in `qs`.
pub fn min_curve(kappa: f64, qs: &[f64]) -> Result<Vec<MinCurvePoint>> {
    let cv = critical_values(kappa)?;
    qs.iter()
        .map(|&q| {
            if !(q >= 0.0) {
                return Err(Error::Range(format!(
                    "momentum must be nonnegative, got {q}"
                )));
            }
            if q == 0.0 {
                return Ok(MinCurvePoint {
                    q,
                    e_min: 0.0,
                    c: Some(SQRT2),
                });
            }
            if q > cv.q_star {
                return Ok(MinCurvePoint {
                    q,
                    e_min: cv.e_black,
                    c: None,
                });
            }
            let c = speed_of_momentum_with(&cv, q)?;
            let e = if c == 0.0 {
                cv.e_black
            } else {
                energy_closed(Params { c, kappa })?
            };
            Ok(MinCurvePoint {
                q,
                e_min: e,
                c: Some(c),
            })
        })
        .collect()
}

/// Energy-momentum diagram `(c, E, p)` on `n` speeds spread over `(0, sqrt 2)`.
pub fn energy_momentum_diagram(kappa: f64, n: usize) -> Result<Vec<(f64, f64, f64)>> {
    if n < 2 {
        return Err(Error::Param("need at least two speeds".into()));
    }
    (1..=n)
        .map(|i| {
            let c = SQRT2 * i as f64 / (n + 1) as f64;
            let p = Params::new(c, kappa)?;
            Ok((c, energy_closed(p)?, momentum_closed(p)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa0_is_a_root_of_w() {
        let k0 = kappa0();
        assert!((k0 + 3.636).abs() < 0.01);
        assert!(w_of_kappa(k0).unwrap().abs() < 1e-9);
        assert!(w_of_kappa(k0 - 1.0).unwrap() > 0.0);
        assert!(w_of_kappa(k0 + 1.0).unwrap() < 0.0);
    }

    #[test]
    fn monotone_case() {
        assert_eq!(c_star(-3.0).unwrap(), 0.0);
        assert_eq!(q_star(-3.0).unwrap(), 0.5 * PI);
        assert!(c_tilde(-3.0).is_err());
        assert!(critical_values(0.1).is_err());
    }
}
