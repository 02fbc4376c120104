//! Existence regions in the `(c, kappa)` plane and the waves living in each.
//!
//! The plane `c >= 0` is split into
//!
//! * `D1`: `0 <= c < sqrt 2`, `0 < kappa < 1/2`
//! * `D2`: `0 <= c < sqrt 2`, `kappa <= 0`
//! * `D3`: `c > sqrt 2`, `kappa > 1/2`
//! * `BMinus`, `BPlus`: the sonic line `c = sqrt 2` with `kappa` below or above `1/2`
//! * `C`: the critical line `kappa = 1/2`
//! * `NoWave`: everything else, where only constants of modulus one exist.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The sonic speed.
pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Inputs closer than this to `sqrt 2` or `1/2` are snapped onto the boundary.
pub const SNAP_TOL: f64 = 1e-12;

/// Speed and dispersion of a traveling wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub c: f64,
    pub kappa: f64,
}

impl Params {
    /// Validated parameters. A negative speed is replaced by its absolute
    /// value, since complex conjugation maps the speed `c` wave to the `-c` one.
    pub fn new(c: f64, kappa: f64) -> Result<Self> {
        if !c.is_finite() || !kappa.is_finite() {
            return Err(Error::Param(format!(
                "non-finite parameters c = {c}, kappa = {kappa}"
            )));
        }
        if c < 0.0 {
            log::warn!(
                "negative speed {c} replaced by {} (complex conjugate wave)",
                -c
            );
        }
        Ok(Params { c: c.abs(), kappa })
    }

    /// The region these parameters fall into, with boundary snapping.
    pub fn region(&self) -> Region {
        classify(*self)
    }

    /// `1 - c^2/2`, the extremal intensity of the smooth soliton.
    pub fn eta_max(&self) -> f64 {
        1.0 - 0.5 * self.c * self.c
    }

    /// `1 - 1/(2 kappa)`, the intensity at which `|u|^2 = 1/(2 kappa)`.
    pub fn eta_singular(&self) -> f64 {
        1.0 - 0.5 / self.kappa
    }
}

/// Existence region tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    D1,
    D2,
    D3,
    BMinus,
    BPlus,
    C,
    NoWave,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::D1 => "D1",
            Region::D2 => "D2",
            Region::D3 => "D3",
            Region::BMinus => "BMinus",
            Region::BPlus => "BPlus",
            Region::C => "C",
            Region::NoWave => "NoWave",
        };
        f.write_str(s)
    }
}

/// Kinds of finite energy traveling waves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WaveKind {
    DarkSoliton,
    AntidarkSoliton,
    BlackSoliton,
    DarkCuspon,
    AntidarkCuspon,
    Compacton,
    CompositeWave,
    Trivial,
}

/// Whether boundary values are snapped to `sqrt 2` and `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Snap {
    #[default]
    Tolerant,
    Exact,
}

/// Region of `p`, snapping values within [`SNAP_TOL`] of the boundary lines.
pub fn classify(p: Params) -> Region {
    classify_with(p, Snap::Tolerant)
}

/// Region of `p` with explicit control over boundary snapping.
pub fn classify_with(p: Params, snap: Snap) -> Region {
    let tol = match snap {
        Snap::Tolerant => SNAP_TOL,
        Snap::Exact => 0.0,
    };
    let c = p.c.abs();
    let k = p.kappa;
    let on_sonic = (c - SQRT2).abs() <= tol;
    let on_critical = (k - 0.5).abs() <= tol;
    if on_critical {
        return Region::C;
    }
    if on_sonic {
        return if k > 0.0 && k < 0.5 {
            Region::BMinus
        } else if k > 0.5 {
            Region::BPlus
        } else {
            Region::NoWave
        };
    }
    if c < SQRT2 {
        if k <= 0.0 {
            Region::D2
        } else if k < 0.5 {
            Region::D1
        } else {
            Region::NoWave
        }
    } else if k > 0.5 {
        Region::D3
    } else {
        Region::NoWave
    }
}

/// Wave kinds available in a region for a positive speed.
pub fn wave_inventory(r: Region) -> Vec<WaveKind> {
    use WaveKind::*;
    match r {
        Region::D1 => vec![DarkSoliton, AntidarkCuspon, CompositeWave],
        Region::D2 => vec![DarkSoliton],
        Region::D3 => vec![AntidarkSoliton, DarkCuspon, CompositeWave],
        Region::BMinus => vec![AntidarkCuspon, CompositeWave],
        Region::BPlus => vec![DarkCuspon, CompositeWave],
        Region::C => vec![Compacton, CompositeWave],
        Region::NoWave => vec![Trivial],
    }
}

/// Wave kinds at `p`; at `c = 0` the dark soliton is the black soliton.
pub fn waves_at(p: Params) -> Vec<WaveKind> {
    let mut w = wave_inventory(classify(p));
    if p.c == 0.0 {
        for k in w.iter_mut() {
            if *k == WaveKind::DarkSoliton {
                *k = WaveKind::BlackSoliton;
            }
        }
    }
    w
}

/// Region test used by the construction routines.
pub fn require(p: Params, allowed: &[Region], what: &str) -> Result<Region> {
    let r = classify(p);
    if allowed.contains(&r) {
        Ok(r)
    } else {
        Err(Error::Region(format!(
            "{what} needs (c, kappa) in {allowed:?}, got ({}, {}) in {r}",
            p.c, p.kappa
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cl(c: f64, k: f64) -> Region {
        classify(Params::new(c, k).unwrap())
    }

    #[test]
    fn spec_examples() {
        assert_eq!(cl(1.0, 0.2), Region::D1);
        assert_eq!(cl(1.0, -5.0), Region::D2);
        assert_eq!(cl(1.5, 0.3), Region::NoWave);
        assert_eq!(cl(SQRT2, 0.3), Region::BMinus);
        assert_eq!(cl(1.0, 0.5), Region::C);
    }

    #[test]
    fn critical_line_wins_over_sonic_line() {
        assert_eq!(cl(SQRT2, 0.5), Region::C);
        assert_eq!(cl(7.0, 0.5), Region::C);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn snapping_and_exact_mode() {
        let p = Params::new(1.414_213_562_373, 0.3).unwrap();
        assert_eq!(classify(p), Region::BMinus);
        assert_eq!(classify_with(p, Snap::Exact), Region::D1);
    }

    #[test]
    fn negative_speed_is_conjugated() {
        assert_eq!(Params::new(-1.0, 0.2).unwrap().c, 1.0);
        assert!(Params::new(f64::NAN, 0.2).is_err());
    }

    #[test]
    fn black_soliton_at_zero_speed() {
        let w = waves_at(Params::new(0.0, -1.0).unwrap());
        assert_eq!(w, vec![WaveKind::BlackSoliton]);
        assert_eq!(wave_inventory(Region::NoWave), vec![WaveKind::Trivial]);
    }
}
