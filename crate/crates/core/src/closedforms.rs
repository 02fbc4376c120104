//! Explicit scalar functions: the implicit profile functions of solitons and
//! cuspons, their derivative, antiderivatives of the energy and momentum
//! densities, `w(kappa)` and the bright-soliton profile function.
//!
//! Every smooth soliton and cuspon intensity `eta` is the inverse of one of
//! seven monotone functions evaluated at `|x|`:
//!
//! | family | letter | region | domain |
//! |--------|--------|--------|--------|
//! | [`Family::SolitonD1`] | F | D1 | `(0, 1 - c^2/2]` |
//! | [`Family::SolitonD2`] | G | D2 | `(0, 1 - c^2/2]` |
//! | [`Family::SolitonD3`] | H | D3 | `[1 - c^2/2, 0)` |
//! | [`Family::CusponD1`] | f | D1 | `[1 - 1/(2 kappa), 0)` |
//! | [`Family::CusponBMinus`] | g | B- | `[1 - 1/(2 kappa), 0)` |
//! | [`Family::CusponBPlus`] | g~ | B+ | `(0, 1 - 1/(2 kappa)]` |
//! | [`Family::CusponD3`] | h | D3 | `(0, 1 - 1/(2 kappa)]` |
//!
//! Each family vanishes at the closed end of its domain and tends to
//! infinity at `y = 0`.

use crate::error::{Error, Result};
use crate::numerics::{atan_over, atanh_over};
use crate::regions::{classify, Params, Region, SQRT2};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Below this `|kappa|` the soliton antiderivatives use a power series in
/// `kappa`, since the closed forms divide by `kappa^(3/2)`.
pub const KAPPA_SERIES: f64 = 1e-3;

/// The seven implicit profile functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SolitonD1,
    SolitonD2,
    SolitonD3,
    CusponD1,
    CusponBMinus,
    CusponBPlus,
    CusponD3,
}

impl Family {
    /// Conventional one-letter name.
    pub fn letter(self) -> &'static str {
        match self {
            Family::SolitonD1 => "F",
            Family::SolitonD2 => "G",
            Family::SolitonD3 => "H",
            Family::CusponD1 => "f",
            Family::CusponBMinus => "g",
            Family::CusponBPlus => "gTilde",
            Family::CusponD3 => "h",
        }
    }

    /// Parses a letter name as returned by [`Family::letter`].
    pub fn from_letter(s: &str) -> Option<Family> {
        ALL_FAMILIES.iter().copied().find(|f| f.letter() == s)
    }

    /// Region on which the family is defined.
    pub fn region(self) -> Region {
        match self {
            Family::SolitonD1 | Family::CusponD1 => Region::D1,
            Family::SolitonD2 => Region::D2,
            Family::SolitonD3 | Family::CusponD3 => Region::D3,
            Family::CusponBMinus => Region::BMinus,
            Family::CusponBPlus => Region::BPlus,
        }
    }

    pub fn is_cuspon(self) -> bool {
        !matches!(
            self,
            Family::SolitonD1 | Family::SolitonD2 | Family::SolitonD3
        )
    }
}

pub const ALL_FAMILIES: [Family; 7] = [
    Family::SolitonD1,
    Family::SolitonD2,
    Family::SolitonD3,
    Family::CusponD1,
    Family::CusponBMinus,
    Family::CusponBPlus,
    Family::CusponD3,
];

/// An implicit profile function bound to parameters in its region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicitFamily {
    pub family: Family,
    pub params: Params,
}

impl ImplicitFamily {
    pub fn new(family: Family, params: Params) -> Result<Self> {
        let r = classify(params);
        if r != family.region() {
            return Err(Error::Region(format!(
                "family {} needs region {}, but ({}, {}) is in {r}",
                family.letter(),
                family.region(),
                params.c,
                params.kappa
            )));
        }
        let mut params = params;
        if matches!(r, Region::BMinus | Region::BPlus) {
            params.c = SQRT2;
        }
        Ok(ImplicitFamily { family, params })
    }

    /// The smooth soliton family at `p` (F, G or H).
    pub fn soliton(p: Params) -> Result<Self> {
        match classify(p) {
            Region::D1 => Self::new(Family::SolitonD1, p),
            Region::D2 => Self::new(Family::SolitonD2, p),
            Region::D3 => Self::new(Family::SolitonD3, p),
            r => Err(Error::Region(format!("no smooth soliton in region {r}"))),
        }
    }

    /// The cuspon family at `p` (f, g, g~ or h).
    pub fn cuspon(p: Params) -> Result<Self> {
        match classify(p) {
            Region::D1 => Self::new(Family::CusponD1, p),
            Region::D3 => Self::new(Family::CusponD3, p),
            Region::BMinus => Self::new(Family::CusponBMinus, p),
            Region::BPlus => Self::new(Family::CusponBPlus, p),
            r => Err(Error::Region(format!("no cuspon in region {r}"))),
        }
    }

    /// The closed end of the domain, where the function vanishes:
    /// `1 - c^2/2` for solitons and `1 - 1/(2 kappa)` for cuspons.
    pub fn anchor(&self) -> f64 {
        if self.family.is_cuspon() {
            self.params.eta_singular()
        } else {
            self.params.eta_max()
        }
    }

    /// True when the domain lies in `y > 0`.
    pub fn positive_side(&self) -> bool {
        self.anchor() > 0.0
    }

    /// Whether `y` belongs to the half-open domain.
    pub fn contains(&self, y: f64) -> bool {
        let a = self.anchor();
        if a > 0.0 {
            y > 0.0 && y <= a
        } else {
            y >= a && y < 0.0
        }
    }

    /// Value of the function at `y`.
    pub fn eval(&self, y: f64) -> Result<f64> {
        if !self.contains(y) {
            return Err(self.domain_error(y));
        }
        Ok(self.value(y))
    }

    /// Derivative `-(1/y) sqrt((1 - 2 kappa + 2 kappa y) / (2 - c^2 - 2y))`.
    pub fn deriv(&self, y: f64) -> Result<f64> {
        if !self.contains(y) || (!self.family.is_cuspon() && y == self.anchor()) {
            return Err(self.domain_error(y));
        }
        Ok(self.slope(y))
    }

    fn domain_error(&self, y: f64) -> Error {
        Error::Domain(format!(
            "y = {y} outside the domain of {} with anchor {}",
            self.family.letter(),
            self.anchor()
        ))
    }

    /// Unchecked derivative.
    pub(crate) fn slope(&self, y: f64) -> f64 {
        let Params { c, kappa: k } = self.params;
        let q = 2.0 - c * c - 2.0 * y;
        let n = 1.0 - 2.0 * k + 2.0 * k * y;
        -(ratio(n, q)).sqrt() / y
    }

    /// Unchecked value.
    pub(crate) fn value(&self, y: f64) -> f64 {
        if y == self.anchor() {
            return 0.0;
        }
        let Params { c, kappa: k } = self.params;
        let c2 = c * c;
        let q = 2.0 - c2 - 2.0 * y;
        let n = 1.0 - 2.0 * k + 2.0 * k * y;
        match self.family {
            Family::CusponBMinus | Family::CusponBPlus => {
                let sk = k.sqrt();
                2.0 * sk * ratio(-2.0 * k * y, n).sqrt().atan() + SQRT2 * ratio(-n, y).sqrt()
                    - PI * sk
            }
            fam => {
                let r = ratio(q, n).sqrt();
                let t1 = if k > 0.0 {
                    2.0 * k.sqrt() * (k.sqrt() * r).atan()
                } else if k < 0.0 {
                    -2.0 * (-k).sqrt() * ((-k).sqrt() * r).atanh()
                } else {
                    0.0
                };
                let a = (1.0 - 2.0 * k) * q;
                let b = (2.0 - c2) * n;
                let b_minus_a = 2.0 * y * (1.0 - k * c2);
                let coef = 2.0 * ((1.0 - 2.0 * k) / (2.0 - c2)).sqrt();
                if fam.is_cuspon() {
                    t1 + coef * atanh_sqrt_ratio(b, a, -b_minus_a) - PI * k.sqrt()
                } else {
                    t1 + coef * atanh_sqrt_ratio(a, b, b_minus_a)
                }
            }
        }
    }
}

/// `num / den` clamped at zero, infinite when `den` vanishes.
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        (num / den).max(0.0)
    }
}

/// `atanh(sqrt(a/b))` for `0 <= a < b`, given `b - a` computed without
/// cancellation. Keeps full accuracy when the argument approaches one.
fn atanh_sqrt_ratio(a: f64, b: f64, b_minus_a: f64) -> f64 {
    let z = ratio(a, b).sqrt();
    if z < 0.5 {
        z.atanh()
    } else {
        0.5 * ((1.0 + z) * (1.0 + z) * (b / b_minus_a)).ln()
    }
}

/// Antiderivative of the energy density `-y sqrt((1-2k+2ky)/(2-c^2-2y))`
/// on the domain of `fam`.
pub fn energy_antideriv(fam: &ImplicitFamily, y: f64) -> Result<f64> {
    check_antideriv_domain(fam, y)?;
    Ok(energy_prim(fam, y))
}

/// Antiderivative of the momentum density
/// `(c/2) (-y/(1-y)) sqrt((1-2k+2ky)/(2-c^2-2y))` on the domain of `fam`.
pub fn momentum_antideriv(fam: &ImplicitFamily, y: f64) -> Result<f64> {
    check_antideriv_domain(fam, y)?;
    Ok(momentum_prim(fam, y))
}

fn check_antideriv_domain(fam: &ImplicitFamily, y: f64) -> Result<()> {
    if fam.contains(y) || y == 0.0 {
        Ok(())
    } else {
        Err(fam.domain_error(y))
    }
}

/// Sign of `2 - c^2 - 2y` on the domain of the family.
fn q_sign(fam: &ImplicitFamily) -> f64 {
    match fam.family {
        Family::SolitonD3 | Family::CusponD3 | Family::CusponBPlus => -1.0,
        _ => 1.0,
    }
}

fn use_series(fam: &ImplicitFamily) -> bool {
    matches!(fam.family, Family::SolitonD1 | Family::SolitonD2)
        && fam.params.kappa.abs() < KAPPA_SERIES
}

/// `sqrt(q/n)`, infinite at a cuspon anchor where `n` vanishes (and may
/// round to the wrong sign).
fn prim_ratio(fam: &ImplicitFamily, y: f64, q: f64, n: f64) -> f64 {
    if fam.family.is_cuspon() && y == fam.anchor() {
        f64::INFINITY
    } else {
        ratio(q, n).sqrt()
    }
}

pub(crate) fn energy_prim(fam: &ImplicitFamily, y: f64) -> f64 {
    let Params { c, kappa: k } = fam.params;
    if use_series(fam) {
        return series::energy(c, k, y);
    }
    let c2 = c * c;
    let q = 2.0 - c2 - 2.0 * y;
    let n = 1.0 - 2.0 * k + 2.0 * k * y;
    let r = prim_ratio(fam, y, q, n);
    let s = (q * n).max(0.0).sqrt();
    let a = 3.0 * c2 * c2 * k * k - 8.0 * c2 * k * k - 2.0 * c2 * k + 8.0 * k - 1.0;
    let poly = 3.0 * c2 * k - 4.0 * k * y - 4.0 * k - 1.0;
    if k > 0.0 {
        let sk = k.sqrt();
        (a * (sk * r).atan() - q_sign(fam) * sk * s * poly) / (16.0 * k * sk)
    } else {
        let sk = (-k).sqrt();
        -(a * (sk * r).atanh() - sk * s * poly) / (16.0 * (-k) * sk)
    }
}

pub(crate) fn momentum_prim(fam: &ImplicitFamily, y: f64) -> f64 {
    let Params { c, kappa: k } = fam.params;
    if use_series(fam) {
        return series::momentum(c, k, y);
    }
    let c2 = c * c;
    let q = 2.0 - c2 - 2.0 * y;
    let n = 1.0 - 2.0 * k + 2.0 * k * y;
    let r = prim_ratio(fam, y, q, n);
    let s = (q * n).max(0.0).sqrt();
    let cc = c2 * k - 4.0 * k - 1.0;
    let tail = if c == 0.0 { 0.5 * PI } else { (r / c).atan() };
    if k > 0.0 {
        let sk = k.sqrt();
        0.25 * c * (cc / sk * (sk * r).atan() - q_sign(fam) * s) + tail
    } else {
        let sk = (-k).sqrt();
        0.25 * c * (cc / sk * (sk * r).atanh() - s) + tail
    }
}

/// Power series in `kappa` of the soliton antiderivatives, used near `kappa = 0`.
mod series {
    use std::f64::consts::PI;

    /// Taylor coefficients of `sqrt(1 + e)`.
    const SQRT_COEF: [f64; 6] = [1.0, 0.5, -0.125, 0.0625, -0.0390625, 0.02734375];

    fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn add_scaled(acc: &mut Vec<f64>, p: &[f64], s: f64) {
        if acc.len() < p.len() {
            acc.resize(p.len(), 0.0);
        }
        for (a, x) in acc.iter_mut().zip(p) {
            *a += s * x;
        }
    }

    /// Antiderivative in `y` of `poly(y) / sqrt(a - 2y)` evaluated at `y`.
    fn prim_over_sqrt(poly: &[f64], a: f64, y: f64) -> f64 {
        // Substitute y = (a - u)/2 and collect powers of u.
        let lin = [0.5 * a, -0.5];
        let mut q = vec![0.0];
        let mut pow = vec![1.0];
        for &coef in poly {
            add_scaled(&mut q, &pow, coef);
            pow = mul(&pow, &lin);
        }
        let u = (a - 2.0 * y).max(0.0);
        let su = u.sqrt();
        let mut acc = 0.0;
        let mut up = su;
        for (j, coef) in q.iter().enumerate() {
            acc += coef * up / (j as f64 + 0.5);
            up *= u;
        }
        -0.5 * acc
    }

    /// `sum_m b_m (2k)^m (y - 1)^(m - shift)` times the prefactor `pre`, as a polynomial in `y`.
    fn weight(k: f64, pre: &[f64], from: usize, shift: usize) -> Vec<f64> {
        let mut out = vec![0.0];
        let mut pw = vec![1.0];
        for _ in 0..from - shift {
            pw = mul(&pw, &[-1.0, 1.0]);
        }
        for (m, b) in SQRT_COEF.iter().enumerate().skip(from) {
            add_scaled(&mut out, &mul(pre, &pw), b * (2.0 * k).powi(m as i32));
            pw = mul(&pw, &[-1.0, 1.0]);
        }
        out
    }

    pub fn energy(c: f64, k: f64, y: f64) -> f64 {
        let a = 2.0 - c * c;
        prim_over_sqrt(&weight(k, &[0.0, -1.0], 0, 0), a, y)
    }

    pub fn momentum(c: f64, k: f64, y: f64) -> f64 {
        let a = 2.0 - c * c;
        let u = (a - 2.0 * y).max(0.0).sqrt();
        let base = if c == 0.0 {
            0.5 * PI
        } else {
            -0.5 * c * u + (u / c).atan()
        };
        base + 0.5 * c * prim_over_sqrt(&weight(k, &[0.0, 1.0], 1, 1), a, y)
    }
}

/// `w(kappa)`, the speed derivative of the momentum at `c = 0` for `kappa < 0`.
pub fn w_of_kappa(kappa: f64) -> Result<f64> {
    if !(kappa < 0.0) {
        return Err(Error::Domain(format!(
            "w(kappa) needs kappa < 0, got {kappa}"
        )));
    }
    let sk = (-kappa).sqrt();
    let l = (2.0 / (1.0 - 2.0 * kappa)).sqrt();
    Ok((-4.0 * kappa - 1.0) / 4.0 * atanh_over(sk, l) - 1.5 * ((1.0 - 2.0 * kappa) / 2.0).sqrt())
}

/// Speed derivative of the soliton momentum, valid on D1, D2 and D3.
pub(crate) fn dp_dc_formula(c: f64, k: f64) -> f64 {
    let c2 = c * c;
    let l = ((2.0 - c2) / (1.0 - 2.0 * k)).sqrt();
    let t = if k >= 0.0 {
        atan_over(k.sqrt(), l)
    } else {
        atanh_over((-k).sqrt(), l)
    };
    (3.0 * c2 * k - 4.0 * k - 1.0) / 4.0 * t
        - 0.75 * (2.0 - c2) * ((1.0 - 2.0 * k) / (2.0 - c2)).sqrt()
}

/// Bright-soliton profile function
/// `(1/sqrt w) atanh(sqrt((2w - y^2)/(2w (1 + 2k y^2)))) + 2 sqrt k atan(sqrt(2k (2w - y^2)/(1 + 2k y^2)))`
/// on `0 < y <= sqrt(2w)`.
pub fn bright_implicit(omega: f64, kappa: f64, y: f64) -> Result<f64> {
    if !(omega > 0.0) || !(kappa >= 0.0) {
        return Err(Error::Domain(format!(
            "bright profile needs omega > 0 and kappa >= 0, got {omega}, {kappa}"
        )));
    }
    let ymax = (2.0 * omega).sqrt();
    if !(y > 0.0 && y <= ymax) {
        return Err(Error::Domain(format!("y = {y} outside (0, {ymax}]")));
    }
    if y == ymax {
        return Ok(0.0);
    }
    let y2 = y * y;
    let den = 1.0 + 2.0 * kappa * y2;
    let z2 = (2.0 * omega - y2) / (2.0 * omega * den);
    let one_minus = y2 * (4.0 * omega * kappa + 1.0) / (2.0 * omega * den);
    let z = z2.sqrt();
    let at = if z < 0.5 {
        z.atanh()
    } else {
        0.5 * ((1.0 + z) * (1.0 + z) / one_minus).ln()
    };
    let t2 = 2.0 * kappa.sqrt() * (2.0 * kappa * (2.0 * omega - y2) / den).sqrt().atan();
    Ok(at / omega.sqrt() + t2)
}

/// Derivative of [`bright_implicit`] in `y`.
pub fn bright_implicit_deriv(omega: f64, kappa: f64, y: f64) -> f64 {
    // From the bright first integral (y')^2 (1 + 2 k y^2) = y^2 (2 w - y^2).
    -((1.0 + 2.0 * kappa * y * y) / (2.0 * omega - y * y)).sqrt() / y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(f: Family, c: f64, k: f64) -> ImplicitFamily {
        ImplicitFamily::new(f, Params::new(c, k).unwrap()).unwrap()
    }

    #[test]
    fn anchors_vanish() {
        let f = fam(Family::SolitonD1, 1.0, 0.2);
        assert_eq!(f.eval(0.5).unwrap(), 0.0);
        let g = fam(Family::CusponD1, 1.0, 0.2);
        assert_eq!(g.eval(1.0 - 2.5).unwrap(), 0.0);
    }

    #[test]
    fn region_mismatch_is_rejected() {
        let p = Params::new(1.0, -1.0).unwrap();
        assert!(matches!(
            ImplicitFamily::new(Family::SolitonD1, p),
            Err(Error::Region(_))
        ));
        let f = fam(Family::SolitonD1, 1.0, 0.2);
        assert!(matches!(f.eval(0.7), Err(Error::Domain(_))));
        assert!(matches!(f.deriv(0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn w_limits() {
        assert!((w_of_kappa(-1e-12).unwrap() + SQRT2).abs() < 1e-6);
        assert!(w_of_kappa(-10.0).unwrap() > 0.0);
        assert!(w_of_kappa(0.0).is_err());
    }

    #[test]
    fn series_matches_closed_form_at_switch() {
        for &k in &[-1.2e-3, 1.2e-3] {
            let p = Params::new(0.9, k).unwrap();
            let f = ImplicitFamily::soliton(p).unwrap();
            let closed = energy_prim(&f, 0.0) - energy_prim(&f, p.eta_max());
            let s = series::energy(0.9, k, 0.0) - series::energy(0.9, k, p.eta_max());
            assert!((closed - s).abs() < 1e-11, "{closed} {s}");
            let closed = momentum_prim(&f, 0.0) - momentum_prim(&f, p.eta_max());
            let s = series::momentum(0.9, k, 0.0) - series::momentum(0.9, k, p.eta_max());
            assert!((closed - s).abs() < 1e-11, "{closed} {s}");
        }
    }

    #[test]
    fn bright_endpoint() {
        assert_eq!(bright_implicit(1.0, 0.3, 2f64.sqrt()).unwrap(), 0.0);
        assert!(bright_implicit(1.0, 0.3, 2.0).is_err());
    }
}
