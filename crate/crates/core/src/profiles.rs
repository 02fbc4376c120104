//! Sampled wave profiles.
//!
//! Smooth solitons and cuspons are obtained by inverting their implicit
//! profile function at `|x|`; the phase follows from `theta' = c eta / (2 (1 - eta))`.
//! Compactons use their explicit trigonometric form. Composite waves are
//! built from a central bubble, the solution of the shifted first integral
//! `(1 - 2k + 2k eta) eta'^2 = (eta - eta0) P(eta)`, glued to cuspon tails
//! (or to constants of modulus one when `kappa = 1/2`).

use crate::closedforms::{bright_implicit, ImplicitFamily};
use crate::error::{Error, Result};
use crate::numerics::{bisect, diff1, diff2, integrate, interp_local, newton_bracketed};
use crate::regions::{classify, require, Params, Region, WaveKind, SNAP_TOL, SQRT2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Uniform symmetric grid `x_i = i h`, `|i| <= round(L / h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub h: f64,
}

impl Grid {
    pub fn new(half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !(half_width > h) || !half_width.is_finite() {
            return Err(Error::Grid(format!(
                "need 0 < h < L, got L = {half_width}, h = {h}"
            )));
        }
        Ok(Grid { half_width, h })
    }

    /// Number of nodes on each side of the origin.
    pub fn half_count(&self) -> usize {
        (self.half_width / self.h).round() as usize
    }

    pub fn nodes(&self) -> Vec<f64> {
        let n = self.half_count() as i64;
        (-n..=n).map(|i| i as f64 * self.h).collect()
    }
}

/// A bubble interval where the shifted first integral holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bubble {
    pub center: f64,
    pub half_width: f64,
    pub eta0: f64,
    /// Coefficients `[a0, a1, a2]` of `P(y) = a0 + a1 y + a2 y^2`.
    pub poly: [f64; 3],
}

/// A traveling wave sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveProfile {
    pub params: Params,
    pub kind: WaveKind,
    /// Nominal grid spacing.
    pub h: f64,
    pub xs: Vec<f64>,
    pub eta: Vec<f64>,
    pub theta: Vec<f64>,
    pub u_re: Vec<f64>,
    pub u_im: Vec<f64>,
    /// Points where `|u|^2 = 1/(2 kappa)`.
    pub singular_points: Vec<f64>,
    /// Points where `eta` is not differentiable.
    pub nondiff_points: Vec<f64>,
    /// Local extrema of `eta`.
    pub extrema: Vec<f64>,
    pub bubbles: Vec<Bubble>,
}

impl WaveProfile {
    /// Profile from intensity and phase samples; `u = sqrt(1 - eta) e^{i theta}`.
    pub fn from_samples(
        params: Params,
        kind: WaveKind,
        xs: Vec<f64>,
        eta: Vec<f64>,
        theta: Vec<f64>,
    ) -> Result<Self> {
        if xs.len() < 3 || xs.len() != eta.len() || xs.len() != theta.len() {
            return Err(Error::Grid("mismatched or too short sample arrays".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("grid is not strictly increasing".into()));
        }
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        let mut p = WaveProfile {
            params,
            kind,
            h,
            xs,
            eta,
            theta,
            u_re: vec![],
            u_im: vec![],
            singular_points: vec![],
            nondiff_points: vec![],
            extrema: vec![],
            bubbles: vec![],
        };
        p.fill_field();
        Ok(p)
    }

    /// The constant solution `u = 1`.
    pub fn trivial(params: Params, grid: Grid) -> Self {
        let xs = grid.nodes();
        let n = xs.len();
        let mut p = WaveProfile::empty(params, WaveKind::Trivial, grid.h);
        p.xs = xs;
        p.eta = vec![0.0; n];
        p.theta = vec![0.0; n];
        p.fill_field();
        p
    }

    fn empty(params: Params, kind: WaveKind, h: f64) -> Self {
        WaveProfile {
            params,
            kind,
            h,
            xs: vec![],
            eta: vec![],
            theta: vec![],
            u_re: vec![],
            u_im: vec![],
            singular_points: vec![],
            nondiff_points: vec![],
            extrema: vec![],
            bubbles: vec![],
        }
    }

    fn fill_field(&mut self) {
        self.u_re.clear();
        self.u_im.clear();
        for (e, t) in self.eta.iter().zip(&self.theta) {
            let m = (1.0 - e).max(0.0).sqrt();
            self.u_re.push(m * t.cos());
            self.u_im.push(m * t.sin());
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn u(&self, i: usize) -> Complex64 {
        Complex64::new(self.u_re[i], self.u_im[i])
    }

    /// Multiplies the field by `e^{i phi}`.
    pub fn rotated(&self, phi: f64) -> Self {
        let mut p = self.clone();
        for t in p.theta.iter_mut() {
            *t += phi;
        }
        p.fill_field();
        p
    }

    /// Smallest `|u|` over the samples.
    pub fn min_modulus(&self) -> f64 {
        self.eta
            .iter()
            .map(|e| (1.0 - e).max(0.0).sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    /// Degree-7 local interpolation of `eta` (zero outside the grid).
    pub fn eta_at(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > self.xs[self.len() - 1] {
            return 0.0;
        }
        interp_local(&self.xs, &self.eta, x, 7)
    }

    /// Degree-7 local interpolation of `theta` (constant outside the grid).
    pub fn theta_at(&self, x: f64) -> f64 {
        let x = x.clamp(self.xs[0], self.xs[self.len() - 1]);
        interp_local(&self.xs, &self.theta, x, 7)
    }

    /// Interpolated field value.
    pub fn u_at(&self, x: f64) -> Complex64 {
        let m = (1.0 - self.eta_at(x)).max(0.0).sqrt();
        Complex64::from_polar(m, self.theta_at(x))
    }

    /// Grid indices farther than `collar` from every singular and
    /// nondifferentiable point, excluding the two end nodes.
    pub fn regular_interior(&self, collar: f64) -> Vec<usize> {
        let bad: Vec<f64> = self
            .singular_points
            .iter()
            .chain(&self.nondiff_points)
            .copied()
            .collect();
        (1..self.len() - 1)
            .filter(|&i| bad.iter().all(|b| (self.xs[i] - b).abs() > collar))
            .collect()
    }

    fn bubble_at(&self, x: f64) -> Option<&Bubble> {
        self.bubbles
            .iter()
            .find(|b| (x - b.center).abs() < b.half_width)
    }
}

/// Inverts `fam` at `|x|`: the unique `y` in the domain with `fam(y) = |x|`.
/// Beyond the range where `y` is representable the result is `0`.
pub fn invert(fam: &ImplicitFamily, x: f64, guess: Option<f64>) -> Result<f64> {
    let x = x.abs();
    let a = fam.anchor();
    if x == 0.0 {
        return Ok(a);
    }
    let (lo, hi) = if a > 0.0 {
        (f64::MIN_POSITIVE, a)
    } else {
        (a, -f64::MIN_POSITIVE)
    };
    let far = if a > 0.0 { lo } else { hi };
    if fam.value(far) <= x {
        return Ok(0.0);
    }
    let tol = 1e-12 * x.max(1.0);
    let start = guess.unwrap_or(f64::NAN);
    newton_bracketed(
        |y| (fam.value(y) - x, fam.slope(y)),
        lo,
        hi,
        start,
        tol,
        100,
    )
}

/// `(c/2) int_0^x eta/(1 - eta)` for `x >= 0`, written as an integral over
/// the intensity from the anchor to `eta(x)`.
fn phase_to(fam: &ImplicitFamily, eta: f64) -> Result<f64> {
    let a = fam.anchor();
    let Params { c, kappa: k } = fam.params;
    if eta == a || c == 0.0 {
        return Ok(0.0);
    }
    // With y = a + d t^2 the vanishing factor of q (solitons) or of n
    // (cuspons) is exactly proportional to t^2, which cancels against dy.
    let d = eta - a;
    let cusp = fam.family.is_cuspon();
    let dens = |t: f64| {
        let y = a + d * t * t;
        let w = if cusp {
            let q = 2.0 - c * c - 2.0 * y;
            2.0 * d * t * t * (2.0 * k * d / q).max(0.0).sqrt()
        } else {
            let n = 1.0 - 2.0 * k + 2.0 * k * y;
            2.0 * d * (n / (-2.0 * d)).max(0.0).sqrt()
        };
        -w / (1.0 - y)
    };
    let v = integrate(dens, 0.0, 1.0, 1e-15, 1e-13)?;
    Ok(0.5 * c * v)
}

/// Intensity of the smooth soliton at `x` (D1, D2, D3; black soliton at `c = 0`).
pub fn soliton_eta(p: Params, x: f64) -> Result<f64> {
    invert(&ImplicitFamily::soliton(p)?, x, None)
}

/// Phase of the smooth soliton, odd with `theta(0) = 0`.
pub fn soliton_phase(p: Params, x: f64) -> Result<f64> {
    let fam = ImplicitFamily::soliton(p)?;
    let eta = invert(&fam, x, None)?;
    Ok(x.signum() * phase_to(&fam, eta)?)
}

/// Derivative of the soliton intensity from the first integral.
pub fn soliton_eta_prime(p: Params, x: f64) -> Result<f64> {
    let fam = ImplicitFamily::soliton(p)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let eta = invert(&fam, x, None)?;
    if eta == 0.0 {
        return Ok(0.0);
    }
    Ok(x.signum() / fam.slope(eta))
}

/// The real odd black soliton `u(x) = sign(x) sqrt(1 - eta(x))` at speed zero.
pub fn black_soliton(kappa: f64, x: f64) -> Result<f64> {
    let p = Params::new(0.0, kappa)?;
    require(p, &[Region::D1, Region::D2], "black soliton")?;
    let eta = soliton_eta(p, x)?;
    Ok(x.signum() * (1.0 - eta).max(0.0).sqrt())
}

/// Bright soliton of the zero-background equation: the even positive `y(x)`
/// with `bright_implicit(omega, kappa, y) = |x|`.
pub fn bright_soliton(omega: f64, kappa: f64, x: f64) -> Result<f64> {
    let ymax = (2.0 * omega).sqrt();
    bright_implicit(omega, kappa, ymax)?;
    let x = x.abs();
    if x == 0.0 {
        return Ok(ymax);
    }
    let mut lo = 0.5 * ymax;
    while bright_implicit(omega, kappa, lo)? < x {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Ok(0.0);
        }
    }
    bisect(
        |y| bright_implicit(omega, kappa, y).map_or(f64::NAN, |f| f - x),
        lo,
        ymax,
        1e-15,
    )
}

/// Intensity of the cuspon with its singular point at the origin.
pub fn cuspon_eta(p: Params, x: f64) -> Result<f64> {
    invert(&ImplicitFamily::cuspon(p)?, x, None)
}

/// Phase of the cuspon, odd with `theta(0) = 0`.
pub fn cuspon_phase(p: Params, x: f64) -> Result<f64> {
    let fam = ImplicitFamily::cuspon(p)?;
    let eta = invert(&fam, x, None)?;
    Ok(x.signum() * phase_to(&fam, eta)?)
}

/// Samples `fam` on the nonnegative nodes and mirrors to the full grid.
fn sample_family(fam: &ImplicitFamily, grid: Grid) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let xs = grid.nodes();
    let n = grid.half_count();
    let mut eta_half = Vec::with_capacity(n + 1);
    let mut th_half = Vec::with_capacity(n + 1);
    let mut prev: Option<f64> = None;
    for i in 0..=n {
        let x = i as f64 * grid.h;
        let e = invert(fam, x, prev)?;
        prev = Some(e);
        eta_half.push(e);
        th_half.push(phase_to(fam, e)?);
    }
    let mut eta = Vec::with_capacity(2 * n + 1);
    let mut th = Vec::with_capacity(2 * n + 1);
    for i in (1..=n).rev() {
        eta.push(eta_half[i]);
        th.push(-th_half[i]);
    }
    eta.extend_from_slice(&eta_half);
    th.extend_from_slice(&th_half);
    Ok((xs, eta, th))
}

/// Sampled smooth soliton. At `c = 0` this is the black soliton.
pub fn soliton_profile(p: Params, grid: Grid) -> Result<WaveProfile> {
    let r = require(p, &[Region::D1, Region::D2, Region::D3], "soliton")?;
    if p.c == 0.0 {
        return black_profile(p.kappa, grid);
    }
    let fam = ImplicitFamily::soliton(p)?;
    let (xs, eta, theta) = sample_family(&fam, grid)?;
    let kind = if r == Region::D3 {
        WaveKind::AntidarkSoliton
    } else {
        WaveKind::DarkSoliton
    };
    let mut prof = WaveProfile::from_samples(p, kind, xs, eta, theta)?;
    prof.h = grid.h;
    prof.extrema = vec![0.0];
    Ok(prof)
}

/// Sampled black soliton, a real odd field vanishing at the origin.
pub fn black_profile(kappa: f64, grid: Grid) -> Result<WaveProfile> {
    let p = Params::new(0.0, kappa)?;
    require(p, &[Region::D1, Region::D2], "black soliton")?;
    let fam = ImplicitFamily::soliton(p)?;
    let (xs, eta, _) = sample_family(&fam, grid)?;
    // Phase 0 on the right, pi on the left: u is real and odd.
    let theta = xs.iter().map(|&x| if x < 0.0 { PI } else { 0.0 }).collect();
    let mut prof = WaveProfile::from_samples(p, WaveKind::BlackSoliton, xs, eta, theta)?;
    prof.h = grid.h;
    prof.extrema = vec![0.0];
    Ok(prof)
}

/// Sampled cuspon with singular point at the origin.
pub fn cuspon_profile(p: Params, grid: Grid) -> Result<WaveProfile> {
    let r = require(
        p,
        &[Region::D1, Region::D3, Region::BMinus, Region::BPlus],
        "cuspon",
    )?;
    let fam = ImplicitFamily::cuspon(p)?;
    let (xs, eta, theta) = sample_family(&fam, grid)?;
    let kind = if matches!(r, Region::D1 | Region::BMinus) {
        WaveKind::AntidarkCuspon
    } else {
        WaveKind::DarkCuspon
    };
    let mut prof = WaveProfile::from_samples(fam.params, kind, xs, eta, theta)?;
    prof.h = grid.h;
    prof.singular_points = vec![0.0];
    prof.nondiff_points = vec![0.0];
    prof.extrema = vec![0.0];
    Ok(prof)
}

fn check_compacton(c: f64, j: u32) -> Result<()> {
    if j.is_multiple_of(2) {
        return Err(Error::Param(format!(
            "compacton index must be odd, got {j}"
        )));
    }
    if !(c >= 0.0) || (c - SQRT2).abs() <= SNAP_TOL {
        return Err(Error::Param(format!(
            "compacton needs c >= 0 with c != sqrt 2, got {c}"
        )));
    }
    Ok(())
}

/// Intensity `(2 - c^2)/2 cos^2(x / sqrt 2)` on `I_j`, zero outside.
pub fn compacton_eta(c: f64, j: u32, x: f64) -> Result<f64> {
    check_compacton(c, j)?;
    let edge = j as f64 * PI / SQRT2;
    if x.abs() >= edge {
        return Ok(0.0);
    }
    let cs = (x / SQRT2).cos();
    Ok(0.5 * (2.0 - c * c) * cs * cs)
}

/// Phase of the compacton for `c > 0`: on `(k sqrt2 pi, (k+1) sqrt2 pi)`,
/// `pi/2 + k pi - c y/2 - atan((c/sqrt2) cot(y/sqrt2))`, extended by continuity
/// across the cotangent poles and by constants outside `I_j`.
pub fn compacton_phase(c: f64, j: u32, x: f64) -> Result<f64> {
    check_compacton(c, j)?;
    let edge = j as f64 * PI / SQRT2;
    let y = x.clamp(-edge, edge);
    let period = SQRT2 * PI;
    let k = (y / period).floor();
    let arg = y / SQRT2;
    let rem = arg - k * PI;
    if rem == 0.0 {
        return Ok(k * PI - 0.5 * c * y);
    }
    let cot = rem.cos() / rem.sin();
    Ok(0.5 * PI + k * PI - 0.5 * c * y - (c / SQRT2 * cot).atan())
}

/// The compacton `u^{(j)}` at speed `c` (with `kappa = 1/2`).
/// At `c = 0` it is the real field `sin(x / sqrt 2)` frozen outside `I_j`.
pub fn compacton(c: f64, j: u32, x: f64) -> Result<Complex64> {
    check_compacton(c, j)?;
    if c == 0.0 {
        let edge = j as f64 * PI / SQRT2;
        return Ok(Complex64::new((x.clamp(-edge, edge) / SQRT2).sin(), 0.0));
    }
    let eta = compacton_eta(c, j, x)?;
    let th = compacton_phase(c, j, x)?;
    Ok(Complex64::from_polar((1.0 - eta).sqrt(), th))
}

/// Sampled compacton `u^{(j)}`.
pub fn compacton_profile(c: f64, j: u32, grid: Grid) -> Result<WaveProfile> {
    check_compacton(c, j)?;
    let p = Params::new(c, 0.5)?;
    let xs = grid.nodes();
    let mut eta = Vec::with_capacity(xs.len());
    let mut theta = Vec::with_capacity(xs.len());
    for &x in &xs {
        eta.push(compacton_eta(c, j, x)?);
        let th = if c == 0.0 {
            let s = (x.clamp(-(j as f64) * PI / SQRT2, j as f64 * PI / SQRT2) / SQRT2).sin();
            if s < 0.0 {
                PI
            } else {
                0.0
            }
        } else {
            compacton_phase(c, j, x)?
        };
        theta.push(th);
    }
    let mut prof = WaveProfile::from_samples(p, WaveKind::Compacton, xs, eta, theta)?;
    prof.h = grid.h;
    let half = (j as i64 - 1) / 2;
    prof.extrema = (-half..=half).map(|k| k as f64 * SQRT2 * PI).collect();
    // Zeros of eta inside the closed support: odd multiples of pi/sqrt2.
    prof.singular_points = (-(j as i64)..=(j as i64))
        .filter(|m| m % 2 != 0)
        .map(|m| m as f64 * PI / SQRT2)
        .collect();
    Ok(prof)
}

/// Data of a single composite bubble centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositeSpec {
    pub params: Params,
    /// Extremal intensity at the bubble center.
    pub eta0: f64,
    /// `|u'(0)|^2`.
    pub k0: f64,
    /// Half-width of the bubble.
    pub b0: f64,
    /// Coefficients `[a0, a1, a2]` of `P`.
    pub poly: [f64; 3],
    pub admissible: bool,
}

impl CompositeSpec {
    pub fn p(&self, y: f64) -> f64 {
        self.poly[0] + self.poly[1] * y + self.poly[2] * y * y
    }

    pub fn p_prime(&self, y: f64) -> f64 {
        self.poly[1] + 2.0 * self.poly[2] * y
    }

    /// Gluing intensity `1 - 1/(2 kappa)`.
    pub fn edge(&self) -> f64 {
        self.params.eta_singular()
    }

    /// `P(s)` written around the gluing intensity, where it may vanish.
    fn p_near_edge(&self, s_minus_e: f64) -> f64 {
        let e = self.edge();
        self.p(e) + self.p_prime(e) * s_minus_e - 2.0 * s_minus_e * s_minus_e
    }

    /// Integrand of the bubble width in the angle `phi`, where
    /// `s = eta0 + (e - eta0) sin^2(phi/2)`.
    fn dx_dphi(&self, phi: f64) -> f64 {
        let e = self.edge();
        let d = e - self.eta0;
        let c2 = (0.5 * phi).cos().powi(2);
        if c2 == 0.0 {
            return 0.0;
        }
        let pv = self.p_near_edge(-d * c2);
        d.abs() * (-2.0 * self.params.kappa / pv).max(0.0).sqrt() * c2
    }

    fn s_of(&self, phi: f64) -> f64 {
        let e = self.edge();
        let d = e - self.eta0;
        let s2 = (0.5 * phi).sin().powi(2);
        if s2 < 0.5 {
            self.eta0 + d * s2
        } else {
            e - d * (0.5 * phi).cos().powi(2)
        }
    }

    fn dtheta_dphi(&self, phi: f64) -> f64 {
        let c = self.params.c;
        if c == 0.0 {
            return 0.0;
        }
        let s = self.s_of(phi);
        0.5 * c * s / (1.0 - s) * self.dx_dphi(phi)
    }

    /// Intensity and phase on the bubble at sorted offsets `0 <= x <= b0`.
    fn sample(&self, xs: &[f64]) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(xs.len());
        let (mut phi, mut xacc, mut th) = (0.0f64, 0.0f64, 0.0f64);
        for &x in xs {
            if x >= self.b0 {
                let rest = integrate(|t| self.dtheta_dphi(t), phi, PI, 1e-15, 1e-14)?;
                out.push((self.edge(), th + rest));
                continue;
            }
            let target = x - xacc;
            let phi_new = if target <= 0.0 {
                phi
            } else {
                let g = |t: f64| {
                    let v =
                        integrate(|s| self.dx_dphi(s), phi, t, 1e-16, 1e-14).unwrap_or(f64::NAN);
                    (v - target, self.dx_dphi(t))
                };
                newton_bracketed(
                    g,
                    phi,
                    PI,
                    phi + target / self.dx_dphi(phi).max(1e-300),
                    1e-14,
                    200,
                )?
            };
            th += integrate(|t| self.dtheta_dphi(t), phi, phi_new, 1e-16, 1e-14)?;
            xacc = x;
            phi = phi_new;
            out.push((self.s_of(phi), th));
        }
        Ok(out)
    }

    /// Phase increment across half a bubble.
    pub fn half_phase(&self) -> Result<f64> {
        if self.eta0 == 1.0 {
            return Ok(0.5 * PI);
        }
        integrate(|t| self.dtheta_dphi(t), 0.0, PI, 1e-15, 1e-14)
    }
}

/// Bubble data for extremal intensity `eta0`; reports admissibility instead
/// of failing. `k0` is only used for the black-type bubble `eta0 = 1`, `c = 0`.
pub fn assess_composite(p: Params, eta0: f64, k0: Option<f64>) -> Result<CompositeSpec> {
    let r = require(
        p,
        &[
            Region::D1,
            Region::D3,
            Region::BMinus,
            Region::BPlus,
            Region::C,
        ],
        "composite wave",
    )?;
    let mut p = p;
    match r {
        Region::C => p.kappa = 0.5,
        Region::BMinus | Region::BPlus => p.c = SQRT2,
        _ => {}
    }
    let e = p.eta_singular();
    if !(eta0 <= 1.0) || eta0 == e {
        return Err(Error::Param(format!(
            "need eta0 <= 1 and eta0 != {e}, got {eta0}"
        )));
    }
    let c2 = p.c * p.c;
    let k0 = if eta0 < 1.0 {
        (p.c * eta0).powi(2) / (4.0 - 4.0 * eta0)
    } else {
        if p.c != 0.0 {
            return Err(Error::Param("eta0 = 1 requires c = 0".into()));
        }
        match k0 {
            Some(v) if v >= 0.0 => v,
            _ => return Err(Error::Param("eta0 = 1 requires a nonnegative K0".into())),
        }
    };
    let poly = [(2.0 - c2) * eta0 - 4.0 * k0, 2.0 - c2 - 2.0 * eta0, -2.0];
    let mut spec = CompositeSpec {
        params: p,
        eta0,
        k0,
        b0: f64::NAN,
        poly,
        admissible: false,
    };
    spec.admissible = admissible(&spec);
    if spec.admissible {
        spec.b0 = integrate(|t| spec.dx_dphi(t), 0.0, PI, 1e-14, 1e-13)?;
    }
    Ok(spec)
}

/// `P < 0` on the closed interval from `eta0` to the edge, edge excluded.
fn admissible(spec: &CompositeSpec) -> bool {
    let e = spec.edge();
    let (lo, hi) = if spec.eta0 < e {
        (spec.eta0, e)
    } else {
        (e, spec.eta0)
    };
    let vertex = -spec.poly[1] / (2.0 * spec.poly[2]);
    spec.p(spec.eta0) < 0.0
        && spec.p(e) <= 0.0
        && !(vertex > lo && vertex < hi && spec.p(vertex) >= 0.0)
}

/// Admissible bubble data; [`Error::Inadmissible`] when `P` changes sign.
pub fn composite_spec(p: Params, eta0: f64, k0: Option<f64>) -> Result<CompositeSpec> {
    let s = assess_composite(p, eta0, k0)?;
    if !s.admissible {
        return Err(Error::Inadmissible(format!(
            "P changes sign between eta0 = {eta0} and {}",
            s.edge()
        )));
    }
    Ok(s)
}

/// Single-bubble composite wave centered at the origin.
pub fn composite_profile(spec: &CompositeSpec, grid: Grid) -> Result<WaveProfile> {
    glue_bubbles(spec, &[0.0], grid)
}

/// Concatenates translated copies of one bubble at the given centers.
///
/// When `kappa = 1/2` bubbles may be separated by constant stretches;
/// otherwise neighbours must touch, since only cuspon tails connect the
/// gluing intensity to the background.
pub fn glue_bubbles(spec: &CompositeSpec, centers: &[f64], grid: Grid) -> Result<WaveProfile> {
    if !spec.admissible {
        return Err(Error::Inadmissible("bubble data is not admissible".into()));
    }
    if centers.is_empty() || centers.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Param(
            "centers must be nonempty and increasing".into(),
        ));
    }
    let b0 = spec.b0;
    let compact = classify(spec.params) == Region::C;
    for w in centers.windows(2) {
        let gap = w[1] - w[0] - 2.0 * b0;
        if gap < -1e-9 || (!compact && gap > 1e-9) {
            return Err(Error::Param(format!(
                "bubbles must not overlap (and must touch unless kappa = 1/2), gap {gap}"
            )));
        }
    }
    // Nodes plus every bubble edge.
    let mut xs = grid.nodes();
    let mut edges: Vec<f64> = centers.iter().flat_map(|c| [c - b0, c + b0]).collect();
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let (xmin, xmax) = (xs[0], xs[xs.len() - 1]);
    for &e in &edges {
        if e > xmin && e < xmax && xs.iter().all(|x| (x - e).abs() > 1e-12 * grid.h.max(1.0)) {
            xs.push(e);
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Bubble samples at the distinct offsets |x - center| <= b0.
    let mut offsets: Vec<f64> = Vec::new();
    for &x in &xs {
        for &c in centers {
            let d = (x - c).abs();
            if d <= b0 {
                offsets.push(d);
            }
        }
    }
    offsets.push(b0);
    offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    offsets.dedup();
    let table = spec.sample(&offsets)?;
    let lookup = |d: f64| {
        let i = offsets.partition_point(|&o| o < d);
        table[i]
    };
    let half = spec.half_phase()?;
    let black = spec.eta0 == 1.0;
    let tail_fam = if compact {
        None
    } else {
        Some(ImplicitFamily::cuspon(spec.params)?)
    };
    let tail = |d: f64| -> Result<(f64, f64)> {
        match &tail_fam {
            None => Ok((0.0, 0.0)),
            Some(f) => {
                let e = invert(f, d, None)?;
                Ok((e, phase_to(f, e)?))
            }
        }
    };

    let first = centers[0] - b0;
    let last = centers[centers.len() - 1] + b0;
    let mut eta = Vec::with_capacity(xs.len());
    let mut theta = Vec::with_capacity(xs.len());
    for &x in &xs {
        let (e, t) = if x < first {
            let (e, t) = tail(first - x)?;
            (e, -half - t)
        } else if x > last {
            let (e, t) = tail(x - last)?;
            (e, (2 * centers.len() - 1) as f64 * half + t)
        } else {
            // Bubble index: the last center whose left edge is <= x.
            let i = centers.partition_point(|&c| c - b0 <= x + 1e-12).max(1) - 1;
            let c = centers[i];
            let offset = 2.0 * i as f64 * half;
            let d = x - c;
            if d.abs() <= b0 {
                let (e, t) = lookup(d.abs());
                let local = if black {
                    d.signum() * 0.5 * PI
                } else {
                    d.signum() * t
                };
                (e, offset + local)
            } else {
                // Constant stretch between separated compacton bubbles.
                (0.0, offset + half)
            }
        };
        eta.push(e);
        theta.push(t);
    }
    let kind = if compact && centers.len() == 1 && (spec.eta0 - spec.params.eta_max()).abs() < 1e-14
    {
        WaveKind::Compacton
    } else {
        WaveKind::CompositeWave
    };
    let mut prof = WaveProfile::from_samples(spec.params, kind, xs, eta, theta)?;
    prof.h = grid.h;
    prof.singular_points = edges.clone();
    prof.nondiff_points = if compact { vec![] } else { edges };
    if !compact {
        prof.nondiff_points.dedup();
    }
    prof.extrema = centers.to_vec();
    prof.bubbles = centers
        .iter()
        .map(|&c| Bubble {
            center: c,
            half_width: b0,
            eta0: spec.eta0,
            poly: spec.poly,
        })
        .collect();
    Ok(prof)
}

/// First and second derivative at node `i`: five-point central differences
/// where the neighbouring spacing is uniform, three-point otherwise.
fn derivs(xs: &[f64], ys: &[f64], i: usize) -> (f64, f64) {
    if i >= 2 && i + 2 < xs.len() {
        let h = xs[i + 1] - xs[i];
        let uniform = (-2..2).all(|j: i64| {
            let k = (i as i64 + j) as usize;
            ((xs[k + 1] - xs[k]) - h).abs() <= 1e-9 * h
        });
        if uniform {
            // Offsets from the center value, so constants give exactly zero.
            let z = ys[i];
            let (m2, m1, p1, p2) = (ys[i - 2] - z, ys[i - 1] - z, ys[i + 1] - z, ys[i + 2] - z);
            let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
            let d2 = (-m2 + 16.0 * m1 + 16.0 * p1 - p2) / (12.0 * h * h);
            return (d1, d2);
        }
    }
    (diff1(xs, ys, i), diff2(xs, ys, i))
}

/// Largest residual of the first integral over samples farther than `collar`
/// from singular and nondifferentiable points.
///
/// Inside composite bubbles the shifted form
/// `(1-2k+2k eta) eta'^2 = (eta - eta0) P(eta)` is used. For `kappa != 0` the
/// left side is differenced through a variable `g(eta)` with
/// `g' = |N|^{1/2} T(eta)`, `N = 1 - 2k + 2k eta`, so that
/// `N eta'^2 = sgn(N) (g')^2 / T^2` exactly for any positive `T`.
/// Near a cusp `eta` behaves like `|x - x0|^{2/3}`. With `T` the Taylor
/// polynomial of `|R|^{-1/2}` at `N = 0` (`R` the cubic right side),
/// `g(eta(x))` is close to linear and its differences stay accurate.
/// Beyond half the convergence radius of that series `T` is constant, so
/// `g` is proportional to `|N|^{3/2}`.
pub fn residual_first_integral_with(profile: &WaveProfile, collar: f64) -> f64 {
    let Params { c, kappa: k } = profile.params;
    let cubic = |b: Option<&Bubble>| match b {
        Some(b) => {
            let [a0, a1, a2] = b.poly;
            [-b.eta0 * a0, a0 - b.eta0 * a1, a1 - b.eta0 * a2, a2]
        }
        None => [0.0, 0.0, 2.0 - c * c, -2.0],
    };
    let n_of = |e: f64| 1.0 - 2.0 * k + 2.0 * k * e;
    let ec = 1.0 - 0.5 / k;
    let mut worst = 0.0f64;
    let len = profile.len();
    for i in profile.regular_interior(collar) {
        let e = profile.eta[i];
        let b = profile.bubble_at(profile.xs[i]);
        let rc = cubic(b);
        let r = rc[0] + e * (rc[1] + e * (rc[2] + e * rc[3]));
        let lhs = if k == 0.0 {
            let (d, _) = derivs(&profile.xs, &profile.eta, i);
            d * d
        } else if i < 2 || i + 2 >= len {
            let zeta: Vec<f64> = profile
                .eta
                .iter()
                .map(|&y| n_of(y).abs().powf(1.5))
                .collect();
            let (dz, _) = derivs(&profile.xs, &zeta, i);
            n_of(e).signum() * dz * dz / (9.0 * k * k)
        } else {
            let w = i - 2..i + 3;
            let t = match inverse_root_series(&rc, ec) {
                Some((t, radius))
                    if w.clone()
                        .all(|j| (profile.eta[j] - ec).abs() <= 0.5 * radius) =>
                {
                    t
                }
                _ => {
                    let mut t = [0.0; SERIES];
                    t[0] = 1.0;
                    t
                }
            };
            let g: Vec<f64> = profile.eta[w.clone()]
                .iter()
                .map(|&y| cusp_variable(k, &t, y - ec))
                .collect();
            let (dg, _) = derivs(&profile.xs[w], &g, 2);
            let tv = t.iter().rev().fold(0.0, |acc, &tj| acc * (e - ec) + tj);
            n_of(e).signum() * dg * dg / (tv * tv)
        };
        worst = worst.max((lhs - r).abs());
    }
    worst
}

const SERIES: usize = 10;

/// Taylor coefficients of `|R(e + d)|^{-1/2}` in `d` for the cubic
/// `R = r0 + r1 y + r2 y^2 + r3 y^3`, with the distance from `e` to the
/// nearest root of `R` (the convergence radius). `None` when `R(e) = 0`.
fn inverse_root_series(r: &[f64; 4], e: f64) -> Option<([f64; SERIES], f64)> {
    // Shift to powers of d = y - e by repeated synthetic division.
    let mut q = *r;
    for j in 0..3 {
        for m in (j..3).rev() {
            q[m] += e * q[m + 1];
        }
    }
    if q[0] == 0.0 || !q.iter().all(|v| v.is_finite()) {
        return None;
    }
    let q0 = q[0];
    let a = [1.0, q[1] / q0, q[2] / q0, q[3] / q0];
    // f = A^(-1/2): n f_n = sum_k (-k/2 - (n - k)) a_k f_{n-k}.
    let mut f = [0.0; SERIES];
    f[0] = 1.0;
    for n in 1..SERIES {
        let mut acc = 0.0;
        for kk in 1..=3.min(n) {
            acc += (-0.5 * kk as f64 - (n - kk) as f64) * a[kk] * f[n - kk];
        }
        f[n] = acc / n as f64;
    }
    let scale = q0.abs().powf(-0.5);
    let t = f.map(|v| v * scale);
    Some((t, cubic_root_distance(r, e)))
}

/// Smallest `|e - z|` over the complex roots `z` of the cubic.
fn cubic_root_distance(r: &[f64; 4], e: f64) -> f64 {
    // Find one real root by bisection on a bracket, then deflate.
    let p = |y: f64| r[0] + y * (r[1] + y * (r[2] + y * r[3]));
    if r[3] == 0.0 {
        return quadratic_root_distance(r[2], r[1], r[0], e);
    }
    let bound = 1.0 + r[..3].iter().map(|v| (v / r[3]).abs()).fold(0.0, f64::max);
    let root = bisect(p, -bound, bound, 1e-14 * bound).unwrap_or(0.0);
    // r3 y^3 + r2 y^2 + r1 y + r0 = (y - root)(b2 y^2 + b1 y + b0).
    let b2 = r[3];
    let b1 = r[2] + root * b2;
    let b0 = r[1] + root * b1;
    (e - root).abs().min(quadratic_root_distance(b2, b1, b0, e))
}

fn quadratic_root_distance(a: f64, b: f64, c: f64, e: f64) -> f64 {
    if a == 0.0 {
        return if b == 0.0 {
            f64::INFINITY
        } else {
            (e + c / b).abs()
        };
    }
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        ((e - (-b + s) / (2.0 * a)).abs()).min((e - (-b - s) / (2.0 * a)).abs())
    } else {
        let (re, im) = (-b / (2.0 * a), (-disc).sqrt() / (2.0 * a));
        (e - re).hypot(im)
    }
}

/// `g = int_0^d |2 k s|^{1/2} T(s) ds` with `T` given by its coefficients in `s`.
fn cusp_variable(k: f64, t: &[f64; SERIES], d: f64) -> f64 {
    let u = d.abs();
    let sg = d.signum();
    let mut sum = 0.0;
    let mut pw = 1.0;
    for (j, tj) in t.iter().enumerate() {
        sum += tj * pw / (j as f64 + 1.5);
        pw *= sg * u;
    }
    sg * (2.0 * k.abs() * u).sqrt() * u * sum
}

/// [`residual_first_integral_with`] using a collar of five grid spacings.
pub fn residual_first_integral(profile: &WaveProfile) -> f64 {
    residual_first_integral_with(profile, 5.0 * profile.h)
}

/// Largest residual of the second-order intensity equation
/// `(1-2k+2k eta) eta'' + k eta'^2 = -3 eta^2 + (2 - c^2) eta`
/// (its shifted form inside bubbles), five grid spacings away from
/// singular and nondifferentiable points.
pub fn residual_second_order(profile: &WaveProfile) -> f64 {
    let Params { c, kappa: k } = profile.params;
    let collar = 5.0 * profile.h;
    let mut worst = 0.0f64;
    for i in profile.regular_interior(collar) {
        let e = profile.eta[i];
        let (d1, d2) = derivs(&profile.xs, &profile.eta, i);
        let n = 1.0 - 2.0 * k + 2.0 * k * e;
        let r = match profile.bubble_at(profile.xs[i]) {
            Some(b) => {
                let dp = b.poly[1] + 2.0 * b.poly[2] * e;
                2.0 * n * d2 + 2.0 * k * d1 * d1 - (poly(b, e) + (e - b.eta0) * dp)
            }
            None => n * d2 + k * d1 * d1 - (-3.0 * e * e + (2.0 - c * c) * e),
        };
        worst = worst.max(r.abs());
    }
    worst
}

fn poly(b: &Bubble, y: f64) -> f64 {
    b.poly[0] + b.poly[1] * y + b.poly[2] * y * y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soliton_maximum_and_gp_limit() {
        let p = Params::new(1.0, 0.0).unwrap();
        assert!((soliton_eta(p, 0.0).unwrap() - 0.5).abs() < 1e-15);
        for &x in &[0.5, 1.0, 2.0] {
            let exact = 0.5 / (x / 2.0f64).cosh().powi(2);
            assert!((soliton_eta(p, x).unwrap() - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn cuspon_anchor() {
        let p = Params::new(1.0, 0.4).unwrap();
        assert!((cuspon_eta(p, 0.0).unwrap() + 0.25).abs() < 1e-15);
        let e1 = cuspon_eta(p, 1.0).unwrap();
        let e2 = cuspon_eta(p, 1.1).unwrap();
        assert!(-0.25 < e1 && e1 < e2 && e2 < 0.0);
    }

    #[test]
    fn compacton_rejects_bad_input() {
        assert!(compacton(1.0, 2, 0.0).is_err());
        assert!(compacton(SQRT2, 1, 0.0).is_err());
    }

    #[test]
    fn compacton_bubble_width() {
        let p = Params::new(1.0, 0.5).unwrap();
        let s = composite_spec(p, 0.5, None).unwrap();
        assert!((s.b0 - PI / SQRT2).abs() < 1e-12);
    }

    #[test]
    fn trivial_profile_has_zero_residual() {
        let p = Params::new(1.0, -1.0).unwrap();
        let t = WaveProfile::trivial(p, Grid::new(5.0, 0.1).unwrap());
        assert_eq!(residual_first_integral(&t), 0.0);
        assert_eq!(residual_second_order(&t), 0.0);
    }
}
