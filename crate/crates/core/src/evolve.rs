//! Time evolution in hydrodynamic variables.
//!
//! With `Psi = sqrt(rho) e^{i theta}` and `v = theta_x` the equation becomes
//!
//! ```text
//! rho_t = 2 (rho v)_x
//! v_t   = (v^2 - Q)_x,   Q = (1 - 2 kappa rho)/(2 rho) rho_xx - rho_x^2/(4 rho^2) + 1 - rho
//! ```
//!
//! which is discretized with fourth-order central differences and the classical
//! Runge-Kutta method. Outside the grid the state is the background `(1, 0)`,
//! the end nodes are pinned there, and a sponge damps deviations over the outer
//! tenth of the domain. Traveling waves `u(x - c t)` move to the right.

use crate::error::{Error, Result};
use crate::numerics::{golden_min, integrate, lagrange};
use crate::profiles::{soliton_profile, Grid, WaveProfile};
use crate::regions::{require, Params, Region};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Smallest admissible density.
pub const RHO_GUARD: f64 = 1e-6;

/// Time step factor in `dt <= CFL h^2 / max K(rho)`.
pub const CFL: f64 = 0.1;

/// Peak damping rate of the sponge layer.
pub const SPONGE_RATE: f64 = 5.0;

/// Density and velocity on a uniform grid over `[-L, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub xs: Vec<f64>,
    pub rho: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
    pub kappa: f64,
    pub h: f64,
}

/// Time series of an evolution run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvolutionReport {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub momentum: Vec<f64>,
    /// `|E(t) - E(0)| / |E(0)|`.
    pub energy_drift: Vec<f64>,
    /// `|p(t) - p(0)| / |p(0)|`.
    pub momentum_drift: Vec<f64>,
    pub min_rho: Vec<f64>,
    /// Empty when no reference wave was given.
    pub modulated_distance: Vec<f64>,
    pub dt: f64,
}

impl EvolutionReport {
    pub fn max_energy_drift(&self) -> f64 {
        self.energy_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_momentum_drift(&self) -> f64 {
        self.momentum_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_distance(&self) -> f64 {
        self.modulated_distance.iter().copied().fold(0.0, f64::max)
    }

    pub fn lowest_rho(&self) -> f64 {
        self.min_rho.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Result of the minimization over shifts and phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulatedDistance {
    pub distance: f64,
    pub shift: f64,
    pub phase: f64,
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa <= 0.0) {
        return Err(Error::Param(format!(
            "evolution needs kappa <= 0, got {kappa}"
        )));
    }
    Ok(())
}

impl FieldState {
    /// The constant state `(rho, v) = (1, 0)`.
    pub fn background(kappa: f64, grid: Grid) -> Result<Self> {
        check_kappa(kappa)?;
        let xs = grid.nodes();
        let n = xs.len();
        Ok(FieldState {
            xs,
            rho: vec![1.0; n],
            v: vec![0.0; n],
            t: 0.0,
            kappa,
            h: grid.h,
        })
    }

    /// Samples a traveling wave, with `v = c eta / (2 (1 - eta))`.
    pub fn from_profile(profile: &WaveProfile, grid: Grid) -> Result<Self> {
        Self::from_profile_shifted(profile, grid, 0.0)
    }

    /// Samples `u(x - shift)`.
    pub fn from_profile_shifted(profile: &WaveProfile, grid: Grid, shift: f64) -> Result<Self> {
        let p = profile.params;
        let mut s = Self::background(p.kappa, grid)?;
        for i in 0..s.xs.len() {
            let e = profile.eta_at(s.xs[i] - shift);
            if !(1.0 - e > RHO_GUARD) {
                return Err(Error::Vanishing(format!(
                    "|u|^2 = {} at x = {}",
                    1.0 - e,
                    s.xs[i]
                )));
            }
            s.rho[i] = 1.0 - e;
            s.v[i] = 0.5 * p.c * e / (1.0 - e);
        }
        Ok(s)
    }

    /// State of an arbitrary field sampled on `grid`, given `Psi` and `Psi_x` as functions.
    pub fn from_field<F, G>(kappa: f64, grid: Grid, psi: F, dpsi: G) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
        G: Fn(f64) -> Complex64,
    {
        let mut s = Self::background(kappa, grid)?;
        for i in 0..s.xs.len() {
            let z = psi(s.xs[i]);
            let r = z.norm_sqr();
            if !(r > RHO_GUARD) {
                return Err(Error::Vanishing(format!(
                    "|Psi|^2 = {r} at x = {}",
                    s.xs[i]
                )));
            }
            s.rho[i] = r;
            s.v[i] = (z.conj() * dpsi(s.xs[i])).im / r;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn half_width(&self) -> f64 {
        self.xs[self.len() - 1]
    }

    pub fn min_rho(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest capillarity coefficient `K = (1 - 2 kappa rho)/(4 rho)`.
    pub fn max_capillarity(&self) -> f64 {
        self.rho
            .iter()
            .map(|&r| (1.0 - 2.0 * self.kappa * r) / (4.0 * r))
            .fold(0.0, f64::max)
    }

    /// Largest stable step for the current state.
    pub fn stable_dt(&self) -> f64 {
        CFL * self.h * self.h / self.max_capillarity()
    }

    /// Trapezoid weights of the grid.
    fn weights(&self) -> Vec<f64> {
        let n = self.len();
        let mut w = vec![self.h; n];
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
        w
    }

    /// Energy and momentum of the state, in polar form.
    pub fn observables(&self) -> (f64, f64) {
        let rx = d1(&pad(&self.rho, 1.0), self.h);
        let w = self.weights();
        let mut e = 0.0;
        let mut p = 0.0;
        for i in 0..self.len() {
            let r = self.rho[i];
            e += w[i]
                * (rx[i] * rx[i] * (1.0 - 2.0 * self.kappa * r) / (8.0 * r)
                    + 0.5 * r * self.v[i] * self.v[i]
                    + 0.25 * (1.0 - r) * (1.0 - r));
            p += w[i] * 0.5 * (1.0 - r) * self.v[i];
        }
        (e, p)
    }

    /// `int (1 - rho)`, which changes only through the flux at the ends.
    pub fn deficit(&self) -> f64 {
        self.weights()
            .iter()
            .zip(&self.rho)
            .map(|(w, r)| w * (1.0 - r))
            .sum()
    }

    fn rhs(&self, rho: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = rho.len();
        let h = self.h;
        let k = self.kappa;
        let rp = pad(rho, 1.0);
        let rx = d1(&rp, h);
        let rxx = d2(&rp, h);
        let flux: Vec<f64> = rho.iter().zip(v).map(|(r, v)| r * v).collect();
        let g: Vec<f64> = (0..n)
            .map(|i| {
                let r = rho[i];
                let q = (1.0 - 2.0 * k * r) / (2.0 * r) * rxx[i] - rx[i] * rx[i] / (4.0 * r * r)
                    + 1.0
                    - r;
                v[i] * v[i] - q
            })
            .collect();
        let mut dr = d1(&pad(&flux, 0.0), h);
        let mut dv = d1(&pad(&g, 0.0), h);
        let l = self.half_width();
        for i in 0..n {
            dr[i] *= 2.0;
            let s = sponge(self.xs[i], l);
            if s > 0.0 {
                dr[i] -= s * (rho[i] - 1.0);
                dv[i] -= s * v[i];
            }
        }
        dr[0] = 0.0;
        dv[0] = 0.0;
        dr[n - 1] = 0.0;
        dv[n - 1] = 0.0;
        (dr, dv)
    }

    /// One Runge-Kutta step. Fails if `dt` exceeds the stability bound, or
    /// when the density drops to the guard or a non-finite value appears.
    pub fn step(&self, dt: f64) -> Result<FieldState> {
        let bound = self.stable_dt();
        if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
            return Err(Error::Param(format!("time step {dt} outside (0, {bound}]")));
        }
        let axpy = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| x + s * y).collect()
        };
        let (k1r, k1v) = self.rhs(&self.rho, &self.v);
        let (k2r, k2v) = self.rhs(
            &axpy(&self.rho, &k1r, 0.5 * dt),
            &axpy(&self.v, &k1v, 0.5 * dt),
        );
        let (k3r, k3v) = self.rhs(
            &axpy(&self.rho, &k2r, 0.5 * dt),
            &axpy(&self.v, &k2v, 0.5 * dt),
        );
        let (k4r, k4v) = self.rhs(&axpy(&self.rho, &k3r, dt), &axpy(&self.v, &k3v, dt));
        let mut next = self.clone();
        for i in 0..self.len() {
            next.rho[i] += dt / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
            next.v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        next.t += dt;
        if next.rho.iter().chain(&next.v).any(|x| !x.is_finite()) {
            return Err(Error::Blowup(format!("non-finite value at t = {}", next.t)));
        }
        let m = next.min_rho();
        if m <= RHO_GUARD {
            return Err(Error::Blowup(format!(
                "density {m} reached the vacuum guard at t = {}",
                next.t
            )));
        }
        Ok(next)
    }

    /// Reconstructs `Psi` with the phase anchored at `theta(-L) = 0`.
    pub fn field(&self) -> Vec<Complex64> {
        let theta = cumulative(&self.v, self.h);
        self.rho
            .iter()
            .zip(&theta)
            .map(|(r, t)| Complex64::from_polar(r.sqrt(), *t))
            .collect()
    }
}

fn sponge(x: f64, l: f64) -> f64 {
    let s = (x.abs() - 0.9 * l) / (0.1 * l);
    if s > 0.0 {
        SPONGE_RATE * s * s
    } else {
        0.0
    }
}

/// Copies `f` with two ghost values on each side.
fn pad<T: Copy>(f: &[T], ghost: T) -> Vec<T> {
    let mut out = Vec::with_capacity(f.len() + 4);
    out.extend([ghost, ghost]);
    out.extend_from_slice(f);
    out.extend([ghost, ghost]);
    out
}

fn d1(fp: &[f64], h: f64) -> Vec<f64> {
    (2..fp.len() - 2)
        .map(|i| (fp[i - 2] - 8.0 * fp[i - 1] + 8.0 * fp[i + 1] - fp[i + 2]) / (12.0 * h))
        .collect()
}

fn d2(fp: &[f64], h: f64) -> Vec<f64> {
    (2..fp.len() - 2)
        .map(|i| {
            (-fp[i - 2] + 16.0 * fp[i - 1] - 30.0 * fp[i] + 16.0 * fp[i + 1] - fp[i + 2])
                / (12.0 * h * h)
        })
        .collect()
}

fn d1c(fp: &[Complex64], h: f64) -> Vec<Complex64> {
    (2..fp.len() - 2)
        .map(|i| (fp[i - 2] - 8.0 * fp[i - 1] + 8.0 * fp[i + 1] - fp[i + 2]) / (12.0 * h))
        .collect()
}

/// Weights integrating the degree-7 interpolant through nodes `-3..=4` over `[0, 1]`.
fn cell_weights() -> &'static [f64; 8] {
    static W: OnceLock<[f64; 8]> = OnceLock::new();
    W.get_or_init(|| {
        let nodes: Vec<f64> = (-3..=4).map(|j| j as f64).collect();
        let mut w = [0.0; 8];
        for (j, wj) in w.iter_mut().enumerate() {
            let mut e = vec![0.0; 8];
            e[j] = 1.0;
            *wj = integrate(|x| lagrange(&nodes, &e, x), 0.0, 1.0, 1e-16, 1e-15)
                .expect("polynomial quadrature");
        }
        w
    })
}

/// Running integral of `f` from the first node, with `f = 0` beyond the grid.
fn cumulative(f: &[f64], h: f64) -> Vec<f64> {
    let w = cell_weights();
    let n = f.len();
    let at = |i: i64| {
        if i < 0 || i >= n as i64 {
            0.0
        } else {
            f[i as usize]
        }
    };
    let mut out = vec![0.0; n];
    for i in 0..n - 1 {
        let cell: f64 = (0..8).map(|j| w[j] * at(i as i64 - 3 + j as i64)).sum();
        out[i + 1] = out[i] + h * cell;
    }
    out
}

/// Distance `||Psi' - U'|| + || |Psi| - |U| || + |Psi(0) - U(0)|` with
/// `U = e^{i phi} u(x - y)`, minimized over `y` and `phi`.
///
/// For each shift the phase maximizing the overlap of derivatives and
/// values is taken; the shift is found by a scan over `[-2, 2]` around the
/// offset of the intensity extrema followed by golden-section refinement.
/// Both fields are differentiated with the same stencil.
pub fn modulated_distance(
    state: &FieldState,
    reference: &WaveProfile,
) -> Result<ModulatedDistance> {
    let m = state.min_rho();
    if !(m > RHO_GUARD) {
        return Err(Error::Vanishing(format!("state density {m}")));
    }
    if !(reference.min_modulus() > 0.0) {
        return Err(Error::Vanishing("reference wave vanishes".into()));
    }
    let psi = state.field();
    let n = psi.len();
    let h = state.h;
    let dpsi = d1c(&pad_ends(&psi), h);
    let modulus: Vec<f64> = state.rho.iter().map(|r| r.sqrt()).collect();
    let w = state.weights();
    let i0 = state
        .xs
        .iter()
        .map(|x| x.abs())
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |a, (i, x)| if x < a.1 { (i, x) } else { a },
        )
        .0;

    let eval = |y: f64| -> (f64, f64) {
        let u: Vec<Complex64> = state.xs.iter().map(|x| reference.u_at(x - y)).collect();
        let du = d1c(&pad_ends(&u), h);
        let mut overlap = u[i0].conj() * psi[i0];
        let mut amp = 0.0;
        for i in 0..n {
            overlap += w[i] * du[i].conj() * dpsi[i];
            let a = modulus[i] - u[i].norm();
            amp += w[i] * a * a;
        }
        let phi = overlap.arg();
        let rot = Complex64::from_polar(1.0, phi);
        let mut grad = 0.0;
        for i in 0..n {
            grad += w[i] * (dpsi[i] - rot * du[i]).norm_sqr();
        }
        (
            grad.sqrt() + amp.sqrt() + (psi[i0] - rot * u[i0]).norm(),
            phi,
        )
    };

    let peak = |xs: &[f64], dev: &dyn Fn(usize) -> f64| {
        (0..xs.len())
            .fold((0, -1.0), |a, i| if dev(i) > a.1 { (i, dev(i)) } else { a })
            .0
    };
    let ps = peak(&state.xs, &|i| (1.0 - state.rho[i]).abs());
    let pr = peak(&reference.xs, &|i| reference.eta[i].abs());
    let center = state.xs[ps] - reference.xs[pr];

    let scan = 80;
    let span = 2.0;
    let mut best = (center, f64::INFINITY);
    for j in 0..=scan {
        let y = center - span + 2.0 * span * j as f64 / scan as f64;
        let d = eval(y).0;
        if d < best.1 {
            best = (y, d);
        }
    }
    let step = 2.0 * span / scan as f64;
    let (y, _) = golden_min(|y| eval(y).0, best.0 - step, best.0 + step, 1e-10);
    let (distance, phase) = eval(y);
    Ok(ModulatedDistance {
        distance,
        shift: y,
        phase,
    })
}

fn pad_ends(f: &[Complex64]) -> Vec<Complex64> {
    let (a, b) = (f[0], f[f.len() - 1]);
    let mut out = Vec::with_capacity(f.len() + 4);
    out.extend([a, a]);
    out.extend_from_slice(f);
    out.extend([b, b]);
    out
}

/// Options of an evolution run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub t_end: f64,
    /// Requested step; capped at 90% of the stability bound of the initial state.
    pub dt: Option<f64>,
    /// Spacing of the recorded samples.
    pub record_every: f64,
}

/// Evolves `state` to `t_end`, recording observables (and the modulated
/// distance to `reference` when given). Returns the final state and the report.
pub fn run(
    state: FieldState,
    opts: RunOptions,
    reference: Option<&WaveProfile>,
) -> Result<(FieldState, EvolutionReport)> {
    run_with(state, opts, reference, |_| {})
}

/// As [`run`], calling `on_record` with the state at each recorded time.
pub fn run_with<F: FnMut(&FieldState)>(
    mut state: FieldState,
    opts: RunOptions,
    reference: Option<&WaveProfile>,
    mut on_record: F,
) -> Result<(FieldState, EvolutionReport)> {
    if !(opts.t_end >= 0.0) || !(opts.record_every > 0.0) {
        return Err(Error::Param("need t_end >= 0 and record_every > 0".into()));
    }
    let cap = 0.9 * state.stable_dt();
    let dt0 = opts.dt.map_or(cap, |d| d.min(cap));
    if !(dt0 > 0.0) {
        return Err(Error::Param(format!(
            "time step must be positive, got {dt0}"
        )));
    }
    let interval = opts.record_every.min(opts.t_end.max(opts.record_every));
    let sub = (interval / dt0).ceil().max(1.0) as usize;
    let dt = interval / sub as f64;
    let records = (opts.t_end / interval).round() as usize;

    let mut rep = EvolutionReport {
        dt,
        ..Default::default()
    };
    let t0 = state.t;
    let (e0, p0) = state.observables();
    let record = |s: &FieldState, rep: &mut EvolutionReport| -> Result<()> {
        let (e, p) = s.observables();
        rep.times.push(s.t);
        rep.energy.push(e);
        rep.momentum.push(p);
        rep.energy_drift.push(relative(e, e0));
        rep.momentum_drift.push(relative(p, p0));
        rep.min_rho.push(s.min_rho());
        if let Some(r) = reference {
            rep.modulated_distance
                .push(modulated_distance(s, r)?.distance);
        }
        Ok(())
    };
    record(&state, &mut rep)?;
    on_record(&state);
    for k in 1..=records {
        for _ in 0..sub {
            state = state.step(dt)?;
        }
        state.t = t0 + k as f64 * interval;
        record(&state, &mut rep)?;
        on_record(&state);
    }
    Ok((state, rep))
}

fn relative(a: f64, a0: f64) -> f64 {
    if a0 == 0.0 {
        (a - a0).abs()
    } else {
        ((a - a0) / a0).abs()
    }
}

/// Smooth bump `exp(1 - 1/(1 - (x/w)^2))` supported on `|x| < w`, with peak 1.
pub fn bump(x: f64, w: f64) -> f64 {
    let s = x / w;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

fn bump_prime(x: f64, w: f64) -> f64 {
    let s = x / w;
    if s.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - s * s;
        bump(x, w) * (-2.0 * s / (q * q)) / w
    }
}

/// Half width of the bump used by [`stability_experiment`].
pub const BUMP_WIDTH: f64 = 2.0;

/// Evolves `u + delta * bump` for a dark soliton with `kappa < 0` and records
/// drifts, the density minimum and the modulated distance to the soliton family.
pub fn stability_experiment(
    params: Params,
    delta: f64,
    t_end: f64,
    grid: Grid,
    dt: Option<f64>,
    record_every: f64,
) -> Result<EvolutionReport> {
    require(params, &[Region::D2], "stability experiment")?;
    if !(params.kappa < 0.0) || !(params.c > 0.0) {
        return Err(Error::Param(format!(
            "need kappa < 0 and c > 0, got {params:?}"
        )));
    }
    let reference = reference_profile(params, grid, t_end)?;
    let state = perturbed_state(&reference, grid, delta)?;
    let opts = RunOptions {
        t_end,
        dt,
        record_every,
    };
    Ok(run(state, opts, Some(&reference))?.1)
}

/// Soliton sampled finely on a window that covers the grid after a drift
/// of `c t_end`.
pub fn reference_profile(params: Params, grid: Grid, t_end: f64) -> Result<WaveProfile> {
    let half = grid.half_width + params.c * t_end + 10.0;
    let h = (grid.h / 10.0).min(5e-3);
    soliton_profile(params, Grid::new(half, h)?)
}

/// `u + delta * bump` sampled on `grid`, with `u` given by `reference`.
pub fn perturbed_state(reference: &WaveProfile, grid: Grid, delta: f64) -> Result<FieldState> {
    if delta == 0.0 {
        return FieldState::from_profile(reference, grid);
    }
    let c = reference.params.c;
    let dh = reference.h;
    let u = |x: f64| reference.u_at(x);
    let du = |x: f64| {
        // Eighth-order differences of the interpolated intensity.
        let cs = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let de: f64 = (1..=4)
            .map(|j| {
                cs[j - 1]
                    * (reference.eta_at(x + j as f64 * dh) - reference.eta_at(x - j as f64 * dh))
            })
            .sum::<f64>()
            / dh;
        let e = reference.eta_at(x);
        let m = (1.0 - e).sqrt();
        let v = 0.5 * c * e / (1.0 - e);
        Complex64::from_polar(1.0, reference.theta_at(x)) * Complex64::new(-de / (2.0 * m), m * v)
    };
    FieldState::from_field(
        reference.params.kappa,
        grid,
        |x| u(x) + delta * bump(x, BUMP_WIDTH),
        |x| du(x) + delta * bump_prime(x, BUMP_WIDTH),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_weights_sum_to_one() {
        let s: f64 = cell_weights().iter().sum();
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cumulative_matches_tanh() {
        let h = 0.05;
        let xs: Vec<f64> = (-400..=400).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = xs.iter().map(|x| 1.0 / x.cosh().powi(2)).collect();
        let c = cumulative(&f, h);
        for (x, ci) in xs.iter().zip(&c) {
            assert!((ci - (x.tanh() + 1.0)).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn background_is_a_fixed_point() {
        let s = FieldState::background(-1.0, Grid::new(5.0, 0.1).unwrap()).unwrap();
        let n = s.step(s.stable_dt()).unwrap();
        assert_eq!(n.rho, s.rho);
        assert_eq!(n.v, s.v);
    }
}
