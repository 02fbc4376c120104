//! Quadrature, root finding and interpolation used throughout the crate.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Gauss-Kronrod panel. Returns the Kronrod estimate and
/// the difference to the embedded 7-point Gauss rule.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        resk += WGK[j] * s;
        if j % 2 == 1 {
            resg += WG[j / 2] * s;
        }
    }
    (resk * half, ((resk - resg) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.partial_cmp(&o.err).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`.
///
/// Panels with the largest error estimate are bisected until the total
/// estimate drops below `max(abs_tol, rel_tol * |I|)`. Integrable endpoint
/// singularities are fine because the rule never samples the endpoints.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let max_panels = 4000;
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        val: v,
        err: e,
    });
    let mut total = v;
    let mut total_err = e;
    let mut n = 1;
    loop {
        if !total.is_finite() {
            return Err(Error::Quadrature(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if n >= max_panels {
            break;
        }
        let p = heap.pop().expect("heap never empty");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        total += v1 + v2 - p.val;
        total_err += e1 + e2 - p.err;
        heap.push(Panel {
            a: p.a,
            b: m,
            val: v1,
            err: e1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            val: v2,
            err: e2,
        });
        n += 1;
    }
    // Recompute the error sum to avoid drift from incremental updates.
    let err: f64 = heap.iter().map(|p| p.err).sum();
    let val: f64 = heap.iter().map(|p| p.val).sum();
    if err <= 10.0 * abs_tol.max(rel_tol * val.abs()) {
        Ok(val)
    } else {
        Err(Error::Quadrature(format!(
            "estimate {val} with error {err} on [{a}, {b}] after {n} panels"
        )))
    }
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Convergence(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves `g(y) = 0` for a strictly monotone `g` on the bracket `[lo, hi]`
/// with Newton steps safeguarded by bisection.
///
/// `g` returns the value and the derivative. The endpoint values may be
/// infinite. When the bracket spans several orders of magnitude on one side
/// of zero, bisection is geometric so tiny roots are reached quickly.
pub fn newton_bracketed<G: FnMut(f64) -> (f64, f64)>(
    mut g: G,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (glo, _) = g(lo);
    let (ghi, _) = g(hi);
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() {
        return Err(Error::Convergence(format!(
            "root not bracketed on [{lo}, {hi}]: {glo}, {ghi}"
        )));
    }
    let lo_sign = glo.signum();
    let mut y = if start > lo && start < hi {
        start
    } else {
        split(lo, hi)
    };
    let mut width = hi - lo;
    for _ in 0..max_iter {
        let (gy, dgy) = g(y);
        if gy.abs() < tol {
            return Ok(y);
        }
        if gy.signum() == lo_sign {
            lo = y;
        } else {
            hi = y;
        }
        // Newton steps that stop halving the bracket give way to bisection.
        let slow = hi - lo > 0.5 * width;
        width = hi - lo;
        let step = y - gy / dgy;
        y = if !slow && step.is_finite() && step > lo && step < hi {
            step
        } else {
            split(lo, hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * y.abs().max(f64::MIN_POSITIVE) {
            return Ok(y);
        }
    }
    let (gy, _) = g(y);
    if gy.abs() < 100.0 * tol {
        Ok(y)
    } else {
        Err(Error::Convergence(format!(
            "residual {gy} after {max_iter} iterations"
        )))
    }
}

fn split(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 && hi / lo > 8.0 {
        (lo * hi).sqrt()
    } else if hi < 0.0 && lo / hi > 8.0 {
        -(lo * hi).sqrt()
    } else {
        0.5 * (lo + hi)
    }
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
/// Returns the minimizer and the minimum.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Uniform-grid quadrature with fourth-order Gregory end corrections.
/// Falls back to Simpson or the trapezoid rule on very short arrays.
pub fn gregory(ys: &[f64], h: f64) -> f64 {
    let n = ys.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (ys[0] + ys[1]),
        3 => h / 3.0 * (ys[0] + 4.0 * ys[1] + ys[2]),
        4 => 3.0 * h / 8.0 * (ys[0] + 3.0 * ys[1] + 3.0 * ys[2] + ys[3]),
        5 => {
            2.0 * h / 45.0
                * (7.0 * ys[0] + 32.0 * ys[1] + 12.0 * ys[2] + 32.0 * ys[3] + 7.0 * ys[4])
        }
        _ => {
            let w = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
            let mut s: f64 = ys[3..n - 3].iter().sum();
            for k in 0..3 {
                s += w[k] * (ys[k] + ys[n - 1 - k]);
            }
            h * s
        }
    }
}

/// Integral over the first `cells` cells of a grid starting at a cusp
/// where the integrand is smooth in `t = |x - x0|^(2/3)`. Each cell gets a
/// 7-point Gauss rule in `s = t^(1/2)` and a local 7-node interpolant in `t`.
pub fn cusp_cells(xs: &[f64], ys: &[f64], cells: usize) -> f64 {
    let x0 = xs[0];
    let sign = if xs[xs.len() - 1] >= x0 { 1.0 } else { -1.0 };
    let m = (cells + 4).min(xs.len());
    let ss: Vec<f64> = xs[..m].iter().map(|x| (x - x0).abs().cbrt()).collect();
    let ts: Vec<f64> = ss.iter().map(|s| s * s).collect();
    let mut total = 0.0;
    for k in 0..cells.min(m - 1) {
        let w0 = k.saturating_sub(3).min(m.saturating_sub(7));
        let w1 = (w0 + 7).min(m);
        let (sa, sb) = (ss[k], ss[k + 1]);
        let (mid, half) = (0.5 * (sa + sb), 0.5 * (sb - sa));
        let mut acc = 0.0;
        let mut add = |t: f64, w: f64| {
            let s = mid + half * t;
            acc += w * 3.0 * s * s * lagrange(&ts[w0..w1], &ys[w0..w1], s * s);
        };
        add(0.0, WG[3]);
        for j in 0..3 {
            let t = XGK[2 * j + 1];
            add(t, WG[j]);
            add(-t, WG[j]);
        }
        total += half * acc;
    }
    sign * total
}

/// Lagrange interpolation through all the given nodes.
pub fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..xs.len() {
        let mut w = 1.0;
        for j in 0..xs.len() {
            if i != j {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        sum += w * ys[i];
    }
    sum
}

/// Local Lagrange interpolation of order `order` on sorted nodes.
pub fn interp_local(xs: &[f64], ys: &[f64], x: f64, order: usize) -> f64 {
    let n = xs.len();
    let m = (order + 1).min(n);
    let idx = xs.partition_point(|&t| t < x);
    let start = idx.saturating_sub(m / 2).min(n - m);
    lagrange(&xs[start..start + m], &ys[start..start + m], x)
}

/// First derivative by three-point differences on an arbitrary sorted grid
/// (central differences when the spacing is uniform).
pub fn diff1(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    let h0 = xs[i] - xs[i - 1];
    let h1 = xs[i + 1] - xs[i];
    // Written in differences so that constants give exactly zero.
    let (dm, dp) = (ys[i - 1] - ys[i], ys[i + 1] - ys[i]);
    (-h1 / (h0 * (h0 + h1))) * dm + (h0 / (h1 * (h0 + h1))) * dp
}

/// Second derivative by three-point differences on an arbitrary sorted grid.
pub fn diff2(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    let h0 = xs[i] - xs[i - 1];
    let h1 = xs[i + 1] - xs[i];
    let (dm, dp) = (ys[i - 1] - ys[i], ys[i + 1] - ys[i]);
    2.0 * (dm / (h0 * (h0 + h1)) + dp / (h1 * (h0 + h1)))
}

/// `atan(s * l) / s`, continuous at `s = 0`.
pub fn atan_over(s: f64, l: f64) -> f64 {
    let z = s * l;
    if z.abs() < 1e-4 {
        l * (1.0 - z * z / 3.0 + z.powi(4) / 5.0)
    } else {
        z.atan() / s
    }
}

/// `atanh(s * l) / s`, continuous at `s = 0`.
pub fn atanh_over(s: f64, l: f64) -> f64 {
    let z = s * l;
    if z.abs() < 1e-4 {
        l * (1.0 + z * z / 3.0 + z.powi(4) / 5.0)
    } else {
        z.atanh() / s
    }
}
