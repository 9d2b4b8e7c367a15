//! Polynomial root solvers, the monotone-crossing bisection and the
//! grid-plus-golden-section maximizer used to certify closed forms.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Result of a brute-force scalar maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub argmax: f64,
    pub value: f64,
    pub grid_step: f64,
    pub refined: bool,
}

/// Larger real root of `a2 x^2 + a1 x + a0`, or `None` for complex roots.
///
/// Uses `q = -(a1 + sign(a1) sqrt(disc)) / 2` and the pair `q / a2`, `a0 / q`
/// so neither root suffers cancellation.
pub fn solve_quadratic_positive(a2: f64, a1: f64, a0: f64) -> Result<Option<f64>> {
    if !(a2 > 1e-300) {
        return Err(Error::DegenerateLeading(a2));
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        return Ok(None);
    }
    let sq = disc.sqrt();
    let q = -0.5 * (a1 + a1.signum() * sq);
    if q == 0.0 {
        // a1 = 0 and disc = 0: double root at zero
        return Ok(Some(0.0));
    }
    let r1 = q / a2;
    let r2 = a0 / q;
    Ok(Some(r1.max(r2)))
}

/// `x^3 + b x + c`, Horner form.
#[inline]
pub fn depressed_cubic(b: f64, c: f64, x: f64) -> f64 {
    (x * x + b) * x + c
}

/// Residual bound `1e-8 * max(1, |c|)` every cubic solution must meet.
pub fn cubic_tolerance(c: f64) -> f64 {
    1e-8 * c.abs().max(1.0)
}

/// Positive real root of the depressed cubic `x^3 + b x + c` with `c < 0`.
///
/// One real root (`Delta >= 0`) comes from Cardano's formula with the larger
/// cube-root term taken first and the partner recovered from `u v = -b/3`.
/// Three real roots (`Delta < 0`) come from the trigonometric form; among the
/// positive ones the root with the largest `objective` wins. Every candidate
/// gets two Newton polishing steps and must satisfy [`cubic_tolerance`].
pub fn solve_depressed_cubic_positive<F>(b: f64, c: f64, objective: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let delta = b * b * b / 27.0 + c * c / 4.0;
    let mut candidates: Vec<f64> = Vec::with_capacity(3);
    if delta >= 0.0 {
        let half = -0.5 * c;
        let t = half + half.signum() * delta.sqrt();
        let u = t.cbrt();
        let v = if u != 0.0 { -b / (3.0 * u) } else { 0.0 };
        candidates.push(u + v);
    } else {
        // b < 0 here
        let m = 2.0 * (-b / 3.0).sqrt();
        let arg = (3.0 * c / (b * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        for k in 0..3 {
            candidates.push(m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos());
        }
    }
    let tol = cubic_tolerance(c);
    let mut best: Option<(f64, f64)> = None;
    let mut worst_residual = (f64::NAN, 0.0);
    for x0 in candidates {
        let x = polish_cubic(b, c, x0);
        if !(x > 0.0) {
            continue;
        }
        let r = depressed_cubic(b, c, x).abs();
        if r > tol {
            worst_residual = (x, r);
            continue;
        }
        let v = objective(x);
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((x, v));
        }
    }
    match best {
        Some((x, _)) => Ok(x),
        None if worst_residual.0.is_finite() => Err(Error::Residual {
            root: worst_residual.0,
            residual: worst_residual.1,
            tolerance: tol,
        }),
        None => Err(Error::NoPositiveRoot { b, c }),
    }
}

fn polish_cubic(b: f64, c: f64, mut x: f64) -> f64 {
    for _ in 0..2 {
        let f = depressed_cubic(b, c, x);
        let df = 3.0 * x * x + b;
        if df == 0.0 || !df.is_finite() {
            break;
        }
        let next = x - f / df;
        if depressed_cubic(b, c, next).abs() < f.abs() {
            x = next;
        } else {
            break;
        }
    }
    x
}

pub const DEFAULT_CROSSING_TOL: f64 = 1e-9;

/// Crossing of a nondecreasing `f` and a nonincreasing `g` on `[lo, hi]`.
///
/// Requires `f(lo) < g(lo)` and `f(hi) > g(hi)`; stops once the gap is within
/// `tol` or the bracket is narrower than `tol`.
pub fn bisect_increasing_decreasing<F, G>(f: F, g: G, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let gap = |x: f64| f(x) - g(x);
    let (gap_lo, gap_hi) = (gap(lo), gap(hi));
    if !(gap_lo < 0.0 && gap_hi > 0.0) {
        return Err(Error::Bracket { lo, hi, gap_lo, gap_hi });
    }
    let (mut a, mut b) = (lo, hi);
    loop {
        let m = 0.5 * (a + b);
        let gm = gap(m);
        if gm.abs() <= tol || b - a <= tol || m == a || m == b {
            return Ok(m);
        }
        if gm < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal function on `[a, b]`.
pub fn golden_section_maximize<F>(objective: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = finite_or_neg_inf(objective(x1));
    let mut f2 = finite_or_neg_inf(objective(x2));
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = finite_or_neg_inf(objective(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = finite_or_neg_inf(objective(x2));
        }
        if x1 >= x2 {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[inline]
fn finite_or_neg_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Grid scan over `coarse_n` evenly spaced points of `[lo, hi]` (endpoints
/// included), then golden-section refinement inside the two cells around the
/// best grid point. Ties on the grid go to the smallest argument, and the
/// refined point is only kept when it is strictly better.
///
/// Grid evaluation is parallel; the argmax is picked sequentially, so the
/// result does not depend on how rayon splits the work. NaN counts as -inf.
pub fn grid_refine_maximize<F>(objective: F, lo: f64, hi: f64, coarse_n: usize, tol: f64) -> OracleReport
where
    F: Fn(f64) -> f64 + Sync,
{
    assert!(coarse_n >= 2 && hi > lo, "degenerate grid");
    let step = (hi - lo) / (coarse_n - 1) as f64;
    let at = |i: usize| if i + 1 == coarse_n { hi } else { lo + step * i as f64 };
    let values: Vec<f64> = (0..coarse_n)
        .into_par_iter()
        .map(|i| finite_or_neg_inf(objective(at(i))))
        .collect();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let mut report = OracleReport {
        argmax: at(best),
        value: values[best],
        grid_step: step,
        refined: false,
    };
    if tol > 0.0 && tol < step {
        let a = at(best.saturating_sub(1));
        let b = at((best + 1).min(coarse_n - 1));
        let (x, v) = golden_section_maximize(&objective, a, b, tol);
        report.refined = true;
        if v > report.value {
            report.argmax = x;
            report.value = v;
        }
    }
    report
}

/// Doubles `hi` from `start` until the (concave) objective at `hi` falls below
/// its value at `hi / 2`, which places the maximizer of a concave function on
/// `[0, hi]`. Gives up after `max_doublings`.
pub fn expand_upper_bracket<F>(objective: F, start: f64, max_doublings: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut hi = start;
    let mut prev = finite_or_neg_inf(objective(hi / 2.0));
    for _ in 0..max_doublings {
        let v = finite_or_neg_inf(objective(hi));
        if v < prev {
            return hi;
        }
        prev = v;
        hi *= 2.0;
    }
    hi
}
