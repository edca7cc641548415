//! Quadrature and one-dimensional minimization helpers.

use num_complex::Complex64;

/// Adaptive Simpson quadrature of a complex-valued integrand on `[a, b]`.
pub fn adaptive_simpson_c<F>(f: F, a: f64, b: f64, tol: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // rounding level of the integral, from a coarse 17-point estimate
    let coarse: f64 = (0..=16)
        .map(|i| f(a + (b - a) * i as f64 / 16.0).norm())
        .sum::<f64>()
        * (b - a)
        / 17.0;
    let floor = 16.0 * f64::EPSILON * coarse;
    simpson_rec(&f, a, b, fa, fm, fb, whole, tol.max(floor), floor, 50)
}

/// Adaptive Simpson quadrature of a real integrand on `[a, b]`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    adaptive_simpson_c(|t| Complex64::new(f(t), 0.0), a, b, tol).re
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    floor: f64,
    depth: u32,
) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // below this the comparison only sees rounding noise
    let local = 64.0 * f64::EPSILON * (left.norm() + right.norm());
    if depth == 0 || delta.norm() <= 15.0 * tol.max(local) {
        return left + right + delta / 15.0;
    }
    let half = (0.5 * tol).max(floor);
    simpson_rec(f, a, m, fa, flm, fm, left, half, floor, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, half, floor, depth - 1)
}

/// Golden-section search for the minimum of a unimodal function on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_min<F>(f: F, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let candidates = [(x, f(x)), (c, fc), (d, fd)];
    candidates
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        })
}

/// `e^z − 1` without cancellation for small |z|.
pub fn expm1_c(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // e^{x+iy} - 1 = expm1(x) cos y - 2 sin²(y/2) + i e^x sin y
        let (x, y) = (z.re, z.im);
        let half = (0.5 * y).sin();
        Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
    } else {
        z.exp() - 1.0
    }
}

/// Evenly spaced points `a, …, b` (inclusive), `n ≥ 2`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Geometrically spaced points from `a` to `b` (inclusive), `0 < a < b`.
pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// ln(n!) summed directly (exact enough for the small n used here).
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
