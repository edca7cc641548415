//! A compactly supported weight f = f_{x,ε} and its Laplace transform.
//!
//! With δ = ε/log x and w = δ/2, f is the indicator of [1/2, 1 + δ] smoothed
//! by the triangle density on [−δ, 0] (two boxcars of width w). Hence
//! f ≡ 1 on [1/2, 1], supp f = [1/2 − δ, 1 + δ], and
//!
//! F(z) = ∫ f(t) e^{−zt} dt
//!      = e^{−(1+δ)z} · (1 − e^{(1/2+δ)z})/(−z) · ((1 − e^{wz})/(−wz))².

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, adaptive_simpson_c, expm1_c};

/// Below this modulus (e^u − 1)/u is evaluated by its Taylor polynomial.
pub const TAYLOR_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightParams {
    x: f64,
    eps: f64,
}

impl WeightParams {
    pub fn new(x: f64, eps: f64) -> Result<Self> {
        if !(x >= 3.0 && x.is_finite()) {
            return Err(Error::ParameterOutOfRange(format!("x = {x} must be ≥ 3")));
        }
        if !(eps > 0.0 && eps < 0.25) {
            return Err(Error::ParameterOutOfRange(format!(
                "eps = {eps} outside (0, 1/4)"
            )));
        }
        Ok(WeightParams { x, eps })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn log_x(&self) -> f64 {
        self.x.ln()
    }

    /// δ = ε / log x.
    pub fn delta(&self) -> f64 {
        self.eps / self.log_x()
    }

    /// Support [1/2 − δ, 1 + δ].
    pub fn support(&self) -> (f64, f64) {
        (0.5 - self.delta(), 1.0 + self.delta())
    }

    /// Points where f fails to be smooth, ascending.
    pub fn breakpoints(&self) -> [f64; 6] {
        let d = self.delta();
        let w = 0.5 * d;
        [0.5 - d, 0.5 - w, 0.5, 1.0, 1.0 + w, 1.0 + d]
    }
}

/// CDF of the triangle density on [−δ, 0] with apex at −δ/2.
fn triangle_cdf(s: f64, delta: f64) -> f64 {
    let w = 0.5 * delta;
    if s <= -delta {
        0.0
    } else if s <= -w {
        (s + delta).powi(2) / (2.0 * w * w)
    } else if s < 0.0 {
        1.0 - s * s / (2.0 * w * w)
    } else {
        1.0
    }
}

/// 1 − CDF of the same density, without cancellation near s = 0.
fn triangle_sf(s: f64, delta: f64) -> f64 {
    let w = 0.5 * delta;
    if s <= -delta {
        1.0
    } else if s <= -w {
        1.0 - (s + delta).powi(2) / (2.0 * w * w)
    } else if s < 0.0 {
        s * s / (2.0 * w * w)
    } else {
        0.0
    }
}

/// f(t), piecewise quadratic. The two smoothed edges lie on opposite sides of
/// t = 3/4, so each half only involves one of them.
pub fn f_eval(params: &WeightParams, t: f64) -> f64 {
    let d = params.delta();
    if t < 0.75 {
        triangle_cdf(t - 0.5, d)
    } else {
        triangle_sf(t - 1.0 - d, d)
    }
}

/// (e^u − 1)/u, entire, with value 1 at u = 0.
pub fn exprel(u: Complex64) -> Complex64 {
    if u.norm() < TAYLOR_THRESHOLD {
        exprel_taylor(u)
    } else {
        expm1_c(u) / u
    }
}

/// Degree-8 Taylor polynomial Σ_{k ≤ 8} u^k/(k+1)!.
pub fn exprel_taylor(u: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut denom = 9.0 * 8.0 * 7.0 * 6.0 * 5.0 * 4.0 * 3.0 * 2.0;
    for k in (0..=8).rev() {
        acc = acc * u + 1.0 / denom;
        denom /= (k + 1) as f64;
    }
    acc
}

/// F(z) in closed form.
pub fn laplace_f(params: &WeightParams, z: Complex64) -> Complex64 {
    let d = params.delta();
    let a = 0.5 + d;
    let w = 0.5 * d;
    let e = exprel(a * z) * exprel(w * z);
    (-(1.0 + d) * z).exp() * a * e * exprel(w * z)
}

/// ∫ f(t) e^{−zt} dt by adaptive quadrature on each smooth piece. `tol` is
/// relative to (length of supp f)·max |e^{−zt}| on the support.
pub fn laplace_quadrature(params: &WeightParams, z: Complex64, tol: f64) -> Complex64 {
    let b = params.breakpoints();
    let (lo, hi) = params.support();
    let scale = (hi - lo) * (-z.re * lo).exp().max((-z.re * hi).exp());
    b.windows(2)
        .map(|w| {
            adaptive_simpson_c(
                |t| f_eval(params, t) * (-z * t).exp(),
                w[0],
                w[1],
                tol * scale,
            )
        })
        .sum()
}

/// f(t) as the convolution ∫ 1_{[1/2, 1+δ]}(t − s) k(s) ds, by quadrature of
/// the triangle density k on [−δ, 0].
pub fn f_by_convolution(params: &WeightParams, t: f64) -> f64 {
    let d = params.delta();
    let w = 0.5 * d;
    let density = |s: f64| {
        if s < -w {
            (s + d) / (w * w)
        } else {
            -s / (w * w)
        }
    };
    let lo = (t - 1.0 - d).max(-d);
    let hi = (t - 0.5).min(0.0);
    if hi <= lo {
        return 0.0;
    }
    let mut pts = vec![lo, hi];
    if lo < -w && -w < hi {
        pts.insert(1, -w);
    }
    pts.windows(2)
        .map(|p| adaptive_simpson(density, p[0], p[1], 1e-14))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        BoundCheck {
            lhs,
            rhs,
            pass: lhs <= rhs * (1.0 + 1e-12),
        }
    }

    /// rhs / lhs.
    pub fn slack(&self) -> f64 {
        self.rhs / self.lhs
    }
}

/// |F(−s log x)| ≤ e^{σε} x^σ min{1, (1 + x^{−σ/2})/(|s| log x)·(4/(ε|s|))²}
/// for Re s = σ > 0.
pub fn check_bound_iv(params: &WeightParams, s: Complex64) -> Result<BoundCheck> {
    let sigma = s.re;
    if !(sigma > 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "Re(s) = {sigma} must be positive"
        )));
    }
    let (x, eps, lx) = (params.x(), params.eps(), params.log_x());
    let lhs = laplace_f(params, -s * lx).norm();
    let r = s.norm();
    let decay = (1.0 + x.powf(-0.5 * sigma)) / (r * lx) * (4.0 / (eps * r)).powi(2);
    let rhs = (sigma * eps).exp() * x.powf(sigma) * decay.min(1.0);
    Ok(BoundCheck::new(lhs, rhs))
}

/// |F(−s log x)| ≤ 5x^{−1/4}(4/ε)²(1/4 + t²)^{−1}/log x for s = −1/2 + it.
pub fn check_bound_v(params: &WeightParams, t: f64) -> BoundCheck {
    let (x, eps, lx) = (params.x(), params.eps(), params.log_x());
    let s = Complex64::new(-0.5, t);
    let lhs = laplace_f(params, -s * lx).norm();
    let rhs = 5.0 * x.powf(-0.25) * (4.0 / eps).powi(2) / (0.25 + t * t) / lx;
    BoundCheck::new(lhs, rhs)
}

/// (F(−log x) − x/log x) · log x / (εx + √x): bounded by the main-term estimate.
pub fn main_term_ratio(params: &WeightParams) -> f64 {
    let (x, eps, lx) = (params.x(), params.eps(), params.log_x());
    let f = laplace_f(params, Complex64::new(-lx, 0.0)).re;
    (f - x / lx) * lx / (eps * x + x.sqrt())
}

/// ε = x^{−1/4} + min{1/8, 8e^{−η/4}}.
pub fn eps_single(x: f64, eta: f64) -> f64 {
    x.powf(-0.25) + (0.125f64).min(8.0 * (-eta / 4.0).exp())
}

/// ε = x^{−1/4} + min{1/16, 8e^{−η_K/4}} + min{1/16, 8e^{−η_Q/4}}.
pub fn eps_two_term(x: f64, eta_k: f64, eta_q: f64) -> f64 {
    x.powf(-0.25)
        + (0.0625f64).min(8.0 * (-eta_k / 4.0).exp())
        + (0.0625f64).min(8.0 * (-eta_q / 4.0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, eps: f64) -> WeightParams {
        WeightParams::new(x, eps).unwrap()
    }

    #[test]
    fn f_examples() {
        let w = p(100.0, 0.1);
        assert_eq!(f_eval(&w, 0.75), 1.0);
        assert_eq!(f_eval(&w, 0.0), 0.0);
        let t = 1.0 + 0.1 / (2.0 * 100f64.ln());
        let v = f_eval(&w, t);
        assert!(v > 0.0 && v < 1.0);
        assert!((v - f_by_convolution(&w, t)).abs() < 1e-10);
    }

    #[test]
    fn f_zero_value() {
        // log x = 2, ε = 0.1
        let w = p(2f64.exp(), 0.1);
        let f0 = laplace_f(&w, Complex64::new(0.0, 0.0));
        assert!((f0.re - 0.55).abs() < 1e-15);
        assert_eq!(f0.im, 0.0);
    }

    #[test]
    fn transform_decays_on_positive_axis() {
        let w = p(100.0, 0.1);
        let a = laplace_f(&w, Complex64::new(50.0, 0.0)).norm();
        let b = laplace_f(&w, Complex64::new(200.0, 0.0)).norm();
        assert!(b < a && b < 1e-40);
    }

    #[test]
    fn bound_examples() {
        let w = p(100.0, 0.1);
        assert!(check_bound_iv(&w, Complex64::new(1.0, 0.0)).unwrap().pass);
        assert!(check_bound_iv(&w, Complex64::new(0.01, 50.0)).unwrap().pass);
        assert!(check_bound_v(&w, 0.0).pass);
        let far = check_bound_v(&w, 100.0);
        assert!(far.pass && far.slack() >= 1.0);
        assert!(check_bound_iv(&w, Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn taylor_and_direct_agree_near_zero() {
        for &r in &[1.1e-5, 3e-5, 1e-4, 5e-4, 9.9e-4] {
            for k in 0..8 {
                let u = Complex64::from_polar(r, k as f64 * 0.7);
                let direct = expm1_c(u) / u;
                assert!((direct - exprel_taylor(u)).norm() <= 1e-12 * direct.norm());
            }
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let w = p(1e4, 0.2);
        for &z in &[
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, -7.0),
            Complex64::new(-30.0, 40.0),
        ] {
            let a = laplace_f(&w, z);
            let b = laplace_quadrature(&w, z, 1e-14);
            assert!((a - b).norm() <= 1e-10 * a.norm(), "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(WeightParams::new(2.0, 0.1).is_err());
        assert!(WeightParams::new(10.0, 0.25).is_err());
        assert!(WeightParams::new(10.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn f_shape(x in 3.0f64..1e8, eps in 1e-3f64..0.249, t in -0.5f64..1.5) {
            let w = p(x, eps);
            let v = f_eval(&w, t);
            prop_assert!((0.0..=1.0).contains(&v));
            let (lo, hi) = w.support();
            if t < lo || t > hi { prop_assert_eq!(v, 0.0); }
            if (0.5..=1.0).contains(&t) { prop_assert_eq!(v, 1.0); }
        }

        #[test]
        fn conjugate_symmetry(x in 3.0f64..1e6, eps in 1e-3f64..0.249, re in -20.0f64..20.0, im in -20.0f64..20.0) {
            let w = p(x, eps);
            let z = Complex64::new(re, im);
            let a = laplace_f(&w, z.conj());
            let b = laplace_f(&w, z).conj();
            prop_assert!((a - b).norm() <= 1e-14 * a.norm());
            prop_assert_eq!(laplace_f(&w, Complex64::new(re, 0.0)).im, 0.0);
        }
    }
}
