//! Zero-free-region data Δ(t) and the derived error-term data
//! η(x) = inf_{t ≥ 3} [Δ(t) log x + log t].
//!
//! All functions take `log_x` rather than x, so that the regimes where the
//! optimizations become interesting (log x in the millions) stay in range.
//! Internally t = e^u.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::golden_min;

/// Default constant of the classical zero-free region (non-normative).
pub const DEFAULT_C1: f64 = 0.05;
/// Default constant in the exceptional-zero bound β ≤ 1 − c D^{−1/n} (non-normative).
pub const DEFAULT_C_EPS: f64 = 0.1;
/// Default grid size for [`eta_from_delta`].
pub const DEFAULT_RESOLUTION: usize = 10_000;

const LN3: f64 = 1.098_612_288_668_109_8;

/// Lower-bound shape of one piece of Δ as a function of u = log t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Constant {
        value: f64,
    },
    /// numer / (offset + slope·u)
    Reciprocal {
        numer: f64,
        offset: f64,
        slope: f64,
    },
}

impl Shape {
    fn eval(&self, u: f64) -> f64 {
        match *self {
            Shape::Constant { value } => value,
            Shape::Reciprocal {
                numer,
                offset,
                slope,
            } => {
                let den = offset + slope * u;
                if den <= 0.0 {
                    f64::INFINITY
                } else {
                    numer / den
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Piece {
    /// Interval in u = log t; `lo_open` excludes the left endpoint.
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub shape: Shape,
    pub tag: String,
}

impl Piece {
    fn covers(&self, u: f64) -> bool {
        (if self.lo_open {
            u > self.lo
        } else {
            u >= self.lo
        }) && u <= self.hi
    }
}

/// Piecewise lower bound for Δ(t) on [3, ∞). Overlapping pieces combine by
/// pointwise maximum; values are clamped to [0, 1/2].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZfrData {
    pub pieces: Vec<Piece>,
}

impl ZfrData {
    /// Δ ≡ value.
    pub fn constant(value: f64) -> Self {
        ZfrData {
            pieces: vec![Piece {
                lo: LN3,
                hi: f64::INFINITY,
                lo_open: false,
                shape: Shape::Constant { value },
                tag: "constant".into(),
            }],
        }
    }

    /// Classical region c₁/(log D + n log t) for t > 3, and at t = 3 the
    /// smaller of that width and the exceptional-zero bound c(ε)D^{−1/n}.
    pub fn classical(log_d: f64, n: usize, c1: f64, c_eps: f64) -> Result<Self> {
        if !(log_d >= 0.0 && n >= 1 && c1 > 0.0 && c_eps > 0.0) {
            return Err(Error::ParameterOutOfRange(
                "need log D ≥ 0, n ≥ 1, c₁ > 0, c(ε) > 0".into(),
            ));
        }
        let shape = Shape::Reciprocal {
            numer: c1,
            offset: log_d,
            slope: n as f64,
        };
        let stark = c_eps * (-log_d / n as f64).exp();
        let at3 = shape.eval(LN3).min(stark);
        Ok(ZfrData {
            pieces: vec![
                Piece {
                    lo: LN3,
                    hi: LN3,
                    lo_open: false,
                    shape: Shape::Constant { value: at3 },
                    tag: "exceptional_zero_bound (a real simple zero may exist)".into(),
                },
                Piece {
                    lo: LN3,
                    hi: f64::INFINITY,
                    lo_open: true,
                    shape,
                    tag: "classical".into(),
                },
            ],
        })
    }

    /// Region built from the zero-density estimate: 20δ log Q/(log Q + log t)
    /// up to t = exp(Q^{ε/2}), classical c₁/(2 log Q + n log t) beyond.
    pub fn large(log_q: f64, eps: f64, n: usize, delta: f64, c1: f64) -> Result<Self> {
        check_large(log_q, eps, n, delta, c1)?;
        let u0 = (0.5 * eps * log_q).exp();
        Ok(ZfrData {
            pieces: vec![
                Piece {
                    lo: LN3,
                    hi: u0,
                    lo_open: false,
                    shape: Shape::Reciprocal {
                        numer: 20.0 * delta * log_q,
                        offset: log_q,
                        slope: 1.0,
                    },
                    tag: "zero_density".into(),
                },
                Piece {
                    lo: u0,
                    hi: f64::INFINITY,
                    lo_open: false,
                    shape: Shape::Reciprocal {
                        numer: c1,
                        offset: 2.0 * log_q,
                        slope: n as f64,
                    },
                    tag: "classical".into(),
                },
            ],
        })
    }

    /// Δ at t = e^u (0 when no piece covers u).
    pub fn delta_at_log(&self, u: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.covers(u))
            .map(|p| p.shape.eval(u).clamp(0.0, 0.5))
            .fold(0.0, f64::max)
    }

    pub fn delta(&self, t: f64) -> f64 {
        self.delta_at_log(t.ln())
    }
}

fn check_large(log_q: f64, eps: f64, n: usize, delta: f64, c1: f64) -> Result<()> {
    if !(log_q >= std::f64::consts::LN_2) {
        return Err(Error::ParameterOutOfRange("Q must be ≥ 2".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "eps = {eps} outside (0, 1)"
        )));
    }
    if n < 2 || !(delta > 0.0) || !(c1 > 0.0) {
        return Err(Error::ParameterOutOfRange(
            "need [K:Q] ≥ 2, δ > 0, c₁ > 0".into(),
        ));
    }
    if 0.5 * eps * log_q > 700.0 {
        return Err(Error::ParameterOutOfRange("Q^{eps/2} overflows".into()));
    }
    Ok(())
}

fn check_log_x(log_x: f64) -> Result<()> {
    if !(log_x >= LN3 && log_x.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!(
            "log x = {log_x} below log 3"
        )));
    }
    Ok(())
}

/// δ = ε / (10⁹ m³).
pub fn default_delta(eps: f64, m: usize) -> f64 {
    eps / (1e9 * (m as f64).powi(3))
}

/// η from Δ by a uniform grid in u = log t on [log 3, U] followed by
/// golden-section refinement. U is the value at t = 3, beyond which
/// Δ log x + u ≥ u exceeds any candidate.
pub fn eta_from_delta(zfr: &ZfrData, log_x: f64, resolution: usize) -> Result<f64> {
    check_log_x(log_x)?;
    let g = |u: f64| zfr.delta_at_log(u) * log_x + u;
    let mut best = g(LN3);
    let upper = best;
    if upper <= LN3 {
        return Ok(best);
    }
    let mut probes: Vec<f64> = Vec::new();
    let n = resolution.max(16);
    probes.extend((0..=n).map(|i| LN3 + (upper - LN3) * i as f64 / n as f64));
    for p in &zfr.pieces {
        for &e in &[p.lo, p.hi] {
            if e.is_finite() && e >= LN3 && e <= upper {
                probes.push(e);
                probes.push(e * (1.0 + 1e-15) + 1e-300);
                probes.push(e * (1.0 - 1e-15));
            }
        }
    }
    probes.retain(|&u| u >= LN3 && u <= upper);
    probes.sort_by(f64::total_cmp);
    let values: Vec<f64> = probes.iter().map(|&u| g(u)).collect();
    let (imin, &vmin) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    best = best.min(vmin);
    let lo = probes[imin.saturating_sub(1)];
    let hi = probes[(imin + 1).min(probes.len() - 1)];
    if hi > lo {
        let (_, v) = golden_min(g, lo, hi, 120);
        best = best.min(v);
    }
    Ok(best)
}

/// Minimizer and minimum of u ↦ c/(a + b·u) + u over [lo, hi], convex for
/// a + b·u > 0. Returns (u*, value).
pub fn reciprocal_min(c: f64, a: f64, b: f64, lo: f64, hi: f64) -> (f64, f64) {
    let unconstrained = ((c * b).sqrt() - a) / b;
    let u = unconstrained.clamp(lo, hi);
    (u, c / (a + b * u) + u)
}

/// η lower bound over u ≥ 0 without clamping, with the Stark term taken separately:
/// min{ c(ε) log x · D^{−1/n}, inf_{u ≥ 0} c₁ log x/(log D + n u) + u }.
pub fn eta_classical_unclamped(
    log_d: f64,
    n: usize,
    c1: f64,
    c_eps: f64,
    log_x: f64,
) -> Result<f64> {
    check_log_x(log_x)?;
    let stark = c_eps * log_x * (-log_d / n as f64).exp();
    if log_d == 0.0 && n == 1 {
        // the infimum over u ≥ 0 of c₁ log x/u + u, reached at √(c₁ log x)
        return Ok(stark.min(2.0 * (c1 * log_x).sqrt()));
    }
    let (_, v) = reciprocal_min(c1 * log_x, log_d, n as f64, 0.0, f64::INFINITY);
    Ok(stark.min(v))
}

/// η of [`ZfrData::classical`] in closed form, consistent with the definition
/// (t ≥ 3, Δ clamped to 1/2).
pub fn eta_classical_closed(log_d: f64, n: usize, c1: f64, c_eps: f64, log_x: f64) -> Result<f64> {
    check_log_x(log_x)?;
    let nf = n as f64;
    let classical3 = c1 / (log_d + nf * LN3);
    let stark = c_eps * (-log_d / nf).exp();
    let at3 = classical3.min(stark).min(0.5) * log_x + LN3;
    // where c₁/(log D + n u) = 1/2
    let clamp_end = (2.0 * c1 - log_d) / nf;
    let lo = LN3.max(clamp_end);
    let (_, v) = reciprocal_min(c1 * log_x, log_d, nf, lo, f64::INFINITY);
    let clamped_piece = if clamp_end > LN3 {
        0.5 * log_x + LN3
    } else {
        f64::INFINITY
    };
    Ok(at3.min(v).min(clamped_piece))
}

/// Result of the two-regime optimization for the large zero-free region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LargeZfrEta {
    pub u0: f64,
    /// Minimizer and infimum of φ₁(u) = c₁ log x/(2 log Q + n u) + u on u ≥ u0.
    pub u1: f64,
    pub inf_phi1: f64,
    /// Minimizer and infimum of φ₂(u) = 20δ log Q log x/(log Q + u) + u on [0, u0].
    pub u2: f64,
    pub inf_phi2: f64,
    /// min(inf φ₁, inf φ₂) over the formula's domain u ≥ 0, Δ unclamped.
    pub formula_eta: f64,
    /// η of [`ZfrData::large`] by the definition (t ≥ 3, Δ clamped to 1/2).
    pub eta: f64,
    /// The displayed lower bounds √(c₁ log x/n) + u0 and
    /// min{20δ log x, √(20δ log Q log x)/√2 + log Q/2}.
    pub stated_phi1_bound: f64,
    pub stated_phi2_bound: f64,
    pub stated_phi1_holds: bool,
    pub stated_phi2_holds: bool,
    /// x^{−20δ} + exp(−√(20δ log Q log x) − log Q/2) + exp(−√(c₁ log x/n) − u0).
    pub three_term_displayed: f64,
    /// The same with √(20δ log Q log x)/√2 in the middle exponent.
    pub three_term_corrected: f64,
    /// e^{−η}.
    pub exp_neg_eta: f64,
    pub displayed_holds: bool,
    pub corrected_holds: bool,
}

pub fn eta_large_zfr_closed(
    log_q: f64,
    eps: f64,
    n: usize,
    delta: f64,
    c1: f64,
    log_x: f64,
) -> Result<LargeZfrEta> {
    check_large(log_q, eps, n, delta, c1)?;
    check_log_x(log_x)?;
    let nf = n as f64;
    let u0 = (0.5 * eps * log_q).exp();
    let (u1, inf_phi1) = reciprocal_min(c1 * log_x, 2.0 * log_q, nf, u0, f64::INFINITY);
    let b = 20.0 * delta * log_q * log_x;
    let (u2, inf_phi2) = reciprocal_min(b, log_q, 1.0, 0.0, u0);
    let formula_eta = inf_phi1.min(inf_phi2);
    // the same pieces restricted to u ≥ log 3; min(Δ, 1/2)·L + u = min(ΔL + u, L/2 + u)
    let clamped = |c: f64, a: f64, slope: f64, lo: f64, hi: f64| {
        if lo > hi {
            return f64::INFINITY;
        }
        reciprocal_min(c, a, slope, lo, hi).1.min(0.5 * log_x + lo)
    };
    let eta = clamped(b, log_q, 1.0, LN3, u0).min(clamped(
        c1 * log_x,
        2.0 * log_q,
        nf,
        u0.max(LN3),
        f64::INFINITY,
    ));
    let sqrt_c = (c1 * log_x / nf).sqrt();
    let stated_phi1_bound = sqrt_c + u0;
    let stated_phi2_bound = (20.0 * delta * log_x).min(b.sqrt() / 2f64.sqrt() + 0.5 * log_q);
    let tol = 1e-12 * eta.abs().max(1.0);
    let first = (-20.0 * delta * log_x).exp();
    let third = (-sqrt_c - u0).exp();
    let three_term_displayed = first + (-b.sqrt() - 0.5 * log_q).exp() + third;
    let three_term_corrected = first + (-b.sqrt() / 2f64.sqrt() - 0.5 * log_q).exp() + third;
    let exp_neg_eta = (-eta).exp();
    Ok(LargeZfrEta {
        u0,
        u1,
        inf_phi1,
        u2,
        inf_phi2,
        formula_eta,
        eta,
        stated_phi1_bound,
        stated_phi2_bound,
        stated_phi1_holds: stated_phi1_bound <= inf_phi1 + tol,
        stated_phi2_holds: stated_phi2_bound <= inf_phi2 + tol,
        three_term_displayed,
        three_term_corrected,
        exp_neg_eta,
        displayed_holds: exp_neg_eta <= three_term_displayed * (1.0 + 1e-12),
        corrected_holds: exp_neg_eta <= three_term_corrected * (1.0 + 1e-12),
    })
}

/// e^{−η/8}·log(e D_K), defined for x ≥ (log(e D_K))⁴.
pub fn error_factor(eta: f64, log_x: f64, log_d: f64) -> Result<f64> {
    let threshold_log = 4.0 * (1.0 + log_d).ln();
    if log_x < threshold_log {
        return Err(Error::DomainTooSmall {
            x: log_x.exp(),
            threshold: threshold_log.exp(),
        });
    }
    Ok((-eta / 8.0).exp() * (1.0 + log_d))
}

/// η(x) for a field: classical data from its discriminant and degree, or
/// Δ ≡ 1/2 for the trivial extension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaProfile {
    pub zfr: ZfrData,
    pub resolution: usize,
}

impl EtaProfile {
    pub fn new(zfr: ZfrData) -> Self {
        EtaProfile {
            zfr,
            resolution: DEFAULT_RESOLUTION,
        }
    }

    pub fn for_field(log_d: f64, degree: usize, c1: f64, c_eps: f64) -> Result<Self> {
        if degree <= 1 {
            return Ok(EtaProfile::new(ZfrData::constant(0.5)));
        }
        Ok(EtaProfile::new(ZfrData::classical(
            log_d, degree, c1, c_eps,
        )?))
    }

    pub fn eta(&self, log_x: f64) -> Result<f64> {
        eta_from_delta(&self.zfr, log_x, self.resolution)
    }
}
