//! Mean values of Dirichlet polynomials and large-sieve sums over families.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::artin;
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::numerics::adaptive_simpson_c;
use crate::par;
use crate::sieve::PrimeSieve;

/// A finite Dirichlet polynomial Σ c(n) n^{−it}.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DirichletPolynomial {
    terms: Vec<(u64, Complex64)>,
}

impl DirichletPolynomial {
    /// Builds a polynomial from (n, c(n)) pairs; repeated n are summed.
    pub fn new(mut terms: Vec<(u64, Complex64)>) -> Result<Self> {
        if terms
            .iter()
            .any(|&(n, c)| n == 0 || !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::ParameterOutOfRange(
                "terms need n ≥ 1 and finite coefficients".into(),
            ));
        }
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(u64, Complex64)> = Vec::with_capacity(terms.len());
        for (n, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == n => last.1 += c,
                _ => merged.push((n, c)),
            }
        }
        Ok(DirichletPolynomial { terms: merged })
    }

    pub fn terms(&self) -> &[(u64, Complex64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Σ c(n) n^{−it}.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(n, c)| c * Complex64::from_polar(1.0, -t * (n as f64).ln()))
            .sum()
    }
}

/// ∫_{−T}^{T} |Σ c(n) n^{−it}|² dt in closed form.
pub fn msq_integral(poly: &DirichletPolynomial, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "T = {t} must be positive"
        )));
    }
    let terms = poly.terms();
    let logs: Vec<f64> = terms.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let rows: Vec<usize> = (0..terms.len()).collect();
    let partial = par::map(&rows, |&i| {
        let (_, ci) = terms[i];
        let mut s = 2.0 * t * ci.norm_sqr();
        for j in i + 1..terms.len() {
            let l = logs[j] - logs[i];
            s += 2.0 * (ci * terms[j].1.conj()).re * 2.0 * (t * l).sin() / l;
        }
        s
    });
    Ok(partial.iter().sum())
}

/// The same integral by adaptive Simpson quadrature.
pub fn msq_quadrature(poly: &DirichletPolynomial, t: f64, tol: f64) -> f64 {
    adaptive_simpson_c(|s| Complex64::new(poly.eval(s).norm_sqr(), 0.0), -t, t, tol).re
}

/// Σ_K |Σ_{n ∈ (x, xe^{1/T}], (n, D_K) = 1} a_K(n) b(n)|².
pub fn pre_large_sieve_lhs<B>(family: &[FieldDescriptor], b: B, x: f64, t: f64) -> Result<f64>
where
    B: Fn(u64) -> Complex64 + Sync,
{
    let matrix = coefficient_window(family, x, t)?;
    let per_field = par::map(&matrix, |row| {
        row.iter()
            .map(|&(n, a)| b(n) * a as f64)
            .sum::<Complex64>()
            .norm_sqr()
    });
    Ok(per_field.iter().sum())
}

/// Rows (n, a_K(n)·1_{(n, D_K) = 1}) for n ∈ (x, xe^{1/T}], one row per field.
fn coefficient_window(family: &[FieldDescriptor], x: f64, t: f64) -> Result<Vec<Vec<(u64, i128)>>> {
    if !(x >= 1.0 && t >= 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "need x, T ≥ 1 (x = {x}, T = {t})"
        )));
    }
    let lo = x.floor() as u64 + 1;
    let hi = (x * (1.0 / t).exp()).floor() as u64;
    family
        .iter()
        .map(|f| {
            (lo..=hi)
                .map(|n| {
                    if f.is_coprime(n) {
                        artin::coeff_a_k(f, n).map(|a| (n, a))
                    } else {
                        Ok((n, 0))
                    }
                })
                .collect()
        })
        .collect()
}

/// Largest eigenvalues of MᵀM and MMᵀ for the family-by-window coefficient
/// matrix M; by duality they coincide.
pub fn duality_check(family: &[FieldDescriptor], x: f64, t: f64) -> Result<(f64, f64)> {
    let rows = coefficient_window(family, x, t)?;
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 {
        return Ok((0.0, 0.0));
    }
    let m = DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j].1 as f64);
    let top = |s: DMatrix<f64>| {
        s.symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    };
    Ok((top(m.transpose() * &m), top(&m * m.transpose())))
}

/// The prime polynomial Σ_{y < p ≤ u, p unramified} a_K(p) log p / p · p^{−it}.
pub fn prime_polynomial(
    field: &FieldDescriptor,
    y: u64,
    u: u64,
    sieve: &PrimeSieve,
) -> Result<DirichletPolynomial> {
    let mut terms = Vec::new();
    for &p in sieve.primes_in(y, u)? {
        if field.is_ramified(p) {
            continue;
        }
        let a = artin::coeff_a_k(field, p)? as f64;
        terms.push((p, Complex64::new(a * (p as f64).ln() / p as f64, 0.0)));
    }
    DirichletPolynomial::new(terms)
}

/// Σ_K ∫_{−T}^{T} |Σ_{y < p ≤ u} a_K(p) log p / p^{1+it}|² dt.
pub fn mvt_primes_lhs(
    family: &[FieldDescriptor],
    y: u64,
    u: u64,
    t: f64,
    sieve: &PrimeSieve,
) -> Result<f64> {
    let mut total = 0.0;
    for f in family {
        total += msq_integral(&prime_polynomial(f, y, u, sieve)?, t)?;
    }
    Ok(total)
}

/// ∫_0^∞ |Σ_{n ∈ (x, xe^{1/T}]} c(n)|² dx/x, computed exactly: in v = log x the
/// window sum is piecewise constant with jumps at log n and log n − 1/T.
pub fn gallagher_rhs_integral(poly: &DirichletPolynomial, t: f64) -> f64 {
    let width = 1.0 / t;
    let logs: Vec<f64> = poly.terms().iter().map(|&(n, _)| (n as f64).ln()).collect();
    let mut breaks: Vec<f64> = logs.iter().flat_map(|&l| [l, l - width]).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let v = 0.5 * (a + b);
        // n ∈ (e^v, e^{v + 1/T}]  ⟺  v < log n ≤ v + 1/T
        let s: Complex64 = poly
            .terms()
            .iter()
            .zip(&logs)
            .filter(|(_, &l)| v < l && l <= v + width)
            .map(|(&(_, c), _)| c)
            .sum();
        total += s.norm_sqr() * (b - a);
    }
    total
}

/// msq_integral / (T² · Gallagher integral); Gallagher's inequality says this
/// ratio is bounded by an absolute constant.
pub fn gallagher_ratio(poly: &DirichletPolynomial, t: f64) -> Result<f64> {
    let lhs = msq_integral(poly, t)?;
    let rhs = gallagher_rhs_integral(poly, t);
    Ok(if rhs == 0.0 { 0.0 } else { lhs / (t * t * rhs) })
}

/// A bound of the form LHS ≪ RHS with unspecified implied constant.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub schema: u32,
    pub bound: &'static str,
    pub lhs: Option<f64>,
    /// Natural log of the right-hand side shape (constant 1).
    pub log_rhs_shape: f64,
    pub rhs_shape: Option<f64>,
    /// lhs / rhs_shape, when both are finite.
    pub ratio: Option<f64>,
    pub params: serde_json::Value,
    pub tags: Vec<String>,
}

impl BoundReport {
    fn new(
        bound: &'static str,
        lhs: Option<f64>,
        log_rhs: f64,
        params: serde_json::Value,
        tags: Vec<String>,
    ) -> Self {
        let rhs = log_rhs.exp();
        let rhs_shape = (rhs.is_finite() && rhs > 0.0).then_some(rhs);
        let ratio = match (lhs, rhs_shape) {
            (Some(l), Some(r)) => Some(l / r),
            _ => None,
        };
        BoundReport {
            schema: crate::SCHEMA_VERSION,
            bound,
            lhs,
            log_rhs_shape: log_rhs,
            rhs_shape,
            ratio,
            params,
            tags,
        }
    }
}

/// Shape m_𝔉(Q)·(QT)^{10^7 m³ (1 − σ)}·(log QT)^{2m²} for zero counts.
pub fn zero_density_shape(
    m: usize,
    q: f64,
    t: f64,
    sigma: f64,
    multiplicity: usize,
) -> Result<BoundReport> {
    if !(0.5..=1.0).contains(&sigma) {
        return Err(Error::ParameterOutOfRange(format!(
            "sigma = {sigma} outside [1/2, 1]"
        )));
    }
    if !(q >= 1.0 && t >= 1.0) || m == 0 || multiplicity == 0 {
        return Err(Error::ParameterOutOfRange(
            "need Q, T ≥ 1, m ≥ 1 and multiplicity ≥ 1".into(),
        ));
    }
    let mf = m as f64;
    let lqt = (q * t).ln();
    let log_rhs = (multiplicity as f64).ln()
        + 1e7 * mf.powi(3) * (1.0 - sigma) * lqt
        + 2.0 * mf * mf * lqt.ln();
    let params =
        serde_json::json!({"m": m, "Q": q, "T": t, "sigma": sigma, "multiplicity": multiplicity});
    let mut tags = Vec::new();
    if q * t <= std::f64::consts::E {
        tags.push("log_qt_below_one".into());
    }
    Ok(BoundReport::new(
        "zero_density",
        None,
        log_rhs,
        params,
        tags,
    ))
}

/// Shape (x(log x)^{m²}/T·m_𝔉 + √x Q^{54(m+1)} T^{m²})·Σ|b|² of the large sieve.
pub fn large_sieve_shape(
    m: usize,
    q: f64,
    t: f64,
    x: f64,
    multiplicity: usize,
    b_norm_sq: f64,
    lhs: Option<f64>,
) -> Result<BoundReport> {
    if !(q >= 1.0 && t >= 1.0 && x >= 1.0) {
        return Err(Error::ParameterOutOfRange("need Q, T, x ≥ 1".into()));
    }
    let mf = (m * m) as f64;
    let a = x.ln() + mf * x.ln().max(f64::MIN_POSITIVE).ln() - t.ln()
        + (multiplicity.max(1) as f64).ln();
    let b = 0.5 * x.ln() + 54.0 * (m + 1) as f64 * q.ln() + mf * t.ln();
    let log_rhs = log_add_exp(a, b) + b_norm_sq.ln();
    let params = serde_json::json!({"m": m, "Q": q, "T": t, "x": x, "multiplicity": multiplicity, "b_norm_sq": b_norm_sq});
    Ok(BoundReport::new(
        "large_sieve",
        lhs,
        log_rhs,
        params,
        Vec::new(),
    ))
}

/// Shape (log y)^{2m²}·m_𝔉(Q)·log u of the prime mean value; tagged when
/// y < (QT)^{108(m+1)}, the range where the estimate is stated.
pub fn prime_mean_value_shape(
    m: usize,
    q: f64,
    t: f64,
    y: f64,
    u: f64,
    multiplicity: usize,
    lhs: Option<f64>,
) -> Result<BoundReport> {
    if !(y > 1.0 && u >= y && q >= 1.0 && t >= 1.0) {
        return Err(Error::ParameterOutOfRange(
            "need 1 < y ≤ u and Q, T ≥ 1".into(),
        ));
    }
    let log_rhs =
        2.0 * (m * m) as f64 * y.ln().ln() + (multiplicity.max(1) as f64).ln() + u.ln().ln();
    let mut tags = Vec::new();
    if y.ln() < 108.0 * (m + 1) as f64 * (q * t).ln() {
        tags.push("y_below_stated_range".into());
    }
    if u.ln() > 12000.0 * y.ln() {
        tags.push("u_above_stated_range".into());
    }
    let params = serde_json::json!({"m": m, "Q": q, "T": t, "y": y, "u": u, "multiplicity": multiplicity,
        "log_family_count_shape": 52.0 * (m + 1) as f64 * q.ln()});
    Ok(BoundReport::new(
        "prime_mean_value",
        lhs,
        log_rhs,
        params,
        tags,
    ))
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}
