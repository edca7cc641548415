//! Browser bindings: weight curves, η profiles and Chebotarev counts for the
//! built-in catalog. Every export returns a JSON string.

use chebotarev_core::chebotarev::class_distribution;
use chebotarev_core::numerics::linspace;
use chebotarev_core::weights::{f_eval, laplace_f, WeightParams};
use chebotarev_core::zfr::{error_factor, EtaProfile, DEFAULT_C1, DEFAULT_C_EPS};
use chebotarev_core::{sieve_primes, Catalog, Error, Result};
use num_complex::Complex64;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest x accepted by the counting export.
pub const MAX_COUNT_X: f64 = 2e6;

const MAX_POINTS: usize = 5000;

fn check_points(points: usize) -> Result<()> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(Error::ParameterOutOfRange(format!(
            "points must lie in [2, {MAX_POINTS}]"
        )));
    }
    Ok(())
}

/// f across its support and |F(−(1/2 + it) log x)| for t ∈ [0, t_max].
pub fn weight_curve_json(x: f64, eps: f64, points: usize, t_max: f64) -> Result<String> {
    check_points(points)?;
    let params = WeightParams::new(x, eps)?;
    let (lo, hi) = params.support();
    let t: Vec<f64> = linspace(lo - 0.02, hi + 0.02, points);
    let f: Vec<f64> = t.iter().map(|&t| f_eval(&params, t)).collect();
    let ts: Vec<f64> = linspace(0.0, t_max.abs(), points);
    let transform: Vec<f64> = ts
        .iter()
        .map(|&s| laplace_f(&params, -Complex64::new(0.5, s) * params.log_x()).norm())
        .collect();
    Ok(json!({"x": x, "eps": eps, "delta": params.delta(), "t": t, "f": f, "s_im": ts, "abs_transform": transform})
        .to_string())
}

/// η(x) and the error multiplier e^{−η/8}·log(eD) for a catalog field.
pub fn eta_profile_json(
    field: &str,
    log_x_min: f64,
    log_x_max: f64,
    points: usize,
) -> Result<String> {
    check_points(points)?;
    if !(log_x_min > 0.0 && log_x_max > log_x_min) {
        return Err(Error::ParameterOutOfRange(
            "need 0 < log_x_min < log_x_max".into(),
        ));
    }
    let catalog = Catalog::builtin();
    let k = catalog.get(field)?;
    let profile =
        EtaProfile::for_field(k.log_disc(), k.degree_closure(), DEFAULT_C1, DEFAULT_C_EPS)?;
    let mut rows = Vec::with_capacity(points);
    for lx in linspace(log_x_min, log_x_max, points) {
        let eta = profile.eta(lx)?;
        let factor = error_factor(eta, lx, k.log_disc()).ok();
        rows.push(json!({"log_x": lx, "eta": eta, "error_factor": factor}));
    }
    Ok(json!({"field": field, "degree": k.degree_closure(), "log_disc": k.log_disc(), "rows": rows}).to_string())
}

/// Unramified primes p ≤ x by factorization type, with the expected counts.
pub fn chebotarev_counts_json(field: &str, x: f64) -> Result<String> {
    if !(2.0..=MAX_COUNT_X).contains(&x) {
        return Err(Error::ParameterOutOfRange(format!(
            "x must lie in [2, {MAX_COUNT_X}]"
        )));
    }
    let catalog = Catalog::builtin();
    let k = catalog.get(field)?;
    let sieve = sieve_primes(x as u64)?;
    let dist = class_distribution(k, x, &sieve)?;
    let order = k.group().order() as f64;
    let unramified = (dist.pi - dist.ramified) as f64;
    let rows: Vec<_> = dist
        .by_type
        .values()
        .map(|t| {
            json!({
                "cycle_type": t.cycle_type,
                "classes": t.classes.iter().map(|c| c + 1).collect::<Vec<_>>(),
                "size": t.size,
                "count": t.count,
                "expected": t.size as f64 / order * unramified,
            })
        })
        .collect();
    Ok(json!({"field": field, "group": k.group().name(), "x": x, "pi": dist.pi, "ramified": dist.ramified, "rows": rows})
        .to_string())
}

/// Names and groups of the built-in fields.
pub fn fields_json() -> String {
    let catalog = Catalog::builtin();
    let rows: Vec<_> = catalog
        .fields()
        .iter()
        .map(|k| json!({"name": k.name(), "group": k.group().name(), "degree": k.degree_closure()}))
        .collect();
    serde_json::Value::Array(rows).to_string()
}

fn js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn weight_curve(
    x: f64,
    eps: f64,
    points: usize,
    t_max: f64,
) -> std::result::Result<String, JsValue> {
    js(weight_curve_json(x, eps, points, t_max))
}

#[wasm_bindgen]
pub fn eta_profile(
    field: &str,
    log_x_min: f64,
    log_x_max: f64,
    points: usize,
) -> std::result::Result<String, JsValue> {
    js(eta_profile_json(field, log_x_min, log_x_max, points))
}

#[wasm_bindgen]
pub fn chebotarev_counts(field: &str, x: f64) -> std::result::Result<String, JsValue> {
    js(chebotarev_counts_json(field, x))
}

#[wasm_bindgen]
pub fn fields() -> String {
    fields_json()
}
