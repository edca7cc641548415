use chebotarev_core::chebotarev::{
    class_distribution, class_targets, flexi_error_report, is_admissible, partial_summation_pi,
    pi_c_count, psi_weighted_terms, ClassTarget,
};
use chebotarev_core::families::{
    avg_cheb_error, fundamental_discriminants, quadratic_fields, AvgParams, Family,
};
use chebotarev_core::numerics::linspace;
use chebotarev_core::weights::{self, WeightParams};
use chebotarev_core::zfr::{self, EtaProfile, ZfrData};
use chebotarev_core::{
    artin, large_sieve, sieve_primes, Catalog, FieldDescriptor, PrimeSieve, SCHEMA_VERSION,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;
use crate::report::{joined, num, CliResult, Failure, Report, Table};

fn need<'a, T>(value: &'a Option<T>, flag: &str) -> CliResult<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Failure::validation("missing_argument", format!("{flag} is required")))
}

fn sieve_for(x: f64) -> CliResult<PrimeSieve> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Failure::validation(
            "parameter_out_of_range",
            format!("x = {x}"),
        ));
    }
    Ok(sieve_primes((x.floor() as u64).max(2))?)
}

/// Explicit names, else every catalog field with the group label.
fn select_fields(
    catalog: &Catalog,
    names: &[String],
    group: &Option<String>,
) -> CliResult<Vec<FieldDescriptor>> {
    if !names.is_empty() {
        return names.iter().map(|n| Ok(catalog.get(n)?.clone())).collect();
    }
    let Some(label) = group else {
        return Err(Failure::validation(
            "missing_argument",
            "--fields or --group is required",
        ));
    };
    let fields: Vec<FieldDescriptor> = catalog
        .fields()
        .iter()
        .filter(|f| f.group().name() == label.as_str())
        .cloned()
        .collect();
    if fields.is_empty() {
        return Err(Failure::validation(
            "empty_family",
            format!("no catalog field has group `{label}`"),
        ));
    }
    Ok(fields)
}

fn max_abs_disc(fields: &[FieldDescriptor]) -> BigInt {
    fields
        .iter()
        .map(|f| f.disc_field().magnitude().clone())
        .max()
        .map(BigInt::from)
        .unwrap_or_default()
}

pub fn coeffs(catalog: &Catalog, a: &CoeffsArgs) -> CliResult<Report> {
    let k = catalog.get(need(&a.field, "--field")?)?;
    let k2 = a.pair.as_deref().map(|p| catalog.get(p)).transpose()?;
    if a.n > 10_000_000 {
        return Err(Failure::validation(
            "parameter_out_of_range",
            "--n must be at most 10^7",
        ));
    }
    let column = if k2.is_some() { "a_KxK(n)" } else { "a_K(n)" };
    let mut table = Table::new(&["n", column]);
    let mut values = Vec::new();
    for n in 1..=a.n {
        let value = match k2 {
            Some(k2) if k.is_coprime(n) && k2.is_coprime(n) => artin::coeff_a_kxk(k, k2, n)?,
            None if k.is_coprime(n) => artin::coeff_a_k(k, n)?,
            _ => continue,
        };
        table.push(vec![n.to_string(), value.to_string()]);
        values.push(json!({"n": n, "value": value}));
    }
    let json = json!({
        "schema": SCHEMA_VERSION,
        "field": k.name(),
        "pair": k2.map(|f| f.name()),
        "n_max": a.n,
        "values": values,
    });
    Ok(Report::both(json, table, Format::Csv))
}

pub fn splitting(catalog: &Catalog, a: &SplittingArgs) -> CliResult<Report> {
    let k = catalog.get(need(&a.field, "--field")?)?;
    let sieve = sieve_for(a.x as f64)?;
    let mut table = Table::new(&[
        "p",
        "ramified",
        "factorization_type",
        "frobenius_order",
        "class",
        "candidates",
    ]);
    for &p in sieve.primes_up_to(a.x)? {
        let d = k.frobenius_data(p)?;
        let labels: Vec<usize> = d.candidates.iter().map(|c| c + 1).collect();
        table.push(vec![
            p.to_string(),
            d.ramified.to_string(),
            joined(&d.factorization_type),
            d.frobenius_order.to_string(),
            d.class.map(|c| (c + 1).to_string()).unwrap_or_default(),
            joined(&labels),
        ]);
    }
    let dist = class_distribution(k, a.x as f64, &sieve)?;
    let json = json!({
        "schema": SCHEMA_VERSION,
        "field": k.name(),
        "group": k.group().name(),
        "classes": k.group().classes(),
        "distribution": dist,
    });
    Ok(Report::both(json, table, Format::Csv))
}

pub fn large_sieve(catalog: &Catalog, a: &LargeSieveArgs, seed: u64) -> CliResult<Report> {
    let family = select_fields(catalog, &a.fields, &a.group)?;
    let q = match a.q {
        Some(q) => q,
        None => max_abs_disc(&family)
            .to_string()
            .parse::<f64>()
            .map_err(|e| Failure::computation("discriminant", e.to_string()))?,
    };
    let multiplicity = match a.multiplicity {
        Some(m) => m,
        None => {
            let fam = Family::new(&family, max_abs_disc(&family), None)?;
            fam.intersection_multiplicity()?
        }
    };
    let m = family.iter().map(FieldDescriptor::m).max().unwrap_or(1);
    let report = match a.mode {
        SieveMode::Window => {
            if !(a.x >= 1.0 && a.t >= 1.0 && a.x * (1.0 / a.t).exp() <= 1e7) {
                return Err(Failure::validation(
                    "parameter_out_of_range",
                    "need x, T ≥ 1 and xe^{1/T} ≤ 10^7",
                ));
            }
            let lo = a.x.floor() as u64 + 1;
            let hi = (a.x * (1.0 / a.t).exp()).floor() as u64;
            let b: Vec<Complex64> = match a.b {
                Coefficients::Ones => {
                    vec![Complex64::new(1.0, 0.0); (hi + 1).saturating_sub(lo) as usize]
                }
                Coefficients::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (lo..=hi)
                        .map(|_| {
                            Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
                        })
                        .collect()
                }
            };
            let b_norm_sq: f64 = b.iter().map(|c| c.norm_sqr()).sum();
            let lhs =
                large_sieve::pre_large_sieve_lhs(&family, |n| b[(n - lo) as usize], a.x, a.t)?;
            large_sieve::large_sieve_shape(m, q, a.t, a.x, multiplicity, b_norm_sq, Some(lhs))?
        }
        SieveMode::Primes => {
            let sieve = sieve_for(a.u as f64)?;
            let lhs = large_sieve::mvt_primes_lhs(&family, a.y, a.u, a.t, &sieve)?;
            large_sieve::prime_mean_value_shape(
                m,
                q,
                a.t,
                a.y as f64,
                a.u as f64,
                multiplicity,
                Some(lhs),
            )?
        }
        SieveMode::ZeroDensity => {
            large_sieve::zero_density_shape(m, q, a.t, a.sigma, multiplicity)?
        }
    };
    let names: Vec<&str> = family.iter().map(|f| f.name()).collect();
    let mut json = serde_json::to_value(&report)
        .map_err(|e| Failure::computation("serialization", e.to_string()))?;
    json["family"] = json!(names);
    let mut table = Table::new(&["bound", "lhs", "rhs_shape", "log_rhs_shape", "ratio"]);
    table.push(vec![
        report.bound.to_string(),
        report.lhs.map(num).unwrap_or_default(),
        report.rhs_shape.map(num).unwrap_or_default(),
        num(report.log_rhs_shape),
        report.ratio.map(num).unwrap_or_default(),
    ]);
    Ok(Report::both(json, table, Format::Json))
}

pub fn weights(a: &WeightsArgs) -> CliResult<Report> {
    let params = WeightParams::new(a.x, a.eps)?;
    if a.points < 2 || a.points > 1_000_000 {
        return Err(Failure::validation(
            "parameter_out_of_range",
            "--points must lie in [2, 10^6]",
        ));
    }
    let (lo, hi) = params.support();
    let mut rows = Vec::new();
    let table = match a.grid {
        Grid::F => {
            let mut t = Table::new(&["t", "f"]);
            for s in linspace(lo, hi, a.points) {
                let v = weights::f_eval(&params, s);
                t.push(vec![num(s), num(v)]);
                rows.push(json!({"t": s, "f": v}));
            }
            t
        }
        Grid::Laplace => {
            let mut t = Table::new(&["re", "im", "F_re", "F_im"]);
            for re in linspace(-a.z_max, a.z_max, a.points) {
                let f = weights::laplace_f(&params, Complex64::new(re, a.z_im));
                t.push(vec![num(re), num(a.z_im), num(f.re), num(f.im)]);
                rows.push(json!({"re": re, "im": a.z_im, "F_re": f.re, "F_im": f.im}));
            }
            t
        }
        Grid::BoundIv | Grid::BoundV => {
            let mut t = Table::new(&["sigma", "t", "lhs", "rhs", "pass"]);
            let sigma = if a.grid == Grid::BoundV {
                -0.5
            } else {
                a.sigma
            };
            for im in linspace(-a.t_max, a.t_max, a.points) {
                let check = if a.grid == Grid::BoundV {
                    weights::check_bound_v(&params, im)
                } else {
                    weights::check_bound_iv(&params, Complex64::new(sigma, im))?
                };
                t.push(vec![
                    num(sigma),
                    num(im),
                    num(check.lhs),
                    num(check.rhs),
                    check.pass.to_string(),
                ]);
                rows.push(json!({"sigma": sigma, "t": im, "lhs": check.lhs, "rhs": check.rhs, "pass": check.pass}));
            }
            t
        }
    };
    let json = json!({
        "schema": SCHEMA_VERSION,
        "x": a.x,
        "eps": a.eps,
        "delta": params.delta(),
        "support": [lo, hi],
        "F0": weights::laplace_f(&params, Complex64::new(0.0, 0.0)).re,
        "main_term_ratio": weights::main_term_ratio(&params),
        "grid": format!("{:?}", a.grid).to_lowercase(),
        "rows": rows,
    });
    Ok(Report::both(json, table, Format::Csv))
}

pub fn eta(catalog: &Catalog, a: &EtaArgs) -> CliResult<Report> {
    let (log_d, n) = match &a.field {
        Some(name) => {
            let k = catalog.get(name)?;
            (k.log_disc(), k.degree_closure())
        }
        None => (
            *need(&a.log_d, "--field or --log-d")?,
            *need(&a.degree, "--degree")?,
        ),
    };
    if a.points < 2 || a.points > 100_000 || !(a.log_x_min > 0.0 && a.log_x_max >= a.log_x_min) {
        return Err(Failure::validation(
            "parameter_out_of_range",
            "need 2 ≤ --points ≤ 10^5 and 0 < --log-x-min ≤ --log-x-max",
        ));
    }
    let grid = linspace(a.log_x_min, a.log_x_max, a.points);
    let mut rows = Vec::new();
    let table = if a.large {
        let log_q = a.log_q.unwrap_or(log_d);
        let delta = a
            .delta
            .unwrap_or_else(|| zfr::default_delta(a.eps, n.saturating_sub(1).max(1)));
        let data = ZfrData::large(log_q, a.eps, n, delta, a.c1)?;
        let mut t = Table::new(&[
            "log_x",
            "eta_grid",
            "eta",
            "formula_eta",
            "u0",
            "u1",
            "u2",
            "three_term_displayed",
            "three_term_corrected",
            "exp_neg_eta",
            "displayed_holds",
            "corrected_holds",
        ]);
        for &lx in &grid {
            let grid_eta = zfr::eta_from_delta(&data, lx, a.resolution)?;
            let e = zfr::eta_large_zfr_closed(log_q, a.eps, n, delta, a.c1, lx)?;
            t.push(vec![
                num(lx),
                num(grid_eta),
                num(e.eta),
                num(e.formula_eta),
                num(e.u0),
                num(e.u1),
                num(e.u2),
                num(e.three_term_displayed),
                num(e.three_term_corrected),
                num(e.exp_neg_eta),
                e.displayed_holds.to_string(),
                e.corrected_holds.to_string(),
            ]);
            rows.push(json!({"log_x": lx, "eta_grid": grid_eta, "closed": e}));
        }
        t
    } else {
        let profile = EtaProfile {
            zfr: if n <= 1 {
                ZfrData::constant(0.5)
            } else {
                ZfrData::classical(log_d, n, a.c1, a.c_eps)?
            },
            resolution: a.resolution,
        };
        let mut t = Table::new(&["log_x", "eta", "eta_closed", "error_factor"]);
        for &lx in &grid {
            let e = profile.eta(lx)?;
            let closed = if n <= 1 {
                None
            } else {
                Some(zfr::eta_classical_closed(log_d, n, a.c1, a.c_eps, lx)?)
            };
            let factor = zfr::error_factor(e, lx, log_d).ok();
            t.push(vec![
                num(lx),
                num(e),
                closed.map(num).unwrap_or_default(),
                factor.map(num).unwrap_or_default(),
            ]);
            rows.push(json!({"log_x": lx, "eta": e, "eta_closed": closed, "error_factor": factor}));
        }
        t
    };
    let json = json!({
        "schema": SCHEMA_VERSION,
        "field": a.field,
        "log_d": log_d,
        "degree": n,
        "large": a.large,
        "c1": a.c1,
        "c_eps": a.c_eps,
        "rows": rows,
    });
    Ok(Report::both(json, table, Format::Csv))
}

fn target_result(
    k: &FieldDescriptor,
    target: &ClassTarget,
    a: &ChebotarevArgs,
    profile: &EtaProfile,
    sieve: &PrimeSieve,
) -> CliResult<Value> {
    let count = pi_c_count(k, target, a.x, sieve)?;
    let (report, report_error) = match flexi_error_report(k, target, a.x, profile, sieve) {
        Ok(r) => (Some(r), None),
        Err(e) if e.is_validation() => (None, Some(e.code())),
        Err(e) => return Err(e.into()),
    };
    let admissibility = match target {
        ClassTarget::Class(c) => Some(is_admissible(k.group(), *c, k.strong_artin())?),
        ClassTarget::CycleType(_) => None,
    };
    let weighted = match a.weights_eps {
        Some(eps) => {
            let params = WeightParams::new(a.x, eps)?;
            let terms = psi_weighted_terms(k, target, &params, sieve)?;
            let psi: f64 = terms.iter().map(|t| t.weight).sum();
            let data: Vec<(f64, f64)> = terms.iter().map(|t| (t.n as f64, t.weight)).collect();
            let pi_est = partial_summation_pi(&data, (params.support().1 * params.log_x()).exp())?;
            Some(
                json!({"eps": eps, "delta": params.delta(), "psi": psi, "terms": terms.len(), "pi_from_psi": pi_est}),
            )
        }
        None => None,
    };
    Ok(json!({
        "target": target,
        "count": count.count,
        "expected": count.expected,
        "error": count.error,
        "class_size": count.class_size,
        "group_order": count.group_order,
        "classes": count.classes.iter().map(|c| c + 1).collect::<Vec<_>>(),
        "admissibility": admissibility,
        "weighted": weighted,
        "report": report,
        "report_error": report_error,
    }))
}

pub fn chebotarev(catalog: &Catalog, a: &ChebotarevArgs) -> CliResult<Report> {
    let k = catalog.get(need(&a.field, "--field")?)?;
    if !(a.x >= 2.0 && a.x <= 1e8) {
        return Err(Failure::validation(
            "parameter_out_of_range",
            "--x must lie in [2, 10^8]",
        ));
    }
    let targets = match &a.class {
        Some(s) => vec![ClassTarget::parse(s)?],
        None => class_targets(k),
    };
    let mut limit = a.x;
    if let Some(eps) = a.weights_eps {
        let params = WeightParams::new(a.x, eps)?;
        limit = (params.support().1 * params.log_x()).exp();
    }
    let sieve = sieve_for(limit)?;
    let profile = EtaProfile::for_field(k.log_disc(), k.degree_closure(), a.c1, a.c_eps)?;
    let pi = chebotarev_core::chebotarev::pi_count(a.x, &sieve)?;
    let mut table = Table::new(&[
        "field",
        "target",
        "x",
        "count",
        "pi",
        "expected",
        "error",
        "class_size",
        "group_order",
        "psi",
    ]);
    let mut results = Vec::new();
    for t in &targets {
        let r = target_result(k, t, a, &profile, &sieve)?;
        table.push(vec![
            k.name().to_string(),
            t.to_string(),
            num(a.x),
            r["count"].to_string(),
            pi.to_string(),
            num(r["expected"].as_f64().unwrap_or(f64::NAN)),
            num(r["error"].as_f64().unwrap_or(f64::NAN)),
            r["class_size"].to_string(),
            r["group_order"].to_string(),
            r["weighted"]["psi"].as_f64().map(num).unwrap_or_default(),
        ]);
        results.push(r);
    }
    let mut json = json!({
        "schema": SCHEMA_VERSION,
        "field": k.name(),
        "group": k.group().name(),
        "x": a.x,
        "pi": pi,
    });
    if a.class.is_some() {
        let single = results.pop().expect("one target");
        for (key, value) in single.as_object().expect("object") {
            json[key] = value.clone();
        }
    } else {
        json["results"] = Value::Array(results);
    }
    Ok(Report::both(json, table, Format::Json))
}

pub fn family(catalog: &Catalog, a: &FamilyArgs) -> CliResult<Report> {
    let candidates = match a.quadratic_limit {
        Some(limit) => {
            if limit > 1_000_000 {
                return Err(Failure::validation(
                    "parameter_out_of_range",
                    "--quadratic-limit must be at most 10^6",
                ));
            }
            quadratic_fields(&fundamental_discriminants(limit))?
        }
        None => select_fields(catalog, &a.fields, &a.group)?,
    };
    let q = match &a.q {
        Some(s) => s
            .parse::<BigInt>()
            .map_err(|e| Failure::validation("parameter_out_of_range", format!("--q: {e}")))?,
        None => max_abs_disc(&candidates),
    };
    let fam = Family::new(&candidates, q, None)?;
    if !(a.x >= 2.0 && a.x <= 1e8) {
        return Err(Failure::validation(
            "parameter_out_of_range",
            "--x must lie in [2, 10^8]",
        ));
    }
    let sieve = sieve_for(a.x)?;
    let params = AvgParams {
        eps: a.eps,
        a: a.a,
        threshold: a.threshold,
    };
    let report = avg_cheb_error(&fam, a.x, params, &sieve)?;
    let mut table = Table::new(&["field", "max_error"]);
    for e in &report.per_field {
        table.push(vec![e.field.clone(), num(e.max_error)]);
    }
    let mut json = serde_json::to_value(&report)
        .map_err(|e| Failure::computation("serialization", e.to_string()))?;
    json["group"] = json!(fam.fields().first().map(|f| f.group().name()));
    Ok(Report::both(json, table, Format::Json))
}
