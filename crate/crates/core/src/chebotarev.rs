//! Chebotarev prime counting, admissibility certificates, weighted prime sums,
//! base change and error-bound reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::group::{ElementId, FiniteGroup, Subgroup};
use crate::par;
use crate::sieve::PrimeSieve;
use crate::weights::{f_eval, WeightParams};
use crate::zfr::{self, EtaProfile, ZfrData};

/// A conjugacy class by index, or the union of all classes with a given cycle
/// type (the finest target the factorization type of p always resolves).
/// Serialized in its text form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub enum ClassTarget {
    Class(usize),
    CycleType(Vec<usize>),
}

impl ClassTarget {
    /// Parses `3` as the third class (1-based; class 1 is the identity) and
    /// `type:2,1,1` as a cycle type.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("type:") {
            let mut ty = rest
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::ParameterOutOfRange(format!("bad cycle type `{rest}`")))?;
            if ty.is_empty() || ty.contains(&0) {
                return Err(Error::ParameterOutOfRange(format!(
                    "bad cycle type `{rest}`"
                )));
            }
            ty.sort_unstable_by(|a, b| b.cmp(a));
            return Ok(ClassTarget::CycleType(ty));
        }
        match s.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(ClassTarget::Class(i - 1)),
            _ => Err(Error::ParameterOutOfRange(format!(
                "bad class `{s}` (use a 1-based index or type:a,b,…)"
            ))),
        }
    }

    /// Class indices covered by the target.
    pub fn classes(&self, field: &FieldDescriptor) -> Result<Vec<usize>> {
        let g = field.group();
        match self {
            ClassTarget::Class(i) => {
                if *i >= g.classes().len() {
                    return Err(Error::ParameterOutOfRange(format!(
                        "class {i} out of range: {} has {} classes",
                        g.name(),
                        g.classes().len()
                    )));
                }
                Ok(vec![*i])
            }
            ClassTarget::CycleType(ty) => {
                let cs = g.classes_with_cycle_type(ty, field.action());
                if cs.is_empty() {
                    return Err(Error::ParameterOutOfRange(format!(
                        "{ty:?} is not a cycle type of {}",
                        g.name()
                    )));
                }
                Ok(cs)
            }
        }
    }

    /// Total size of the covered classes.
    pub fn size(&self, field: &FieldDescriptor) -> Result<usize> {
        let g = field.group();
        Ok(self
            .classes(field)?
            .iter()
            .map(|&c| g.classes()[c].size())
            .sum())
    }
}

impl From<ClassTarget> for String {
    fn from(t: ClassTarget) -> String {
        t.to_string()
    }
}

impl fmt::Display for ClassTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTarget::Class(i) => write!(f, "{}", i + 1),
            ClassTarget::CycleType(ty) => {
                let parts: Vec<String> = ty.iter().map(|d| d.to_string()).collect();
                write!(f, "type:{}", parts.join(","))
            }
        }
    }
}

/// One target per cycle type of G: a single class when the type determines
/// it, otherwise the cycle-type union. Ordered by first class index.
pub fn class_targets(field: &FieldDescriptor) -> Vec<ClassTarget> {
    let g = field.group();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in g.classes() {
        let ty = g.cycle_type(c.representative, field.action());
        if !seen.insert(ty.clone()) {
            continue;
        }
        let cs = g.classes_with_cycle_type(&ty, field.action());
        out.push(if cs.len() == 1 {
            ClassTarget::Class(cs[0])
        } else {
            ClassTarget::CycleType(ty)
        });
    }
    out
}

fn floor_x(x: f64) -> Result<u64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!(
            "x = {x} must be finite and nonnegative"
        )));
    }
    Ok(x.floor() as u64)
}

/// π(x).
pub fn pi_count(x: f64, sieve: &PrimeSieve) -> Result<u64> {
    sieve.pi_count(floor_x(x)?)
}

/// Factorization type of every prime (None when ramified), in prime order.
fn frobenius_types(field: &FieldDescriptor, primes: &[u64]) -> Result<Vec<Option<Vec<usize>>>> {
    let blocks: Vec<&[u64]> = primes.chunks(par::BLOCK).collect();
    let per_block = par::map(&blocks, |block| -> Result<Vec<Option<Vec<usize>>>> {
        block
            .iter()
            .map(|&p| {
                let d = field.frobenius_data(p)?;
                Ok((!d.ramified).then_some(d.factorization_type))
            })
            .collect()
    });
    let mut out = Vec::with_capacity(primes.len());
    for b in per_block {
        out.extend(b?);
    }
    Ok(out)
}

/// Counts of unramified primes p ≤ x by factorization type.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassDistribution {
    pub x: f64,
    pub pi: u64,
    pub ramified: u64,
    pub by_type: BTreeMap<String, TypeCount>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeCount {
    pub cycle_type: Vec<usize>,
    #[serde(serialize_with = "crate::group::class_label::many")]
    pub classes: Vec<usize>,
    pub size: usize,
    pub count: u64,
}

pub fn class_distribution(
    field: &FieldDescriptor,
    x: f64,
    sieve: &PrimeSieve,
) -> Result<ClassDistribution> {
    let primes = sieve.primes_up_to(floor_x(x)?)?;
    let types = frobenius_types(field, primes)?;
    let g = field.group();
    let mut by_type: BTreeMap<String, TypeCount> = BTreeMap::new();
    for c in g.classes() {
        let ty = g.cycle_type(c.representative, field.action());
        let e = by_type.entry(type_key(&ty)).or_insert_with(|| TypeCount {
            cycle_type: ty.clone(),
            classes: Vec::new(),
            size: 0,
            count: 0,
        });
        e.classes.push(c.index);
        e.size += c.size();
    }
    let mut ramified = 0;
    for t in types {
        match t {
            None => ramified += 1,
            Some(ty) => {
                by_type
                    .get_mut(&type_key(&ty))
                    .ok_or_else(|| {
                        Error::InvalidField(format!("{}: type {ty:?} not in group", field.name()))
                    })?
                    .count += 1
            }
        }
    }
    Ok(ClassDistribution {
        x,
        pi: primes.len() as u64,
        ramified,
        by_type,
    })
}

fn type_key(ty: &[usize]) -> String {
    ty.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChebotarevCount {
    pub x: f64,
    pub target: String,
    #[serde(serialize_with = "crate::group::class_label::many")]
    pub classes: Vec<usize>,
    pub class_size: usize,
    pub group_order: usize,
    pub count: u64,
    pub pi: u64,
    pub ramified: u64,
    /// (|C|/|G|)·π(x)
    pub expected: f64,
    /// count − expected
    pub error: f64,
}

/// π_C(x, K/Q). A class target must be determined by its cycle type.
pub fn pi_c_count(
    field: &FieldDescriptor,
    target: &ClassTarget,
    x: f64,
    sieve: &PrimeSieve,
) -> Result<ChebotarevCount> {
    let classes = target.classes(field)?;
    let g = field.group();
    let ty = g.cycle_type(g.classes()[classes[0]].representative, field.action());
    if let ClassTarget::Class(_) = target {
        if g.classes_with_cycle_type(&ty, field.action()).len() > 1 {
            return Err(Error::AmbiguousClass(ty));
        }
    }
    let dist = class_distribution(field, x, sieve)?;
    let count = dist.by_type[&type_key(&ty)].count;
    let class_size = target.size(field)?;
    let expected = class_size as f64 / g.order() as f64 * dist.pi as f64;
    Ok(ChebotarevCount {
        x,
        target: target.to_string(),
        classes,
        class_size,
        group_order: g.order(),
        count,
        pi: dist.pi,
        ramified: dist.ramified,
        expected,
        error: count as f64 - expected,
    })
}

/// max over [`class_targets`] of |π_C(x) − (|C|/|G|)π(x)|.
pub fn max_class_error(field: &FieldDescriptor, x: f64, sieve: &PrimeSieve) -> Result<f64> {
    let dist = class_distribution(field, x, sieve)?;
    let order = field.group().order() as f64;
    Ok(dist
        .by_type
        .values()
        .map(|t| (t.count as f64 - t.size as f64 / order * dist.pi as f64).abs())
        .fold(0.0, f64::max))
}

/// Reasons recorded for one candidate subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityCertificate {
    #[serde(serialize_with = "crate::group::class_label::one")]
    pub class: usize,
    pub subgroup: Vec<ElementId>,
    pub subgroup_order: usize,
    pub meets_class: bool,
    /// Justification for entire Artin L-functions of Gal(K/K^H).
    pub entire_characters: String,
    /// Justification for ζ_{K^H}/ζ entire.
    pub dedekind_quotient: String,
    /// True when the certificate rests on the user-asserted strong-Artin flag.
    pub conditional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    #[serde(serialize_with = "crate::group::class_label::one")]
    pub class: usize,
    pub certificate: Option<AdmissibilityCertificate>,
    pub reasons: Vec<String>,
}

/// Scans subgroups by increasing order for one meeting C that is abelian and
/// either normal or all of G; with `strong_artin`, H = G always qualifies.
pub fn is_admissible(
    group: &FiniteGroup,
    class: usize,
    strong_artin: bool,
) -> Result<Admissibility> {
    if class >= group.classes().len() {
        return Err(Error::ParameterOutOfRange(format!(
            "class {class} out of range"
        )));
    }
    let members = &group.classes()[class].members;
    let full = Subgroup(if group.order() == 128 {
        u128::MAX
    } else {
        (1u128 << group.order()) - 1
    });
    let mut reasons = Vec::new();
    for h in group.subgroups()? {
        if !members.iter().any(|&g| h.contains(g)) {
            continue;
        }
        let whole = h == full;
        let abelian = group.is_abelian_subgroup(h);
        let normal = group.is_normal(h);
        let entire = if abelian {
            Some("H abelian (class field theory)")
        } else if whole && strong_artin {
            Some("asserted: Artin holomorphy for G")
        } else {
            None
        };
        let dedekind = if whole {
            Some("H = G")
        } else if normal {
            Some("H normal (Aramata-Brauer)")
        } else {
            None
        };
        match (entire, dedekind) {
            (Some(e), Some(d)) => {
                return Ok(Admissibility {
                    class,
                    certificate: Some(AdmissibilityCertificate {
                        class,
                        subgroup: h.elements(),
                        subgroup_order: h.order(),
                        meets_class: true,
                        entire_characters: e.into(),
                        dedekind_quotient: d.into(),
                        conditional: !abelian,
                    }),
                    reasons,
                })
            }
            _ => reasons.push(format!(
                "H of order {} {:?}: {}{}",
                h.order(),
                h.elements(),
                if entire.is_none() {
                    "not abelian; "
                } else {
                    ""
                },
                if dedekind.is_none() { "not normal" } else { "" }
            )),
        }
    }
    Ok(Admissibility {
        class,
        certificate: None,
        reasons,
    })
}

/// Membership of Frob(p)^k in the target, given the factorization type of p.
/// All classes compatible with the type must agree.
fn power_in_target(
    field: &FieldDescriptor,
    ty: &[usize],
    k: u64,
    target: &BTreeSet<usize>,
) -> Result<bool> {
    let g = field.group();
    let mut answer = None;
    for c in g.classes_with_cycle_type(ty, field.action()) {
        let r = g.pow(g.classes()[c].representative, k);
        let inside = target.contains(&g.class_of(r));
        match answer {
            None => answer = Some(inside),
            Some(a) if a != inside => return Err(Error::AmbiguousClass(ty.to_vec())),
            _ => {}
        }
    }
    answer.ok_or_else(|| Error::InvalidField(format!("type {ty:?} not in group")))
}

/// One prime power n = p^k in a weighted sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightedTerm {
    pub n: u64,
    pub p: u64,
    pub k: u32,
    /// log p · f(log n / log x)
    pub weight: f64,
}

/// Terms of ψ̃_C(x; f): unramified p^k with Frob(p)^k in C and log n/log x in
/// supp f, ordered by (p, k).
pub fn psi_weighted_terms(
    field: &FieldDescriptor,
    target: &ClassTarget,
    params: &WeightParams,
    sieve: &PrimeSieve,
) -> Result<Vec<WeightedTerm>> {
    let set: BTreeSet<usize> = target.classes(field)?.into_iter().collect();
    let (lo, hi) = params.support();
    let log_x = params.log_x();
    let n_max = (hi * log_x).exp().floor();
    if n_max >= u64::MAX as f64 {
        return Err(Error::ParameterOutOfRange("x too large".into()));
    }
    let n_max = n_max as u64;
    let primes = sieve.primes_up_to(n_max)?;
    let n_min = (lo * log_x).exp();
    let types = frobenius_types(field, primes)?;
    let mut cache: BTreeMap<(Vec<usize>, u32), bool> = BTreeMap::new();
    let mut out = Vec::new();
    for (&p, ty) in primes.iter().zip(types) {
        let Some(ty) = ty else { continue };
        let lp = (p as f64).ln();
        let mut n = p as u128;
        let mut k = 1u32;
        while n <= n_max as u128 {
            if (n as f64) >= n_min * (1.0 - 1e-12) {
                let key = (ty.clone(), k);
                let inside = match cache.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = power_in_target(field, &ty, k as u64, &set)?;
                        cache.insert(key, v);
                        v
                    }
                };
                if inside {
                    let w = f_eval(params, k as f64 * lp / log_x);
                    if w > 0.0 {
                        out.push(WeightedTerm {
                            n: n as u64,
                            p,
                            k,
                            weight: lp * w,
                        });
                    }
                }
            }
            n *= p as u128;
            k += 1;
        }
    }
    Ok(out)
}

/// ψ̃_C(x; f) = Σ Λ(n) f(log n/log x) over unramified n = p^k with Frob(p)^k ∈ C.
pub fn psi_weighted_class(
    field: &FieldDescriptor,
    target: &ClassTarget,
    params: &WeightParams,
    sieve: &PrimeSieve,
) -> Result<f64> {
    Ok(psi_weighted_terms(field, target, params, sieve)?
        .iter()
        .map(|t| t.weight)
        .sum())
}

/// Abel summation: with S(t) = Σ_{n_i ≤ t} c_i,
/// S(x)/log x + ∫_{n_1}^x S(t)/(t log² t) dt, which equals Σ_{n_i ≤ x} c_i/log n_i.
/// Points need n ≥ 2; those above x are ignored.
pub fn partial_summation_pi(data: &[(f64, f64)], x: f64) -> Result<f64> {
    let mut pts: Vec<(f64, f64)> = data.iter().copied().filter(|&(n, _)| n <= x).collect();
    if pts.is_empty() {
        return Ok(0.0);
    }
    if pts.iter().any(|&(n, _)| !(n >= 2.0)) {
        return Err(Error::ParameterOutOfRange(
            "partial summation needs points n ≥ 2".into(),
        ));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut s = 0.0;
    let mut integral = 0.0;
    for (i, &(n, c)) in pts.iter().enumerate() {
        s += c;
        let next = pts.get(i + 1).map_or(x, |q| q.0);
        // ∫_n^next dt/(t log² t) = 1/log n − 1/log next
        integral += s * (1.0 / n.ln() - 1.0 / next.ln());
    }
    Ok(s / x.ln() + integral)
}

/// Both sides of the base-change inequality
/// |π_C(x, K/Q) − (|C|/|G|)(|H|/|C_H|) π_{C_H}(x, K/K^H)|
///   ≤ (|C|/|G|)(|G|√x + (2/log 2) log D_K).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseChangeReport {
    #[serde(serialize_with = "crate::group::class_label::one")]
    pub class: usize,
    pub subgroup: Vec<ElementId>,
    /// The H-class C_H of the first element of C ∩ H.
    pub c_h: Vec<ElementId>,
    pub x: f64,
    pub pi_c: u64,
    pub pi_c_h: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Counts primes of K^H with norm p^f ≤ x and Frobenius in C_H via the orbits
/// of ⟨Frob(p)⟩ on the left cosets G/H.
pub fn base_change_compare(
    field: &FieldDescriptor,
    class: usize,
    h: Subgroup,
    x: f64,
    sieve: &PrimeSieve,
) -> Result<BaseChangeReport> {
    let g = field.group();
    if class >= g.classes().len() {
        return Err(Error::ParameterOutOfRange(format!(
            "class {class} out of range"
        )));
    }
    let c = &g.classes()[class];
    let h0 = *c
        .members
        .iter()
        .find(|&&e| h.contains(e))
        .ok_or_else(|| Error::ParameterOutOfRange("subgroup does not meet the class".into()))?;
    let c_h = g.class_in_subgroup(h, h0);
    let c_h_set: BTreeSet<ElementId> = c_h.iter().copied().collect();
    let pi_c = pi_c_count(field, &ClassTarget::Class(class), x, sieve)?.count;

    // coset index of each element
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for e in 0..g.order() {
        if coset_of[e] != usize::MAX {
            continue;
        }
        for y in h.elements() {
            coset_of[g.mul(e, y)] = reps.len();
        }
        reps.push(e);
    }
    // per Frobenius element: norms exponents f of primes of K^H with Frobenius in C_H
    let degrees_for = |sigma: ElementId| -> Vec<u32> {
        let mut visited = vec![false; reps.len()];
        let mut out = Vec::new();
        for (i, &r) in reps.iter().enumerate() {
            if visited[i] {
                continue;
            }
            let mut f = 0u32;
            let mut cur = r;
            loop {
                visited[coset_of[cur]] = true;
                cur = g.mul(sigma, cur);
                f += 1;
                if coset_of[cur] == i {
                    break;
                }
            }
            let frob = g.mul(g.mul(g.inv(r), g.pow(sigma, f as u64)), r);
            debug_assert!(h.contains(frob));
            if c_h_set.contains(&frob) {
                out.push(f);
            }
        }
        out.sort_unstable();
        out
    };
    let primes = sieve.primes_up_to(floor_x(x)?)?;
    let types = frobenius_types(field, primes)?;
    let mut cache: BTreeMap<Vec<usize>, Vec<u32>> = BTreeMap::new();
    let mut pi_c_h = 0u64;
    for (&p, ty) in primes.iter().zip(types) {
        let Some(ty) = ty else { continue };
        if !cache.contains_key(&ty) {
            let mut agreed: Option<Vec<u32>> = None;
            for cand in g.classes_with_cycle_type(&ty, field.action()) {
                let d = degrees_for(g.classes()[cand].representative);
                match &agreed {
                    None => agreed = Some(d),
                    Some(a) if *a != d => {
                        return Err(Error::UnsupportedSubgroupAction(format!(
                            "residue degrees in K^H not determined by factorization type {ty:?}"
                        )))
                    }
                    _ => {}
                }
            }
            cache.insert(ty.clone(), agreed.unwrap_or_default());
        }
        for &f in &cache[&ty] {
            if (p as f64).powi(f as i32) <= x {
                pi_c_h += 1;
            }
        }
    }
    let frac = c.size() as f64 / g.order() as f64;
    let scale = frac * h.order() as f64 / c_h.len() as f64;
    let lhs = (pi_c as f64 - scale * pi_c_h as f64).abs();
    let rhs =
        frac * (g.order() as f64 * x.sqrt() + 2.0 / std::f64::consts::LN_2 * field.log_disc());
    Ok(BaseChangeReport {
        class,
        subgroup: h.elements(),
        c_h,
        x,
        pi_c,
        pi_c_h,
        lhs,
        rhs,
        pass: lhs <= rhs,
    })
}

/// Actual Chebotarev error against the two bound shapes, implicit constants
/// set to 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlexiErrorReport {
    pub schema: u32,
    pub field: String,
    pub target: String,
    pub x: f64,
    pub count: ChebotarevCount,
    pub actual: f64,
    pub eta_k: f64,
    pub eta_q: f64,
    pub error_factor_k: f64,
    /// (|C|/|G|)(x/log x)(e^{−η_K/8} log(eD_K) + e^{−η_Q/8}) + (|C|/|G|)x^{3/4}/log x
    pub li_shape: f64,
    pub li_ratio: f64,
    /// (|C|/|G|)(x/log x) e^{−η_K/8} log(eD_K) + (|C|/|G|)x^{3/4}/log x, when C is admissible.
    pub pi_shape: Option<f64>,
    pub pi_ratio: Option<f64>,
    pub admissibility: Option<Admissibility>,
    pub conditional: bool,
}

pub fn flexi_error_report(
    field: &FieldDescriptor,
    target: &ClassTarget,
    x: f64,
    eta_k: &EtaProfile,
    sieve: &PrimeSieve,
) -> Result<FlexiErrorReport> {
    let log_x = x.ln();
    let log_d = field.log_disc();
    let eta_k_val = eta_k.eta(log_x)?;
    let error_factor_k = zfr::error_factor(eta_k_val, log_x, log_d)?;
    let eta_q = EtaProfile::new(ZfrData::constant(0.5)).eta(log_x)?;
    let count = pi_c_count(field, target, x, sieve)?;
    let frac = count.class_size as f64 / count.group_order as f64;
    let actual = count.error.abs();
    let tail = frac * x.powf(0.75) / log_x;
    let li_shape = frac * x / log_x * (error_factor_k + (-eta_q / 8.0).exp()) + tail;
    let admissibility = match target {
        ClassTarget::Class(c) => Some(is_admissible(field.group(), *c, field.strong_artin())?),
        ClassTarget::CycleType(_) => None,
    };
    let cert = admissibility.as_ref().and_then(|a| a.certificate.as_ref());
    let pi_shape = cert.map(|_| frac * x / log_x * error_factor_k + tail);
    Ok(FlexiErrorReport {
        schema: crate::SCHEMA_VERSION,
        field: field.name().to_string(),
        target: target.to_string(),
        x,
        actual,
        eta_k: eta_k_val,
        eta_q,
        error_factor_k,
        li_shape,
        li_ratio: actual / li_shape,
        pi_shape,
        pi_ratio: pi_shape.map(|s| actual / s),
        conditional: cert.is_some_and(|c| c.conditional),
        admissibility,
        count,
    })
}
