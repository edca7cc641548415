//! Families of Galois fields, intersection multiplicity, biquadratic
//! compositum discriminants and averaged Chebotarev errors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;

use crate::arith::{fundamental_discriminant, squarefree_part};
use crate::chebotarev::max_class_error;
use crate::error::{Error, Result};
use crate::field::{big_ln, FieldDescriptor};
use crate::group::Action;
use crate::par;
use crate::sieve::PrimeSieve;

/// How K ∩ K' ≠ Q is decided within a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "pairs", rename_all = "snake_case")]
pub enum IntersectionRule {
    /// Quadratic fields meet iff their discriminants agree.
    QuadraticEquality,
    /// S_n closures in the natural action meet iff the polynomial
    /// discriminants have the same squarefree part.
    Resolvent,
    /// Simple Galois group: fields meet iff equal.
    SimpleGroup,
    /// Index pairs (i, j) of members known to meet, in addition to i = j.
    ExplicitPairs(Vec<(usize, usize)>),
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// The automatic rule for a group label, if any.
pub fn default_rule(field: &FieldDescriptor) -> Result<IntersectionRule> {
    let name = field.group().name();
    if name == "C2" || name == "S2" {
        return Ok(IntersectionRule::QuadraticEquality);
    }
    if let Some(n) = name.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
        if n >= 3 && field.action() == Action::Natural {
            return Ok(IntersectionRule::Resolvent);
        }
    }
    if let Some(n) = name.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
        if is_prime(n) {
            return Ok(IntersectionRule::SimpleGroup);
        }
    }
    if name == "A5" {
        return Ok(IntersectionRule::SimpleGroup);
    }
    Err(Error::UndecidableIntersectionRule(name.to_string()))
}

/// Squarefree part of the defining-polynomial discriminant, sign retained;
/// Q(√d) is the fixed field of A_n.
pub fn resolvent_square_class(field: &FieldDescriptor) -> Result<i64> {
    let name = field.group().name();
    let is_sym = name
        .strip_prefix('S')
        .and_then(|s| s.parse::<usize>().ok())
        .is_some();
    if !is_sym || field.action() != Action::Natural {
        return Err(Error::InvalidField(format!(
            "{}: resolvent needs a symmetric group in its natural action",
            field.name()
        )));
    }
    squarefree_part(field.poly_disc())
}

/// The fields of 𝔉(Q) together with their intersection rule.
#[derive(Clone, Debug)]
pub struct Family {
    q: BigInt,
    fields: Vec<FieldDescriptor>,
    rule: IntersectionRule,
}

impl Family {
    /// Keeps the candidates with |D_K| ≤ Q. All must share a group label.
    /// Without an explicit rule, the automatic one for the label is used.
    pub fn new(
        candidates: &[FieldDescriptor],
        q: BigInt,
        rule: Option<IntersectionRule>,
    ) -> Result<Self> {
        if let Some(first) = candidates.first() {
            if let Some(bad) = candidates
                .iter()
                .find(|f| f.group().name() != first.group().name())
            {
                return Err(Error::InvalidField(format!(
                    "{} has group {}, family group is {}",
                    bad.name(),
                    bad.group().name(),
                    first.group().name()
                )));
            }
        }
        let fields: Vec<FieldDescriptor> = candidates
            .iter()
            .filter(|f| f.disc_field().abs() <= q)
            .cloned()
            .collect();
        let rule = match rule {
            Some(r) => r,
            None => match fields.first() {
                Some(f) => default_rule(f)?,
                None => IntersectionRule::SimpleGroup,
            },
        };
        if let IntersectionRule::ExplicitPairs(pairs) = &rule {
            if let Some(&(i, j)) = pairs
                .iter()
                .find(|&&(i, j)| i >= fields.len() || j >= fields.len())
            {
                return Err(Error::ParameterOutOfRange(format!(
                    "pair ({i}, {j}) outside family of {}",
                    fields.len()
                )));
            }
        }
        Ok(Family { q, fields, rule })
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn fields(&self) -> &[FieldDescriptor] {
        &self.fields
    }

    pub fn rule(&self) -> &IntersectionRule {
        &self.rule
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Whether members i and j intersect beyond Q.
    pub fn intersects(&self, i: usize, j: usize) -> Result<bool> {
        if i == j {
            return Ok(true);
        }
        let (a, b) = (&self.fields[i], &self.fields[j]);
        match &self.rule {
            IntersectionRule::QuadraticEquality => Ok(a.disc_field() == b.disc_field()),
            IntersectionRule::Resolvent => {
                Ok(resolvent_square_class(a)? == resolvent_square_class(b)?)
            }
            IntersectionRule::SimpleGroup => {
                if a.poly() == b.poly() {
                    Ok(true)
                } else if a.disc_field() != b.disc_field() {
                    Ok(false)
                } else {
                    Err(Error::UndecidableIntersectionRule(format!(
                        "{} and {} share a discriminant; supply explicit pairs",
                        a.name(),
                        b.name()
                    )))
                }
            }
            IntersectionRule::ExplicitPairs(pairs) => {
                Ok(pairs.contains(&(i, j)) || pairs.contains(&(j, i)))
            }
        }
    }

    /// m_𝔉(Q) = max_K #{K' ∈ 𝔉(Q) : K ∩ K' ≠ Q}; 0 for the empty family.
    pub fn intersection_multiplicity(&self) -> Result<usize> {
        let n = self.fields.len();
        let rows: Vec<usize> = (0..n).collect();
        let counts = par::map(&rows, |&i| -> Result<usize> {
            let mut c = 0;
            for j in 0..n {
                if self.intersects(i, j)? {
                    c += 1;
                }
            }
            Ok(c)
        });
        let mut m = 0;
        for c in counts {
            m = m.max(c?);
        }
        Ok(m)
    }
}

/// Fundamental discriminants D ≠ 1 with |D| ≤ limit, ordered by |D| then sign.
pub fn fundamental_discriminants(limit: u64) -> Vec<i64> {
    let mut out = Vec::new();
    for a in 3..=limit as i64 {
        for d in [-a, a] {
            if let Ok(sf) = squarefree_part(&BigInt::from(d)) {
                if sf != 1 && fundamental_discriminant(sf) == d {
                    out.push(d);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositumCheck {
    pub d1: i64,
    pub d2: i64,
    /// Discriminant of the third quadratic subfield.
    pub d3: i64,
    /// |D_{KK'}| = |d1 d2 d3|
    pub disc: String,
    /// D_{KK'} | D_K² D_{K'}²
    pub divides: bool,
    /// (D_{KK'}/(D_K D_{K'})) | D_K D_{K'}
    pub conductor_divides: bool,
}

fn quadratic_disc(field: &FieldDescriptor) -> Result<i64> {
    if field.degree_closure() != 2 {
        return Err(Error::NotQuadratic(field.name().to_string()));
    }
    i64::try_from(field.disc_field().clone())
        .map_err(|_| Error::DiscriminantTooLarge(field.disc_field().to_string()))
}

/// Discriminant of the biquadratic field KK' as the product of the
/// discriminants of its three quadratic subfields.
pub fn compositum_disc_check(k: &FieldDescriptor, k2: &FieldDescriptor) -> Result<CompositumCheck> {
    let d1 = quadratic_disc(k)?;
    let d2 = quadratic_disc(k2)?;
    if d1 == d2 {
        return Err(Error::EqualFields(
            k.name().to_string(),
            k2.name().to_string(),
        ));
    }
    let sf = squarefree_part(&(BigInt::from(d1) * d2))?;
    let d3 = fundamental_discriminant(sf);
    let disc = (BigInt::from(d1) * d2 * d3).abs();
    let base = (BigInt::from(d1) * d2).abs();
    let divides = (&base * &base).is_multiple_of(&disc);
    let conductor_divides = disc.is_multiple_of(&base) && base.is_multiple_of(&(&disc / &base));
    Ok(CompositumCheck {
        d1,
        d2,
        d3,
        disc: disc.to_string(),
        divides,
        conductor_divides,
    })
}

/// Parameters of the averaged-error report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AvgParams {
    /// ε in the diagnostic m_𝔉(Q) Q^ε / #𝔉(Q).
    pub eps: f64,
    /// A in the bound shape x/(log x)^A.
    pub a: f64,
    /// A field is exceptional when its max error exceeds threshold·x/(log x)^A.
    pub threshold: f64,
}

impl Default for AvgParams {
    fn default() -> Self {
        AvgParams {
            eps: 0.1,
            a: 1.0,
            threshold: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvgChebReport {
    pub schema: u32,
    pub q: String,
    pub size: usize,
    pub m: usize,
    pub x: f64,
    pub per_field: Vec<FieldError>,
    pub avg_error: f64,
    /// x/(log x)^A
    pub bound_shape: f64,
    pub ratio: f64,
    /// m_𝔉(Q) Q^ε / #𝔉(Q)
    pub multiplicity_diagnostic: f64,
    pub exceptional_fraction: f64,
    pub params: AvgParams,
}

/// (1/#𝔉(Q)) Σ_K max_C |π_C(x) − (|C|/|G|)π(x)|, with C running over the
/// targets resolvable from factorization types.
pub fn avg_cheb_error(
    family: &Family,
    x: f64,
    params: AvgParams,
    sieve: &PrimeSieve,
) -> Result<AvgChebReport> {
    if family.is_empty() {
        return Err(Error::ParameterOutOfRange("empty family".into()));
    }
    let m = family.intersection_multiplicity()?;
    let errors = par::map(family.fields(), |f| max_class_error(f, x, sieve));
    let mut per_field = Vec::with_capacity(errors.len());
    for (f, e) in family.fields().iter().zip(errors) {
        per_field.push(FieldError {
            field: f.name().to_string(),
            max_error: e?,
        });
    }
    let n = per_field.len() as f64;
    let avg_error = per_field.iter().map(|e| e.max_error).sum::<f64>() / n;
    let bound_shape = x / x.ln().powf(params.a);
    let exceptional = per_field
        .iter()
        .filter(|e| e.max_error > params.threshold * bound_shape)
        .count();
    let log_q = big_ln(family.q());
    Ok(AvgChebReport {
        schema: crate::SCHEMA_VERSION,
        q: family.q().to_string(),
        size: family.len(),
        m,
        x,
        avg_error,
        bound_shape,
        ratio: avg_error / bound_shape,
        multiplicity_diagnostic: m as f64 * (params.eps * log_q).exp() / n,
        exceptional_fraction: exceptional as f64 / n,
        params,
        per_field,
    })
}

/// Convenience: Q(√D) for each D.
pub fn quadratic_fields(discs: &[i64]) -> Result<Vec<FieldDescriptor>> {
    discs
        .iter()
        .map(|&d| FieldDescriptor::quadratic(d))
        .collect()
}
