//! Galois fields described by a defining polynomial, a group tag and a
//! discriminant, plus the line-oriented catalog format.
//!
//! Catalog records look like
//!
//! ```text
//! # name | coefficients (constant first) | group | field discriminant [| flags]
//! gaussian | 1 0 1 | C2 | -4
//! ```
//!
//! The only flag currently understood is `strong-artin`, which asserts that
//! every Artin L-function of the field is entire.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{build_group, Action, FiniteGroup};
use crate::polymod::Fp;

pub const DEFAULT_CATALOG: &str = "\
# name | coefficients (constant first) | group | field discriminant [| flags]
rationals  | 0 1                | C1 | 1
gaussian   | 1 0 1              | C2 | -4
sqrt5      | -1 -1 1            | C2 | 5
eisenstein | 1 1 1              | C2 | -3
cubic-7    | -1 -2 1 1          | C3 | 49
zeta5      | 1 1 1 1 1          | C4 | 125
biquad-12  | 1 0 -1 0 1         | V4 | 144
c5-11      | 1 3 -3 -4 1 1      | C5 | 14641
zeta7      | 1 1 1 1 1 1 1      | C6 | -16807
s3-23      | -1 -1 0 1          | S3 | -12167
s3-31      | -1 1 0 1           | S3 | -29791
s4-283     | -1 -1 0 0 1        | S4 | 283^12
s5-2869    | -1 -1 0 0 0 1      | S5 | 2869^60
";

/// A Galois extension K/Q given by a monic defining polynomial whose
/// splitting field is K.
#[derive(Clone)]
pub struct FieldDescriptor {
    name: String,
    poly: Vec<i64>,
    group: Arc<FiniteGroup>,
    action: Action,
    disc_field: BigInt,
    poly_disc: BigInt,
    strong_artin: bool,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("name", &self.name)
            .field("poly", &self.poly)
            .field("group", &self.group.name())
            .field("disc_field", &self.disc_field.to_string())
            .finish()
    }
}

/// Splitting data of a rational prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusData {
    pub p: u64,
    pub ramified: bool,
    /// Degrees of the irreducible factors mod p, nonincreasing, repeated by
    /// multiplicity.
    pub factorization_type: Vec<usize>,
    /// lcm of the factor degrees (0 when ramified).
    pub frobenius_order: usize,
    /// The conjugacy class, when the factorization type pins it down.
    #[serde(serialize_with = "crate::group::class_label::opt")]
    pub class: Option<usize>,
    /// All classes compatible with the factorization type.
    #[serde(serialize_with = "crate::group::class_label::many")]
    pub candidates: Vec<usize>,
}

impl FieldDescriptor {
    pub fn new(
        name: &str,
        poly: Vec<i64>,
        group_label: &str,
        disc_field: BigInt,
        strong_artin: bool,
    ) -> Result<Self> {
        let invalid = |msg: String| Error::InvalidField(format!("{name}: {msg}"));
        if poly.len() < 2 {
            return Err(invalid(
                "defining polynomial must have degree at least 1".into(),
            ));
        }
        if *poly.last().unwrap() != 1 {
            return Err(invalid("defining polynomial must be monic".into()));
        }
        if disc_field.is_zero() {
            return Err(invalid("field discriminant must be nonzero".into()));
        }
        let group = build_group(group_label)?;
        let degree = poly.len() - 1;
        let action = group.action_of_degree(degree).ok_or_else(|| {
            invalid(format!(
                "degree {degree} matches neither the natural degree {} nor the order {} of {}",
                group.degree(),
                group.order(),
                group.name()
            ))
        })?;
        let poly_disc = poly_discriminant(&poly);
        if poly_disc.is_zero() {
            return Err(invalid("defining polynomial is not squarefree".into()));
        }
        Ok(FieldDescriptor {
            name: name.to_string(),
            poly,
            group: Arc::new(group),
            action,
            disc_field,
            poly_disc,
            strong_artin,
        })
    }

    /// Q(√d) for a fundamental discriminant `d ≠ 1`.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 1 || d == 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidField(format!(
                "{d} is not a fundamental discriminant"
            )));
        }
        let sf = arith::squarefree_part(&BigInt::from(d))?;
        if arith::fundamental_discriminant(sf) != d {
            return Err(Error::InvalidField(format!(
                "{d} is not a fundamental discriminant"
            )));
        }
        let poly = if d.rem_euclid(4) == 0 {
            vec![-d / 4, 0, 1]
        } else {
            vec![(1 - d) / 4, -1, 1]
        };
        FieldDescriptor::new(
            &format!("Q(sqrt({sf}))"),
            poly,
            "C2",
            BigInt::from(d),
            false,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Coefficients, constant term first.
    pub fn poly(&self) -> &[i64] {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn action(&self) -> Action {
        self.action
    }

    /// [K:Q] = |G|.
    pub fn degree_closure(&self) -> usize {
        self.group.order()
    }

    /// m = |G| − 1, the degree of ζ_K/ζ.
    pub fn m(&self) -> usize {
        self.group.order() - 1
    }

    pub fn disc_field(&self) -> &BigInt {
        &self.disc_field
    }

    pub fn poly_disc(&self) -> &BigInt {
        &self.poly_disc
    }

    pub fn strong_artin(&self) -> bool {
        self.strong_artin
    }

    /// Natural log of |D_K|.
    pub fn log_disc(&self) -> f64 {
        big_ln(&self.disc_field.abs())
    }

    /// Whether p divides D_K or the polynomial discriminant.
    pub fn is_ramified(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        (&self.disc_field % &p).is_zero() || (&self.poly_disc % &p).is_zero()
    }

    /// Whether gcd(n, D_K · disc f) = 1.
    pub fn is_coprime(&self, n: u64) -> bool {
        let n = BigInt::from(n);
        n.gcd(&self.disc_field).is_one() && n.gcd(&self.poly_disc).is_one()
    }

    pub fn frobenius_data(&self, p: u64) -> Result<FrobeniusData> {
        let fp = Fp::new(p);
        let mut factorization_type = Vec::new();
        for (deg, mult) in fp.factorization_pattern(&fp.reduce(&self.poly)) {
            factorization_type.extend(std::iter::repeat_n(deg, mult));
        }
        factorization_type.sort_unstable_by(|a, b| b.cmp(a));
        if self.is_ramified(p) {
            return Ok(FrobeniusData {
                p,
                ramified: true,
                factorization_type,
                frobenius_order: 0,
                class: None,
                candidates: Vec::new(),
            });
        }
        let frobenius_order = factorization_type
            .iter()
            .fold(1, |acc, &d| arith::lcm(acc, d as u64)) as usize;
        let candidates = self
            .group
            .classes_with_cycle_type(&factorization_type, self.action);
        if candidates.is_empty() {
            return Err(Error::InvalidField(format!(
                "{}: factorization type {:?} mod {p} is not a cycle type of {}",
                self.name,
                factorization_type,
                self.group.name()
            )));
        }
        let class = (candidates.len() == 1).then(|| candidates[0]);
        Ok(FrobeniusData {
            p,
            ramified: false,
            factorization_type,
            frobenius_order,
            class,
            candidates,
        })
    }

    /// Frobenius order of an unramified prime.
    pub fn frobenius_order(&self, p: u64) -> Result<usize> {
        let data = self.frobenius_data(p)?;
        if data.ramified {
            return Err(Error::RamifiedPrime(p));
        }
        Ok(data.frobenius_order)
    }
}

/// ln|x| for a big integer of any size.
pub fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().abs().ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Discriminant of a monic integer polynomial: (−1)^{n(n−1)/2} Res(f, f′).
pub fn poly_discriminant(f: &[i64]) -> BigInt {
    let n = f.len() - 1;
    if n == 1 {
        return BigInt::one();
    }
    let df: Vec<i64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as i64)
        .collect();
    let res = resultant(f, &df);
    let lead = BigInt::from(f[n]);
    let d = res / lead;
    if (n * (n - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Resultant via the Sylvester determinant (fraction-free elimination).
fn resultant(f: &[i64], g: &[i64]) -> BigInt {
    let (n, m) = (f.len() - 1, g.len() - 1);
    let size = n + m;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(size);
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, &c) in f.iter().rev().enumerate() {
            row[i + j] = BigInt::from(c);
        }
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, &c) in g.iter().rev().enumerate() {
            row[i + j] = BigInt::from(c);
        }
        rows.push(row);
    }
    arith::bareiss_det(rows)
}

/// A parsed field catalog.
#[derive(Clone, Debug)]
pub struct Catalog {
    fields: Vec<FieldDescriptor>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self> {
        let mut fields: Vec<FieldDescriptor> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::CatalogParse {
                line: line_no,
                message,
            };
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            if parts.len() < 4 || parts.len() > 5 {
                return Err(bad(format!(
                    "expected 4 or 5 `|`-separated fields, found {}",
                    parts.len()
                )));
            }
            let name = parts[0];
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(bad(format!("invalid field name `{name}`")));
            }
            if fields.iter().any(|f| f.name == name) {
                return Err(bad(format!("duplicate field name `{name}`")));
            }
            let poly = parts[1]
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|e| bad(format!("coefficient `{tok}`: {e}")))
                })
                .collect::<Result<Vec<i64>>>()?;
            let disc = parse_big(parts[3]).map_err(&bad)?;
            let strong_artin = match parts.get(4) {
                None | Some(&"") => false,
                Some(&"strong-artin") => true,
                Some(other) => return Err(bad(format!("unknown flag `{other}`"))),
            };
            let field = FieldDescriptor::new(name, poly, parts[2], disc, strong_artin)
                .map_err(|e| bad(e.to_string()))?;
            fields.push(field);
        }
        Ok(Catalog { fields })
    }

    pub fn builtin() -> Self {
        Catalog::parse(DEFAULT_CATALOG).expect("built-in catalog is valid")
    }

    pub fn fields(&self) -> &[FieldDescriptor] {
        &self.fields
    }

    pub fn get(&self, name: &str) -> Result<&FieldDescriptor> {
        self.fields
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::InvalidField(format!("no field named `{name}` in catalog")))
    }
}

/// Parses a signed decimal integer, optionally written as `b^e`.
fn parse_big(tok: &str) -> std::result::Result<BigInt, String> {
    let tok = tok.trim();
    let parse_plain = |s: &str| {
        s.parse::<BigInt>()
            .map_err(|e| format!("integer `{s}`: {e}"))
    };
    match tok.split_once('^') {
        None => parse_plain(tok),
        Some((base, exp)) => {
            let base = parse_plain(base)?;
            let exp: u32 = exp.parse().map_err(|e| format!("exponent `{exp}`: {e}"))?;
            if exp > 4096 {
                return Err(format!("exponent {exp} too large"));
            }
            Ok(num_traits::pow(base, exp as usize))
        }
    }
}
