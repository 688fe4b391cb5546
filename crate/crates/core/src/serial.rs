//! JSON interchange formats for polynomials, fields, arrangements and reports.
//!
//! Struct field order fixes the key order, so serialized output is
//! byte-deterministic.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::field::DerivationField;
use crate::poly::{Poly, Rational, VarId};
use crate::verify::{Check, VerificationReport, Witness};

pub const SCHEMA: &str = "catalog-derivations/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub coords: Vec<String>,
    pub coeffs: Vec<PolyJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneJson {
    pub form: PolyJson,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementJson {
    pub label: String,
    pub vars: Vec<String>,
    pub hyperplanes: Vec<HyperplaneJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessJson {
    Poly(PolyJson),
    Text(String),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
    pub witness: WitnessJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub subject: String,
    pub checks: Vec<CheckJson>,
    pub overall: bool,
}

/// Always `num/den`, reduced, sign on the numerator.
pub fn rational_to_string(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn ambient_names(l: usize) -> Vec<String> {
    VarId::ambient(l).iter().map(VarId::to_string).collect()
}

/// Recover `l` from a variable list of the form `x1, ..., xl, t, z`.
fn ambient_from_names(vars: &[String]) -> Result<usize> {
    if vars.len() < 2 {
        return Err(Error::Parse(format!("variable list {vars:?} is too short")));
    }
    let l = vars.len() - 2;
    if ambient_names(l) != vars {
        return Err(Error::Parse(format!(
            "variable list {vars:?} is not x1..x{l}, t, z"
        )));
    }
    Ok(l)
}

pub fn poly_to_json(p: &Poly) -> PolyJson {
    PolyJson {
        vars: ambient_names(p.l()),
        terms: p
            .terms()
            .map(|(m, c)| TermJson {
                c: rational_to_string(c),
                e: m.exponents().to_vec(),
            })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<Poly> {
    let l = ambient_from_names(&j.vars)?;
    let terms = j
        .terms
        .iter()
        .map(|t| Ok((t.e.clone(), parse_rational(&t.c)?)))
        .collect::<Result<Vec<_>>>()?;
    Poly::from_terms(l, terms)
}

pub fn field_to_json(f: &DerivationField) -> FieldJson {
    FieldJson {
        coords: f.coords().iter().map(VarId::to_string).collect(),
        coeffs: f.coeffs().iter().map(poly_to_json).collect(),
    }
}

pub fn field_from_json(j: &FieldJson) -> Result<DerivationField> {
    let coeffs = j
        .coeffs
        .iter()
        .map(poly_from_json)
        .collect::<Result<Vec<_>>>()?;
    let l = coeffs.first().map(Poly::l).unwrap_or(0);
    if let Some(p) = coeffs.iter().find(|p| p.l() != l) {
        return Err(Error::AmbientMismatch {
            left: l,
            right: p.l(),
        });
    }
    let coords = j
        .coords
        .iter()
        .map(|s| s.parse::<VarId>())
        .collect::<Result<Vec<_>>>()?;
    DerivationField::new(l, coords, coeffs)
}

pub fn arrangement_to_json(a: &Arrangement) -> ArrangementJson {
    ArrangementJson {
        label: a.label().to_string(),
        vars: a.coords().iter().map(VarId::to_string).collect(),
        hyperplanes: a
            .hyperplanes()
            .iter()
            .map(|h| HyperplaneJson {
                form: poly_to_json(h.form()),
                mult: h.multiplicity(),
            })
            .collect(),
    }
}

fn witness_to_json(w: &Witness) -> WitnessJson {
    match w {
        Witness::None => WitnessJson::None,
        Witness::Poly(p) => WitnessJson::Poly(poly_to_json(p)),
        Witness::Text(s) => WitnessJson::Text(s.clone()),
    }
}

fn check_to_json(c: &Check) -> CheckJson {
    CheckJson {
        name: c.name.clone(),
        pass: c.pass,
        witness: witness_to_json(&c.witness),
    }
}

pub fn report_to_json(r: &VerificationReport) -> ReportJson {
    ReportJson {
        subject: r.subject.clone(),
        checks: r.checks.iter().map(check_to_json).collect(),
        overall: r.overall,
    }
}

pub fn report_from_json(j: &ReportJson) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(j.subject.clone());
    for c in &j.checks {
        let witness = match &c.witness {
            WitnessJson::None => Witness::None,
            WitnessJson::Poly(p) => Witness::Poly(poly_from_json(p)?),
            WitnessJson::Text(s) => Witness::Text(s.clone()),
        };
        r.push(c.name.clone(), c.pass, witness);
    }
    if r.overall != j.overall {
        return Err(Error::Parse(format!(
            "overall = {} disagrees with the listed checks",
            j.overall
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::catalan_basis;
    use crate::discrete::bernoulli;
    use crate::poly::rat;

    #[test]
    fn poly_format_is_exact() {
        let l = 1;
        let p = &Poly::x(l, 1).pow(2).scale(&rat(-1, 2)) + &Poly::integer(l, 3);
        let s = serde_json::to_string(&poly_to_json(&p)).unwrap();
        assert_eq!(
            s,
            r#"{"vars":["x1","t","z"],"terms":[{"c":"-1/2","e":[2,0,0]},{"c":"3/1","e":[0,0,0]}]}"#
        );
        assert_eq!(
            serde_json::to_string(&poly_to_json(&Poly::zero(0))).unwrap(),
            r#"{"vars":["t","z"],"terms":[]}"#
        );
    }

    #[test]
    fn poly_round_trip() {
        let b = bernoulli(5);
        assert_eq!(poly_from_json(&poly_to_json(&b)).unwrap(), b);
    }

    #[test]
    fn rejects_malformed_input() {
        let mut j = poly_to_json(&Poly::x(2, 1));
        j.vars.swap(0, 1);
        assert!(poly_from_json(&j).is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a").is_err());
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
    }

    #[test]
    fn field_round_trip() {
        for f in catalan_basis(3, 1).unwrap() {
            let back = field_from_json(&field_to_json(&f)).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn report_round_trip() {
        let mut r = VerificationReport::new("demo");
        r.push("a", true, Witness::Poly(Poly::one(2)));
        r.push("b", false, Witness::Text("no".into()));
        r.push("c", true, Witness::None);
        let s = serde_json::to_string(&report_to_json(&r)).unwrap();
        let j: ReportJson = serde_json::from_str(&s).unwrap();
        assert_eq!(report_from_json(&j).unwrap(), r);
    }
}
