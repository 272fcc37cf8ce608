//! Serialization of polynomials.
//!
//! Two formats carry the same content: a JSON document
//! `{"arity", "variables", "order", "terms": [[exponents, numerator, denominator], ...]}`
//! and a line-oriented text form
//!
//! ```text
//! vars: F n1 n2
//! order: grevlex
//! 3/2 2 0 1
//! -1 0 3 0
//! ```
//!
//! with one term per line (coefficient, then exponents). Both round-trip
//! bit-exactly: terms are written in the polynomial's canonical order.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::MPoly;
use crate::PolyError;

/// One term: exponent vector, numerator and denominator as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord(pub Vec<u16>, pub String, pub String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDocument {
    pub arity: usize,
    pub variables: Vec<String>,
    #[serde(default)]
    pub order: MonomialOrder,
    pub terms: Vec<TermRecord>,
}

impl PolyDocument {
    pub fn from_poly(p: &MPoly, variables: &[String]) -> Result<Self, PolyError> {
        if variables.len() != p.arity() {
            return Err(PolyError::ArityMismatch {
                expected: p.arity(),
                found: variables.len(),
            });
        }
        Ok(PolyDocument {
            arity: p.arity(),
            variables: variables.to_vec(),
            order: p.order(),
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| {
                    TermRecord(
                        m.exponents().to_vec(),
                        c.numer().to_string(),
                        c.denom().to_string(),
                    )
                })
                .collect(),
        })
    }

    pub fn to_poly(&self) -> Result<MPoly, PolyError> {
        if self.variables.len() != self.arity {
            return Err(PolyError::Document(format!(
                "{} variable names for arity {}",
                self.variables.len(),
                self.arity
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for TermRecord(exps, num, den) in &self.terms {
            if exps.len() != self.arity {
                return Err(PolyError::Document(format!(
                    "exponent vector of length {} for arity {}",
                    exps.len(),
                    self.arity
                )));
            }
            let num = BigInt::from_str(num)
                .map_err(|e| PolyError::Document(format!("numerator {num:?}: {e}")))?;
            let den = BigInt::from_str(den)
                .map_err(|e| PolyError::Document(format!("denominator {den:?}: {e}")))?;
            if den.is_zero() {
                return Err(PolyError::Document("zero denominator".into()));
            }
            terms.push((Monomial::from_exponents(exps), BigRational::new(num, den)));
        }
        Ok(MPoly::from_terms(self.arity, self.order, terms))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, PolyError> {
        serde_json::from_str(s).map_err(|e| PolyError::Document(e.to_string()))
    }
}

fn order_to_text(o: MonomialOrder) -> String {
    match o {
        MonomialOrder::Lex => "lex".into(),
        MonomialOrder::GrevLex => "grevlex".into(),
        MonomialOrder::Block { front } => format!("block:{front}"),
    }
}

fn order_from_text(s: &str) -> Option<MonomialOrder> {
    match s {
        "lex" => Some(MonomialOrder::Lex),
        "grevlex" => Some(MonomialOrder::GrevLex),
        _ => s
            .strip_prefix("block:")
            .and_then(|k| k.parse().ok())
            .map(|front| MonomialOrder::Block { front }),
    }
}

fn rational_to_text(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parses `p` or `p/q` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
    }
}

/// Writes the line-oriented text form.
pub fn to_text(p: &MPoly, variables: &[String]) -> String {
    let mut out = format!("vars: {}\norder: {}\n", variables.join(" "), order_to_text(p.order()));
    for (m, c) in p.terms() {
        out.push_str(&rational_to_text(c));
        for e in m.exponents() {
            out.push(' ');
            out.push_str(&e.to_string());
        }
        out.push('\n');
    }
    out
}

/// Parses the line-oriented text form, returning the polynomial and its variable names.
pub fn from_text(text: &str) -> Result<(MPoly, Vec<String>), PolyError> {
    let mut variables: Option<Vec<String>> = None;
    let mut order = MonomialOrder::GrevLex;
    let mut terms = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| PolyError::Parse {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix("vars:") {
            variables = Some(rest.split_whitespace().map(String::from).collect());
            continue;
        }
        if let Some(rest) = line.strip_prefix("order:") {
            order = order_from_text(rest.trim())
                .ok_or_else(|| err(format!("unknown order {:?}", rest.trim())))?;
            continue;
        }
        let vars = variables
            .as_ref()
            .ok_or_else(|| err("term before `vars:` header".into()))?;
        let mut fields = line.split_whitespace();
        let coef = fields.next().unwrap();
        let c = parse_rational(coef).ok_or_else(|| err(format!("bad coefficient {coef:?}")))?;
        let exps: Vec<u16> = fields
            .map(|f| f.parse::<u16>().map_err(|e| err(format!("bad exponent {f:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        if exps.len() != vars.len() {
            return Err(err(format!("expected {} exponents, found {}", vars.len(), exps.len())));
        }
        terms.push((Monomial::from_exponents(&exps), c));
    }
    let variables = variables.ok_or(PolyError::Parse {
        line: 0,
        message: "missing `vars:` header".into(),
    })?;
    Ok((MPoly::from_terms(variables.len(), order, terms), variables))
}
