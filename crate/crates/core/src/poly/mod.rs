//! Exact sparse polynomials over the rationals.
//!
//! [`MultiAffinePoly`] holds basis-generating polynomials and their
//! restrictions and derivatives; [`GeneralPoly`] holds products such as
//! Rayleigh differences and Gram expansions. Variable indices are 1-based
//! and never renumbered by these operations.

mod general;
mod multiaffine;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use general::{GeneralPoly, Monomial};
pub use multiaffine::{
    basis_generating_poly, cauchy_binet_expansion, elementary_symmetric, labeled_basis_poly,
    rayleigh_difference, MultiAffinePoly,
};

use crate::rational::{format_rational, parse_rational, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable x{var} outside 1..={nvars}")]
    VariableRange { var: usize, nvars: usize },
    #[error("point has {found} coordinates, polynomial has {expected} variables")]
    Dimension { expected: usize, found: usize },
    #[error("{0}")]
    Domain(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalPoint(#[serde(with = "crate::rational::serde_q_vec")] Vec<Q>);

impl RationalPoint {
    pub fn new(coords: Vec<Q>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![crate::rational::q(0); n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![crate::rational::q(1); n])
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Exact structural equality after canonicalization.
pub fn poly_equal(p: &GeneralPoly, q: &GeneralPoly) -> bool {
    p == q
}

/// JSON form: `{"nvars": n, "terms": [{"vars": [...], "coeff": "p/q"}, ...]}`.
/// `vars` lists each variable once per unit of exponent, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub vars: Vec<usize>,
    #[serde(with = "crate::rational::serde_q")]
    pub coeff: Q,
}

impl GeneralPoly {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            nvars: self.nvars(),
            terms: self.terms().map(|(m, c)| TermJson { vars: m.variable_multiset(), coeff: c.clone() }).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, PolyError> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            terms.push((Monomial::from_multiset(j.nvars, &t.vars)?, t.coeff.clone()));
        }
        Ok(GeneralPoly::from_terms(j.nvars, terms))
    }

    /// One term per line in canonical order: `<sign><p/q> <monomial>`, for
    /// example `+1 x3^2` or `-1/2 x1x4`. The constant monomial prints as `1`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms() {
            let sign = if c < &crate::rational::q(0) { "" } else { "+" };
            out.push_str(sign);
            out.push_str(&format_rational(c));
            out.push(' ');
            out.push_str(&m.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(nvars: usize, text: &str) -> Result<Self, PolyError> {
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| PolyError::Parse { line: idx + 1, msg };
            let (coeff, mono) = line.split_once(' ').ok_or_else(|| err("expected '<coeff> <monomial>'".into()))?;
            let coeff = parse_rational(coeff).map_err(err)?;
            let mono = Monomial::parse(nvars, mono.trim()).map_err(|e| err(e.to_string()))?;
            terms.push((mono, coeff));
        }
        Ok(GeneralPoly::from_terms(nvars, terms))
    }
}

impl MultiAffinePoly {
    pub fn to_text(&self) -> String {
        self.to_general().to_text()
    }

    pub fn to_json(&self) -> PolyJson {
        self.to_general().to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn commuted_sums_are_equal() {
        let x1 = Monomial::from_exponents(vec![1, 0]);
        let x2 = Monomial::from_exponents(vec![0, 1]);
        let a = GeneralPoly::from_terms(2, vec![(x1.clone(), q(1)), (x2.clone(), q(1))]);
        let b = GeneralPoly::from_terms(2, vec![(x2, q(1)), (x1, q(1))]);
        assert!(poly_equal(&a, &b));
        assert!(poly_equal(&GeneralPoly::zero(3), &GeneralPoly::from_terms(3, vec![])));
        let cancel = GeneralPoly::from_terms(1, vec![(Monomial::from_exponents(vec![1]), q(2)), (Monomial::from_exponents(vec![1]), q(-2))]);
        assert!(cancel.is_zero());
    }

    #[test]
    fn text_format_round_trips() {
        let p = GeneralPoly::from_terms(
            4,
            vec![
                (Monomial::from_exponents(vec![0, 0, 2, 0]), q(1)),
                (Monomial::from_exponents(vec![1, 0, 0, 1]), frac(-1, 2)),
                (Monomial::from_exponents(vec![0, 0, 0, 0]), q(5)),
            ],
        );
        let text = p.to_text();
        assert_eq!(text, "+5 1\n+1 x3^2\n-1/2 x1x4\n");
        assert_eq!(GeneralPoly::from_text(4, &text).unwrap(), p);
        assert!(GeneralPoly::from_text(4, "+1 x9").is_err());
        assert!(GeneralPoly::from_text(4, "0.5 x1").is_err());
    }

    #[test]
    fn json_round_trips() {
        let p = GeneralPoly::from_terms(3, vec![(Monomial::from_exponents(vec![2, 0, 1]), frac(3, 4))]);
        let j = p.to_json();
        assert_eq!(j.terms[0].vars, vec![1, 1, 3]);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"nvars":3,"terms":[{"vars":[1,1,3],"coeff":"3/4"}]}"#);
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(GeneralPoly::from_json(&back).unwrap(), p);
    }
}
