use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{PolyError, RationalPoint};
use crate::matroid::set::{contains, ElemSet};
use crate::rational::Q;

/// Exponent vector with one entry per variable. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u8>) -> Self {
        Self(exps)
    }

    pub fn from_set(nvars: usize, s: ElemSet) -> Self {
        Self((1..=nvars).map(|i| u8::from(contains(s, i))).collect())
    }

    /// Monomial of the product of two squarefree monomials.
    pub fn from_product(nvars: usize, a: ElemSet, b: ElemSet) -> Self {
        Self((1..=nvars).map(|i| u8::from(contains(a, i)) + u8::from(contains(b, i))).collect())
    }

    /// From a list naming each variable once per unit of exponent.
    pub fn from_multiset(nvars: usize, vars: &[usize]) -> Result<Self, PolyError> {
        let mut exps = vec![0u8; nvars];
        for &v in vars {
            if v == 0 || v > nvars {
                return Err(PolyError::VariableRange { var: v, nvars });
            }
            exps[v - 1] = exps[v - 1]
                .checked_add(1)
                .ok_or_else(|| PolyError::Domain(format!("exponent of x{v} overflows")))?;
        }
        Ok(Self(exps))
    }

    pub fn variable_multiset(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i + 1, e as usize))
            .collect()
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u8 {
        self.0[var - 1]
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Parses `1`, `x3`, `x3^2x4`, or `x_{3}^{2}x_{4}`.
    pub fn parse(nvars: usize, text: &str) -> Result<Self, PolyError> {
        let mut exps = vec![0u8; nvars];
        if text == "1" {
            return Ok(Self(exps));
        }
        let cleaned: String = text.chars().filter(|c| !matches!(c, '{' | '}' | '_' | '*' | ' ')).collect();
        let bad = || PolyError::Domain(format!("malformed monomial {text:?}"));
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            rest = rest.strip_prefix('x').ok_or_else(bad)?;
            let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
            let var: usize = rest[..digits].parse().map_err(|_| bad())?;
            rest = &rest[digits..];
            let mut exp = 1u8;
            if let Some(r) = rest.strip_prefix('^') {
                let digits = r.bytes().take_while(u8::is_ascii_digit).count();
                exp = r[..digits].parse().map_err(|_| bad())?;
                rest = &r[digits..];
            }
            if var == 0 || var > nvars {
                return Err(PolyError::VariableRange { var, nvars });
            }
            exps[var - 1] += exp;
        }
        Ok(Self(exps))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&e| e == 0) {
            return f.write_str("1");
        }
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "x{}", i + 1)?,
                _ => write!(f, "x{}^{}", i + 1, e)?,
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with arbitrary exponents; terms iterate in ascending
/// lexicographic order of exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl GeneralPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub(crate) fn from_map(nvars: usize, mut terms: BTreeMap<Monomial, Q>) -> Self {
        terms.retain(|m, c| {
            debug_assert_eq!(m.0.len(), nvars);
            !c.is_zero()
        });
        Self { nvars, terms }
    }

    /// Sums repeated monomials and drops zero coefficients.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity");
            *map.entry(m).or_insert_with(Q::zero) += c;
        }
        Self::from_map(nvars, map)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut map = self.terms.clone();
        for (m, c) in &other.terms {
            *map.entry(m.clone()).or_insert_with(Q::zero) += c;
        }
        Self::from_map(self.nvars, map)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_map(self.nvars, self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                *map.entry(a.mul(b)).or_insert_with(Q::zero) += x * y;
            }
        }
        Self::from_map(self.nvars, map)
    }

    /// First monomial (in canonical order) whose coefficients differ, with
    /// `(self coefficient, other coefficient)`.
    pub fn first_difference(&self, other: &Self) -> Option<(Monomial, Q, Q)> {
        let diff = self.sub(other);
        let (m, _) = diff.terms.iter().next()?;
        Some((m.clone(), self.coefficient(m), other.coefficient(m)))
    }

    pub fn evaluate(&self, a: &RationalPoint) -> Result<Q, PolyError> {
        if a.len() != self.nvars {
            return Err(PolyError::Dimension { expected: self.nvars, found: a.len() });
        }
        let x = a.coords();
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &x[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_display_and_parse() {
        let m = Monomial::from_exponents(vec![1, 0, 2, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(m.to_string(), "x1x3^2x10");
        assert_eq!(Monomial::parse(10, "x1x3^2x10").unwrap(), m);
        assert_eq!(Monomial::parse(10, "x_{1} x_{3}^{2} x_{10}").unwrap(), m);
        assert_eq!(Monomial::parse(3, "1").unwrap(), Monomial::one(3));
        assert!(Monomial::parse(3, "y1").is_err());
    }

    #[test]
    fn first_difference_reports_both_sides() {
        let x1 = Monomial::from_exponents(vec![1, 0]);
        let x2 = Monomial::from_exponents(vec![0, 1]);
        let a = GeneralPoly::from_terms(2, vec![(x1.clone(), crate::rational::q(1))]);
        let b = GeneralPoly::from_terms(2, vec![(x1.clone(), crate::rational::q(1)), (x2.clone(), crate::rational::q(3))]);
        let (m, ca, cb) = a.first_difference(&b).unwrap();
        assert_eq!(m, x2);
        assert_eq!((ca, cb), (crate::rational::q(0), crate::rational::q(3)));
        assert!(a.first_difference(&a).is_none());
    }
}
