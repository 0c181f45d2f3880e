use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{GeneralPoly, Monomial, PolyError, RationalPoint};
use crate::matrix::RationalMatrix;
use crate::matroid::set::{self, bit, contains, elems, ElemSet, MAX_GROUND};
use crate::matroid::{LabeledMatroid, Matroid};
use crate::rational::Q;

/// Sparse multiaffine polynomial: each term is a set of variables (as a
/// bitmask, `x_i` in bit `i - 1`) with a nonzero rational coefficient.
/// Terms iterate in ascending bitmask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiAffinePoly {
    nvars: usize,
    terms: BTreeMap<ElemSet, Q>,
}

impl MultiAffinePoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_GROUND, "at most 64 variables");
        Self { nvars, terms: BTreeMap::new() }
    }

    /// Builds from `(variable set, coefficient)` pairs, summing repeats and
    /// dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (ElemSet, Q)>) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars);
        let allowed = set::full(nvars);
        for (vars, c) in terms {
            if vars & !allowed != 0 {
                return Err(PolyError::VariableRange { var: (64 - (vars & !allowed).leading_zeros()) as usize, nvars });
            }
            p.add_term(vars, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, vars: ElemSet, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(vars).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&vars);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (ElemSet, &Q)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, vars: ElemSet) -> Q {
        self.terms.get(&vars).cloned().unwrap_or_else(Q::zero)
    }

    /// `Some(d)` when every term has degree `d`; the zero polynomial is not
    /// considered homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|k| k.count_ones() as usize);
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    /// Union of the supports of all terms.
    pub fn variables(&self) -> ElemSet {
        self.terms.keys().fold(0, |acc, k| acc | k)
    }

    fn check_var(&self, i: usize) -> Result<(), PolyError> {
        if i == 0 || i > self.nvars {
            return Err(PolyError::VariableRange { var: i, nvars: self.nvars });
        }
        Ok(())
    }

    /// `f|_{x_i = 0}`: drops every term containing `x_i`. Indices are kept.
    pub fn restrict(&self, i: usize) -> Result<Self, PolyError> {
        self.check_var(i)?;
        let terms = self.terms.iter().filter(|(k, _)| !contains(**k, i)).map(|(k, v)| (*k, v.clone())).collect();
        Ok(Self { nvars: self.nvars, terms })
    }

    /// `df/dx_i`: keeps terms containing `x_i` with `x_i` removed.
    pub fn partial_derivative(&self, i: usize) -> Result<Self, PolyError> {
        self.check_var(i)?;
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| contains(**k, i))
            .map(|(k, v)| (*k & !bit(i), v.clone()))
            .collect();
        Ok(Self { nvars: self.nvars, terms })
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        Self { nvars: self.nvars, terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    /// `x_i * f`, valid when no term already contains `x_i`.
    pub fn times_variable(&self, i: usize) -> Result<Self, PolyError> {
        self.check_var(i)?;
        if self.terms.keys().any(|k| contains(*k, i)) {
            return Err(PolyError::Domain(format!("x{i} * f is not multiaffine")));
        }
        let terms = self.terms.iter().map(|(k, v)| (*k | bit(i), v.clone())).collect();
        Ok(Self { nvars: self.nvars, terms })
    }

    /// Exact product; the result is generally not multiaffine.
    pub fn mul(&self, other: &Self) -> GeneralPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m = Monomial::from_product(self.nvars, *a, *b);
                *acc.entry(m).or_insert_with(Q::zero) += x * y;
            }
        }
        GeneralPoly::from_map(self.nvars, acc)
    }

    pub fn to_general(&self) -> GeneralPoly {
        GeneralPoly::from_map(
            self.nvars,
            self.terms.iter().map(|(k, v)| (Monomial::from_set(self.nvars, *k), v.clone())).collect(),
        )
    }

    pub fn evaluate(&self, a: &RationalPoint) -> Result<Q, PolyError> {
        if a.len() != self.nvars {
            return Err(PolyError::Dimension { expected: self.nvars, found: a.len() });
        }
        let mut acc = Q::zero();
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for e in elems(*k) {
                t *= &a.coords()[e - 1];
                if t.is_zero() {
                    break;
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

/// `sum_{B in bases} prod_{i in B} x_i`.
pub fn basis_generating_poly(m: &Matroid) -> MultiAffinePoly {
    MultiAffinePoly {
        nvars: m.n(),
        terms: m.basis_masks().iter().map(|&b| (b, Q::one())).collect(),
    }
}

/// Basis-generating polynomial of a labeled minor, written in the original
/// variable names `x_{labels[k]}` inside an `nvars`-variable ring.
pub fn labeled_basis_poly(m: &LabeledMatroid, nvars: usize) -> Result<MultiAffinePoly, PolyError> {
    if let Some(&l) = m.labels.iter().find(|&&l| l == 0 || l > nvars) {
        return Err(PolyError::VariableRange { var: l, nvars });
    }
    Ok(MultiAffinePoly {
        nvars,
        terms: m.original_bases().into_iter().map(|b| (b, Q::one())).collect(),
    })
}

/// `Delta_{i,j} f = (df/dx_i)(df/dx_j) - f * d^2 f/dx_i dx_j`.
pub fn rayleigh_difference(f: &MultiAffinePoly, i: usize, j: usize) -> Result<GeneralPoly, PolyError> {
    if i == j {
        return Err(PolyError::Domain(format!("Rayleigh difference needs i != j, got i = j = {i}")));
    }
    let fi = f.partial_derivative(i)?;
    let fj = f.partial_derivative(j)?;
    let fij = fi.partial_derivative(j)?;
    Ok(fi.mul(&fj).sub(&f.mul(&fij)))
}

/// The `r`-th elementary symmetric polynomial in `n` variables.
pub fn elementary_symmetric(r: usize, n: usize) -> Result<MultiAffinePoly, PolyError> {
    if r > n {
        return Err(PolyError::Domain(format!("e_{{{r},{n}}} needs r <= n")));
    }
    if n > MAX_GROUND {
        return Err(PolyError::VariableRange { var: n, nvars: MAX_GROUND });
    }
    Ok(MultiAffinePoly {
        nvars: n,
        terms: set::k_subsets(n, r).into_iter().map(|s| (s, Q::one())).collect(),
    })
}

/// `det(sum_i x_i v_i v_i^T)` for the columns `v_i` of a `d x n` matrix,
/// expanded as `sum_{|I| = d} det(V_I)^2 prod_{i in I} x_i`.
pub fn cauchy_binet_expansion(vectors: &RationalMatrix) -> Result<MultiAffinePoly, PolyError> {
    let (d, n) = (vectors.rows(), vectors.cols());
    if d > n {
        return Err(PolyError::Domain(format!("{d} rows but only {n} vectors")));
    }
    if n > MAX_GROUND {
        return Err(PolyError::VariableRange { var: n, nvars: MAX_GROUND });
    }
    let mut p = MultiAffinePoly::zero(n);
    for s in set::k_subsets(n, d) {
        let cols: Vec<usize> = elems(s).into_iter().map(|e| e - 1).collect();
        let det = vectors.select_columns(&cols).determinant();
        p.add_term(s, &det * &det);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::set::from_elems;
    use crate::matroid::{matroid_from_matrix, uniform, vamos_matroid};
    use crate::rational::q;

    fn poly(nvars: usize, terms: &[(&[usize], i64)]) -> MultiAffinePoly {
        MultiAffinePoly::from_terms(nvars, terms.iter().map(|(v, c)| (from_elems(v), q(*c)))).unwrap()
    }

    #[test]
    fn basis_polys() {
        assert_eq!(basis_generating_poly(&uniform(3, 3).unwrap()), poly(3, &[(&[1, 2, 3], 1)]));
        let f8 = basis_generating_poly(&vamos_matroid(4).unwrap());
        assert_eq!(f8.num_terms(), 65);
        assert_eq!(f8.homogeneous_degree(), Some(4));
        for h in crate::matroid::vamos_exclusions(4) {
            assert!(f8.coefficient(h).is_zero());
        }
        assert_eq!(basis_generating_poly(&vamos_matroid(5).unwrap()).num_terms(), 203);
    }

    #[test]
    fn restriction_and_derivative() {
        let p = poly(3, &[(&[1, 2], 1), (&[2, 3], 1)]);
        assert_eq!(p.restrict(1).unwrap(), poly(3, &[(&[2, 3], 1)]));
        assert_eq!(p.partial_derivative(1).unwrap(), poly(3, &[(&[2], 1)]));
        assert!(p.restrict(4).is_err());
        let f10 = basis_generating_poly(&vamos_matroid(5).unwrap());
        // C(8,4) minus the two surviving exclusions {1,2,3,4} and {1,2,9,10}
        assert_eq!(f10.restrict(5).unwrap().restrict(7).unwrap().num_terms(), 68);
    }

    #[test]
    fn euler_split_f8() {
        let f8 = basis_generating_poly(&vamos_matroid(4).unwrap());
        let split = f8.partial_derivative(1).unwrap().times_variable(1).unwrap().add(&f8.restrict(1).unwrap());
        assert_eq!(split, f8);
    }

    #[test]
    fn rayleigh_small_cases() {
        let d = rayleigh_difference(&poly(2, &[(&[1, 2], 1)]), 1, 2).unwrap();
        assert!(d.is_zero());
        let e23 = elementary_symmetric(2, 3).unwrap();
        let d = rayleigh_difference(&e23, 1, 2).unwrap();
        let x3sq = GeneralPoly::from_map(3, [(Monomial::from_exponents(vec![0, 0, 2]), q(1))].into_iter().collect());
        assert_eq!(d, x3sq);
        assert!(rayleigh_difference(&e23, 2, 2).is_err());
    }

    #[test]
    fn rayleigh_of_f10_avoids_its_indices() {
        let f10 = basis_generating_poly(&vamos_matroid(5).unwrap());
        let d = rayleigh_difference(&f10, 5, 7).unwrap();
        assert!(!d.is_zero());
        assert_eq!(d.homogeneous_degree(), Some(6));
        assert!(d.terms().all(|(m, _)| m.exponent(5) == 0 && m.exponent(7) == 0));
    }

    #[test]
    fn elementary_symmetric_identity() {
        assert_eq!(elementary_symmetric(3, 3).unwrap(), poly(3, &[(&[1, 2, 3], 1)]));
        assert_eq!(elementary_symmetric(2, 3).unwrap(), poly(3, &[(&[1, 2], 1), (&[1, 3], 1), (&[2, 3], 1)]));
        let e34 = elementary_symmetric(3, 4).unwrap();
        let sum = (1..=4).fold(MultiAffinePoly::zero(4), |acc, i| acc.add(&e34.partial_derivative(i).unwrap()));
        assert_eq!(sum, elementary_symmetric(2, 4).unwrap().scale(&q(2)));
        assert!(elementary_symmetric(4, 3).is_err());
    }

    #[test]
    fn cauchy_binet_small_cases() {
        assert_eq!(cauchy_binet_expansion(&RationalMatrix::identity(2)).unwrap(), poly(2, &[(&[1, 2], 1)]));
        let v = RationalMatrix::from_i64_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(cauchy_binet_expansion(&v).unwrap(), elementary_symmetric(2, 3).unwrap());
        let a = RationalMatrix::from_i64_rows(&[&[1, 0, 0, 1, 0], &[0, 1, 0, 1, 1], &[0, 0, 1, 0, 1]]);
        let cb = cauchy_binet_expansion(&a).unwrap();
        let support: Vec<ElemSet> = cb.terms().map(|(k, _)| k).collect();
        let mut bases = matroid_from_matrix(&a).unwrap().basis_masks().to_vec();
        bases.sort_unstable();
        assert_eq!(support, bases);
        assert!(cauchy_binet_expansion(&RationalMatrix::identity(3).select_columns(&[0, 1])).is_err());
    }

    #[test]
    fn evaluation() {
        let f8 = basis_generating_poly(&vamos_matroid(4).unwrap());
        assert_eq!(f8.evaluate(&RationalPoint::ones(8)).unwrap(), q(65));
        assert_eq!(f8.evaluate(&RationalPoint::zeros(8)).unwrap(), q(0));
        assert!(f8.evaluate(&RationalPoint::ones(7)).is_err());
        let d = rayleigh_difference(&elementary_symmetric(2, 3).unwrap(), 1, 2).unwrap();
        assert_eq!(d.evaluate(&RationalPoint::new(vec![q(0), q(0), q(3)])).unwrap(), q(9));
    }
}
