//! Exact positive-semidefiniteness by fraction-free symmetric elimination.
//!
//! The matrix is scaled to integers and reduced with Bareiss steps on
//! diagonal pivots, always taking the largest positive remaining diagonal
//! (ties to the lowest index). After pivoting on a set `P`, the entry
//! `M[i][j]` equals the determinant of the scaled submatrix on rows
//! `P + i` and columns `P + j`, so every diagonal entry is a principal minor
//! and every division is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{CertificateError, GramCertificate};
use crate::matrix::RationalMatrix;
use crate::poly::{GeneralPoly, Monomial};
use crate::matroid::set::ElemSet;
use crate::rational::{common_denominator, serde_q, serde_q_vec, to_f64, Q};

/// Certificate of indefiniteness. Both parts re-verify independently:
/// the principal submatrix on `principal_minor` (1-based) has determinant
/// `minor_determinant < 0`, and `vector^T G vector = quadratic_value < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsdWitness {
    pub principal_minor: Vec<usize>,
    #[serde(with = "serde_q")]
    pub minor_determinant: Q,
    #[serde(with = "serde_q_vec")]
    pub vector: Vec<Q>,
    #[serde(with = "serde_q")]
    pub quadratic_value: Q,
}

impl PsdWitness {
    /// Recomputes both claims exactly against `g`.
    pub fn reverify(&self, g: &RationalMatrix) -> bool {
        let idx: Vec<usize> = self.principal_minor.iter().map(|i| i - 1).collect();
        let det = g.principal(&idx).determinant();
        let value = g.quadratic_form(&self.vector);
        det == self.minor_determinant && det.is_negative() && value == self.quadratic_value && value.is_negative()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    /// Number of positive pivots taken (the rank when PSD).
    pub pivots: usize,
    pub witness: Option<PsdWitness>,
}

struct Step {
    pivot: usize,
    prev: BigInt,
    value: BigInt,
    row: Vec<BigInt>,
}

enum Outcome {
    Complete,
    NegativeDiagonal(usize),
    /// Zero remaining diagonal with a nonzero coupling; the flag is its sign.
    IndefiniteZeroBlock(usize, usize, bool),
}

struct Elimination {
    scale: BigInt,
    steps: Vec<Step>,
    outcome: Outcome,
}

fn eliminate(g: &RationalMatrix) -> Elimination {
    let n = g.rows();
    let scale = common_denominator((0..n).flat_map(|i| g.row(i).iter()));
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| g.row(i).iter().map(|x| (x * Q::from_integer(scale.clone())).to_integer()).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut prev = BigInt::from(1);
    let mut steps = Vec::new();
    loop {
        if let Some(&i) = active.iter().find(|&&i| m[i][i].is_negative()) {
            return Elimination { scale, steps, outcome: Outcome::NegativeDiagonal(i) };
        }
        let mut pivot: Option<usize> = None;
        for &i in &active {
            if m[i][i].is_positive() && pivot.is_none_or(|p| m[i][i] > m[p][p]) {
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else {
            // remaining diagonal is zero: PSD iff the remaining block is zero
            for (a, &k) in active.iter().enumerate() {
                if let Some(&l) = active[a + 1..].iter().find(|&&l| !m[k][l].is_zero()) {
                    let positive = m[k][l].is_positive();
                    return Elimination { scale, steps, outcome: Outcome::IndefiniteZeroBlock(k, l, positive) };
                }
            }
            return Elimination { scale, steps, outcome: Outcome::Complete };
        };
        let d = m[p][p].clone();
        let row: Vec<BigInt> = (0..n).map(|j| if active.contains(&j) { m[p][j].clone() } else { BigInt::zero() }).collect();
        active.retain(|&i| i != p);
        for &i in &active {
            for &j in &active {
                if j < i {
                    continue;
                }
                let num = &d * &m[i][j] - &m[i][p] * &m[p][j];
                let (quo, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = quo.clone();
                m[j][i] = quo;
            }
        }
        steps.push(Step { pivot: p, prev: prev.clone(), value: d.clone(), row });
        prev = d;
        if active.is_empty() {
            return Elimination { scale, steps, outcome: Outcome::Complete };
        }
    }
}

/// Decides `G >= 0` exactly. Errors on non-square or asymmetric input.
pub fn verify_psd(g: &RationalMatrix) -> Result<PsdVerdict, CertificateError> {
    if !g.is_square() {
        return Err(CertificateError::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    if let Some((i, j)) = g.first_asymmetry() {
        return Err(CertificateError::Asymmetric { row: i + 1, col: j + 1 });
    }
    let elim = eliminate(g);
    let pivots = elim.steps.len();
    let pivot_set: Vec<usize> = elim.steps.iter().map(|s| s.pivot).collect();
    let (extra, reduced): (Vec<usize>, Vec<(usize, Q)>) = match elim.outcome {
        Outcome::Complete => return Ok(PsdVerdict { is_psd: true, pivots, witness: None }),
        Outcome::NegativeDiagonal(i) => (vec![i], vec![(i, Q::from_integer(1.into()))]),
        Outcome::IndefiniteZeroBlock(k, l, positive) => {
            // the reduced form at e_k -+ e_l is -2|s_kl|
            let sign = if positive { -1 } else { 1 };
            (vec![k, l], vec![(k, Q::from_integer(1.into())), (l, Q::from_integer(sign.into()))])
        }
    };
    let mut minor: Vec<usize> = pivot_set.iter().chain(&extra).copied().collect();
    minor.sort_unstable();
    let minor_determinant = g.principal(&minor).determinant();
    let vector = simple_negative_vector(g).unwrap_or_else(|| schur_vector(g, &pivot_set, &reduced));
    let quadratic_value = g.quadratic_form(&vector);
    let witness = PsdWitness {
        principal_minor: minor.iter().map(|i| i + 1).collect(),
        minor_determinant,
        vector,
        quadratic_value,
    };
    debug_assert!(witness.reverify(g));
    Ok(PsdVerdict { is_psd: false, pivots, witness: Some(witness) })
}

/// Lifts a vector on the non-pivot coordinates to the full space so that
/// `u^T G u` equals the Schur-complement form: `u_P = -G_PP^{-1} G_PR y`.
fn schur_vector(g: &RationalMatrix, pivots: &[usize], reduced: &[(usize, Q)]) -> Vec<Q> {
    let n = g.rows();
    let mut u = vec![Q::zero(); n];
    for (i, v) in reduced {
        u[*i] = v.clone();
    }
    if !pivots.is_empty() {
        let gpp = g.principal(pivots);
        let rhs: Vec<Q> = pivots
            .iter()
            .map(|&p| reduced.iter().map(|(i, v)| &g[(p, *i)] * v).sum())
            .collect();
        let z = gpp.solve(&rhs).expect("pivot block is positive definite");
        for (k, &p) in pivots.iter().enumerate() {
            u[p] = -z[k].clone();
        }
    }
    u
}

/// `e_k` with `G_kk < 0`, or `e_k -+ e_l` with `G_kk + G_ll - 2|G_kl| < 0`.
fn simple_negative_vector(g: &RationalMatrix) -> Option<Vec<Q>> {
    let n = g.rows();
    let one = Q::from_integer(1.into());
    for k in 0..n {
        if g[(k, k)].is_negative() {
            let mut u = vec![Q::zero(); n];
            u[k] = one.clone();
            return Some(u);
        }
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let off = &g[(k, l)];
            let two = Q::from_integer(2.into());
            if (&g[(k, k)] + &g[(l, l)] - two * off.abs()).is_negative() {
                let mut u = vec![Q::zero(); n];
                u[k] = one.clone();
                u[l] = if off.is_positive() { -one.clone() } else { one.clone() };
                return Some(u);
            }
        }
    }
    None
}

/// `weight * (sum_k coefficients[k] * m_k)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SosTerm {
    #[serde(with = "serde_q")]
    pub weight: Q,
    #[serde(with = "serde_q_vec")]
    pub coefficients: Vec<Q>,
}

/// `target = sum weight * (form . m)^2` with every weight positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosDecomposition {
    pub nvars: usize,
    pub monomials: Vec<ElemSet>,
    pub terms: Vec<SosTerm>,
}

impl SosDecomposition {
    /// Multiplies the squares back out.
    pub fn expand(&self) -> GeneralPoly {
        let mono: Vec<Monomial> = self.monomials.iter().map(|&m| Monomial::from_set(self.nvars, m)).collect();
        let mut acc = GeneralPoly::zero(self.nvars);
        for t in &self.terms {
            let form = GeneralPoly::from_terms(
                self.nvars,
                mono.iter().cloned().zip(t.coefficients.iter().cloned()),
            );
            acc = acc.add(&form.mul(&form).scale(&t.weight));
        }
        acc
    }
}

/// Weighted sum of squares read off the elimination: one square per pivot,
/// weight equal to the pivot of the true Schur complement and form equal to
/// the pivot row normalised to 1 at the pivot.
pub fn sos_decompose(c: &GramCertificate) -> Result<SosDecomposition, CertificateError> {
    let verdict = verify_psd(c.gram())?;
    if !verdict.is_psd {
        return Err(CertificateError::NotPsd);
    }
    let elim = eliminate(c.gram());
    let scale = Q::from_integer(elim.scale.clone());
    let terms = elim
        .steps
        .iter()
        .map(|s| {
            let d = Q::from_integer(s.value.clone());
            let weight = &d / (Q::from_integer(s.prev.clone()) * &scale);
            let coefficients = s.row.iter().map(|r| Q::from_integer(r.clone()) / &d).collect();
            SosTerm { weight, coefficients }
        })
        .collect();
    Ok(SosDecomposition { nvars: c.nvars(), monomials: c.monomials().to_vec(), terms })
}

/// Floating-point eigenvalue range. A sanity cross-check, never a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloatEigenSummary {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

pub fn float_psd_oracle(g: &RationalMatrix) -> FloatEigenSummary {
    let n = g.rows();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| to_f64(&g[(i, j)]));
    let eig = nalgebra::SymmetricEigen::new(m).eigenvalues;
    FloatEigenSummary {
        min_eigenvalue: eig.iter().copied().fold(f64::INFINITY, f64::min),
        max_eigenvalue: eig.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn identity_is_psd() {
        let v = verify_psd(&RationalMatrix::identity(3)).unwrap();
        assert!(v.is_psd);
        assert_eq!(v.pivots, 3);
    }

    #[test]
    fn indefinite_two_by_two() {
        let g = RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]);
        let v = verify_psd(&g).unwrap();
        assert!(!v.is_psd);
        let w = v.witness.unwrap();
        assert_eq!(w.vector, vec![q(1), q(-1)]);
        assert_eq!(w.quadratic_value, q(-2));
        assert_eq!(w.principal_minor, vec![1, 2]);
        assert_eq!(w.minor_determinant, q(-3));
        assert!(w.reverify(&g));
    }

    #[test]
    fn zero_diagonal_with_coupling_is_indefinite() {
        let g = RationalMatrix::from_i64_rows(&[&[1, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 0, 3], &[0, 0, 3, 0]]);
        let v = verify_psd(&g).unwrap();
        assert!(!v.is_psd);
        assert!(v.witness.unwrap().reverify(&g));
    }

    #[test]
    fn schur_witness_when_no_simple_vector_exists() {
        // eigenvalues 3 - sqrt(2)... small negative only after elimination
        let g = RationalMatrix::from_rows(vec![
            vec![q(2), q(1), q(1)],
            vec![q(1), q(2), frac(-1, 1)],
            vec![q(1), q(-1), frac(1, 10)],
        ])
        .unwrap();
        let v = verify_psd(&g).unwrap();
        assert!(!v.is_psd);
        let w = v.witness.unwrap();
        assert!(w.reverify(&g));
    }

    #[test]
    fn rank_deficient_psd() {
        let g = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let v = verify_psd(&g).unwrap();
        assert!(v.is_psd);
        assert_eq!(v.pivots, 1);
        assert!(verify_psd(&RationalMatrix::zeros(3, 3)).unwrap().is_psd);
    }

    #[test]
    fn asymmetric_input_is_an_error() {
        let g = RationalMatrix::from_i64_rows(&[&[1, 2], &[3, 1]]);
        assert_eq!(verify_psd(&g), Err(CertificateError::Asymmetric { row: 1, col: 2 }));
    }

    #[test]
    fn float_oracle_examples() {
        let e = float_psd_oracle(&RationalMatrix::identity(4));
        assert!((e.min_eigenvalue - 1.0).abs() < 1e-12);
        let e = float_psd_oracle(&RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]));
        assert!((e.min_eigenvalue + 1.0).abs() < 1e-12);
        assert!((e.max_eigenvalue - 3.0).abs() < 1e-12);
    }
}
