//! Gram certificates: a monomial vector `m` and a symmetric rational `G`
//! claiming `target = m^T G m` with `G` positive semidefinite.

mod psd;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use psd::{
    float_psd_oracle, sos_decompose, verify_psd, FloatEigenSummary, PsdVerdict, PsdWitness, SosDecomposition,
    SosTerm,
};

use crate::matrix::{MatrixError, MatrixJson, RationalMatrix};
use crate::matroid::set::{self, ElemSet};
use crate::matroid::{builtin, Matroid, MatroidError, MatroidJson};
use crate::par::Execution;
use crate::poly::{basis_generating_poly, rayleigh_difference, GeneralPoly, Monomial, MultiAffinePoly, PolyError};
use crate::rational::{format_rational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Json(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("gram matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram matrix is not symmetric at row {row}, col {col}")]
    Asymmetric { row: usize, col: usize },
    #[error("{monomials} monomials but gram matrix has dimension {gram}")]
    Dimension { monomials: usize, gram: usize },
    #[error("block form: {0}")]
    Blocks(String),
    #[error("certificate has both or neither of \"gram\" and \"blocks\"")]
    GramSource,
    #[error("monomial {index} is invalid: {msg}")]
    Monomial { index: usize, msg: String },
    #[error("monomials {first} and {second} coincide")]
    DuplicateMonomial { first: usize, second: usize },
    #[error("certificate has {certificate} variables, target has {target}")]
    Nvars { certificate: usize, target: usize },
    #[error("monomial {index} has degree {found}, target needs {expected}")]
    Inhomogeneous { index: usize, found: usize, expected: usize },
    #[error("gram matrix is not positive semidefinite")]
    NotPsd,
    #[error("certificate has no target recipe")]
    NoTarget,
    #[error("unknown builtin matroid {0:?}")]
    UnknownMatroid(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Names the polynomial a certificate is for: starting from the basis
/// polynomial of `matroid`, set each deleted variable to zero, differentiate
/// in each contracted one, then take the Rayleigh difference at `(i, j)`.
/// All indices use the matroid's own labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub matroid: MatroidRef,
    #[serde(default)]
    pub deletions: Vec<usize>,
    #[serde(default)]
    pub contractions: Vec<usize>,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatroidRef {
    Named(String),
    Inline(MatroidJson),
}

impl MatroidRef {
    pub fn resolve(&self) -> Result<Matroid, CertificateError> {
        match self {
            MatroidRef::Named(name) => builtin(name).ok_or_else(|| CertificateError::UnknownMatroid(name.clone())),
            MatroidRef::Inline(j) => Ok(j.to_matroid()?),
        }
    }
}

impl TargetSpec {
    /// The polynomial before the Rayleigh difference is taken.
    pub fn base_polynomial(&self) -> Result<MultiAffinePoly, CertificateError> {
        let mut f = basis_generating_poly(&self.matroid.resolve()?);
        for &k in &self.deletions {
            f = f.restrict(k)?;
        }
        for &k in &self.contractions {
            f = f.partial_derivative(k)?;
        }
        Ok(f)
    }

    pub fn polynomial(&self) -> Result<GeneralPoly, CertificateError> {
        Ok(rayleigh_difference(&self.base_polynomial()?, self.i, self.j)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramCertificate {
    nvars: usize,
    monomials: Vec<ElemSet>,
    gram: RationalMatrix,
    target: Option<TargetSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    nvars: usize,
    monomials: Vec<Vec<usize>>,
    gram: Option<MatrixJson>,
    blocks: Option<BlocksJson>,
    target: Option<TargetSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlocksJson {
    #[serde(rename = "A")]
    a: MatrixJson,
    #[serde(rename = "B")]
    b: MatrixJson,
    #[serde(rename = "C")]
    c: MatrixJson,
}

#[derive(Serialize)]
struct CertificateOut<'a> {
    nvars: usize,
    monomials: Vec<Vec<usize>>,
    gram: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<&'a TargetSpec>,
}

/// `[[A, B^T], [B, C]]`, with shape errors naming the offending block.
fn assemble_blocks(a: &RationalMatrix, b: &RationalMatrix, c: &RationalMatrix) -> Result<RationalMatrix, CertificateError> {
    let (p, r) = (a.rows(), c.rows());
    if !a.is_square() || !c.is_square() {
        return Err(CertificateError::Blocks("A and C must be square".into()));
    }
    if b.rows() != r || b.cols() != p {
        return Err(CertificateError::Blocks(format!(
            "B is {}x{}, expected {r}x{p} from dim(C) x dim(A)",
            b.rows(),
            b.cols()
        )));
    }
    let mut g = RationalMatrix::zeros(p + r, p + r);
    for i in 0..p {
        for j in 0..p {
            g[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..r {
        for j in 0..p {
            g[(p + i, j)] = b[(i, j)].clone();
            g[(j, p + i)] = b[(i, j)].clone();
        }
        for j in 0..r {
            g[(p + i, p + j)] = c[(i, j)].clone();
        }
    }
    Ok(g)
}

impl GramCertificate {
    /// Checks every structural invariant: square symmetric gram of the
    /// monomial count, distinct monomials within range.
    pub fn new(
        nvars: usize,
        monomials: Vec<ElemSet>,
        gram: RationalMatrix,
        target: Option<TargetSpec>,
    ) -> Result<Self, CertificateError> {
        if !gram.is_square() {
            return Err(CertificateError::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if gram.rows() != monomials.len() {
            return Err(CertificateError::Dimension { monomials: monomials.len(), gram: gram.rows() });
        }
        if let Some((i, j)) = gram.first_asymmetry() {
            return Err(CertificateError::Asymmetric { row: i + 1, col: j + 1 });
        }
        let mut seen = BTreeMap::new();
        for (k, &m) in monomials.iter().enumerate() {
            if m & !set::full(nvars) != 0 {
                return Err(CertificateError::Monomial { index: k + 1, msg: format!("variable above {nvars}") });
            }
            if let Some(first) = seen.insert(m, k + 1) {
                return Err(CertificateError::DuplicateMonomial { first, second: k + 1 });
            }
        }
        Ok(GramCertificate { nvars, monomials, gram, target })
    }

    pub fn from_json_str(text: &str) -> Result<Self, CertificateError> {
        parse_certificate(text)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn monomials(&self) -> &[ElemSet] {
        &self.monomials
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn target(&self) -> Option<&TargetSpec> {
        self.target.as_ref()
    }

    pub fn with_gram(&self, gram: RationalMatrix) -> Result<Self, CertificateError> {
        Self::new(self.nvars, self.monomials.clone(), gram, self.target.clone())
    }

    pub fn with_target(mut self, target: Option<TargetSpec>) -> Self {
        self.target = target;
        self
    }

    /// Polynomial `m^T G m`, rows expanded independently and summed in order.
    pub fn expand(&self) -> GeneralPoly {
        self.expand_with(Execution::default())
    }

    pub fn expand_with(&self, exec: Execution) -> GeneralPoly {
        let n = self.dim();
        let rows = crate::par::map_range(exec, n, |k| {
            let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
            for l in 0..n {
                let g = &self.gram[(k, l)];
                if num_traits::Zero::is_zero(g) {
                    continue;
                }
                let mono = Monomial::from_product(self.nvars, self.monomials[k], self.monomials[l]);
                *acc.entry(mono).or_default() += g;
            }
            GeneralPoly::from_terms(self.nvars, acc)
        });
        rows.iter().fold(GeneralPoly::zero(self.nvars), |a, r| a.add(r))
    }

    /// Canonical JSON: gram always written in full form, monomial order kept.
    pub fn to_json_string(&self) -> String {
        let out = CertificateOut {
            nvars: self.nvars,
            monomials: self.monomials.iter().map(|&m| set::elems(m)).collect(),
            gram: MatrixJson::from_matrix(&self.gram),
            target: self.target.as_ref(),
        };
        serde_json::to_string(&out).expect("certificate serializes")
    }
}

/// Reads a certificate in either full (`gram`) or block (`blocks`) form.
pub fn parse_certificate(text: &str) -> Result<GramCertificate, CertificateError> {
    let raw: CertificateJson = serde_json::from_str(text).map_err(|e| CertificateError::Json(e.to_string()))?;
    if raw.nvars == 0 || raw.nvars > set::MAX_GROUND {
        return Err(CertificateError::Json(format!("nvars {} out of range", raw.nvars)));
    }
    let gram = match (&raw.gram, &raw.blocks) {
        (Some(g), None) => g.to_matrix()?,
        (None, Some(b)) => {
            let (a, c) = (b.a.to_matrix()?, b.c.to_matrix()?);
            if a.rows() + c.rows() != raw.monomials.len() {
                return Err(CertificateError::Dimension {
                    monomials: raw.monomials.len(),
                    gram: a.rows() + c.rows(),
                });
            }
            assemble_blocks(&a, &b.b.to_matrix()?, &c)?
        }
        _ => return Err(CertificateError::GramSource),
    };
    let mut monomials = Vec::with_capacity(raw.monomials.len());
    for (k, vars) in raw.monomials.iter().enumerate() {
        let mut mask: ElemSet = 0;
        for &v in vars {
            if v == 0 || v > raw.nvars {
                return Err(CertificateError::Monomial { index: k + 1, msg: format!("variable {v} out of range") });
            }
            if set::contains(mask, v) {
                return Err(CertificateError::Monomial { index: k + 1, msg: format!("variable {v} repeated") });
            }
            mask |= set::bit(v);
        }
        monomials.push(mask);
    }
    GramCertificate::new(raw.nvars, monomials, gram, raw.target)
}

/// Outcome of comparing `m^T G m` with a target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub holds: bool,
    pub mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub monomial: String,
    pub certificate: String,
    pub target: String,
}

/// Exact identity check. Errors when variable counts differ or a monomial
/// has the wrong degree for a homogeneous target.
pub fn verify_gram_identity(c: &GramCertificate, target: &GeneralPoly) -> Result<IdentityReport, CertificateError> {
    verify_gram_identity_with(c, target, Execution::default())
}

pub fn verify_gram_identity_with(
    c: &GramCertificate,
    target: &GeneralPoly,
    exec: Execution,
) -> Result<IdentityReport, CertificateError> {
    if c.nvars() != target.nvars() {
        return Err(CertificateError::Nvars { certificate: c.nvars(), target: target.nvars() });
    }
    if let Some(deg) = target.homogeneous_degree().filter(|d| d % 2 == 0 && !target.is_zero()) {
        for (k, &m) in c.monomials().iter().enumerate() {
            let found = m.count_ones() as usize;
            if found != deg / 2 {
                return Err(CertificateError::Inhomogeneous { index: k + 1, found, expected: deg / 2 });
            }
        }
    }
    let lhs = c.expand_with(exec);
    Ok(match lhs.first_difference(target) {
        None => IdentityReport { holds: true, mismatch: None },
        Some((mono, a, b)) => IdentityReport {
            holds: false,
            mismatch: Some(Mismatch {
                monomial: mono.to_string(),
                certificate: format_rational(&a),
                target: format_rational(&b),
            }),
        },
    })
}

/// Both obligations of a certificate against its own recipe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub dim: usize,
    pub identity: IdentityReport,
    pub psd: PsdVerdict,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.identity.holds && self.psd.is_psd
    }
}

pub fn verify_certificate(c: &GramCertificate, target: &GeneralPoly) -> Result<CertificateReport, CertificateError> {
    Ok(CertificateReport {
        dim: c.dim(),
        identity: verify_gram_identity(c, target)?,
        psd: verify_psd(c.gram())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::elementary_symmetric;
    use crate::rational::q;

    fn cert(nvars: usize, monos: &[&[usize]], g: &[&[i64]]) -> GramCertificate {
        let m = monos.iter().map(|v| set::from_elems(v)).collect();
        GramCertificate::new(nvars, m, RationalMatrix::from_i64_rows(g), None).unwrap()
    }

    #[test]
    fn single_entry_expansion() {
        let c = cert(3, &[&[3]], &[&[1]]);
        let target = rayleigh_difference(&elementary_symmetric(2, 3).unwrap(), 1, 2).unwrap();
        assert!(verify_gram_identity(&c, &target).unwrap().holds);
    }

    #[test]
    fn square_of_sum() {
        let c = cert(2, &[&[1], &[2]], &[&[1, 1], &[1, 1]]);
        let t = GeneralPoly::from_terms(
            2,
            [
                (Monomial::from_exponents(vec![2, 0]), q(1)),
                (Monomial::from_exponents(vec![1, 1]), q(2)),
                (Monomial::from_exponents(vec![0, 2]), q(1)),
            ],
        );
        assert!(verify_gram_identity(&c, &t).unwrap().holds);
        let bad = cert(2, &[&[1], &[2]], &[&[1, 2], &[2, 1]]);
        let r = verify_gram_identity(&bad, &t).unwrap();
        assert!(!r.holds);
        let m = r.mismatch.unwrap();
        assert_eq!((m.monomial.as_str(), m.certificate.as_str(), m.target.as_str()), ("x1x2", "4", "2"));
    }

    #[test]
    fn parse_rejects_asymmetry_with_position() {
        let doc = r#"{"nvars":2,"monomials":[[1],[2]],"gram":[["1","1/2"],["1/3","1"]]}"#;
        assert_eq!(parse_certificate(doc), Err(CertificateError::Asymmetric { row: 1, col: 2 }));
    }

    #[test]
    fn parse_rejects_floats_and_bad_entries() {
        let doc = r#"{"nvars":2,"monomials":[[1],[2]],"gram":[[1,0.5],["1/2",1]]}"#;
        match parse_certificate(doc) {
            Err(CertificateError::Matrix(MatrixError::Entry { row, col, .. })) => assert_eq!((row, col), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_block_form() {
        let doc = r#"{"nvars":3,"monomials":[[1],[2],[3]],
            "blocks":{"A":[["2"]],"B":[["1"],["0"]],"C":[["2","0"],["0","1"]]}}"#;
        let c = parse_certificate(doc).unwrap();
        assert_eq!(c.gram()[(0, 1)], q(1));
        assert_eq!(c.gram()[(1, 0)], q(1));
        let short = doc.replace("[[1],[2],[3]]", "[[1],[2]]");
        assert_eq!(parse_certificate(&short), Err(CertificateError::Dimension { monomials: 2, gram: 3 }));
    }

    #[test]
    fn parse_rejects_duplicates_and_range() {
        let dup = r#"{"nvars":2,"monomials":[[1],[1]],"gram":[["1","0"],["0","1"]]}"#;
        assert_eq!(parse_certificate(dup), Err(CertificateError::DuplicateMonomial { first: 1, second: 2 }));
        let range = r#"{"nvars":2,"monomials":[[1],[3]],"gram":[["1","0"],["0","1"]]}"#;
        assert!(matches!(parse_certificate(range), Err(CertificateError::Monomial { index: 2, .. })));
    }

    #[test]
    fn json_round_trip() {
        let c = cert(3, &[&[1, 2], &[3, 1]], &[&[2, -1], &[-1, 2]]);
        let back = parse_certificate(&c.to_json_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn sos_examples() {
        let c = cert(2, &[&[1], &[2]], &[&[1, 1], &[1, 1]]);
        let s = sos_decompose(&c).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.expand(), c.expand());
        let id = cert(2, &[&[1], &[2]], &[&[1, 0], &[0, 1]]);
        assert_eq!(sos_decompose(&id).unwrap().terms.len(), 2);
        let bad = cert(2, &[&[1], &[2]], &[&[1, 2], &[2, 1]]);
        assert_eq!(sos_decompose(&bad), Err(CertificateError::NotPsd));
    }

    #[test]
    fn homogeneity_guard() {
        let c = cert(3, &[&[1, 2], &[3]], &[&[1, 0], &[0, 1]]);
        let t = rayleigh_difference(&elementary_symmetric(2, 3).unwrap(), 1, 2).unwrap();
        assert!(matches!(verify_gram_identity(&c, &t), Err(CertificateError::Inhomogeneous { index: 1, .. })));
    }
}
