//! Finite matroids given by explicit basis lists.
//!
//! Ground sets are `{1..n}` with `n <= 64`; bases are stored as bitmasks in
//! lexicographic order of their sorted element lists. Minors compact the
//! ground set to `{1..n'}` preserving order, and the `_labeled` variants
//! carry the original label of each surviving element alongside.

mod iso;
pub mod set;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::RationalMatrix;
use num_traits::Zero;
pub use iso::{are_isomorphic, has_v8_minor, GroundSetLabeling, V8Witness};
use set::{bit, contains, elems, from_elems, full, k_subsets, lex_cmp, ElemSet, MAX_GROUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set size {0} outside 1..=64")]
    GroundSize(usize),
    #[error("no bases given")]
    NoBases,
    #[error("basis {basis:?} has {found} elements, rank is {rank}")]
    BasisSize { basis: Vec<usize>, rank: usize, found: usize },
    #[error("basis {basis:?} mentions element {elem} outside 1..={n}")]
    ElementRange { basis: Vec<usize>, elem: usize, n: usize },
    #[error("basis {basis:?} repeats an element")]
    RepeatedElement { basis: Vec<usize> },
    #[error("basis exchange fails: B1={b1:?} B2={b2:?} e={e}")]
    Exchange { b1: Vec<usize>, b2: Vec<usize>, e: usize },
    #[error("element {elem} outside 1..={n}")]
    NoSuchElement { elem: usize, n: usize },
    #[error("element {0} is a coloop; deleting it would drop the rank")]
    Coloop(usize),
    #[error("element {0} is a loop; contracting it is undefined here")]
    Loop(usize),
    #[error("{0}")]
    Domain(String),
}

/// A candidate basis family. Unlike [`Matroid`] it is only structurally
/// validated, which lets the exchange axiom be checked and reported on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisFamily {
    n: usize,
    rank: usize,
    bases: Vec<ElemSet>,
}

impl BasisFamily {
    /// Validates sizes and element ranges, then sorts and deduplicates.
    pub fn new(n: usize, rank: usize, bases: &[Vec<usize>]) -> Result<Self, MatroidError> {
        if n == 0 || n > MAX_GROUND {
            return Err(MatroidError::GroundSize(n));
        }
        if bases.is_empty() {
            return Err(MatroidError::NoBases);
        }
        let mut masks = Vec::with_capacity(bases.len());
        for b in bases {
            if let Some(&elem) = b.iter().find(|&&e| e == 0 || e > n) {
                return Err(MatroidError::ElementRange { basis: b.clone(), elem, n });
            }
            let mask = from_elems(b);
            if mask.count_ones() as usize != b.len() {
                return Err(MatroidError::RepeatedElement { basis: b.clone() });
            }
            if b.len() != rank {
                return Err(MatroidError::BasisSize { basis: b.clone(), rank, found: b.len() });
            }
            masks.push(mask);
        }
        Ok(Self::from_masks(n, rank, masks))
    }

    fn from_masks(n: usize, rank: usize, mut masks: Vec<ElemSet>) -> Self {
        masks.sort_by(|a, b| lex_cmp(*a, *b));
        masks.dedup();
        Self { n, rank, bases: masks }
    }

    /// First violation of the basis-exchange axiom, scanning ordered pairs
    /// `(B1, B2)` in lexicographic order and `e` ascending.
    pub fn exchange_violation(&self) -> Option<ExchangeViolation> {
        let lookup: HashSet<ElemSet> = self.bases.iter().copied().collect();
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                let only_b2 = b2 & !b1;
                for e in elems(b1 & !b2) {
                    let without = b1 & !bit(e);
                    let repaired = elems(only_b2).into_iter().any(|f| lookup.contains(&(without | bit(f))));
                    if !repaired {
                        return Some(ExchangeViolation { b1: elems(b1), b2: elems(b2), e });
                    }
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeViolation {
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
    pub e: usize,
}

/// Exhaustive basis-exchange check. Malformed bases surface as `Err`; an
/// axiom failure is `Ok(Some(witness))`.
pub fn check_basis_exchange(
    n: usize,
    rank: usize,
    bases: &[Vec<usize>],
) -> Result<Option<ExchangeViolation>, MatroidError> {
    Ok(BasisFamily::new(n, rank, bases)?.exchange_violation())
}

/// A matroid: a basis family satisfying the exchange axiom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<ElemSet>,
}

impl Matroid {
    pub fn new(n: usize, rank: usize, bases: &[Vec<usize>]) -> Result<Self, MatroidError> {
        Self::try_from(BasisFamily::new(n, rank, bases)?)
    }

    /// Builds from masks that are already known to form a matroid.
    pub(crate) fn from_trusted_masks(n: usize, rank: usize, masks: Vec<ElemSet>) -> Self {
        let fam = BasisFamily::from_masks(n, rank, masks);
        debug_assert!(!fam.bases.is_empty());
        Self { n: fam.n, rank: fam.rank, bases: fam.bases }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis_masks(&self) -> &[ElemSet] {
        &self.bases
    }

    pub fn bases(&self) -> Vec<Vec<usize>> {
        self.bases.iter().map(|&b| elems(b)).collect()
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn is_basis(&self, set: ElemSet) -> bool {
        self.bases.binary_search_by(|b| lex_cmp(*b, set)).is_ok()
    }

    /// `r`-subsets that are not bases, in lexicographic order.
    pub fn non_bases(&self) -> Vec<ElemSet> {
        k_subsets(self.n, self.rank).into_iter().filter(|s| !self.is_basis(*s)).collect()
    }

    pub fn is_uniform(&self) -> bool {
        self.bases.len() == set::binomial(self.n, self.rank)
    }

    pub fn family(&self) -> BasisFamily {
        BasisFamily { n: self.n, rank: self.rank, bases: self.bases.clone() }
    }

    /// Number of bases containing each element, indexed by `e - 1`.
    pub fn element_degrees(&self) -> Vec<usize> {
        (1..=self.n).map(|e| self.bases.iter().filter(|&&b| contains(b, e)).count()).collect()
    }

    fn check_element(&self, e: usize) -> Result<(), MatroidError> {
        if e == 0 || e > self.n {
            return Err(MatroidError::NoSuchElement { elem: e, n: self.n });
        }
        Ok(())
    }

    /// `M \ e`, relabeled onto `{1..n-1}`.
    pub fn delete(&self, e: usize) -> Result<Matroid, MatroidError> {
        self.check_element(e)?;
        if self.n == 1 {
            return Err(MatroidError::Domain("deleting the only element leaves an empty ground set".into()));
        }
        let kept: Vec<ElemSet> = self
            .bases
            .iter()
            .filter(|&&b| !contains(b, e))
            .map(|&b| set::compact_remove(b, e))
            .collect();
        if kept.is_empty() {
            return Err(MatroidError::Coloop(e));
        }
        Ok(Matroid::from_trusted_masks(self.n - 1, self.rank, kept))
    }

    /// `M / e`, relabeled onto `{1..n-1}`.
    pub fn contract(&self, e: usize) -> Result<Matroid, MatroidError> {
        self.check_element(e)?;
        if self.n == 1 {
            return Err(MatroidError::Domain("contracting the only element leaves an empty ground set".into()));
        }
        let kept: Vec<ElemSet> = self
            .bases
            .iter()
            .filter(|&&b| contains(b, e))
            .map(|&b| set::compact_remove(b & !bit(e), e))
            .collect();
        if kept.is_empty() {
            return Err(MatroidError::Loop(e));
        }
        Ok(Matroid::from_trusted_masks(self.n - 1, self.rank - 1, kept))
    }

    pub fn dual(&self) -> Matroid {
        let all = full(self.n);
        let comps = self.bases.iter().map(|&b| all & !b).collect();
        Matroid::from_trusted_masks(self.n, self.n - self.rank, comps)
    }

    /// Deletes `delete` and contracts `contract` (disjoint sets, original
    /// labels), returning the minor on the surviving elements in order.
    pub fn minor(&self, delete: &[usize], contract: &[usize]) -> Result<LabeledMatroid, MatroidError> {
        LabeledMatroid::identity(self.clone()).minor(delete, contract)
    }

    pub fn to_json(&self) -> MatroidJson {
        MatroidJson { n: self.n, rank: self.rank, bases: self.bases() }
    }

    /// Canonical single-line JSON (bases in lexicographic order).
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("matroid serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, MatroidLoadError> {
        let raw: MatroidJson = serde_json::from_str(text)?;
        Ok(raw.to_matroid()?)
    }

    /// Applies a relabeling of the ground set.
    pub fn relabel(&self, labeling: &GroundSetLabeling) -> Matroid {
        let masks = self.bases.iter().map(|&b| labeling.apply(b)).collect();
        Matroid::from_trusted_masks(self.n, self.rank, masks)
    }
}

impl TryFrom<BasisFamily> for Matroid {
    type Error = MatroidError;

    fn try_from(fam: BasisFamily) -> Result<Self, MatroidError> {
        if let Some(v) = fam.exchange_violation() {
            return Err(MatroidError::Exchange { b1: v.b1, b2: v.b2, e: v.e });
        }
        Ok(Self { n: fam.n, rank: fam.rank, bases: fam.bases })
    }
}

#[derive(Debug, Error)]
pub enum MatroidLoadError {
    #[error("matroid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] MatroidError),
}

/// On-disk shape: `{"n": int, "rank": int, "bases": [[int,...],...]}` with
/// 1-based sorted elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub rank: usize,
    pub bases: Vec<Vec<usize>>,
}

impl MatroidJson {
    pub fn to_matroid(&self) -> Result<Matroid, MatroidError> {
        Matroid::new(self.n, self.rank, &self.bases)
    }
}

/// A matroid together with the original label of each element:
/// `labels[k]` is the label that compact element `k + 1` had before minors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMatroid {
    pub matroid: Matroid,
    pub labels: Vec<usize>,
}

impl LabeledMatroid {
    pub fn identity(matroid: Matroid) -> Self {
        let labels = (1..=matroid.n()).collect();
        Self { matroid, labels }
    }

    /// Compact index of an original label.
    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label).map(|p| p + 1)
    }

    fn require(&self, label: usize) -> Result<usize, MatroidError> {
        self.position(label).ok_or(MatroidError::NoSuchElement { elem: label, n: self.matroid.n() })
    }

    pub fn delete(&self, label: usize) -> Result<Self, MatroidError> {
        let pos = self.require(label)?;
        let matroid = self.matroid.delete(pos)?;
        Ok(Self { matroid, labels: self.labels_without(label) })
    }

    pub fn contract(&self, label: usize) -> Result<Self, MatroidError> {
        let pos = self.require(label)?;
        let matroid = self.matroid.contract(pos)?;
        Ok(Self { matroid, labels: self.labels_without(label) })
    }

    /// Contractions first, then deletions; both in original labels.
    pub fn minor(&self, delete: &[usize], contract: &[usize]) -> Result<Self, MatroidError> {
        if let Some(&e) = delete.iter().find(|e| contract.contains(e)) {
            return Err(MatroidError::Domain(format!("element {e} both deleted and contracted")));
        }
        let mut cur = self.clone();
        for &e in contract {
            cur = cur.contract(e)?;
        }
        for &e in delete {
            cur = cur.delete(e)?;
        }
        Ok(cur)
    }

    /// Bases re-expressed in original labels.
    pub fn original_bases(&self) -> Vec<ElemSet> {
        self.matroid
            .basis_masks()
            .iter()
            .map(|&b| elems(b).into_iter().fold(0, |acc, k| acc | bit(self.labels[k - 1])))
            .collect()
    }

    fn labels_without(&self, label: usize) -> Vec<usize> {
        self.labels.iter().copied().filter(|&l| l != label).collect()
    }
}

/// Non-bases of the `2n`-element Vámos-type matroid:
/// `{1,2,2k-1,2k}` for `2 <= k <= n` and `{2k-1,2k,2k+1,2k+2}` for
/// `2 <= k <= n-1`, in lexicographic order (`2n - 3` sets).
pub fn vamos_exclusions(half_n: usize) -> Vec<ElemSet> {
    let mut out = Vec::new();
    for k in 2..=half_n {
        out.push(from_elems(&[1, 2, 2 * k - 1, 2 * k]));
    }
    for k in 2..half_n {
        out.push(from_elems(&[2 * k - 1, 2 * k, 2 * k + 1, 2 * k + 2]));
    }
    out.sort_by(|a, b| lex_cmp(*a, *b));
    out
}

/// Rank-4 matroid on `2 * half_n` elements whose bases are all 4-subsets
/// except [`vamos_exclusions`]. `half_n = 4` is the Vámos matroid.
pub fn vamos_matroid(half_n: usize) -> Result<Matroid, MatroidError> {
    if half_n < 4 {
        return Err(MatroidError::Domain(format!("Vamos family needs n >= 4, got {half_n}")));
    }
    if 2 * half_n > MAX_GROUND {
        return Err(MatroidError::GroundSize(2 * half_n));
    }
    let excluded: HashSet<ElemSet> = vamos_exclusions(half_n).into_iter().collect();
    let bases = k_subsets(2 * half_n, 4).into_iter().filter(|s| !excluded.contains(s)).collect();
    Ok(Matroid::from_trusted_masks(2 * half_n, 4, bases))
}

pub fn uniform(rank: usize, n: usize) -> Result<Matroid, MatroidError> {
    if n == 0 || n > MAX_GROUND {
        return Err(MatroidError::GroundSize(n));
    }
    if rank > n {
        return Err(MatroidError::Domain(format!("U_{{{rank},{n}}} needs rank <= n")));
    }
    Ok(Matroid::from_trusted_masks(n, rank, k_subsets(n, rank)))
}

/// Resolves built-in names: `V8`, `V10`, ... (the Vámos family),
/// `U{r},{n}` (uniform), and `Fano`.
pub fn builtin(name: &str) -> Option<Matroid> {
    let name = name.trim();
    if name.eq_ignore_ascii_case("fano") || name == "F7" {
        return Some(fano());
    }
    if let Some(rest) = name.strip_prefix('V') {
        let n: usize = rest.parse().ok()?;
        return (n % 2 == 0).then(|| vamos_matroid(n / 2).ok()).flatten();
    }
    if let Some(rest) = name.strip_prefix('U') {
        let (r, n) = rest.split_once(',')?;
        return uniform(r.trim().parse().ok()?, n.trim().parse().ok()?).ok();
    }
    None
}

/// The lines of the Fano plane in the cyclic labeling `{i, i+1, i+3} mod 7`.
pub const FANO_LINES: [[usize; 3]; 7] =
    [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [1, 5, 6], [2, 6, 7], [1, 3, 7]];

/// Rank-3 matroid on 7 points whose only dependent triples are `lines`.
pub fn rank3_from_lines(lines: &[[usize; 3]]) -> Result<Matroid, MatroidError> {
    let dependent: HashSet<ElemSet> = lines.iter().map(|l| from_elems(l)).collect();
    let bases = k_subsets(7, 3).into_iter().filter(|s| !dependent.contains(s)).collect();
    Matroid::try_from(BasisFamily::from_masks(7, 3, bases))
}

pub fn fano() -> Matroid {
    rank3_from_lines(&FANO_LINES).expect("the Fano plane is a matroid")
}

/// Column matroid of a full-row-rank rational matrix: bases are the column
/// sets whose square submatrix has nonzero determinant.
pub fn matroid_from_matrix(a: &RationalMatrix) -> Result<Matroid, MatroidError> {
    let (r, n) = (a.rows(), a.cols());
    if n == 0 || n > MAX_GROUND {
        return Err(MatroidError::GroundSize(n));
    }
    if r == 0 || a.rank() < r {
        return Err(MatroidError::Domain(format!("matrix does not have full row rank {r}")));
    }
    let bases = k_subsets(n, r)
        .into_iter()
        .filter(|&s| {
            let cols: Vec<usize> = elems(s).into_iter().map(|e| e - 1).collect();
            !a.select_columns(&cols).determinant().is_zero()
        })
        .collect();
    Ok(Matroid::from_trusted_masks(n, r, bases))
}

/// Checks that `family` together with every `m`-subset lying in no member
/// forms an `m`-partition: each member has at least `m` elements and every
/// `m`-subset of `{1..n}` lies in exactly one member.
pub fn is_m_partition(n: usize, m: usize, family: &[ElemSet]) -> bool {
    if family.iter().any(|s| (s.count_ones() as usize) < m) {
        return false;
    }
    k_subsets(n, m).into_iter().all(|t| family.iter().filter(|&&h| h & t == t).count() <= 1)
}

/// For a rank-`r` matroid: do the dependent `r`-sets, padded with the
/// uncovered `(r-1)`-sets, form an `(r-1)`-partition? For the Vámos family
/// (`r = 4`) these are exactly its hyperplanes.
pub fn check_three_partition(m: &Matroid) -> bool {
    if m.rank() < 2 {
        return false;
    }
    is_m_partition(m.n(), m.rank() - 1, &m.non_bases())
}
