//! Isomorphism search and the `V_8`-minor search.
//!
//! Matroids here have at most a dozen elements, so a backtracking search
//! over permutations is enough once candidates are pruned by per-element
//! invariants.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::set::{bit, contains, elems, from_elems, k_subsets, ElemSet};
use super::{vamos_matroid, Matroid};

/// A bijection on `{1..n}`: element `e` maps to `perm[e - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroundSetLabeling {
    perm: Vec<usize>,
}

impl GroundSetLabeling {
    pub fn new(perm: Vec<usize>) -> Result<Self, String> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p == 0 || p > n || seen[p - 1] {
                return Err(format!("{perm:?} is not a permutation of 1..={n}"));
            }
            seen[p - 1] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self { perm: (1..=n).collect() }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn image(&self, e: usize) -> usize {
        self.perm[e - 1]
    }

    pub fn apply(&self, s: ElemSet) -> ElemSet {
        elems(s).into_iter().fold(0, |acc, e| acc | bit(self.perm[e - 1]))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        Self { perm: inv }
    }

    /// True iff applying the labeling to `from`'s bases gives exactly `to`'s.
    pub fn maps_onto(&self, from: &Matroid, to: &Matroid) -> bool {
        from.n() == self.perm.len()
            && to.n() == from.n()
            && from.rank() == to.rank()
            && from.num_bases() == to.num_bases()
            && from.basis_masks().iter().all(|&b| to.is_basis(self.apply(b)))
    }
}

/// Per-element invariant: basis degree, then the sorted multiset of
/// pair degrees with every other element.
fn signatures(m: &Matroid) -> Vec<(usize, Vec<usize>)> {
    let n = m.n();
    let mut pair = vec![vec![0usize; n]; n];
    let mut deg = vec![0usize; n];
    for &b in m.basis_masks() {
        let es = elems(b);
        for &x in &es {
            deg[x - 1] += 1;
            for &y in &es {
                if x != y {
                    pair[x - 1][y - 1] += 1;
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            let mut p: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| pair[i][j]).collect();
            p.sort_unstable();
            (deg[i], p)
        })
        .collect()
}

/// Finds a labeling mapping `m1`'s bases onto `m2`'s, if one exists.
pub fn are_isomorphic(m1: &Matroid, m2: &Matroid) -> Option<GroundSetLabeling> {
    if m1.n() != m2.n() || m1.rank() != m2.rank() || m1.num_bases() != m2.num_bases() {
        return None;
    }
    let (s1, s2) = (signatures(m1), signatures(m2));
    let mut sorted1 = s1.clone();
    let mut sorted2 = s2.clone();
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return None;
    }
    let n = m1.n();
    let candidates: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| s1[i] == s2[j]).map(|j| j + 1).collect()).collect();
    // most constrained elements first
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&e| (candidates[e - 1].len(), e));

    let mut search = Search {
        m1,
        targets: m2.basis_masks().iter().copied().collect(),
        m2,
        candidates,
        order,
        perm: vec![0; n],
        used: 0,
    };
    search.extend(0, 0).then(|| GroundSetLabeling { perm: search.perm })
}

struct Search<'a> {
    m1: &'a Matroid,
    m2: &'a Matroid,
    targets: HashSet<ElemSet>,
    candidates: Vec<Vec<usize>>,
    order: Vec<usize>,
    perm: Vec<usize>,
    used: ElemSet,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize, assigned: ElemSet) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let e = self.order[depth];
        for k in 0..self.candidates[e - 1].len() {
            let f = self.candidates[e - 1][k];
            if contains(self.used, f) {
                continue;
            }
            self.perm[e - 1] = f;
            self.used |= bit(f);
            let now = assigned | bit(e);
            if self.consistent(e, now) && self.extend(depth + 1, now) {
                return true;
            }
            self.used &= !bit(f);
        }
        self.perm[e - 1] = 0;
        false
    }

    /// Every basis of `m1` inside the assigned set and touching `e` maps to a
    /// basis of `m2`, and both sides have equally many bases in the
    /// assigned set and its image.
    fn consistent(&self, e: usize, assigned: ElemSet) -> bool {
        let image = self.used;
        let mut count1 = 0;
        for &b in self.m1.basis_masks() {
            if b & !assigned != 0 {
                continue;
            }
            count1 += 1;
            if contains(b, e) {
                let mapped = elems(b).into_iter().fold(0, |acc, x| acc | bit(self.perm[x - 1]));
                if !self.targets.contains(&mapped) {
                    return false;
                }
            }
        }
        let count2 = self.m2.basis_masks().iter().filter(|&&b| b & !image == 0).count();
        count1 == count2
    }
}

/// Witness for a `V_8` minor, in the input matroid's labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct V8Witness {
    pub delete: Vec<usize>,
    pub contract: Vec<usize>,
    pub labeling: GroundSetLabeling,
}

/// Searches minors with 8 elements and rank 4 for one isomorphic to `V_8`.
///
/// Kept ground sets are enumerated in lexicographic order, and for each one
/// the contraction sets (of size `rank - 4`) in lexicographic order; the
/// remaining elements are deleted.
pub fn has_v8_minor(m: &Matroid) -> Option<V8Witness> {
    let v8 = vamos_matroid(4).expect("V_8 exists");
    let n = m.n();
    if n < 8 || m.rank() < 4 || m.rank() - 4 > n - 8 {
        return None;
    }
    let contract_size = m.rank() - 4;
    for kept in k_subsets(n, 8) {
        let outside: Vec<usize> = (1..=n).filter(|&e| !contains(kept, e)).collect();
        for cmask in k_subsets(outside.len(), contract_size) {
            let contract: Vec<usize> = elems(cmask).into_iter().map(|k| outside[k - 1]).collect();
            let cset = from_elems(&contract);
            let delete: Vec<usize> = outside.iter().copied().filter(|&e| !contains(cset, e)).collect();
            let Ok(minor) = m.minor(&delete, &contract) else {
                continue;
            };
            if minor.matroid.rank() != 4 {
                continue;
            }
            if let Some(labeling) = are_isomorphic(&minor.matroid, &v8) {
                return Some(V8Witness { delete, contract, labeling });
            }
        }
    }
    None
}
