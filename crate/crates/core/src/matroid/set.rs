//! Element subsets of a ground set `{1..n}` packed into a `u64`.
//! Element `e` lives in bit `e - 1`.

use std::cmp::Ordering;

pub type ElemSet = u64;

pub const MAX_GROUND: usize = 64;

pub fn from_elems(elems: &[usize]) -> ElemSet {
    elems.iter().fold(0, |acc, &e| acc | bit(e))
}

#[inline]
pub fn bit(e: usize) -> ElemSet {
    debug_assert!((1..=MAX_GROUND).contains(&e));
    1u64 << (e - 1)
}

#[inline]
pub fn contains(s: ElemSet, e: usize) -> bool {
    s & bit(e) != 0
}

pub fn elems(s: ElemSet) -> Vec<usize> {
    let mut out = Vec::with_capacity(s.count_ones() as usize);
    let mut rest = s;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize + 1);
        rest &= rest - 1;
    }
    out
}

pub fn full(n: usize) -> ElemSet {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Lexicographic order on sorted element lists, computed on the masks.
///
/// Let `x` be the smallest element in the symmetric difference. Both lists
/// agree below `x`; the set owning `x` is smaller unless the other set has
/// nothing above `x`, in which case the other set is a proper prefix.
pub fn lex_cmp(a: ElemSet, b: ElemSet) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let diff = a ^ b;
    let low = diff & diff.wrapping_neg();
    let above = !(low | (low - 1));
    let (owner_is_a, other) = if a & low != 0 { (true, b) } else { (false, a) };
    let owner_first = other & above != 0;
    match (owner_is_a, owner_first) {
        (true, true) | (false, false) => Ordering::Less,
        (true, false) | (false, true) => Ordering::Greater,
    }
}

/// Removes element `e` and shifts higher elements down by one.
pub fn compact_remove(s: ElemSet, e: usize) -> ElemSet {
    let below = s & (bit(e) - 1);
    let above = if e >= 64 { 0 } else { (s >> e) << (e - 1) };
    below | above
}

/// Every `k`-subset of `{1..n}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<ElemSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (1..=k).collect();
    loop {
        out.push(from_elems(&idx));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - (k - 1 - i) {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
