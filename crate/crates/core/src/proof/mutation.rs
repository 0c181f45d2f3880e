//! Single-point corruptions of a proof tree, for checking that the checker
//! notices every one of them.

use serde::Serialize;

use super::{check_tree, Failure, Justification, ProofTree};
use crate::rational::{format_rational, Q};
use crate::stability::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mutation {
    /// Adds `delta` to `G[row][col]` and `G[col][row]` (0-based).
    GramEntry { cert: String, row: usize, col: usize, delta: String },
    /// Removes the `index`-th basis of a node's basis list.
    DropBasis { node: String, index: usize },
    /// Replaces `i` (or `j` when `second`) of a Rayleigh step.
    ChangeIndex { node: String, second: bool, to: usize },
}

impl Mutation {
    pub fn apply(&self, tree: &ProofTree) -> ProofTree {
        let mut t = tree.clone();
        match self {
            Mutation::GramEntry { cert, row, col, delta } => {
                let c = t.certificates.get_mut(cert).expect("mutation names a loaded certificate");
                let delta: Q = crate::rational::parse_rational(delta).expect("mutation delta is rational");
                let mut g = c.gram().clone();
                g[(*row, *col)] += &delta;
                if row != col {
                    g[(*col, *row)] += &delta;
                }
                *c = c.with_gram(g).expect("symmetric change keeps the certificate well formed");
            }
            Mutation::DropBasis { node, index } => {
                t.nodes.get_mut(node).expect("mutation names a node").matroid.bases.remove(*index);
            }
            Mutation::ChangeIndex { node, second, to } => {
                if let Justification::RayleighStep { i, j, .. } = &mut t.nodes.get_mut(node).expect("mutation names a node").just {
                    *(if *second { j } else { i }) = *to;
                }
            }
        }
        t
    }
}

/// `count` mutations drawn deterministically from `seed`, cycling through
/// the three kinds.
pub fn random_mutations(tree: &ProofTree, seed: u64, count: usize) -> Vec<Mutation> {
    let mut rng = SplitMix64::new(seed);
    let mut pick = |n: usize| (rng.next_u64() % n as u64) as usize;
    let certs: Vec<&String> = tree.certificates.keys().collect();
    let nodes: Vec<&String> = tree.nodes.iter().filter(|(_, n)| n.matroid.bases.len() > 1).map(|(id, _)| id).collect();
    let steps: Vec<(&String, usize, usize, &Vec<usize>)> = tree
        .nodes
        .iter()
        .filter_map(|(id, n)| match &n.just {
            Justification::RayleighStep { i, j, .. } => Some((id, *i, *j, &n.labels)),
            _ => None,
        })
        .collect();
    (0..count)
        .map(|k| match k % 3 {
            0 if !certs.is_empty() => {
                let cert = certs[pick(certs.len())];
                let dim = tree.certificates[cert].dim();
                let (row, col) = (pick(dim), pick(dim));
                let delta = if pick(2) == 0 { Q::from_integer(1.into()) } else { Q::new((-1).into(), 2.into()) };
                Mutation::GramEntry { cert: cert.clone(), row, col, delta: format_rational(&delta) }
            }
            1 if !nodes.is_empty() => {
                let node = nodes[pick(nodes.len())];
                let index = pick(tree.nodes[node].matroid.bases.len());
                Mutation::DropBasis { node: node.clone(), index }
            }
            _ => {
                let (node, i, j, labels) = steps[pick(steps.len())];
                let second = pick(2) == 1;
                let keep = if second { i } else { j };
                let current = if second { j } else { i };
                let choices: Vec<usize> = labels.iter().copied().filter(|&l| l != keep && l != current).collect();
                Mutation::ChangeIndex { node: node.clone(), second, to: choices[pick(choices.len())] }
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationOutcome {
    pub mutation: Mutation,
    /// The node and obligation that caught it; `None` means it survived.
    pub caught_by: Option<(String, Failure)>,
}

/// Applies each mutation to a fresh copy of `tree` and records what failed.
/// A structural error (such as a cycle) also counts as caught.
pub fn run_mutations(tree: &ProofTree, mutations: &[Mutation]) -> Vec<MutationOutcome> {
    mutations
        .iter()
        .map(|m| {
            let caught_by = match check_tree(&m.apply(tree)) {
                Ok(report) => report.first_failure,
                Err(e) => Some((
                    tree.root.clone(),
                    Failure { kind: super::FailureKind::UnresolvedReference, message: e.to_string() },
                )),
            };
            MutationOutcome { mutation: m.clone(), caught_by }
        })
        .collect()
}
