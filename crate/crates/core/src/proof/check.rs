use std::time::Instant;

use serde::Serialize;

use super::{Justification, ProofError, ProofNode, ProofTree};
use crate::certificate::{verify_gram_identity, verify_psd};
use crate::matroid::{are_isomorphic, set, LabeledMatroid};
use crate::par::{map_slice, Execution};
use crate::poly::{labeled_basis_poly, rayleigh_difference};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    InvalidMatroid,
    UnresolvedReference,
    ChildMismatch,
    IndexMismatch,
    TargetMismatch,
    IdentityFailed,
    NotPsd,
    BaseCaseFailed,
    IsomorphismInvalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

fn fail<T>(kind: FailureKind, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure { kind, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeVerdict {
    pub id: String,
    pub tag: String,
    pub justification: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    /// Wall-clock time of the check; kept out of serialized output.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub root: String,
    pub passed: bool,
    pub certificates_verified: usize,
    /// Ordered by node id.
    pub nodes: Vec<NodeVerdict>,
    /// First failure in dependency order (children before parents).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<(String, Failure)>,
}

fn node<'a>(tree: &'a ProofTree, id: &str) -> Result<&'a ProofNode, Failure> {
    tree.nodes.get(id).map_or_else(|| fail(FailureKind::UnresolvedReference, format!("no node {id:?}")), Ok)
}

/// Checks the obligations of a single node. Referenced nodes are only
/// compared against, not checked themselves.
pub fn check_node(tree: &ProofTree, id: &str) -> Result<(), Failure> {
    let this = node(tree, id)?;
    let lm = match this.labeled() {
        Ok(lm) => lm,
        Err(msg) => return fail(FailureKind::InvalidMatroid, msg),
    };
    let m = &lm.matroid;
    match &this.just {
        Justification::BaseRank2 => {
            if m.rank() > 2 {
                return fail(FailureKind::BaseCaseFailed, format!("rank {} exceeds 2", m.rank()));
            }
        }
        Justification::BaseUniform => {
            let all = set::binomial(m.n(), m.rank());
            if m.num_bases() != all {
                return fail(FailureKind::BaseCaseFailed, format!("{} bases, uniform needs {all}", m.num_bases()));
            }
        }
        Justification::BaseKnownHpp { name, file } => {
            let Some(raw) = tree.known.get(file) else {
                return fail(FailureKind::UnresolvedReference, format!("basis list {file:?} not loaded"));
            };
            let known = match raw.to_matroid() {
                Ok(k) => k,
                Err(e) => return fail(FailureKind::BaseCaseFailed, format!("{name}: {e}")),
            };
            if are_isomorphic(m, &known).is_none() {
                return fail(FailureKind::BaseCaseFailed, format!("not isomorphic to {name}"));
            }
        }
        Justification::IsomorphicTo { node: target, perm } => {
            let other = node(tree, target)?;
            let other = match other.labeled() {
                Ok(o) => o.matroid,
                Err(msg) => return fail(FailureKind::IsomorphismInvalid, format!("{target}: {msg}")),
            };
            if !perm.maps_onto(m, &other) {
                return fail(FailureKind::IsomorphismInvalid, format!("labeling does not map bases onto {target}"));
            }
        }
        Justification::RayleighStep { i, j, cert, children } => {
            check_rayleigh(tree, &lm, *i, *j, cert, children)?;
        }
    }
    Ok(())
}

fn check_rayleigh(
    tree: &ProofTree,
    lm: &LabeledMatroid,
    i: usize,
    j: usize,
    cert: &str,
    children: &super::Children,
) -> Result<(), Failure> {
    if i == j || lm.position(i).is_none() || lm.position(j).is_none() {
        return fail(FailureKind::IndexMismatch, format!("({i}, {j}) is not a pair of distinct elements"));
    }
    let expected = [
        (&children.delete_i, lm.delete(i), "deletion", i),
        (&children.contract_i, lm.contract(i), "contraction", i),
        (&children.delete_j, lm.delete(j), "deletion", j),
        (&children.contract_j, lm.contract(j), "contraction", j),
    ];
    for (child_id, minor, what, e) in expected {
        let child = node(tree, child_id)?;
        let minor = match minor {
            Ok(minor) => minor,
            Err(err) => return fail(FailureKind::ChildMismatch, format!("{what} of {e} undefined: {err}")),
        };
        if child.labeled().ok().as_ref() != Some(&minor) {
            return fail(FailureKind::ChildMismatch, format!("{child_id} is not the {what} of {e}"));
        }
    }
    let Some(c) = tree.certificates.get(cert) else {
        return fail(FailureKind::UnresolvedReference, format!("certificate {cert:?} not loaded"));
    };
    let f = match labeled_basis_poly(lm, c.nvars()) {
        Ok(f) => f,
        Err(e) => return fail(FailureKind::TargetMismatch, format!("{cert}: {e}")),
    };
    let target = match rayleigh_difference(&f, i, j) {
        Ok(t) => t,
        Err(e) => return fail(FailureKind::IndexMismatch, e.to_string()),
    };
    match verify_gram_identity(c, &target) {
        Ok(r) if r.holds => {}
        Ok(r) => {
            let m = r.mismatch.expect("failed identity carries a monomial");
            return fail(
                FailureKind::IdentityFailed,
                format!("{cert}: coefficient of {} is {} in mT G m but {} in the target", m.monomial, m.certificate, m.target),
            );
        }
        Err(e) => return fail(FailureKind::IdentityFailed, format!("{cert}: {e}")),
    }
    match verify_psd(c.gram()) {
        Ok(v) if v.is_psd => {}
        Ok(v) => {
            let w = v.witness.expect("non-PSD verdict carries a witness");
            return fail(
                FailureKind::NotPsd,
                format!("{cert}: principal minor {:?} has determinant {}", w.principal_minor, w.minor_determinant),
            );
        }
        Err(e) => return fail(FailureKind::NotPsd, format!("{cert}: {e}")),
    }
    // the recipe stored with the certificate must describe the same target
    let Some(spec) = c.target() else {
        return fail(FailureKind::TargetMismatch, format!("{cert} names no target"));
    };
    if (spec.i, spec.j) != (i, j) && (spec.j, spec.i) != (i, j) {
        return fail(FailureKind::IndexMismatch, format!("{cert} certifies ({}, {}), node uses ({i}, {j})", spec.i, spec.j));
    }
    match spec.base_polynomial() {
        Ok(g) if g == f => Ok(()),
        Ok(_) => fail(FailureKind::TargetMismatch, format!("{cert} recipe is not this node's polynomial")),
        Err(e) => fail(FailureKind::TargetMismatch, format!("{cert}: {e}")),
    }
}

pub fn check_tree(tree: &ProofTree) -> Result<CheckReport, ProofError> {
    check_tree_with(tree, Execution::default())
}

/// Checks every node. Node checks run under `exec`; the report does not
/// depend on it. A cycle is a structural error, not a failed check.
pub fn check_tree_with(tree: &ProofTree, exec: Execution) -> Result<CheckReport, ProofError> {
    let order = tree.topological_order()?;
    let ids: Vec<&String> = tree.nodes.keys().collect();
    let nodes: Vec<NodeVerdict> = map_slice(exec, &ids, |id| {
        let start = Instant::now();
        let result = check_node(tree, id);
        let n = &tree.nodes[*id];
        NodeVerdict {
            id: (*id).clone(),
            tag: n.tag.clone(),
            justification: n.just.kind(),
            passed: result.is_ok(),
            failure: result.err(),
            seconds: start.elapsed().as_secs_f64(),
        }
    });
    let first_failure = order.iter().find_map(|id| {
        let v = nodes.iter().find(|v| &v.id == id)?;
        v.failure.clone().map(|f| (id.clone(), f))
    });
    let certificates_verified = nodes.iter().filter(|v| v.passed && v.justification == "rayleigh_step").count();
    Ok(CheckReport {
        root: tree.root.clone(),
        passed: first_failure.is_none(),
        certificates_verified,
        nodes,
        first_failure,
    })
}
