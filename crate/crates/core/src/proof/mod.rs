//! Proof trees for the half-plane property.
//!
//! A node holds a matroid (with the original label of every element) and a
//! justification. Leaves are trusted base cases; an internal node is a
//! Rayleigh step: its four one-element minors at `i` and `j` are stable
//! (children) and `Δ_ij` of its basis polynomial has a PSD Gram certificate.

mod check;
pub mod mutation;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use check::{check_node, check_tree, check_tree_with, CheckReport, Failure, FailureKind, NodeVerdict};

use crate::certificate::{parse_certificate, CertificateError, GramCertificate};
use crate::data::{DataError, DataSource};
use crate::matroid::{are_isomorphic, GroundSetLabeling, LabeledMatroid, Matroid, MatroidJson};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Children {
    pub delete_i: String,
    pub contract_i: String,
    pub delete_j: String,
    pub contract_j: String,
}

impl Children {
    pub fn ids(&self) -> [&str; 4] {
        [&self.delete_i, &self.contract_i, &self.delete_j, &self.contract_j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Justification {
    /// Every matroid of rank at most 2 has the half-plane property.
    BaseRank2,
    BaseUniform,
    /// Isomorphic to a named basis list whose half-plane property is taken
    /// as an axiom.
    BaseKnownHpp { name: String, file: String },
    /// `perm` maps this node's elements onto those of `node`.
    IsomorphicTo { node: String, perm: GroundSetLabeling },
    /// `i` and `j` are original labels.
    RayleighStep { i: usize, j: usize, cert: String, children: Children },
}

impl Justification {
    /// Nodes this one depends on.
    pub fn references(&self) -> Vec<&str> {
        match self {
            Justification::IsomorphicTo { node, .. } => vec![node.as_str()],
            Justification::RayleighStep { children, .. } => children.ids().to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Justification::BaseRank2 => "base_rank2",
            Justification::BaseUniform => "base_uniform",
            Justification::BaseKnownHpp { .. } => "base_known_hpp",
            Justification::IsomorphicTo { .. } => "isomorphic_to",
            Justification::RayleighStep { .. } => "rayleigh_step",
        }
    }
}

/// The matroid is kept as raw data so that a malformed basis list is a
/// reportable check failure rather than a load error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofNode {
    pub matroid: MatroidJson,
    pub labels: Vec<usize>,
    pub tag: String,
    pub just: Justification,
}

impl ProofNode {
    pub fn labeled(&self) -> Result<LabeledMatroid, String> {
        let matroid = self.matroid.to_matroid().map_err(|e| e.to_string())?;
        let mut sorted = self.labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if self.labels.len() != matroid.n() || sorted.len() != matroid.n() || sorted.first() == Some(&0) {
            return Err(format!("labels {:?} do not name {} distinct elements", self.labels, matroid.n()));
        }
        Ok(LabeledMatroid { matroid, labels: self.labels.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub root: String,
    pub nodes: BTreeMap<String, ProofNode>,
    /// Loaded certificates keyed by their reference.
    pub certificates: BTreeMap<String, GramCertificate>,
    /// Loaded named basis lists keyed by file reference.
    pub known: BTreeMap<String, MatroidJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("malformed proof tree: {0}")]
    Json(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("certificate {file}: {err}")]
    Certificate { file: String, err: CertificateError },
    #[error("basis list {file}: {msg}")]
    BasisList { file: String, msg: String },
    #[error("root node {0:?} does not exist")]
    MissingRoot(String),
    #[error("proof tree has a cycle through {0:?}")]
    Cycle(Vec<String>),
}

/// Where certificate and basis-list references are resolved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeSources {
    pub certs: DataSource,
    pub files: DataSource,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MatroidSource {
    File { file: String },
    Inline(MatroidJson),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    matroid: MatroidSource,
    #[serde(default)]
    labels: Option<Vec<usize>>,
    #[serde(default)]
    tag: String,
    just: Justification,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeJson {
    nodes: BTreeMap<String, NodeJson>,
    root: String,
}

fn load_basis_list(files: &DataSource, file: &str) -> Result<MatroidJson, ProofError> {
    let text = files.read("", file)?;
    serde_json::from_str(&text).map_err(|e| ProofError::BasisList { file: file.to_owned(), msg: e.to_string() })
}

impl ProofTree {
    /// Parses a tree and loads every certificate and basis list it names.
    pub fn from_json_str(text: &str, sources: &TreeSources) -> Result<Self, ProofError> {
        let raw: TreeJson = serde_json::from_str(text).map_err(|e| ProofError::Json(e.to_string()))?;
        let mut nodes = BTreeMap::new();
        let mut certificates = BTreeMap::new();
        let mut known = BTreeMap::new();
        for (id, node) in raw.nodes {
            let matroid = match node.matroid {
                MatroidSource::Inline(m) => m,
                MatroidSource::File { file } => load_basis_list(&sources.files, &file)?,
            };
            match &node.just {
                Justification::RayleighStep { cert, .. } if !certificates.contains_key(cert) => {
                    let text = sources.certs.read("certs/", cert)?;
                    let c = parse_certificate(&text)
                        .map_err(|err| ProofError::Certificate { file: cert.clone(), err })?;
                    certificates.insert(cert.clone(), c);
                }
                Justification::BaseKnownHpp { file, .. } if !known.contains_key(file) => {
                    known.insert(file.clone(), load_basis_list(&sources.files, file)?);
                }
                _ => {}
            }
            let labels = node.labels.unwrap_or_else(|| (1..=matroid.n).collect());
            nodes.insert(id, ProofNode { matroid, labels, tag: node.tag, just: node.just });
        }
        if !nodes.contains_key(&raw.root) {
            return Err(ProofError::MissingRoot(raw.root));
        }
        Ok(ProofTree { root: raw.root, nodes, certificates, known })
    }

    /// Self-contained JSON with every matroid inline.
    pub fn to_json_string(&self) -> String {
        let nodes = self
            .nodes
            .iter()
            .map(|(id, n)| {
                let node = NodeJson {
                    matroid: MatroidSource::Inline(n.matroid.clone()),
                    labels: Some(n.labels.clone()),
                    tag: n.tag.clone(),
                    just: n.just.clone(),
                };
                (id.clone(), node)
            })
            .collect();
        serde_json::to_string(&TreeJson { nodes, root: self.root.clone() }).expect("tree serializes")
    }

    /// Post-order from the root, then any unreachable nodes in id order.
    /// References to missing nodes are skipped (the node check reports them).
    pub fn topological_order(&self) -> Result<Vec<String>, ProofError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        fn visit(
            tree: &ProofTree,
            id: &str,
            marks: &mut BTreeMap<String, Mark>,
            stack: &mut Vec<String>,
            order: &mut Vec<String>,
        ) -> Result<(), ProofError> {
            match marks.get(id) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Open) => {
                    let start = stack.iter().position(|s| s == id).unwrap_or(0);
                    let mut cycle = stack[start..].to_vec();
                    cycle.push(id.to_owned());
                    return Err(ProofError::Cycle(cycle));
                }
                None => {}
            }
            let Some(node) = tree.nodes.get(id) else { return Ok(()) };
            marks.insert(id.to_owned(), Mark::Open);
            stack.push(id.to_owned());
            for r in node.just.references() {
                visit(tree, r, marks, stack, order)?;
            }
            stack.pop();
            marks.insert(id.to_owned(), Mark::Done);
            order.push(id.to_owned());
            Ok(())
        }
        let mut marks = BTreeMap::new();
        let mut order = Vec::new();
        let mut stack = Vec::new();
        visit(self, &self.root, &mut marks, &mut stack, &mut order)?;
        for id in self.nodes.keys() {
            visit(self, id, &mut marks, &mut stack, &mut order)?;
        }
        Ok(order)
    }

    pub fn rayleigh_nodes(&self) -> impl Iterator<Item = (&String, &ProofNode)> {
        self.nodes.iter().filter(|(_, n)| matches!(n.just, Justification::RayleighStep { .. }))
    }
}

pub const V10_TREE_FILE: &str = "v10_tree.json";

/// The bundled proof that V10 has the half-plane property, with
/// certificates read from `certs` (basis lists are always the bundled ones).
pub fn builtin_v10_tree(certs: &DataSource) -> Result<ProofTree, ProofError> {
    let sources = TreeSources { certs: certs.clone(), files: DataSource::Bundled };
    let text = DataSource::Bundled.read("", V10_TREE_FILE)?;
    ProofTree::from_json_str(&text, &sources)
}

/// One isomorphism between minors of V10 asserted by the proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsomorphismClaim {
    pub left: String,
    pub right: String,
    pub holds: bool,
    pub labeling: Option<GroundSetLabeling>,
}

enum Side {
    Minor(&'static [usize], &'static [usize]),
    Named(&'static str),
}

fn minor_label(delete: &[usize], contract: &[usize]) -> String {
    let part = |sep: char, s: &[usize]| match s.len() {
        0 => String::new(),
        1 => format!("{sep}{}", s[0]),
        _ => format!("{sep}{{{}}}", s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")),
    };
    format!("V10{}{}", part('\\', delete), part('/', contract))
}

/// Machine-checks every isomorphism the proof relies on.
pub fn verify_isomorphism_claims() -> Result<Vec<IsomorphismClaim>, ProofError> {
    use Side::*;
    let claims: [(Side, Side); 11] = [
        (Minor(&[5, 7], &[1]), Named("f7_minus5")),
        (Minor(&[5, 7], &[3]), Named("f7_minus6")),
        (Minor(&[5, 7, 1], &[]), Named("U4,7")),
        (Minor(&[5, 7, 3], &[]), Named("f7_minus6_dual")),
        (Minor(&[7, 1], &[5]), Named("f7_minus6")),
        (Minor(&[7, 6], &[5]), Named("U3,7")),
        (Minor(&[1], &[5]), Minor(&[7], &[5])),
        (Minor(&[5], &[9]), Minor(&[5], &[7])),
        (Minor(&[5, 9], &[]), Minor(&[5, 7], &[])),
        (Minor(&[], &[5]), Minor(&[], &[7])),
        (Minor(&[5], &[]), Minor(&[7], &[])),
    ];
    let v10 = LabeledMatroid::identity(crate::matroid::vamos_matroid(5).expect("V10 exists"));
    let resolve = |side: &Side| -> Result<(String, Option<Matroid>), ProofError> {
        Ok(match side {
            Minor(d, c) => (minor_label(d, c), v10.minor(d, c).ok().map(|m| m.matroid)),
            Named(name) if name.starts_with('U') => (name.to_string(), crate::matroid::builtin(name)),
            Named(name) => {
                let file = format!("matroids/{name}.json");
                let raw = load_basis_list(&DataSource::Bundled, &file)?;
                (name.to_string(), raw.to_matroid().ok())
            }
        })
    };
    claims
        .iter()
        .map(|(a, b)| {
            let (left, ma) = resolve(a)?;
            let (right, mb) = resolve(b)?;
            let labeling = match (ma, mb) {
                (Some(x), Some(y)) => are_isomorphic(&x, &y),
                _ => None,
            };
            Ok(IsomorphismClaim { left, right, holds: labeling.is_some(), labeling })
        })
        .collect()
}
