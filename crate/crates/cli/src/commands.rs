use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use vamos_core::certificate::{
    parse_certificate, verify_gram_identity, verify_psd, CertificateError, GramCertificate, MatroidRef, TargetSpec,
};
use vamos_core::data::{self, DataSource};
use vamos_core::matrix::MatrixJson;
use vamos_core::matroid::{are_isomorphic, builtin, matroid_from_matrix, uniform, vamos_matroid, MatroidJson};
use vamos_core::par::{self, Execution};
use vamos_core::poly::{basis_generating_poly, rayleigh_difference, MultiAffinePoly};
use vamos_core::proof::{self, builtin_v10_tree, check_tree_with, ProofError, ProofTree, TreeSources};
use vamos_core::stability::{rayleigh_spot_check_with, sample_stability_with, StabilityError};
use vamos_core::{LabeledMatroid, Matroid};

use crate::{BuiltinTree, Cli, Command, Format, Generate, MinorArgs};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_IDENTITY: u8 = 2;
pub const EXIT_PSD: u8 = 3;
pub const EXIT_PARSE: u8 = 4;
pub const EXIT_USAGE: u8 = 64;

pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn usage<T>(message: impl Into<String>) -> Result<T, CliError> {
    Err(CliError { code: EXIT_USAGE, message: message.into() })
}

fn parse_err(message: impl std::fmt::Display) -> CliError {
    CliError { code: EXIT_PARSE, message: message.to_string() }
}

fn ok(stdout: String) -> Result<Outcome, CliError> {
    Ok(Outcome { code: 0, stdout })
}

fn json_line(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

/// `@name` names a built-in or bundled basis list; anything else is a path.
fn load_matroid(spec: &str) -> Result<Matroid, CliError> {
    if let Some(name) = spec.strip_prefix('@') {
        if let Some(m) = builtin(name) {
            return Ok(m);
        }
        let file = format!("matroids/{}.json", name.to_ascii_lowercase());
        return match data::bundled(&file) {
            Some(text) => Matroid::from_json_str(text).map_err(parse_err),
            None => usage(format!("unknown built-in matroid {name:?}")),
        };
    }
    Matroid::from_json_str(&read_file(Path::new(spec))?).map_err(|e| parse_err(format!("{spec}: {e}")))
}

fn check_elements(m: &Matroid, elems: &[usize]) -> Result<(), CliError> {
    match elems.iter().find(|&&e| e == 0 || e > m.n()) {
        Some(e) => usage(format!("element {e} outside 1..={}", m.n())),
        None => Ok(()),
    }
}

/// Basis polynomial of `m` with deleted variables set to zero and
/// contracted ones differentiated, in the matroid's own labels.
fn minor_polynomial(m: &Matroid, delete: &[usize], contract: &[usize]) -> Result<MultiAffinePoly, CliError> {
    check_elements(m, delete)?;
    check_elements(m, contract)?;
    let mut f = basis_generating_poly(m);
    for &e in delete {
        f = f.restrict(e).map_err(|e| CliError { code: EXIT_USAGE, message: e.to_string() })?;
    }
    for &e in contract {
        f = f.partial_derivative(e).map_err(|e| CliError { code: EXIT_USAGE, message: e.to_string() })?;
    }
    Ok(f)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let exec = par::with_threads(cli.jobs);
    match &cli.command {
        Command::Generate(g) => generate(cli, g),
        Command::Poly { target, out } => poly(cli, target, out.as_deref()),
        Command::Rayleigh { target, i, j, out } => rayleigh(cli, target, *i, *j, out.as_deref()),
        Command::VerifyCert { cert, matroid, delete, contract, i, j } => {
            let override_target = matroid.as_ref().map(|m| (m.as_str(), delete, contract, i.unwrap_or(0), j.unwrap_or(0)));
            verify_cert(cli, cert, override_target)
        }
        Command::CertifyHpp { builtin, tree, cert_dir, data_dir } => {
            certify_hpp(cli, *builtin, tree.as_deref(), cert_dir.as_deref(), data_dir.as_deref(), exec)
        }
        Command::Sample { matroid, trials, seed, rayleigh } => {
            sample(cli, matroid, *trials, *seed, rayleigh.as_deref(), exec)
        }
        Command::Isomorphic { a, b } => isomorphic(cli, a, b),
        Command::Minor { target, out } => minor(cli, target, out.as_deref()),
    }
}

fn emit_matroid(cli: &Cli, m: &Matroid, out: Option<&Path>) -> Result<Outcome, CliError> {
    let canonical = m.to_json_string();
    let summary = json!({"n": m.n(), "rank": m.rank(), "bases": m.num_bases()});
    match out {
        Some(path) => {
            write_file(path, &format!("{canonical}\n"))?;
            ok(match cli.format {
                Format::Json => json_line(&json!({"file": path.display().to_string(), "summary": summary})),
                Format::Text => format!("wrote {}: rank {}, {} bases\n", path.display(), m.rank(), m.num_bases()),
            })
        }
        None => ok(match cli.format {
            Format::Json => format!("{canonical}\n"),
            Format::Text => format!("rank {}, {} bases\n{canonical}\n", m.rank(), m.num_bases()),
        }),
    }
}

fn generate(cli: &Cli, g: &Generate) -> Result<Outcome, CliError> {
    let (m, out) = match g {
        Generate::Vamos { n, out } => {
            if *n < 4 || 2 * n > 64 {
                return usage(format!("--n must be between 4 and 32, got {n}"));
            }
            (vamos_matroid(*n).map_err(|e| CliError { code: EXIT_USAGE, message: e.to_string() })?, out)
        }
        Generate::Uniform { r, n, out } => {
            if *n == 0 || *n > 64 || r > n {
                return usage(format!("need 0 <= r <= n <= 64, got r={r} n={n}"));
            }
            if vamos_core::matroid::set::binomial(*n, *r) > 5_000_000 {
                return usage("uniform matroid too large to list");
            }
            (uniform(*r, *n).map_err(|e| CliError { code: EXIT_USAGE, message: e.to_string() })?, out)
        }
        Generate::FromMatrix { matrix, out } => {
            let raw: MatrixJson = serde_json::from_str(&read_file(matrix)?).map_err(parse_err)?;
            let a = raw.to_matrix().map_err(parse_err)?;
            (matroid_from_matrix(&a).map_err(parse_err)?, out)
        }
    };
    emit_matroid(cli, &m, out.as_deref())
}

fn emit_text_or_json(cli: &Cli, text: String, json: Value, out: Option<&Path>) -> Result<Outcome, CliError> {
    let body = match cli.format {
        Format::Json => json_line(&json),
        Format::Text => text,
    };
    match out {
        Some(path) => {
            write_file(path, &body)?;
            ok(String::new())
        }
        None => ok(body),
    }
}

fn poly(cli: &Cli, t: &MinorArgs, out: Option<&Path>) -> Result<Outcome, CliError> {
    let m = load_matroid(&t.matroid)?;
    let f = minor_polynomial(&m, &t.delete, &t.contract)?;
    emit_text_or_json(cli, f.to_text(), serde_json::to_value(f.to_json()).expect("poly json"), out)
}

fn rayleigh(cli: &Cli, t: &MinorArgs, i: usize, j: usize, out: Option<&Path>) -> Result<Outcome, CliError> {
    let m = load_matroid(&t.matroid)?;
    if i == j {
        return usage("--i and --j must differ");
    }
    check_elements(&m, &[i, j])?;
    let f = minor_polynomial(&m, &t.delete, &t.contract)?;
    let d = rayleigh_difference(&f, i, j).map_err(|e| CliError { code: EXIT_USAGE, message: e.to_string() })?;
    emit_text_or_json(cli, d.to_text(), serde_json::to_value(d.to_json()).expect("poly json"), out)
}

fn load_certificate(spec: &str) -> Result<GramCertificate, CliError> {
    let text = match spec.strip_prefix('@') {
        Some(name) => match data::bundled(&format!("certs/{name}.json")) {
            Some(t) => t.to_owned(),
            None => return usage(format!("unknown bundled certificate {name:?}")),
        },
        None => read_file(Path::new(spec))?,
    };
    parse_certificate(&text).map_err(|e| parse_err(format!("{spec}: {e}")))
}

type TargetOverride<'a> = (&'a str, &'a Vec<usize>, &'a Vec<usize>, usize, usize);

fn verify_cert(cli: &Cli, cert: &str, target: Option<TargetOverride>) -> Result<Outcome, CliError> {
    let c = load_certificate(cert)?;
    let spec = match target {
        Some((matroid, delete, contract, i, j)) => {
            let m = load_matroid(matroid)?;
            check_elements(&m, &[i, j])?;
            TargetSpec {
                matroid: MatroidRef::Inline(m.to_json()),
                deletions: delete.clone(),
                contractions: contract.clone(),
                i,
                j,
            }
        }
        None => match c.target() {
            Some(t) => t.clone(),
            None => return usage("certificate names no target; pass --matroid, --i and --j"),
        },
    };
    let target = spec.polynomial().map_err(|e| match e {
        CertificateError::UnknownMatroid(_) => parse_err(e),
        e => CliError { code: EXIT_USAGE, message: e.to_string() },
    })?;
    let identity = match verify_gram_identity(&c, &target) {
        Ok(r) => r,
        Err(e) => return Err(CliError { code: EXIT_IDENTITY, message: e.to_string() }),
    };
    let psd = verify_psd(c.gram()).map_err(parse_err)?;
    let code = if !identity.holds {
        EXIT_IDENTITY
    } else if !psd.is_psd {
        EXIT_PSD
    } else {
        0
    };
    let stdout = match cli.format {
        Format::Json => json_line(&json!({
            "certificate": cert,
            "dim": c.dim(),
            "target": spec,
            "identity": identity,
            "psd": psd,
            "passed": code == 0,
        })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "certificate {cert}: {} monomials, Delta_({},{})", c.dim(), spec.i, spec.j);
            match &identity.mismatch {
                None => {
                    let _ = writeln!(s, "identity: holds");
                }
                Some(m) => {
                    let _ = writeln!(
                        s,
                        "identity: FAILS at {}: certificate gives {}, target has {}",
                        m.monomial, m.certificate, m.target
                    );
                }
            }
            match &psd.witness {
                None => {
                    let _ = writeln!(s, "psd: yes ({} positive pivots)", psd.pivots);
                }
                Some(w) => {
                    let _ = writeln!(
                        s,
                        "psd: NO, principal minor {:?} has determinant {}",
                        w.principal_minor,
                        vamos_core::rational::format_rational(&w.minor_determinant)
                    );
                }
            }
            let _ = writeln!(s, "{}", if code == 0 { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Outcome { code, stdout })
}

fn proof_err(e: ProofError) -> CliError {
    parse_err(e)
}

fn certify_hpp(
    cli: &Cli,
    builtin: Option<BuiltinTree>,
    tree_file: Option<&Path>,
    cert_dir: Option<&Path>,
    data_dir: Option<&Path>,
    exec: Execution,
) -> Result<Outcome, CliError> {
    let certs = cert_dir.map_or(DataSource::Bundled, DataSource::dir);
    if let Some(dir) = cert_dir {
        if !dir.is_dir() {
            return Err(parse_err(format!("certificate directory {} does not exist", dir.display())));
        }
    }
    let tree: ProofTree = match (builtin, tree_file) {
        (Some(BuiltinTree::V10), _) => builtin_v10_tree(&certs).map_err(proof_err)?,
        (None, Some(path)) => {
            let files = data_dir.map_or(DataSource::Bundled, DataSource::dir);
            ProofTree::from_json_str(&read_file(path)?, &TreeSources { certs, files }).map_err(proof_err)?
        }
        (None, None) => return usage("pass --builtin v10 or --tree FILE"),
    };
    let report = match check_tree_with(&tree, exec) {
        Ok(r) => r,
        Err(e) => return Err(CliError { code: EXIT_FAIL, message: e.to_string() }),
    };
    let root = tree.nodes[&tree.root].labeled().ok();
    let root_is_v10 = root.as_ref().is_some_and(|r| Some(&r.matroid) == vamos_matroid(5).ok().as_ref());
    let claims = if builtin.is_some() { Some(proof::verify_isomorphism_claims().map_err(proof_err)?) } else { None };
    let claims_hold = claims.as_ref().is_none_or(|c| c.iter().all(|c| c.holds));
    let passed = report.passed && claims_hold;
    let conclusion = match (passed, root_is_v10) {
        (true, true) => "V10 has the half-plane property".to_owned(),
        (true, false) => format!("{} has the half-plane property", tree.root),
        (false, _) => "proof check failed".to_owned(),
    };
    let stdout = match cli.format {
        Format::Json => {
            let mut v = json!({"report": report, "conclusion": conclusion});
            if let Some(c) = &claims {
                v["isomorphism_claims"] = json!(c);
            }
            if cli.timings {
                v["timings"] = report.nodes.iter().map(|n| (n.id.clone(), json!(n.seconds))).collect();
            }
            json_line(&v)
        }
        Format::Text => certify_text(cli, &tree, &report, claims.as_deref(), &conclusion),
    };
    Ok(Outcome { code: if passed { 0 } else { EXIT_FAIL }, stdout })
}

fn certify_text(
    cli: &Cli,
    tree: &ProofTree,
    report: &proof::CheckReport,
    claims: Option<&[proof::IsomorphismClaim]>,
    conclusion: &str,
) -> String {
    let mut s = String::new();
    let order = tree.topological_order().unwrap_or_default();
    let mut tags: Vec<&str> = Vec::new();
    for id in &order {
        let tag = tree.nodes[id].tag.as_str();
        if !tags.contains(&tag) {
            tags.push(tag);
        }
    }
    for tag in tags {
        let _ = writeln!(s, "[{}]", if tag.is_empty() { "untagged" } else { tag });
        for id in order.iter().filter(|id| tree.nodes[*id].tag == tag) {
            let v = report.nodes.iter().find(|v| &v.id == id).expect("every node has a verdict");
            let detail = match &tree.nodes[id].just {
                proof::Justification::RayleighStep { i, j, cert, .. } => format!("Delta_({i},{j}) via {cert}"),
                proof::Justification::IsomorphicTo { node, .. } => format!("isomorphic to {node}"),
                proof::Justification::BaseKnownHpp { name, .. } => format!("known: {name}"),
                proof::Justification::BaseRank2 => "rank <= 2".to_owned(),
                proof::Justification::BaseUniform => "uniform".to_owned(),
            };
            let _ = write!(s, "  {} {id}: {detail}", if v.passed { "ok  " } else { "FAIL" });
            if let Some(f) = &v.failure {
                let _ = write!(s, " -- {:?}: {}", f.kind, f.message);
            }
            if cli.timings {
                let _ = write!(s, " ({:.3}s)", v.seconds);
            }
            s.push('\n');
        }
    }
    if let Some(claims) = claims {
        let held = claims.iter().filter(|c| c.holds).count();
        let _ = writeln!(s, "isomorphism claims: {held}/{} hold", claims.len());
        for c in claims.iter().filter(|c| !c.holds) {
            let _ = writeln!(s, "  FAIL {} ~ {}", c.left, c.right);
        }
    }
    if let Some((id, f)) = &report.first_failure {
        let _ = writeln!(s, "first failure: {id}: {:?}: {}", f.kind, f.message);
    }
    let _ = writeln!(s, "certificates verified: {}", report.certificates_verified);
    let _ = writeln!(s, "{conclusion}");
    s
}

fn sample(
    cli: &Cli,
    matroid: &str,
    trials: usize,
    seed: u64,
    pair: Option<&[usize]>,
    exec: Execution,
) -> Result<Outcome, CliError> {
    if trials == 0 {
        return usage("--trials must be positive");
    }
    let m = load_matroid(matroid)?;
    let f = basis_generating_poly(&m);
    let to_cli = |e: StabilityError| CliError { code: EXIT_USAGE, message: e.to_string() };
    let report = match pair {
        Some([i, j]) => {
            if i == j {
                return usage("rayleigh pair must be two distinct elements");
            }
            check_elements(&m, &[*i, *j])?;
            rayleigh_spot_check_with(&f, *i, *j, trials, seed, exec).map_err(to_cli)?
        }
        _ => sample_stability_with(&f, trials, seed, exec).map_err(to_cli)?,
    };
    let stdout = match cli.format {
        Format::Json => json_line(&report),
        Format::Text => {
            let mut s = format!(
                "{}: {} trials, seed {}, {} failures\n",
                report.check,
                report.trials,
                report.seed,
                report.failures.len()
            );
            if let Some(w) = report.failures.first() {
                let _ = writeln!(s, "first witness: {}", serde_json::to_string(w).expect("witness json"));
            }
            let _ = writeln!(s, "{}", report.note);
            s
        }
    };
    Ok(Outcome { code: if report.passed() { 0 } else { EXIT_FAIL }, stdout })
}

fn isomorphic(cli: &Cli, a: &str, b: &str) -> Result<Outcome, CliError> {
    let (ma, mb) = (load_matroid(a)?, load_matroid(b)?);
    let labeling = are_isomorphic(&ma, &mb);
    ok(match cli.format {
        Format::Json => json_line(&json!({"isomorphic": labeling.is_some(), "labeling": labeling})),
        Format::Text => match labeling {
            Some(l) => format!("isomorphic: {:?}\n", l.perm()),
            None => "not isomorphic\n".to_owned(),
        },
    })
}

fn minor(cli: &Cli, t: &MinorArgs, out: Option<&Path>) -> Result<Outcome, CliError> {
    let m = load_matroid(&t.matroid)?;
    check_elements(&m, &t.delete)?;
    check_elements(&m, &t.contract)?;
    let lm = LabeledMatroid::identity(m)
        .minor(&t.delete, &t.contract)
        .map_err(|e| CliError { code: EXIT_USAGE, message: e.to_string() })?;
    let body: MatroidJson = lm.matroid.to_json();
    emit_text_or_json(
        cli,
        format!(
            "rank {}, {} bases, labels {:?}\n{}\n",
            lm.matroid.rank(),
            lm.matroid.num_bases(),
            lm.labels,
            lm.matroid.to_json_string()
        ),
        json!({"matroid": body, "labels": lm.labels}),
        out,
    )
}
