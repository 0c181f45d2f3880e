use std::path::PathBuf;
use std::process::{Command, Output};

fn vamos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vamos")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vamos-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn bundled_cert(n: usize) -> String {
    vamos_core::data::bundled(&format!("certs/cert{n}.json")).unwrap().to_owned()
}

#[test]
fn generate_and_round_trip() {
    let dir = scratch("generate");
    let file = dir.join("v10.json");
    let o = vamos(&["generate", "vamos", "--n", "5", "--out", file.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("rank 4, 203 bases"));
    let text = std::fs::read_to_string(&file).unwrap();
    let m = vamos_core::Matroid::from_json_str(&text).unwrap();
    assert_eq!(m, vamos_core::matroid::vamos_matroid(5).unwrap());
    assert_eq!(format!("{}\n", m.to_json_string()), text);

    let o = vamos(&["--format", "json", "generate", "uniform", "--r", "4", "--n", "7"]);
    assert_eq!(vamos_core::Matroid::from_json_str(&stdout(&o)).unwrap().num_bases(), 35);
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["generate", "vamos", "--n", "3"][..],
        &["rayleigh", "--matroid", "@U2,3", "--i", "1", "--j", "1"],
        &["sample", "--matroid", "@V8", "--trials", "0"],
        &["no-such-command"],
        &["generate", "uniform", "--r", "5", "--n", "3"],
        &["minor", "--matroid", "@V8", "--delete", "9"],
    ] {
        assert_eq!(code(&vamos(args)), 64, "{args:?}");
    }
    assert_eq!(code(&vamos(&["--help"])), 0);
}

#[test]
fn rayleigh_outputs() {
    let o = vamos(&["rayleigh", "--matroid", "@U2,3", "--i", "1", "--j", "2"]);
    assert_eq!(stdout(&o), "+1 x3^2\n");
    let o = vamos(&["--format", "json", "rayleigh", "--matroid", "@V10", "--i", "5", "--j", "7"]);
    let p: vamos_core::poly::PolyJson = serde_json::from_str(&stdout(&o)).unwrap();
    let p = vamos_core::poly::GeneralPoly::from_json(&p).unwrap();
    assert_eq!(p.homogeneous_degree(), Some(6));
    let c = vamos_core::certificate::parse_certificate(&bundled_cert(5)).unwrap();
    assert_eq!(c.expand(), p);
}

#[test]
fn verify_cert_exit_codes() {
    assert_eq!(code(&vamos(&["verify-cert", "--cert", "@cert1"])), 0);

    let dir = scratch("certs");
    let mut c = vamos_core::certificate::parse_certificate(&bundled_cert(1)).unwrap();
    let mut g = c.gram().clone();
    g[(0, 1)] += vamos_core::rational::q(1);
    g[(1, 0)] += vamos_core::rational::q(1);
    c = c.with_gram(g).unwrap();
    let perturbed = dir.join("perturbed.json");
    std::fs::write(&perturbed, c.to_json_string()).unwrap();
    let o = vamos(&["--format", "json", "verify-cert", "--cert", perturbed.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["identity"]["mismatch"]["monomial"].is_string());

    let text = bundled_cert(2);
    let truncated = dir.join("truncated.json");
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&vamos(&["verify-cert", "--cert", truncated.to_str().unwrap()])), 4);
    assert_eq!(code(&vamos(&["verify-cert", "--cert", dir.join("absent.json").to_str().unwrap()])), 4);
}

/// Moves Gram weight between two monomial pairs with the same product, so
/// `m^T G m` is unchanged while `G` stops being semidefinite.
fn indefinite_but_identical(c: &vamos_core::certificate::GramCertificate) -> vamos_core::certificate::GramCertificate {
    let m = c.monomials();
    let n = m.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let (p, r) = pairs
        .iter()
        .flat_map(|&p| pairs.iter().map(move |&r| (p, r)))
        .find(|&((a, b), (x, y))| (a, b) != (x, y) && m[a] & m[b] == 0 && m[x] & m[y] == 0 && m[a] | m[b] == m[x] | m[y])
        .expect("two monomial pairs with one product");
    let big = vamos_core::rational::q(100);
    let mut g = c.gram().clone();
    for (k, l, sign) in [(p.0, p.1, 1), (r.0, r.1, -1)] {
        let d = if sign > 0 { big.clone() } else { -big.clone() };
        g[(k, l)] += &d;
        g[(l, k)] += &d;
    }
    c.with_gram(g).unwrap()
}

#[test]
fn verify_cert_psd_failure_exits_3() {
    let dir = scratch("psd");
    let c = vamos_core::certificate::parse_certificate(&bundled_cert(3)).unwrap();
    let file = dir.join("indefinite.json");
    std::fs::write(&file, indefinite_but_identical(&c).to_json_string()).unwrap();
    let o = vamos(&["--format", "json", "verify-cert", "--cert", file.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["identity"]["holds"], true);
    assert_eq!(v["psd"]["is_psd"], false);
}

#[test]
fn certify_hpp_builtin_and_failures() {
    let o = vamos(&["certify-hpp", "--builtin", "v10"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("certificates verified: 5"));
    assert!(out.ends_with("V10 has the half-plane property\n"));

    let empty = scratch("empty-certs");
    assert_eq!(code(&vamos(&["certify-hpp", "--builtin", "v10", "--cert-dir", empty.to_str().unwrap()])), 4);

    // a mutated tree file fails and names the first failing node
    let tree = vamos_core::proof::builtin_v10_tree(&vamos_core::data::DataSource::Bundled).unwrap();
    let mutated = vamos_core::proof::mutation::Mutation::DropBasis { node: "V10\\{5,7,1}".into(), index: 0 }.apply(&tree);
    let dir = scratch("tree");
    let file = dir.join("tree.json");
    std::fs::write(&file, mutated.to_json_string()).unwrap();
    let o = vamos(&["--format", "json", "certify-hpp", "--tree", file.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["passed"], false);
    assert!(v["report"]["first_failure"][0].is_string());
}

#[test]
fn sample_and_isomorphic_and_minor() {
    let o = vamos(&["sample", "--matroid", "@V10", "--trials", "50", "--seed", "42"]);
    assert_eq!(code(&o), 0);
    let o = vamos(&["--format", "json", "sample", "--matroid", "@Fano", "--trials", "300", "--seed", "42"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failures"][0]["kind"], "line");

    let o = vamos(&["--format", "json", "isomorphic", "--a", "@f7_minus6", "--b", "@f7_minus6"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["isomorphic"], true);

    let o = vamos(&["--format", "json", "minor", "--matroid", "@V10", "--delete", "9,10"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m: vamos_core::matroid::MatroidJson = serde_json::from_value(v["matroid"].clone()).unwrap();
    assert_eq!(m.to_matroid().unwrap(), vamos_core::matroid::vamos_matroid(4).unwrap());
}

#[test]
fn outputs_are_deterministic_across_runs_and_jobs() {
    let runs: &[&[&str]] = &[
        &["--format", "json", "certify-hpp", "--builtin", "v10"],
        &["--format", "json", "sample", "--matroid", "@Fano", "--trials", "200", "--seed", "9"],
        &["--format", "json", "verify-cert", "--cert", "@cert5"],
    ];
    for args in runs {
        let a = vamos(args);
        let b = vamos(args);
        let mut seq = args.to_vec();
        seq.extend(["--jobs", "1"]);
        let c = vamos(&seq);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?} with --jobs 1");
    }
}
