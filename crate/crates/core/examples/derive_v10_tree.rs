//! Regenerates `data/v10_tree.json` from V10 itself: every node's matroid is
//! computed as a minor and every isomorphism labeling is searched for.
//!
//!     cargo run -p vamos-core --example derive_v10_tree > crates/core/data/v10_tree.json

use std::collections::BTreeMap;

use serde_json::{json, Value};
use vamos_core::matroid::{are_isomorphic, vamos_matroid};
use vamos_core::LabeledMatroid;

fn id(delete: &[usize], contract: &[usize]) -> String {
    let part = |sep: char, s: &[usize]| match s.len() {
        0 => String::new(),
        1 => format!("{sep}{}", s[0]),
        _ => format!("{sep}{{{}}}", s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")),
    };
    format!("V10{}{}", part('\\', delete), part('/', contract))
}

struct Builder {
    v10: LabeledMatroid,
    nodes: BTreeMap<String, Value>,
}

impl Builder {
    fn minor(&self, delete: &[usize], contract: &[usize]) -> LabeledMatroid {
        self.v10.minor(delete, contract).expect("minor exists")
    }

    fn add(&mut self, delete: &[usize], contract: &[usize], tag: &str, just: Value) -> String {
        let lm = self.minor(delete, contract);
        let name = id(delete, contract);
        let matroid = if delete.is_empty() && contract.is_empty() {
            json!({"file": "matroids/v10.json"})
        } else {
            serde_json::to_value(lm.matroid.to_json()).unwrap()
        };
        self.nodes.insert(name.clone(), json!({"matroid": matroid, "labels": lm.labels, "tag": tag, "just": just}));
        name
    }

    fn iso(&mut self, from: (&[usize], &[usize]), to: (&[usize], &[usize]), tag: &str) -> String {
        let a = self.minor(from.0, from.1);
        let b = self.minor(to.0, to.1);
        let perm = are_isomorphic(&a.matroid, &b.matroid).expect("claimed isomorphism exists");
        self.add(from.0, from.1, tag, json!({"kind": "isomorphic_to", "node": id(to.0, to.1), "perm": perm}))
    }

    fn step(&mut self, at: (&[usize], &[usize]), i: usize, j: usize, cert: &str, tag: &str) {
        let child = |d: &[usize], c: &[usize], e: usize, del: bool| {
            let (mut d, mut c) = (d.to_vec(), c.to_vec());
            if del { d.push(e) } else { c.push(e) }
            id(&d, &c)
        };
        let (d, c) = at;
        let children = json!({
            "delete_i": child(d, c, i, true),
            "contract_i": child(d, c, i, false),
            "delete_j": child(d, c, j, true),
            "contract_j": child(d, c, j, false),
        });
        self.add(d, c, tag, json!({"kind": "rayleigh_step", "i": i, "j": j, "cert": cert, "children": children}));
    }

    fn leaf(&mut self, delete: &[usize], contract: &[usize], tag: &str, just: Value) {
        self.add(delete, contract, tag, just);
    }
}

fn known(name: &str, file: &str) -> Value {
    json!({"kind": "base_known_hpp", "name": name, "file": format!("matroids/{file}.json")})
}

fn main() {
    let v10 = LabeledMatroid::identity(vamos_matroid(5).unwrap());
    let mut b = Builder { v10, nodes: BTreeMap::new() };
    let rank2 = json!({"kind": "base_rank2"});
    let uniform = json!({"kind": "base_uniform"});

    // two planes removed
    let t = "double deletion";
    b.step((&[5, 7], &[]), 1, 3, "cert1.json", t);
    b.leaf(&[5, 7, 1], &[], t, uniform.clone());
    b.leaf(&[5, 7], &[1], t, known("F7^-5", "f7_minus5"));
    b.leaf(&[5, 7, 3], &[], t, known("(F7^-6)*", "f7_minus6_dual"));
    b.leaf(&[5, 7], &[3], t, known("F7^-6", "f7_minus6"));

    // contraction then deletion
    let t = "contraction and deletion";
    b.step((&[7], &[5]), 1, 6, "cert2.json", t);
    b.leaf(&[7, 1], &[5], t, known("F7^-6", "f7_minus6"));
    b.leaf(&[7], &[5, 1], t, rank2.clone());
    b.leaf(&[7, 6], &[5], t, uniform.clone());
    b.leaf(&[7], &[5, 6], t, rank2.clone());

    // single contraction
    let t = "single contraction";
    b.step((&[], &[5]), 1, 7, "cert3.json", t);
    b.iso((&[1], &[5]), (&[7], &[5]), t);
    b.leaf(&[], &[5, 1], t, rank2.clone());
    b.leaf(&[], &[5, 7], t, rank2.clone());

    // single deletion
    let t = "single deletion";
    b.step((&[5], &[]), 7, 9, "cert4.json", t);
    b.iso((&[5], &[7]), (&[7], &[5]), t);
    b.iso((&[5, 9], &[]), (&[5, 7], &[]), t);
    b.iso((&[5], &[9]), (&[5], &[7]), t);

    let t = "root";
    b.step((&[], &[]), 5, 7, "cert5.json", t);
    b.iso((&[7], &[]), (&[5], &[]), t);
    b.iso((&[], &[7]), (&[], &[5]), t);

    let nodes: Vec<String> = b
        .nodes
        .iter()
        .map(|(k, v)| format!("    {}: {}", serde_json::to_string(k).unwrap(), serde_json::to_string(v).unwrap()))
        .collect();
    println!("{{\n  \"root\": \"V10\",\n  \"nodes\": {{\n{}\n  }}\n}}", nodes.join(",\n"));
}
