use std::path::{Path, PathBuf};
use std::process::Command;

use hat_cli::{effective_seed, CertificateDocument, InputHash};
use hat_core::check::Check;
use proptest::prelude::*;

fn hat() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hat"));
    c.env_remove("HAT_SEED");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hat-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> (i32, String) {
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn doc(text: &str) -> CertificateDocument {
    CertificateDocument::from_json(text).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn catalog_then_mn() {
    let dir = scratch("mn");
    let ccs = dir.join("d8.ccs");
    assert_eq!(run(hat().args(["concentric", "catalog", "D8", "-o"]).arg(&ccs)).0, 0);
    let (code, out) = run(hat().args(["construct", "mn", "--h", "e", "--ccs"]).arg(&ccs));
    assert_eq!(code, 0);
    let d = doc(&out);
    assert!(d.passed());
    assert_eq!(d.data["group_order"], "40320");
    assert_eq!(d.interpretation_notes.len(), 1);
    let (again, out2) = run(hat().args(["construct", "mn", "--h", "e", "--ccs"]).arg(&ccs));
    assert_eq!(again, 0);
    assert_eq!(out, out2);
    let (code, out) = run(hat().args(["verify", "mn", "--h", "(1 5)(2 6)(3 7)(4 8)", "--ccs"]).arg(&ccs));
    assert_eq!(code, 2);
    assert_eq!(doc(&out).checks[0].name, "tau_h_bijective");
}

#[test]
fn verify_mn_on_half_turn() {
    let dir = scratch("verify");
    let ccs = dir.join("d8.ccs");
    run(hat().args(["concentric", "catalog", "D8", "-o"]).arg(&ccs));
    let gph = dir.join("g.gph");
    let (code, out) =
        run(hat().args(["verify", "mn", "--h", "(1 3)(2 4)(5 7)(6 8)", "--ccs"]).arg(&ccs).arg("--graph-out").arg(&gph));
    assert_eq!(code, 0, "{out}");
    let d = doc(&out);
    assert_eq!(d.data["hat"], true);
    assert_eq!(d.data["vertices"], "42");
    let (code, out) = run(hat().args(["graph", "aut", "--graph"]).arg(&gph));
    assert_eq!(code, 0);
    assert!(doc(&out).data["order"].as_str().unwrap().parse::<u64>().unwrap() >= 336);
}

#[test]
fn graph_commands() {
    let dir = scratch("graph");
    let k4 = write(&dir, "k4.gph", "vertices 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    let (code, out) = run(hat().args(["graph", "report", "--graph"]).arg(&k4));
    assert_eq!(code, 0);
    let d = doc(&out);
    assert_eq!(d.data["arc_transitive"], true);
    assert_eq!(d.data["hat"], false);

    let c6 = write(&dir, "c6.gph", "vertices 6\n1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n");
    let d12 = write(&dir, "d12.grp", "degree 6\n(1 2 3 4 5 6)\n(2 6)(3 5)\n");
    let half = write(&dir, "n.grp", "degree 6\n(1 4)(2 5)(3 6)\n");
    let (code, out) = run(hat().args(["graph", "quotient", "--graph"]).arg(&c6).arg("--grp").arg(&d12).arg("--normal").arg(&half));
    assert_eq!(code, 0);
    let d = doc(&out);
    assert_eq!(d.data["orbits"], 3);
    assert_eq!(d.data["quotient_valency"], 2);

    let c10 = write(&dir, "c10.gph", "vertices 10\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n8 9\n9 10\n10 1\n");
    let d20 = write(&dir, "d20.grp", "degree 10\n(1 2 3 4 5 6 7 8 9 10)\n(2 10)(3 9)(4 8)(5 7)\n");
    let (code, out) = run(hat().args(["graph", "classify", "--graph"]).arg(&c10).arg("--grp").arg(&d20));
    assert_eq!(code, 0);
    assert_eq!(doc(&out).data["outcome"]["type"], "cycle_type");

    let bad = write(&dir, "bad.grp", "degree 6\n(1 2)\n");
    let (code, _) = run(hat().args(["graph", "report", "--graph"]).arg(&c6).arg("--grp").arg(&bad));
    assert_eq!(code, 1);
}

#[test]
fn cayley_and_order() {
    let dir = scratch("cayley");
    let d8 = write(&dir, "d8.grp", "degree 4\n(1 2 3 4)\n(2 4)\n");
    let s = write(&dir, "s.grp", "degree 4\n(2 4)\n(1 2)(3 4)\n");
    let (code, out) = run(hat().args(["graph", "cayley", "--grp"]).arg(&d8).arg("--connection").arg(&s));
    assert_eq!(code, 0, "{out}");
    let d = doc(&out);
    assert_eq!(d.data["aut_order"], "16");
    assert_eq!(d.data["connected"], true);
    let (code, out) = run(hat().args(["perm", "order", "--grp"]).arg(&d8));
    assert_eq!(code, 0);
    assert_eq!(doc(&out).data["order"], "8");
}

#[test]
fn presentations_and_wreath_files() {
    let dir = scratch("pres");
    let pres = write(&dir, "q8.pres", "gens 2\na1 a1 a1 a1\na1 a1 a2' a2'\na2' a1 a2 a1\n");
    let (code, out) = run(hat().args(["present", "enumerate", "--pres"]).arg(&pres));
    assert_eq!(code, 0);
    assert_eq!(doc(&out).data["cosets"], 8);

    write(&dir, "a4.grp", "degree 4\n(1 2 3)\n(2 3 4)\n");
    let wri = write(&dir, "toy.wri", "w a4.grp\na (2 3 4)\nh (1 2)(3 4)\nh (1 3)(2 4)\nm 2\n");
    let (code, out) = run(hat().args(["construct", "wreath", "--wri"]).arg(&wri));
    let d = doc(&out);
    assert_eq!(code, 2);
    assert!(d.checks.iter().any(|c| c.name == "w_simple" && !c.result));
    assert!(d.checks.iter().any(|c| c.name == "c4_shift" && c.result));
}

#[test]
fn exit_codes_and_seed() {
    assert_eq!(run(hat().args(["concentric", "catalog", "Q8"])).0, 1);
    assert_eq!(run(hat().args(["graph"])).0, 1);
    assert_eq!(run(hat().args(["perm", "order", "--grp", "/nonexistent.grp"])).0, 1);
    let dir = scratch("seed");
    let ccs = dir.join("h.ccs");
    run(hat().args(["concentric", "catalog", "D8xZ2^1", "-o"]).arg(&ccs));
    let a = run(hat().args(["construct", "mn", "--seed", "5", "--ccs"]).arg(&ccs)).1;
    let b = run(hat().args(["construct", "mn", "--seed", "9", "--ccs"]).arg(&ccs).env("HAT_SEED", "5")).1;
    assert_eq!(a, b);
    assert_eq!(effective_seed(3, Some("7")).unwrap(), 7);
    assert_eq!(effective_seed(3, None).unwrap(), 3);
    assert!(effective_seed(3, Some("x")).is_err());
    assert_eq!(run(hat().args(["perm", "order", "--grp", "x"]).env("HAT_SEED", "x")).0, 1);
}

fn text() -> impl Strategy<Value = String> {
    "[ -~]{0,24}"
}

proptest! {
    #[test]
    fn certificates_round_trip(
        command in text(),
        paths in prop::collection::vec((text(), "[0-9a-f]{64}"), 0..3),
        notes in prop::collection::vec(text(), 0..3),
        checks in prop::collection::vec((text(), text(), any::<bool>(), prop::option::of(text())), 0..4),
        n in any::<u32>(),
    ) {
        let d = CertificateDocument {
            command,
            inputs: paths.into_iter().map(|(path, sha256)| InputHash { path, sha256 }).collect(),
            interpretation_notes: notes,
            checks: checks.into_iter().map(|(a, b, r, w)| Check::new(&a, &b, r, w)).collect(),
            data: serde_json::json!({ "n": n }),
        };
        let json = d.to_json();
        let back = CertificateDocument::from_json(&json).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(back.to_json(), json);
    }
}
