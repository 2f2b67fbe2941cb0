use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::{json, Value};
use torsheaf::doc::SheafDocument;
use torsheaf::multifilt::{Multifiltration, Sub};
use torsheaf::reflexive_r2::R2Filtration;
use torsheaf::{Cone, Fan};

fn tsk(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tsk"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("tsk runs");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json_of(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"))
}

fn reflexive(n: usize, c: &[i64]) -> R2Filtration {
    R2Filtration::from_c(n, c).unwrap()
}

fn doc_text(m: &Multifiltration) -> String {
    SheafDocument::multifiltration(m.clone()).to_canonical_string()
}

fn single_drop() -> (Multifiltration, Multifiltration) {
    let f = reflexive(4, &[1, 1, 1, 0, 0]).to_multifiltration();
    let e = f.apply_elementary(&Cone::new([0, 1, 2]), &[-1, 0, 0], &Sub::zero(2)).unwrap();
    (e, f)
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tsk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn chern_of_reflexive_line_bundle_and_torsion_free() {
    let text = SheafDocument::reflexive(reflexive(4, &[1, 6, 6, 0, 0])).to_canonical_string();
    let (code, out) = tsk(&["chern"], Some(&text));
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["chern"], json!("1 + 13*H + 48*H^2 + 36*H^3"));
    assert_eq!(v["methods"].as_object().unwrap().len(), 3);

    let fan = Fan::new(3).unwrap();
    let mut rays = vec![vec![(vec![0], Sub::full(1))]; 4];
    rays[0] = vec![(vec![-2], Sub::full(1))];
    let o2 = Multifiltration::from_ray_filtrations(fan, 1, rays).unwrap();
    let (code, out) = tsk(&["chern", "--method", "klyachko"], Some(&doc_text(&o2)));
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["chern"], json!("1 + 2*H"));

    let (e, _) = single_drop();
    let (code, out) = tsk(&["chern"], Some(&doc_text(&e)));
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["chern"], json!("1 + 3*H + 3*H^2 - 1*H^3 - 9*H^4"));

    let (code, _) = tsk(&["chern", "--method", "symmetric"], Some(&doc_text(&e)));
    assert_eq!(code, 1);
}

#[test]
fn stability_verdicts() {
    for (c, verdict, bg) in [
        ([1, 1, 1, 0, 0], "stable", "holds"),
        ([2, 1, 1, 0, 0], "strictly semistable", "holds"),
        ([3, 1, 1, 0, 0], "unstable", "not applicable"),
    ] {
        let text = SheafDocument::reflexive(reflexive(4, &c)).to_canonical_string();
        let (code, out) = tsk(&["stability"], Some(&text));
        assert_eq!(code, 0);
        let v = json_of(&out);
        assert_eq!(v["stability"], json!(verdict), "{c:?}");
        assert_eq!(v["bogomolov_gieseker"], json!(bg));
    }
    let text = SheafDocument::reflexive(reflexive(4, &[1, 1, 1, 0, 0])).to_canonical_string();
    let v = json_of(&tsk(&["stability"], Some(&text)).1);
    assert_eq!(v["delta"], json!(3));
    assert_eq!(v["summary"], json!("stable, Δ=3"));
}

#[test]
fn factorize_round_trips() {
    let (e, f) = single_drop();
    let ep = temp_file("e.json", &doc_text(&e));
    let fp = temp_file("f.json", &doc_text(&f));
    let (code, out) = tsk(&["factorize", ep.to_str().unwrap(), fp.to_str().unwrap()], None);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["count"], json!(1));
    assert_eq!(v["recomposes"], json!(true));
    assert_eq!(v["steps"][0]["k0"], json!(3));
    assert_eq!(v["steps"][0]["m_big_sigma"], json!(-1));
    assert_eq!(v["steps"][0]["saturated"], json!(true));

    let (code, out) = tsk(&["factorize", fp.to_str().unwrap(), fp.to_str().unwrap()], None);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["steps"], json!([]));

    let (code, _) = tsk(&["factorize", fp.to_str().unwrap(), ep.to_str().unwrap()], None);
    assert_eq!(code, 1);
}

#[test]
fn prescribe_feasible_and_infeasible() {
    let (code, out) = tsk(&["prescribe", "--n", "4", "--start", "1,6,6,0,0", "--closed-form"], None);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["p"], json!([18, 240]));
    assert_eq!(v["schwarzenberger"], json!("ok"));
    assert_eq!(v["chern"], json!("1 + 13*H + 48*H^2"));
    assert_eq!(v["delta"], json!(23));
    assert_eq!(v["closed_form"], json!(["18", "240"]));

    let (code, out) = tsk(&["prescribe", "--n", "4", "--start", "1,1,1,0,0"], None);
    assert_eq!(code, 2);
    assert_eq!(json_of(&out)["reason"], json!("NonInteger at q=3"));

    let (code, out) = tsk(&["prescribe", "--n", "5", "--start", "1,120,120,0,0,0"], None);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["validated"], json!(true));

    let (code, _) = tsk(&["prescribe", "--n", "4", "--start", "0,1,1,0,0"], None);
    assert_eq!(code, 1);
}

#[test]
fn families() {
    let (code, out) = tsk(&["family", "--which", "p4-odd", "--t", "1..3"], None);
    assert_eq!(code, 0);
    let v = json_of(&out);
    let runs = v["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    for (i, r) in runs.iter().enumerate() {
        let t = i as i64 + 1;
        assert_eq!(r["t"], json!(t));
        assert_eq!(r["p"][0], json!(18 * t * t));
        assert_eq!(r["delta"], json!(24 * t - 1));
    }

    let (code, out) = tsk(&["family", "--which", "p4-even", "--t", "1"], None);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["runs"][0]["chern"], json!("1 + 22*H + 168*H^2"));

    let (code, out) = tsk(&["family", "--which", "p5", "--t", "1"], None);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["runs"][0]["validated"], json!(["printed", "intro"]));

    let (code, out) = tsk(&["family", "--which", "pn", "--n", "3"], None);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert!(v["multiplier"].as_i64().unwrap() >= 1);
    assert_eq!(v["certificate"]["validated"], json!(true));

    let (code, _) = tsk(&["family", "--which", "pn", "--n", "6", "--bound", "2"], None);
    assert_eq!(code, 2);
}

#[test]
fn obstruct_verdicts() {
    let (e, _) = single_drop();
    let (code, out) = tsk(&["obstruct"], Some(&doc_text(&e)));
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["verdict"], json!("inconclusive"));
    assert_eq!(v["profile"], json!({"q": 3, "p": {"3": 1}}));

    let f = reflexive(5, &[1, 2, 2, 1, 1, 0]).to_multifiltration();
    let e = f.apply_elementary(&Cone::new([0, 1, 2, 3]), &[-1, 0, 0, 0], &Sub::zero(2)).unwrap();
    let (code, out) = tsk(&["obstruct"], Some(&doc_text(&e)));
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["verdict"], json!("not smoothable"));
    assert_eq!(v["case"], json!("Q4"));

    let (code, _) = tsk(&["obstruct"], Some("{\"n\": 3}"));
    assert_eq!(code, 1);
}

#[test]
fn validate_reports_violations() {
    let (e, _) = single_drop();
    let (code, out) = tsk(&["validate"], Some(&doc_text(&e)));
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["reflexive"], json!(false));

    // A ray filtration that never reaches the full space.
    let bad = json!({"kind": "multifiltration", "data": {"n": 3, "rank": 2, "cones": [
        {"rays": [0], "jumps": [{"coords": [0], "subspace": {"kind": "line", "line": [1, 0]}}]}
    ]}});
    let (code, out) = tsk(&["validate"], Some(&bad.to_string()));
    assert_eq!(code, 1);
    assert_eq!(json_of(&out)["valid"], json!(false));

    let (code, _) = tsk(&["validate"], Some("not json"));
    assert_eq!(code, 1);
}

#[test]
fn output_is_deterministic_and_selftest_passes() {
    let args = ["family", "--which", "p4-odd", "--t", "2"];
    assert_eq!(tsk(&args, None), tsk(&args, None));
    let (code, out) = tsk(&["selftest", "--seed", "5", "--count", "15"], None);
    assert_eq!(code, 0, "{out}");
    assert_eq!(json_of(&out)["checks"]["chern"]["failures"], json!(0));
    let (code, _) = tsk(&["frobnicate"], None);
    assert_eq!(code, 1);
}
