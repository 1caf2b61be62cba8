use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use coarse_lab::embed::EmbedResult;
use coarse_lab::metric::{BlockSpace, FiniteMetricSpace};
use coarse_lab::scan::ScanProfile;
use serde_json::Value;
use tempfile::TempDir;

const C4: &str = r#"{"dist": [[0,1,2,1],[1,0,1,2],[2,1,0,1],[1,2,1,0]]}"#;

fn coarse_lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn embed_c4_reports_sqrt2_on_the_diagonals() {
    let dir = TempDir::new().unwrap();
    let space = write(&dir, "c4.json", C4);
    let out = dir.path().join("out");
    let run = coarse_lab(&["embed", "--space", &space, "--R", "2"], &out);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let result: EmbedResult =
        serde_json::from_str(&fs::read_to_string(out.join("embed.json")).unwrap()).unwrap();
    assert!((result.s_star - 2f64.sqrt()).abs() < 1e-6);
    let mut support: Vec<(usize, usize)> = result
        .certificate
        .pairs
        .iter()
        .filter(|p| p.2 > 1e-9)
        .map(|p| (p.0.min(p.1), p.0.max(p.1)))
        .collect();
    support.sort();
    support.dedup();
    assert_eq!(support, vec![(0, 2), (1, 3)]);

    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["complete"], true);
    let files: Vec<&str> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["file"].as_str().unwrap())
        .collect();
    assert_eq!(files, ["embed.json"]);
}

#[test]
fn l1_target_uses_the_cut_cone() {
    let dir = TempDir::new().unwrap();
    let space = write(&dir, "c4.json", C4);
    let out = dir.path().join("out");
    let run = coarse_lab(&["embed", "--space", &space, "--R", "2", "--target", "l1"], &out);
    assert_eq!(run.status.code(), Some(0));
    let v = read_json(&out.join("embed.json"));
    assert!((v["s_star"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn spectrum_of_k4() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let run = coarse_lab(&["spectrum", "--graph", "complete:4"], &out);
    assert_eq!(run.status.code(), Some(0));
    let v = read_json(&out.join("spectrum.json"));
    assert!((v[0]["lambda1"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert_eq!(v[0]["k0"], 3);
    let csv = fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"distances": [[0]]}"#);
    let out = dir.path().join("out");
    let run = coarse_lab(&["embed", "--space", &bad, "--R", "1"], &out);
    assert_eq!(run.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("dist"), "{stderr}");
    assert_eq!(read_json(&out.join("manifest.json"))["complete"], false);

    let broken = write(&dir, "broken.json", r#"{"dist": [[0, 1], [2, 0]]}"#);
    let run = coarse_lab(&["embed", "--space", &broken, "--R", "1"], &out);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("asymmetric"));
}

#[test]
fn usage_errors_exit_with_input_status() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    assert_eq!(coarse_lab(&["embed"], &out).status.code(), Some(1));
    assert_eq!(coarse_lab(&["frobnicate"], &out).status.code(), Some(1));
    assert_eq!(coarse_lab(&["--help"], &out).status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let filtration = write(
        &dir,
        "z.json",
        r#"{"parent": {"kind": "free-abelian", "rank": 1},
            "stages": [{"degree": 4, "generators": [[1,2,3,0]]},
                       {"degree": 8, "generators": [[1,2,3,4,5,6,7,0]]}]}"#,
    );
    let mut manifests = Vec::new();
    for (k, threads) in ["1", "3"].iter().enumerate() {
        let out = dir.path().join(format!("out{k}"));
        let run = Command::new(env!("CARGO_BIN_EXE_coarse-lab"))
            .args(["scan", "--filtration", &filtration, "--R", "1,2"])
            .arg("--out")
            .arg(&out)
            .env("COARSE_LAB_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
        let mut m = read_json(&out.join("manifest.json"));
        m["command"] = Value::Null;
        manifests.push(m);
        let profile: ScanProfile =
            serde_json::from_str(&fs::read_to_string(out.join("profile.json")).unwrap()).unwrap();
        assert!((profile.rho_minus(2.0).unwrap() - 2.0).abs() < 1e-6);
    }
    assert_eq!(manifests[0], manifests[1]);
}

#[test]
fn thread_variable_must_be_a_positive_integer() {
    let dir = TempDir::new().unwrap();
    let run = Command::new(env!("CARGO_BIN_EXE_coarse-lab"))
        .args(["spectrum", "--graph", "cycle:5", "--out"])
        .arg(dir.path())
        .env("COARSE_LAB_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(1));
}

#[test]
fn build_outputs_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let run = coarse_lab(&["build", "--graph", "cubic:8", "--graph", "cycle:6"], &out);
    assert_eq!(run.status.code(), Some(0));
    let text = fs::read_to_string(out.join("space.json")).unwrap();
    let space: BlockSpace = serde_json::from_str(&text).unwrap();
    assert_eq!(space.num_blocks(), 2);
    assert_eq!(serde_json::to_string_pretty(&space).unwrap().trim(), text.trim());
    let csv = fs::read_to_string(out.join("blocks.csv")).unwrap();
    assert!(csv.starts_with("block,n,diam,offset,injectivity_radius\n"));

    let out2 = dir.path().join("certify");
    let space_path = out.join("space.json").display().to_string();
    let run = coarse_lab(&["certify", "--space", &space_path, "--schedule", "6:2"], &out2);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let search = read_json(&out2.join("search.json"));
    assert!(search["slots"].as_array().unwrap().len() == 2);
}

#[test]
fn certify_graph_and_warp_outputs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cert");
    let run = coarse_lab(&["certify", "--graph", "cubic:16"], &out);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let cert = read_json(&out.join("certificate.json"));
    let bound = cert["bound"].as_f64().unwrap();
    assert!(cert["poincare_value"].as_f64().unwrap() <= bound + 1e-6);

    let net = write(
        &dir,
        "net.json",
        r#"{"base": "circle", "size": 8, "alpha": "1/4", "levels": [4]}"#,
    );
    let out = dir.path().join("warp");
    let run = coarse_lab(&["warp", "--net", &net], &out);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let warped: FiniteMetricSpace =
        serde_json::from_str(&fs::read_to_string(out.join("warp.json")).unwrap()).unwrap();
    let intrinsic: FiniteMetricSpace =
        serde_json::from_str(&fs::read_to_string(out.join("intrinsic.json")).unwrap()).unwrap();
    assert_eq!(warped.d(0, 2), 1.0);
    assert_eq!(intrinsic.d(0, 2), 2.0);
    assert!(out.join("net_meta.json").exists());
}
