use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn locmst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locmst"))
        .args(args)
        .env_remove("LOCMST_THREADS")
        .output()
        .expect("binary runs")
}

fn json_file(p: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn bounds_reproduces_known_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    let o = locmst(&["bounds", "--alpha", "2", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(&out);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["command"], "bounds");
    let r = &v["result"];
    assert!((r["beta_low"].as_f64().unwrap() / 0.0216525 - 1.0).abs() < 1e-3);
    assert!((r["beta_up"].as_f64().unwrap() / 13.8772 - 1.0).abs() < 1e-3);
    assert!(r["A_low"].is_number() && r["A_up"].is_number());
}

#[test]
fn bounds_grid_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.json");
    let svg = dir.path().join("beta.svg");
    let o = locmst(&[
        "bounds",
        "--alpha-grid",
        "0.5:3:0.1",
        "--plot",
        svg.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rows = json_file(&out)["result"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 26);
    let lows: Vec<f64> = rows.iter().map(|r| r["beta_low"].as_f64().unwrap()).collect();
    let ups: Vec<f64> = rows.iter().map(|r| r["beta_up"].as_f64().unwrap()).collect();
    assert!(lows.windows(2).all(|w| w[1] < w[0]));
    assert!(ups.windows(2).all(|w| w[1] > w[0]));
    let s = fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<?xml") && s.trim_end().ends_with("</svg>"));
    assert_eq!(s.matches("<polyline").count(), 2);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(locmst(&["bounds", "--alpha", "-1"]).status.code(), Some(2));
    assert_eq!(locmst(&["bounds", "--c1", "2"]).status.code(), Some(2));
    assert_eq!(locmst(&["bounds", "--alpha-grid", "3:1:0.5"]).status.code(), Some(2));
    assert_eq!(locmst(&["variance", "--reps", "30"]).status.code(), Some(2));
    assert_eq!(locmst(&["probe-good-square", "--g", "5", "--n", "2500"]).status.code(), Some(2));
    assert_eq!(locmst(&["simulate"]).status.code(), Some(2));
    assert_eq!(locmst(&["--threads", "0", "layout"]).status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let p = dir.path().join(name);
        let o = locmst(&[
            "--threads", threads, "simulate", "--n", "1024", "--alpha", "1", "--weight", "euclidean",
            "--reps", "100", "--seed", "7", "-o", p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(p).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "2");
    assert!(a.starts_with("# locmst "));
    assert!(a.lines().nth(1).unwrap().starts_with("# config: {"));
    let (ra, rb) = (data_rows(&a), data_rows(&b));
    assert_eq!(ra[0], "experiment,n,alpha,weight_kind,seed,replicate,mst_weight,max_degree,g_alpha,s_alpha,runtime_ms");
    assert_eq!(ra.len(), 101);
    // Everything but runtime_ms must match.
    let strip = |r: &str| r.rsplit_once(',').unwrap().0.to_string();
    for (x, y) in ra.iter().zip(&rb) {
        assert_eq!(strip(x), strip(y));
    }
    let w: f64 = ra[1].split(',').nth(6).unwrap().parse().unwrap();
    assert!(w > 10.0 && w < 40.0);
}

#[test]
fn invariance_passes() {
    let o = locmst(&["invariance", "--n", "50", "--alphas", "0.5,1,2,3", "--reps", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r["mismatches"], 0);
        assert_eq!(r["path_failures"], 0);
    }
}

#[test]
fn good_square_probe_single_edge() {
    let o = locmst(&["probe-good-square", "--g", "5", "--n", "10000", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["added_edges"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["removed_edges"].as_array().unwrap().len(), 0);
}

#[test]
fn prop1_planted() {
    let o = locmst(&["prop1", "--k", "2", "--reps", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["star_always"], true);
    assert_eq!(v["result"]["occurrences"], 3);
}

#[test]
fn sample_and_layout_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    assert!(locmst(&["sample", "--n", "10", "--seed", "3", "-o", csv.to_str().unwrap()]).status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows[0], "index,x,y");
    assert_eq!(rows.len(), 11);
    let x: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((0.0..=1.0).contains(&x));

    let js = dir.path().join("p.json");
    let o = locmst(&["sample", "--n", "10", "--process", "poisson", "--format", "json", "-o", js.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json_file(&js)["result"]["process"]["kind"], "poisson");

    let o = locmst(&["layout", "--k", "3", "--levels", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["levels"].as_array().unwrap().len(), 2);
    assert_eq!(v["result"]["levels"][0]["boundary"].as_array().unwrap().len(), 8);
}

#[test]
fn scaling_writes_fit_records_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let rec = dir.path().join("rec.csv");
    let svg = dir.path().join("fit.svg");
    let o = locmst(&[
        "scaling", "--alpha", "1,2", "--n-list", "64,128,256,512", "--reps", "30", "--seed", "2",
        "-o", out.to_str().unwrap(), "--records", rec.to_str().unwrap(), "--plot", svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fits = json_file(&out)["result"].as_array().unwrap().clone();
    assert_eq!(fits.len(), 2);
    let slope = fits[0]["mean_fit"]["slope"].as_f64().unwrap();
    assert!((slope - 0.5).abs() < 0.15, "{slope}");
    assert_eq!(data_rows(&fs::read_to_string(rec).unwrap()).len(), 1 + 4 * 30 * 2);
    assert!(fs::read_to_string(svg).unwrap().contains("<svg"));
}
