use std::path::Path;

fn wavecut(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["wavecut"];
    full.extend_from_slice(args);
    let code = wavecut::cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn theory_table_and_asymptotic() {
    let (code, out, _) = wavecut(&["theory", "--D", "9", "--K", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("-0.333333"), "{out}");
    assert!(out.contains("2/pi = 0.6366"));
    let (code, out, _) = wavecut(&["theory", "--D", "4", "--K", "2", "--asymptotic"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "-0.5");
    let (code, out, _) = wavecut(&["theory", "--D", "9", "--schedule", "1,-0.3333333333333333", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["rows"][0]["exact_rho"].as_f64().unwrap() + 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["reference"]["parisi"].as_f64().unwrap(), 0.763);
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = wavecut(&["theory", "--K", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("--D"));
    assert_eq!(wavecut(&["frobnicate"]).0, 1);
    assert_eq!(wavecut(&["run", "--trials", "2"]).0, 1);
    assert_eq!(wavecut(&["run", "--n", "100", "--D", "4", "--epsilon", "2"]).0, 1);
    assert_eq!(wavecut(&["theory", "--D", "9"]).0, 1);
    assert_eq!(wavecut(&["--help"]).0, 0);
}

#[test]
fn optimize_schedule_output() {
    let (code, out, _) = wavecut(&["optimize-schedule", "--D", "9", "--K", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("a_1 = -0.333333333"), "{out}");
    let (_, out, _) = wavecut(&["optimize-schedule", "--D", "16", "--K", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["rho"].as_f64().unwrap() <= v["geometric_rho"].as_f64().unwrap());
}

#[test]
fn greedy_at_zero_epsilon_matches_plain() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let base = ["run", "--n", "2000", "--D", "5", "--K", "2", "--trials", "4", "--seed", "3", "--epsilon", "0", "--per-trial"];
    let mut args = base.to_vec();
    let sa = s(&a);
    args.extend(["--variant", "plain", "--out", &sa]);
    assert_eq!(wavecut(&args).0, 0);
    let mut args = base.to_vec();
    let sb = s(&b);
    args.extend(["--variant", "greedy", "--out", &sb]);
    assert_eq!(wavecut(&args).0, 0);
    let cuts = |p: &Path| -> Vec<String> {
        std::fs::read_to_string(p.join("trials.csv"))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().to_string())
            .collect()
    };
    assert_eq!(cuts(&a), cuts(&b));
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(a.join("meta.json")).unwrap()).unwrap();
    assert!(meta["created_unix"].is_u64());
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["mark_mode"], "bernoulli");
    assert_eq!(summary["config"]["max_radius"], 6);
}

#[test]
fn graph_file_round_trip_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let gpath = dir.path().join("g.txt");
    let g = wavecut::graph::generate_regular(500, 4, 1, 5, 20).unwrap();
    g.save_edge_list(&gpath).unwrap();
    let (pp, mp) = (dir.path().join("p.txt"), dir.path().join("m.txt"));
    let (code, out, err) = wavecut(&[
        "run", "--graph-file", &s(&gpath), "--K", "2", "--variant", "greedy", "--epsilon", "0.5",
        "--mark-mode", "exact", "--trials", "2", "--dump-partition", &s(&pp), "--dump-marks", &s(&mp),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("cut fraction"));
    let parts: Vec<i8> = std::fs::read_to_string(&pp).unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(parts.len(), 500);
    let marks: Vec<u32> = std::fs::read_to_string(&mp).unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(marks.len(), 250);
    assert_eq!(wavecut::graph::load_edge_list(&gpath).unwrap(), g);
}

#[test]
fn verify_suites_and_corrupted_file() {
    let (code, out, _) = wavecut(&["verify", "--suite", "sheppard"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("sheppard: 5 passed, 0 failed"));
    assert_eq!(wavecut(&["verify", "--suite", "bogus"]).0, 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "4 2\n0 1\n0 3\n1 2\n2 3\n1 0\n").unwrap();
    let (code, out, _) = wavecut(&["verify", "--graph-file", &s(&bad)]);
    assert_eq!(code, 2);
    assert!(out.contains("bad.txt:6"), "{out}");
    let (code, _, err) = wavecut(&["run", "--graph-file", &s(&bad), "--K", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("bad.txt:6"), "{err}");
}

#[test]
fn verify_all_passes() {
    let (code, out, _) = wavecut(&["verify"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), wavecut::verify::SUITES.len());
}

#[test]
fn sweep_rows_best_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let out_dir = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!(
            "degrees = [6]\nn = [1000]\nradii = [2]\nepsilons = [0.0, 0.2]\ntrials = 3\noutput = \"{}\"\n",
            s(&out_dir)
        ),
    )
    .unwrap();
    let (code, out, err) = wavecut(&["sweep", &s(&cfg), "--svg"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("best:"));
    let csv = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows.iter().filter(|r| r.contains(",true,")).count(), 1);
    assert!(std::fs::read_to_string(out_dir.join("sweep.svg")).unwrap().starts_with("<svg"));

    let tight = dir.path().join("tight.toml");
    let other = dir.path().join("never");
    std::fs::write(
        &tight,
        format!(
            "degrees = [6]\nn = [1000]\nradii = [2]\nepsilons = [0.0, 0.2]\ntrials = 3\nbudget = 100.0\noutput = \"{}\"\n",
            s(&other)
        ),
    )
    .unwrap();
    let (code, _, err) = wavecut(&["sweep", &s(&tight)]);
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
    assert!(!other.exists());
}
