use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ecm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = ecm(args);
    assert!(
        out.status.success(),
        "ecm {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn spectrum_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let common = ["spectrum", "--n", "10000", "--tau", "2.5", "--replicas", "2", "--seed", "7", "--emit-raw"];
    let mut args_a = common.to_vec();
    args_a.extend(["--out", a.to_str().unwrap(), "--workers", "1"]);
    let mut args_b = common.to_vec();
    args_b.extend(["--out", b.to_str().unwrap(), "--workers", "4"]);
    ok(&args_a);
    ok(&args_b);
    for f in ["spectrum.csv", "spectrum_binned.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn golden_headers() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    fs::write(&edges, "1 2\n2 3\n1 3\n").unwrap();
    let cases: &[(&[&str], &str, &str)] = &[
        (&["spectrum"], "spectrum.csv", "k,N_k,delta_k,c_k,c_k_over_f,range_id,n,tau,replica"),
        (&["spectrum"], "spectrum_binned.csv", "k_lo,k_hi,mean_k,mean_c,std_err,vertices"),
        (&["regimes"], "regimes.csv", "k,epsilon,delta_k_total,delta_k_window,fraction,replica"),
        (
            &["crossover", "--b", "0.5", "--b", "2"],
            "crossover.csv",
            "B,ck_over_n2mt_theory,ck_over_n2mt_rangeII,ck_over_n2mt_rangeIII",
        ),
        (&["theory"], "theory.csv", "k,predicted_c,range_id,crossover,n,tau"),
        (
            &["connection-check"],
            "connection_check.csv",
            "du_lo,du_hi,dv_lo,dv_hi,pairs,empirical_p,model_p,std_err",
        ),
        (
            &["compare-hvm"],
            "compare_hvm.csv",
            "k_lo,k_hi,mean_k,ecm_c,hvm_c,ratio,std_err,ecm_vertices,hvm_vertices",
        ),
        (&["ingest", "--input", edges.to_str().unwrap()], "ingest.csv", "k,N_k,delta_k,c_k"),
    ];
    for (i, (args, file, expected)) in cases.iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        let mut full = args.to_vec();
        full.extend(["--n", "3000", "--out", out.to_str().unwrap()]);
        ok(&full);
        assert_eq!(header(&out.join(file)), *expected, "{file}");
        assert!(out.join("manifest.json").exists());
    }
}

#[test]
fn theory_output_does_not_depend_on_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    ok(&["theory", "--n", "100000", "--k", "3", "--k", "50", "--k", "300", "--k", "2000", "--seed", "1", "--out", a.to_str().unwrap()]);
    ok(&["theory", "--n", "100000", "--k", "3", "--k", "50", "--k", "300", "--k", "2000", "--seed", "99", "--out", b.to_str().unwrap()]);
    assert_eq!(fs::read(a.join("theory.csv")).unwrap(), fs::read(b.join("theory.csv")).unwrap());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            r#"{{"n": 1500, "tau": 2.3, "replicas": 3, "epsilon_sweep": [0.5, 0.05], "output_path": {:?}}}"#,
            out
        ),
    )
    .unwrap();
    ok(&["regimes", "--config", cfg.to_str().unwrap(), "--replicas", "2"]);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["replicas"], 2);
    assert_eq!(manifest["config"]["n"], 1500);
    assert_eq!(manifest["config"]["tau"], 2.3);
    assert_eq!(manifest["replicas"].as_array().unwrap().len(), 2);
    assert!(manifest["replicas"][0]["jn_holds"].is_boolean());
    let text = fs::read_to_string(out.join("regimes.csv")).unwrap();
    let eps: std::collections::BTreeSet<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(eps.into_iter().collect::<Vec<_>>(), vec!["0.05", "0.5"]);
}

#[test]
fn errors_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    for args in [
        vec!["spectrum", "--tau", "3.5"],
        vec!["spectrum", "--replicas", "0"],
        vec!["regimes", "--epsilon", "1.5"],
        vec!["ingest"],
    ] {
        let mut full = args.clone();
        full.extend(["--out", out.to_str().unwrap()]);
        let res = ecm(&full);
        assert!(!res.status.success(), "{args:?}");
        let err: serde_json::Value = serde_json::from_slice(&res.stderr).expect("json error record");
        assert!(err["error"].is_string() && err["message"].is_string(), "{args:?}");
    }
    let res = ecm(&["ingest", "--input", "/nonexistent/edges.txt", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    let res = ecm(&["bogus"]);
    assert_eq!(res.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(err["error"], "usage");
}

#[test]
fn lenient_ingest_counts_skipped_lines() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    fs::write(&edges, "1 2\n2 1\n# c\n3 3\nbad line\n").unwrap();
    let out = dir.path().join("o");
    let strict = ecm(&["ingest", "--input", edges.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(2));
    ok(&["ingest", "--input", edges.to_str().unwrap(), "--lenient", "--out", out.to_str().unwrap()]);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let p = &manifest["summary"]["provenance"];
    assert_eq!(p["comments"], 1);
    assert_eq!(p["self_loops"], 1);
    assert_eq!(p["duplicates"], 1);
    assert_eq!(p["malformed"], 1);
    assert_eq!(manifest["summary"]["vertices"], 2);
}
