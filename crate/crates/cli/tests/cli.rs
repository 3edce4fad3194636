use std::fs;
use std::path::Path;
use std::process::Command;

fn cntflow(args: &[&str], dir: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cntflow"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn cntflow");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn solve_both_reports_difference_and_reference_value() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = cntflow(
        &["solve", "--prandtl", "1", "--solver", "both", "--out", "run"],
        dir.path(),
    );
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("difference"));
    let kb = stdout.lines().find(|l| l.starts_with("kellerbox")).unwrap();
    assert!(kb.contains("0.9548"), "{kb}");
    assert!(dir.path().join("run/profile.csv").exists());
    assert!(dir.path().join("run/profile_shooting.csv").exists());
    let meta = fs::read_to_string(dir.path().join("run/profile.csv.meta")).unwrap();
    let diff: f64 = meta
        .lines()
        .find_map(|l| l.strip_prefix("difference.theta_prime_0 = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(diff < 1e-4);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--phi",
        "0.1",
        "--magnetic_m",
        "2",
        "--velocity_slip",
        "0.1",
        "--n_nodes",
        "401",
    ];
    for out in ["a", "b"] {
        let mut v = vec!["solve", "--out", out];
        v.extend(args);
        assert_eq!(cntflow(&v, dir.path()).0, 0);
    }
    let a = fs::read(dir.path().join("a/profile.csv")).unwrap();
    let b = fs::read(dir.path().join("b/profile.csv")).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains(&b'\r'));
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec![
            "sweep",
            "--param",
            "velocity_slip=0.1,0.4,0.7,0.9",
            "--param",
            "phi=0.02,0.05,0.07",
            "--n_nodes",
            "501",
            "--out",
            out,
        ]
    };
    assert_eq!(cntflow(&args("a"), dir.path()).0, 0);
    assert_eq!(cntflow(&args("b"), dir.path()).0, 0);
    let a = fs::read_to_string(dir.path().join("a/sweep.csv")).unwrap();
    assert_eq!(a, fs::read_to_string(dir.path().join("b/sweep.csv")).unwrap());

    let mut rdr = csv::Reader::from_reader(a.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 14);
    assert_eq!(&rows[0][0], "velocity_slip");
    assert_eq!(&rows[1][2], "mwcnt");
    for particle in ["swcnt", "mwcnt"] {
        let sf = |param: &str| -> Vec<f64> {
            rows.iter()
                .filter(|r| &r[0] == param && &r[2] == particle)
                .map(|r| r[3].parse().unwrap())
                .collect()
        };
        assert!(sf("velocity_slip").windows(2).all(|w| w[1] < w[0]));
        assert!(sf("phi").windows(2).all(|w| w[1] > w[0]));
    }
    let meta = fs::read_to_string(dir.path().join("a/sweep.csv.meta")).unwrap();
    assert!(meta.contains("prandtl = 21") && meta.contains("magnetic_m = 2.5"));
}

#[test]
fn invalid_inputs_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["solve", "--phi", "0.3"],
        &["solve", "--n_nodes", "4"],
        &["solve", "--particle", "graphene"],
        &["sweep", "--param", "viscosity=1,2"],
        &["sweep", "--param", "phi="],
        &["solve", "--unknown-flag", "1"],
    ];
    for args in cases {
        let (code, _, stderr) = cntflow(args, dir.path());
        assert_eq!(code, 3, "{args:?}: {stderr}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "prandtl = 10\nn_nodes = 401\nout = cfg\n").unwrap();
    let (code, stdout, _) = cntflow(&["solve", "--config", "run.cfg", "--prandtl", "3"], dir.path());
    assert_eq!(code, 0);
    assert!(stdout.contains("1.869"), "{stdout}");
    let meta = fs::read_to_string(dir.path().join("cfg/profile.csv.meta")).unwrap();
    assert!(meta.contains("prandtl = 3\n") && meta.contains("n_nodes = 401\n"));
}

#[test]
fn validate_passes_and_impossible_tolerance_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = cntflow(&["validate"], dir.path());
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(stdout.lines().filter(|l| l.ends_with("pass")).count(), 8);
    let (code, _, _) = cntflow(&["validate", "--abs-tol", "1e-9"], dir.path());
    assert_ne!(code, 0);
}

#[test]
fn non_convergence_exits_2_and_keeps_best_iterate() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = cntflow(
        &["solve", "--tolerance", "1e-30", "--n_nodes", "201", "--out", "nc"],
        dir.path(),
    );
    assert_eq!(code, 2);
    let meta = fs::read_to_string(dir.path().join("nc/profile.csv.meta")).unwrap();
    assert!(meta.contains("kellerbox.converged = false"));
}

#[test]
fn mesh_study_detects_first_order_bias() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = cntflow(&["mesh-study", "--n_nodes", "251", "--prandtl", "10"], dir.path());
    assert_eq!(code, 0, "{stdout}");
    let (code, stdout, _) = cntflow(
        &["mesh-study", "--n_nodes", "251", "--first-order-bias", "1"],
        dir.path(),
    );
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.contains("2.00"), "{stdout}");
}
