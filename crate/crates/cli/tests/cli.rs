use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nvce-transfer"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn list_prints_every_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["list"], dir.path());
    assert!(out.status.success());
    let ids: Vec<String> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(ids.len(), 17);
    assert!(ids.iter().any(|i| i == "chain-select"));
}

#[test]
fn run_writes_the_default_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(
        &["run", "res-bal-eq", "--t-end", "2", "--samples", "5"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("res-bal-eq.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "Jt,P_NE1,P_NE2");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0,1,0"));
    assert!(lines[5].starts_with("2,"));
}

#[test]
fn explicit_output_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("fid.csv");
    let out = cli(
        &["run", "fid-disp", "--out", target.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/fid-disp.csv");
    assert_eq!(
        std::fs::read_to_string(target).unwrap(),
        std::fs::read_to_string(golden).unwrap()
    );
}

#[test]
fn run_all_fills_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(
        &[
            "run",
            "all",
            "--out",
            ".",
            "--t-end",
            "1",
            "--samples",
            "3",
            "--jobs",
            "2",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let count = std::fs::read_dir(dir.path()).unwrap().filter(|e| {
        e.as_ref()
            .unwrap()
            .path()
            .extension()
            .is_some_and(|x| x == "csv")
    });
    assert_eq!(count.count(), 17);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["run", "no-such-scenario"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no-such-scenario"));

    let cfg = dir.path().join("bad.cfg");
    std::fs::write(
        &cfg,
        "[scenario]\nbase = res-bal-eq\n[couplings]\ng = 1, -1\n",
    )
    .unwrap();
    let out = cli(&["run", "--config", "bad.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("couplings.g"), "{}", stderr(&out));

    let out = cli(&["run", "res-bal-eq", "--samples", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn integration_failure_exits_with_three_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.cfg");
    std::fs::write(
        &cfg,
        "[scenario]\nbase = res-bal-eq\n[integrator]\nmethod = rk45\nabs_tol = 1e-300\nrel_tol = 1e-300\n[output]\npath = tight.csv\n",
    )
    .unwrap();
    let out = cli(&["run", "--config", "tight.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("no output written"));
    assert!(!dir.path().join("tight.csv").exists());
}

#[test]
fn sweep_configs_write_one_file_per_value_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("sweep.cfg"),
        "[scenario]\nid = ratio\nbase = res-bal-eq\n[output]\nt_end = 4\n[sweep]\naxis = J_over_g\nvalues = 0.1, 1\n",
    )
    .unwrap();
    let out = cli(&["run", "--config", "sweep.cfg", "--out", "."], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    for name in [
        "ratio_J_over_g=0.1.csv",
        "ratio_J_over_g=1.csv",
        "ratio_sweep.csv",
    ] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let summary = std::fs::read_to_string(dir.path().join("ratio_sweep.csv")).unwrap();
    assert_eq!(
        summary.lines().next(),
        Some("J_over_g,peak_P_NE2,transfer_Jt")
    );
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn regen_golden_refuses_other_outputs() {
    let dir = tempfile::tempdir().unwrap();
    for extra in [
        &["--out", "x.csv"][..],
        &["--samples", "3"],
        &["--t-end", "1"],
    ] {
        let mut args = vec!["run", "res-bal-eq", "--regen-golden"];
        args.extend_from_slice(extra);
        assert_eq!(cli(&args, dir.path()).status.code(), Some(2), "{extra:?}");
    }
    std::fs::write(dir.path().join("a.cfg"), "[scenario]\nbase = res-bal-eq\n").unwrap();
    assert_eq!(
        cli(&["run", "--config", "a.cfg", "--regen-golden"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn zero_jobs_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["run", "all", "--jobs", "0"], dir.path());
    assert!(!out.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
