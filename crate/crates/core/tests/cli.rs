use std::fs;
use std::path::Path;
use std::process::Command;

use f2_ergodic::cli::{run, Command as Cmd, ExperimentConfig};

const BIN: &str = env!("CARGO_BIN_EXE_f2-ergodic");

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path
}

fn status(args: &[&str], env_out: Option<&Path>) -> i32 {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("F2_ERGODIC_OUT");
    if let Some(dir) = env_out {
        cmd.env("F2_ERGODIC_OUT", dir);
    }
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn valid_run_exits_zero_and_writes_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[chain]\nlo = -6\nhi = -2\n");
    let out = dir.path().join("reports");
    let code = status(
        &[
            "verify-chain",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code, 0);
    let json = fs::read_to_string(out.join("verify-chain.json")).unwrap();
    assert!(json.contains("\"first-letter\""));
    assert!(out.join("verify-chain.timing.json").exists());
}

#[test]
fn output_directory_defaults_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[tower]\nkappa = [\"1/64\"]\nm = [2]\nsamples = 10\n");
    let out = dir.path().join("from-env");
    assert_eq!(
        status(&["build-tower", "--config", cfg.to_str().unwrap()], Some(&out)),
        0
    );
    assert!(out.join("build-tower.json").exists());
    assert!(out.join("tower.csv").exists());
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "seed = 1\n[axioms]\nsamples = 20000\n");
    let out = dir.path().join("o");
    let args = [
        "axioms",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "99",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(status(&args, None), 0);
    let json = fs::read_to_string(out.join("axioms.json")).unwrap();
    assert!(json.contains("\"seed\": 99"));
}

#[test]
fn invalid_configurations_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = out.to_str().unwrap();
    for text in [
        "[tower]\nkappa = [\"5/4\"]\nm = [1]\n",
        "[tower]\nkappa = [\"a/b\"]\nm = [1]\n",
        "sed = 3\n",
        "command = \"axioms\"\n",
    ] {
        let cfg = write_config(dir.path(), text);
        assert_eq!(
            status(&["build-tower", "--config", cfg.to_str().unwrap(), "--out", o], None),
            2,
            "{text}"
        );
    }
    let cfg = write_config(dir.path(), "");
    assert_eq!(
        status(
            &["no-such-command", "--config", cfg.to_str().unwrap(), "--out", o],
            None
        ),
        2
    );
    assert_eq!(
        status(&["axioms", "--config", "/nonexistent.toml", "--out", o], None),
        2
    );
    assert!(!out.join("build-tower.json").exists());
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // Too few samples to meet the ±0.005 mass tolerance.
    let cfg = write_config(dir.path(), "seed = 4\n[axioms]\nsamples = 50\n");
    let out = dir.path().join("o");
    assert_eq!(
        status(
            &[
                "axioms",
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap()
            ],
            None
        ),
        1
    );
    let json = fs::read_to_string(out.join("axioms.json")).unwrap();
    assert!(json.contains("\"pass\": false"));
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let text = "[survey]\npoints = 40\nwalks = 300\nn_max = 4\n";
    let mut reports = Vec::new();
    for workers in [1, 3] {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::from_toml(text).unwrap();
        cfg.workers = workers;
        let o = run(Cmd::Survey, &cfg, dir.path()).unwrap();
        let json = fs::read_to_string(&o.files[0])
            .unwrap()
            .replace(&format!("\"workers\": {workers}"), "");
        let csv = fs::read(dir.path().join("survey.csv")).unwrap();
        reports.push((json, csv));
    }
    assert_eq!(reports[0], reports[1]);
}
