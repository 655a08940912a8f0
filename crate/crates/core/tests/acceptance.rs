//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use f2_ergodic::cli::{run, Command, ExperimentConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

struct Run {
    json: Value,
    files: Vec<PathBuf>,
    elapsed: Duration,
}

fn execute(command: Command, config: &str, out: &Path) -> Result<Run, String> {
    let cfg = ExperimentConfig::load(&configs().join(config)).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let outcome = run(command, &cfg, out).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let text = fs::read_to_string(&outcome.files[0]).map_err(|e| e.to_string())?;
    let json: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    if json["pass"].as_bool() != Some(outcome.pass) {
        return Err("report verdict disagrees with exit status".into());
    }
    Ok(Run {
        json,
        files: outcome.files,
        elapsed,
    })
}

type Verdict = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Verdict>);

fn check(cond: bool, detail: String) -> Verdict {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1(out: &Path) -> Verdict {
    let r = execute(Command::VerifyFinite, "verify-finite.toml", out)?;
    let res = &r.json["result"];
    let (passed, total) = (res["passed"].as_u64().unwrap(), res["total"].as_u64().unwrap());
    let n_max = res["n_max"].as_u64().unwrap();
    let max_states = res["systems"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["states"].as_u64().unwrap())
        .max()
        .unwrap();
    check(
        passed == 50 && total == 50 && n_max == 5 && max_states <= 10 && r.elapsed <= Duration::from_secs(30),
        format!(
            "{passed}/{total} systems exact for n = 1..={n_max}, at most {max_states} states, {:.2?}",
            r.elapsed
        ),
    )
}

fn criterion_2(out: &Path) -> Verdict {
    let r = execute(Command::VerifyFinite, "verify-finite.toml", out)?;
    let parity = r.json["result"]["parity"].as_array().unwrap().clone();
    let mut ok = parity.len() == 11;
    for p in &parity {
        let n = p["n"].as_u64().unwrap();
        let expected = if n % 2 == 0 { ("1/1", "0/1") } else { ("0/1", "1/1") };
        ok &= (p["value_at_0"].as_str().unwrap(), p["value_at_1"].as_str().unwrap()) == expected;
    }
    check(
        ok,
        format!("A_n 1_0 alternates between 1_0 and 1_1 for n = 1..={}", parity.len()),
    )
}

/// `3^n / 4` for `n < 0`, computed without the library.
fn support_bound(n: i64) -> String {
    let q = BigRational::new(BigInt::from(1), BigInt::from(4) * BigInt::from(3).pow((-n) as u32));
    format!("{}/{}", q.numer(), q.denom())
}

fn criterion_3(out: &Path) -> Verdict {
    let r = execute(Command::VerifyChain, "verify-chain.toml", out)?;
    let res = &r.json["result"];
    let selected = res["calibration"]["selected"].as_str().unwrap_or("none").to_string();
    let steps = res["chain"]["steps"].as_array().cloned().unwrap_or_default();
    let mut ok = selected == "first-letter" && steps.len() == 14;
    for s in &steps {
        let n = s["n"].as_i64().unwrap();
        ok &= s["norm"] == "1/1" && s["push_exact"] == Value::Bool(true) && s["support_mass"] == support_bound(n);
    }
    ok &= r.elapsed <= Duration::from_secs(10);
    check(
        ok,
        format!(
            "slot rule {selected}; norm 1, P f(n) = f(n+1), support 3^n/4 for n = -15..=-2; {:.2?}",
            r.elapsed
        ),
    )
}

fn criterion_4(out: &Path) -> Verdict {
    let r = execute(Command::Axioms, "axioms.toml", out)?;
    let res = &r.json["result"];
    let v = &res["violations"];
    let total: u64 = v.as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum();
    let m = &res["masses"];
    let dev = |key: &str, target: f64| (m[key].as_f64().unwrap() - target).abs();
    let worst = dev("interior", 0.5)
        .max(dev("boundary_a", 0.25))
        .max(dev("boundary_b", 0.25));
    check(
        res["samples"] == 100_000 && total == 0 && worst <= 0.005,
        format!(
            "{} points, {total} violations, largest mass deviation {worst:.4} (tolerance 0.005)",
            res["samples"]
        ),
    )
}

fn criterion_5(out: &Path) -> Verdict {
    let r = execute(Command::BuildTower, "build-tower.toml", out)?;
    let res = &r.json["result"];
    let alphas: Vec<String> = res["alphas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["alpha"].as_str().unwrap().to_string())
        .collect();
    let mut expected = vec![BigRational::from_integer(1.into())];
    for _ in 0..4 {
        let a = expected.last().unwrap().clone();
        expected.push(&a * (BigRational::from_integer(1.into()) - &a / BigRational::from_integer(4.into())));
    }
    let expected: Vec<String> = expected
        .iter()
        .map(|q| format!("{}/{}", q.numer(), q.denom()))
        .collect();
    let norms_ok = res["levels"]
        .as_array()
        .unwrap()
        .iter()
        .all(|l| l["norm_matches"] == Value::Bool(true) && l["norm_ratio"] == l["alpha"]);
    check(
        alphas == expected
            && alphas[..3] == ["1/1", "3/4", "39/64"]
            && norms_ok
            && r.elapsed <= Duration::from_secs(60),
        format!(
            "alpha = ({}), chain norm ratios equal alpha at every level, {:.2?}",
            alphas.join(", "),
            r.elapsed
        ),
    )
}

fn criterion_6(out: &Path) -> Verdict {
    let r = execute(Command::Calibrate, "calibrate.toml", out)?;
    let c = &r.json["result"]["coverage"];
    let covered = c["covered"].as_u64().unwrap();
    let trials = c["trials"].as_array().unwrap();
    let n_ok = trials.iter().all(|t| t["n"].as_u64().unwrap() <= 5);
    check(
        trials.len() == 100 && covered >= 95 && n_ok,
        format!(
            "{covered}/{} exact values inside the 99% interval, {} non-zero",
            trials.len(),
            c["nonzero"]
        ),
    )
}

fn criterion_7(out: &Path) -> Verdict {
    let r = execute(Command::Survey, "survey-maximal.toml", out)?;
    let res = &r.json["result"];
    let a = &res["achieved"];
    let rep = &res["choice"]["report"];
    let n = a["n"].as_u64();
    let fraction = a["pass_fraction"].as_f64().unwrap();
    let ok = n.is_some_and(|n| n <= 12)
        && rep["points"].as_u64().unwrap() >= 200
        && rep["criterion"]["threshold"].as_f64().unwrap() == 0.8
        && fraction >= 0.8
        && rep["unsupported_passes"] == 0
        && res["choice"]["monotone"] == Value::Bool(true);
    check(
        ok,
        format!(
            "N = {}, fraction {:.4} (raw {:.4} minus 99% allowance {:.4}), {} points x {} walks, {} under-powered bins off the witnesses",
            n.map_or("none".into(), |n| n.to_string()),
            fraction,
            a["raw_fraction"].as_f64().unwrap(),
            a["allowance"].as_f64().unwrap(),
            rep["points"],
            rep["walks"],
            rep["underpowered_bins"],
        ),
    )
}

fn criterion_8(out: &Path) -> Verdict {
    let r = execute(Command::Survey, "survey-glued.toml", out)?;
    let res = &r.json["result"];
    let mixing = &res["mixing"];
    let s = &res["survey"];
    let fraction = s["pass_fraction"].as_f64().unwrap();
    let ok = res["kappa"] == "1/64"
        && mixing["floor"].as_f64().unwrap() == 0.5 - 0.1
        && mixing["selected"].is_u64()
        && s["criterion"]["threshold"].as_f64().unwrap() == 0.6
        && fraction >= 0.6
        && s["unsupported_passes"] == 0;
    check(
        ok,
        format!(
            "kappa 1/64, M = {} (mixing floor {:.2}), sup > 0.6 on fraction {:.4} of {} copy-2 points, coupling deviation {:.4}",
            res["m"],
            mixing["floor"].as_f64().unwrap(),
            fraction,
            s["points"],
            res["coupling"]["mean_deviation"].as_f64().unwrap(),
        ),
    )
}

const RUNS: [(Command, &str); 7] = [
    (Command::VerifyFinite, "verify-finite.toml"),
    (Command::VerifyChain, "verify-chain.toml"),
    (Command::Axioms, "axioms.toml"),
    (Command::BuildTower, "build-tower.toml"),
    (Command::Calibrate, "calibrate.toml"),
    (Command::Survey, "survey-maximal.toml"),
    (Command::Survey, "survey-glued.toml"),
];

fn criterion_9() -> Verdict {
    let mut compared = 0;
    for (command, config) in RUNS {
        let (a, b) = (tempdir(), tempdir());
        let first = execute(command, config, a.path())?;
        let second = execute(command, config, b.path())?;
        for (x, y) in first.files.iter().zip(&second.files) {
            if fs::read(x).map_err(|e| e.to_string())? != fs::read(y).map_err(|e| e.to_string())? {
                return Err(format!(
                    "{} differs between runs of {config}",
                    x.file_name().unwrap().to_string_lossy()
                ));
            }
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} report files byte-identical across two runs of every configuration"
    ))
}

fn tempdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("temporary directory")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "operator identity on 50 finite systems",
            Box::new(|| criterion_1(tempdir().path())),
        ),
        (
            "parity on the two-point swap",
            Box::new(|| criterion_2(tempdir().path())),
        ),
        (
            "ancient chain after slot calibration",
            Box::new(|| criterion_3(tempdir().path())),
        ),
        (
            "good-system axioms on 1e5 points",
            Box::new(|| criterion_4(tempdir().path())),
        ),
        ("norm recursion for k = 4", Box::new(|| criterion_5(tempdir().path()))),
        (
            "estimator interval coverage",
            Box::new(|| criterion_6(tempdir().path())),
        ),
        (
            "maximal-function survey, base level",
            Box::new(|| criterion_7(tempdir().path())),
        ),
        ("one-gluing smoke survey", Box::new(|| criterion_8(tempdir().path()))),
        ("reproducibility", Box::new(criterion_9)),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {} {name}: {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
