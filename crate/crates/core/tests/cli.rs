//! Runs the `bellkit` binary end to end on the sample inputs.

use std::path::PathBuf;
use std::process::{Command, Output};

use bellkit::cli::file::{parse, Body};
use bellkit::error::Error;
use bellkit::quantum::max_abs_chsh;

fn input(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/inputs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellkit")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bellkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(path: &PathBuf) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn membership_on_singlet() {
    let out = tmp("membership.json");
    let f = input("singlet_tsirelson.toml");
    let o = run(&["membership", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("certificate"));
    let j = json(&out);
    assert_eq!(j["membership"]["member"], false);
    assert_eq!(j["membership"]["certificate"]["bound"], "2");
    assert_eq!(j["membership"]["certificate"]["verified"], true);
    let chsh = j["membership"]["max_abs_chsh"].as_f64().unwrap();
    assert!((chsh - 2.8284271).abs() < 1e-6);
}

#[test]
fn check_on_deterministic_mixture() {
    let out = tmp("check.json");
    let f = input("deterministic_mixture.toml");
    let o = run(&["check", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let j = json(&out);
    for p in j["properties"].as_array().unwrap() {
        if ["predetermination", "locality", "local_causality"].contains(&p["property"].as_str().unwrap()) {
            assert_eq!(p["holds"], true, "{p}");
        }
    }
}

#[test]
fn lemma_two() {
    let o = run(&["lemmas", "--id", "2", "--trials", "500", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 counterexamples / 500 tested"), "{}", stdout(&o));
}

#[test]
fn every_command_runs() {
    let cases: [(&[&str], &str, i32); 9] = [
        (&["chsh"], "singlet_tsirelson.toml", 1),
        (&["chsh"], "werner_0_6.toml", 0),
        (&["fine"], "independent_coins.toml", 0),
        (&["fine"], "pr_box.toml", 1),
        (&["causal"], "tuned_pr_box.toml", 1),
        (&["reconcile"], "bell_local_causal.toml", 0),
        (&["reconcile"], "singlet_tsirelson.toml", 1),
        (&["membership"], "werner_0_6.toml", 0),
        (&["check"], "pr_box.toml", 1),
    ];
    for (args, file, want) in cases {
        let f = input(file);
        let mut all = args.to_vec();
        all.push(f.to_str().unwrap());
        let o = run(&all);
        assert_eq!(code(&o), want, "{args:?} {file}: {}", stdout(&o));
    }
}

#[test]
fn reports_are_byte_deterministic() {
    let f = input("bell_local_causal.toml");
    for args in [vec!["causal", f.to_str().unwrap()], vec!["lemmas", "--trials", "80", "--seed", "3"]] {
        let (p, q) = (tmp("det1.json"), tmp("det2.json"));
        let mut a = args.clone();
        a.extend(["--out", p.to_str().unwrap()]);
        let mut b = args.clone();
        b.extend(["--out", q.to_str().unwrap()]);
        let (oa, ob) = (run(&a), run(&b));
        assert_eq!(oa.stdout, ob.stdout);
        assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());
    }
}

#[test]
fn errors_exit_with_two() {
    let bad = tmp("bad.toml");
    std::fs::write(&bad, "format = 1\n[phenomenon]\ntable = [0.5, 0.5\n").unwrap();
    let o = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error["), "{err}");
    assert!(err.contains("line"), "{err}");

    assert_eq!(code(&run(&["check", "/nonexistent/file.toml"])), 2);
    assert_eq!(code(&run(&["lemmas", "--deterministic"])), 2);
    assert_eq!(code(&run(&["lemmas", "--id", "9"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn tsirelson_block_parses() {
    let f = parse("format = 1\n[quantum]\nstate = \"singlet\"\nalice = [0, 1.5707963]\nbob = [0.7853982, 2.3561945]\n")
        .unwrap();
    let Body::Quantum(q) = &f.body else { panic!("not a quantum block") };
    let best = max_abs_chsh(&q.phenomenon().unwrap()).unwrap().unwrap();
    assert!((best.value.abs() - 2.0 * 2f64.sqrt()).abs() < 1e-6);
}

#[test]
fn short_row_names_its_block() {
    let text = "format = 1\n[phenomenon]\ntable = [\n\"1/4\",\"1/4\",\"1/4\",\"1/4\",\n\"1/4\",\"1/4\",\"1/4\",\"1/4\",\n\"1/4\",\"1/4\",\"1/4\",\"3/20\",\n\"1/4\",\"1/4\",\"1/4\",\"1/4\"]\n";
    match parse(text) {
        Err(Error::NonNormalized(m)) => assert!(m.contains("(a=1, b=0)"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sample_inputs_round_trip() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/inputs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let once = parse(&std::fs::read_to_string(&path).unwrap()).unwrap().to_toml();
        let twice = parse(&once).unwrap().to_toml();
        assert_eq!(once, twice, "{}", path.display());
    }
}
