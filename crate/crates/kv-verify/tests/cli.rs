use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const P2: &str = r#"{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[0,2]]}"#;

fn dir(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&d).unwrap();
    std::fs::write(d.join("p2.json"), P2).unwrap();
    d
}

fn write(d: &Path, name: &str, text: &str) -> PathBuf {
    let p = d.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kv-verify")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn fan_info_reads_properties() {
    let d = dir("fan_info");
    let o = run(&["fan", "info", d.join("p2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("simplicial yes, smooth yes, complete yes"), "{}", stdout(&o));
}

#[test]
fn canonical_divisor_of_the_plane() {
    let d = dir("canonical");
    let k = write(&d, "k.json", r#"{"fan":"p2.json","coeffs":["-1","-1","-1"]}"#);
    let o = run(&["coh", "dims", k.to_str().unwrap(), "--field", "f7"]);
    assert_eq!(stdout(&o).trim(), "f7: [0, 0, 1]");
    let o = run(&["div", "check", k.to_str().unwrap()]);
    assert!(stdout(&o).contains("nef no, ample no, big no"));

    let inst = write(&d, "k-inst.json", r#"{"fan":"p2.json","B":["0","0","0"],"D":["-1","-1","-1"],"mode":2}"#);
    // the hypothesis fails, so the verdict makes no claim and passes
    let o = run(&["verify", "kv", inst.to_str().unwrap(), "--fields", "q,f2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["hypothesis_ok"], false);
    assert_eq!(v["dims"]["f2"][0], serde_json::json!([0, 0, 1]));
    // K is negative on the fibration to a point, but h2 = 1
    let o = run(&["verify", "mfs", inst.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn mmp_on_the_plane_ends_in_a_fibration() {
    let d = dir("mmp");
    let inst = write(&d, "i.json", r#"{"fan":"p2.json","B":["2/3","2/3","2/3"],"D":["0","0","-1"],"mode":2}"#);
    let o = run(&["mmp", "run", inst.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("end: Mori fibre space over rank 0"));
}

#[test]
fn input_errors_exit_with_two() {
    let d = dir("errors");
    let neg = write(&d, "neg.json", r#"{"fan":"p2.json","coeffs":["1/-2","0","0"]}"#);
    let o = run(&["div", "check", neg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("denominator must be positive"), "{}", stderr(&o));

    let fan = write(&d, "bad-fan.json", r#"{"rank":2,"rays":[[2,4],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[0,2]]}"#);
    let o = run(&["fan", "info", fan.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(2,4) is not primitive"), "{}", stderr(&o));

    let corpus = write(&d, "corpus.json", r#"{"instances": [{"fan": "p2.json", "D": []}]}"#);
    let o = run(&["suite", "--corpus", corpus.to_str().unwrap(), "--count", "0", "--no-curated", "--quiet"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["fan", "info", d.join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generated_corpus_feeds_the_suite() {
    let d = dir("corpus");
    let o = run(&["corpus", "--seed", "7", "--rank", "2", "--count", "3", "--max-rays", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let corpus = write(&d, "c.json", &stdout(&o));
    let report = d.join("r.json");
    let o = run(&[
        "suite",
        "--corpus",
        corpus.to_str().unwrap(),
        "--count",
        "0",
        "--no-curated",
        "--report",
        report.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["summary"]["total"], 3);
    assert_eq!(r["instances"][0]["kind"], "given");
}

#[test]
fn rank_two_suite_passes_and_is_reproducible() {
    let d = dir("suite");
    let (a, b) = (d.join("a.json"), d.join("b.json"));
    for p in [&a, &b] {
        let o = run(&["suite", "--seed", "42", "--rank", "2", "--count", "30", "--report", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("expected-fail"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
