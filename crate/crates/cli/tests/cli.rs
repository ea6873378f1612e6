use std::path::PathBuf;
use std::process::{Command, Output};

const CONJUNCTION_EXAMPLE: &str = "fact f1. fact f2. fact f3. fact f4. fact f6. fact f7.
r1: f1 =O> a * b. r2: f2 =O> a. r3: f3 =O> b. r4: f4 => ~a.
r5: O[a & b] =O> ~c. r6: f6 =O> c * d. r7: f7 =O> d.
";

const MIX: &str = "r1: =O> a * b. r2: =O> c * d. r3: => ~a. r4: => ~c.\n";

const ORDER: &str = "fact ~a. r1: =O> a * b. r2: =O> b.\n";

fn file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ddl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn ddl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn conjunction_example_extension_json() {
    let t = file("ex6.ddl", CONJUNCTION_EXAMPLE);
    let o = ddl(&["extension", t.to_str().unwrap(), "--conj", "c & d", "--conj", "b & d"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let has = |k: &str, x: &str| v[k].as_array().unwrap().iter().any(|s| s == x);
    for x in ["a", "b", "d"] {
        assert!(has("obligation_pos", x), "{x}");
    }
    assert!(has("obligation_neg", "c") && has("obligation_neg", "~c"));
    assert!(has("conj_pos", "a & b") && has("conj_pos", "b & d"));
    assert!(has("conj_neg", "c & d"));
}

#[test]
fn trace_goes_to_stderr() {
    let t = file("trace.ddl", CONJUNCTION_EXAMPLE);
    let o = ddl(&["extension", t.to_str().unwrap(), "--trace", "--format", "text"]);
    assert!(o.status.success());
    assert!(stderr(&o).starts_with("stage 0:"));
    assert!(stdout(&o).starts_with("factual_pos:"));
}

#[test]
fn queries() {
    let ex6 = file("q6.ddl", CONJUNCTION_EXAMPLE);
    let mix = file("mix.ddl", MIX);
    let o = ddl(&["query", ex6.to_str().unwrap(), "O c & d"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "refuted\n"));
    let o = ddl(&["query", ex6.to_str().unwrap(), "O c & d", "--neg"]);
    assert_eq!(stdout(&o), "proven\n");
    let o = ddl(&["query", mix.to_str().unwrap(), "d z"]);
    assert_eq!(stdout(&o), "refuted (no rules)\n");

    let o = ddl(&["query", mix.to_str().unwrap(), "O b & d", "--witness"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("proven"));
    let witness: String = lines.map(|l| format!("{l}\n")).collect();
    assert!(witness.ends_with("+dO b & d\n"));
    let d = file("mix.proof", &witness);
    let o = ddl(&["check", mix.to_str().unwrap(), d.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn check_accepts_and_rejects() {
    let t = file("order.ddl", ORDER);
    let good = file("good.proof", "+dO a\n+dO b\n+d ~a\n+dO a & b\n");
    let bad = file("bad.proof", "+dO a\n+d ~a\n+dO b\n+dO a & b\n");
    let o = ddl(&["check", t.to_str().unwrap(), good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("accepted (4 steps)"));
    let o = ddl(&["check", t.to_str().unwrap(), bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["accepted"], false);
    let last = v["steps"].as_array().unwrap().last().unwrap();
    assert_eq!(last["position"], 4);
    assert_eq!(last["status"], "violated");
}

#[test]
fn exit_codes() {
    let missing = std::env::temp_dir().join("ddl-cli-no-such-file.ddl");
    assert_eq!(ddl(&["extension", missing.to_str().unwrap()]).status.code(), Some(1));

    let bad = file("bad.ddl", "r1: => a\n");
    let o = ddl(&["extension", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.ddl:2:1: error:"));

    let mix = file("exit-mix.ddl", MIX);
    assert_eq!(ddl(&["query", mix.to_str().unwrap(), "X a"]).status.code(), Some(2));
    assert_eq!(ddl(&["gen", "no-such-family"]).status.code(), Some(2));

    let cyc = file("cyc.ddl", "r1: => a. r2: => ~a. r1 > r2. r2 > r1.\n");
    assert_eq!(ddl(&["extension", cyc.to_str().unwrap()]).status.code(), Some(0));
    let o = ddl(&["extension", cyc.to_str().unwrap(), "--strict"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn empty_theory() {
    let t = file("empty.ddl", "");
    let o = ddl(&["extension", t.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["factual_pos"].as_array().unwrap().is_empty());
}

#[test]
fn reduct_drops_rules() {
    let t = file("red.ddl", MIX);
    let o = ddl(&["reduct", t.to_str().unwrap(), "~a"]);
    let out = stdout(&o);
    assert!(out.contains("r2:") && !out.contains("r3:"));
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "layered", "--n", "20", "--r", "30", "--m", "2", "--k", "2", "--seed", "9"];
    let a = stdout(&ddl(&args));
    assert_eq!(a, stdout(&ddl(&args)));
    let t = file("gen.ddl", &a);
    assert!(ddl(&["extension", t.to_str().unwrap(), "--sequential"]).status.success());
}

#[test]
fn bench_prints_csv() {
    let o = ddl(&["bench", "--family", "chain-ctd", "--sizes", "10,20", "--reps", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.starts_with("family,n,r,m,k,median_ms\nchain-ctd,10,"));
    assert!(stderr(&o).contains("log-log slope"));
}
