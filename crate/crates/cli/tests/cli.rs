use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lnd-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_input(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn assert_error(o: &Output, code: i32, kind: &str) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err:?}");
    assert!(err.starts_with(&format!("error[{kind}]: ")), "{err:?}");
    assert!(o.stdout.is_empty());
}

#[test]
fn kuroda_report() {
    let o = run(&["kuroda", "--example", "thm52data", "--param", "n=4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("eta = 1/2"), "{text}");
    assert!(text.contains("(1/2, 0, 1/2)") && text.contains("(1/2, 1/2, 0)"), "{text}");
    assert!(text.contains("criterion satisfied"));
}

#[test]
fn ideal_check_verdicts() {
    let yes = run(&["delta-ideal-check", "--example", "ex33", "--ideal", "x^2, x*y"]);
    assert_eq!(stdout(&yes).trim(), "true");
    let no = run(&["delta-ideal-check", "--example", "ex33", "--ideal", "x^2, y"]);
    assert!(no.status.success());
    let text = stdout(&no);
    assert!(text.starts_with("false") && text.contains("delta(y) = x"), "{text}");
}

#[test]
fn json_envelope() {
    let o = run(&[
        "kernel",
        "--example",
        "roberts",
        "--param",
        "n=3",
        "--param",
        "t=2",
        "--max-weight",
        "10",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "kernel");
    assert_eq!(v["source"]["example"], "roberts");
    assert_eq!(v["source"]["params"]["n"], 3);
    let gens = v["result"]["generators"].as_array().unwrap();
    assert!(gens.iter().any(|g| g["element"] == "-x2^2*x3^2*y1 + x1*y4"), "{gens:?}");
}

#[test]
fn exit_codes() {
    assert_error(&run(&["nu", "--example", "ex33", "x^"]), 2, "parse");
    assert_error(&run(&["kernel", "--bogus"]), 2, "usage");
    assert_error(&run(&["kernel", "--input", "/nonexistent/file"]), 2, "io");
    let o = run(&["slice-kernel", "--example", "ex33", "--slice", "x"]);
    assert_error(&o, 1, "domain");
    assert!(stderr(&o).contains("not a slice"));
    let o = run(&["kernel", "--example", "roberts", "--param", "n=2", "--param", "t=2"]);
    assert_error(&o, 1, "domain");
    assert!(stderr(&o).contains("n >= 3"), "{}", stderr(&o));
    assert!(run(&["--help"]).status.success());
}

#[test]
fn input_files() {
    let path = write_input(
        "toy.lnd",
        "ring B = Q[x, y, z]\nderivation D on B { y -> x; z -> y }\nmodule M on D { basis e1, e2; d e2 -> x*e1; }\n",
    );
    let p = path.to_str().unwrap();
    let o = run(&["apply", "--input", p, "y^2 - 2*x*z"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = run(&["apply", "--input", p, "--module", "e2", "--times", "2"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = run(&["check-lnd", "--input", p]);
    assert!(stdout(&o).contains("x, y, z"), "{}", stdout(&o));

    let bad = write_input("bad.lnd", "ring B = Q[x, y]\nderivation D on B { y -> x +; }\n");
    assert_error(&run(&["kernel", "--input", bad.to_str().unwrap()]), 2, "parse");
}

#[test]
fn output_ignores_jobs() {
    let args = ["module-kernel", "--example", "thm52", "--param", "n=4", "--max-weight", "6", "--show-basis"];
    let a = run(&[&args[..], &["--jobs", "1"]].concat());
    let b = run(&[&args[..], &["--jobs", "3"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
