use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plshadow")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn linking_verdicts() {
    let o = run(&["linking", "--map", "tent:s=2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "verdict"), Some("yes-certified"));

    let o = run(&["linking", "--map", "tent:s=golden"]);
    assert_eq!(value(&stdout(&o), "verdict"), Some("yes-certified"));

    let o = run(&["linking", "--map", "double-tent"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "verdict"), Some("no"));
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["linking", "--map", "bogus"][..],
        &["linking", "--map", "tent:s=7"],
        &["modulus", "--map", "tent:s=2", "--eps", "1/10"],
        &["verify", "/nonexistent/file"],
        &["--mode", "exact", "circle-demo", "--delta", "1/10"],
        &["omega", "--point", "1:(11)"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"), "{args:?}");
    }
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["slimit-trace", "--map", "tent:s=2", "--seed", "3", "--len", "30"][..],
        &["sft-shadow", "--ladder-k", "1", "--seed", "4"],
        &["modulus", "--map", "tent:s=2", "--eps", "1/10", "--seed", "5", "--trials", "4"],
        &["figure-data", "--figure", "1", "--samples", "50"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn slimit_certificates_round_trip() {
    let file = scratch("slimit.txt");
    let o = run(&["slimit-trace", "--map", "tent:s=2", "--seed", "3", "--len", "30", "--out", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let v = run(&["verify", path(&file)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(value(&stdout(&v), "kind"), Some("slimit-trace"));
    assert_eq!(value(&stdout(&v), "valid"), Some("true"));

    // moving z breaks the certificate
    let text = fs::read_to_string(&file).unwrap();
    let z = text.lines().find_map(|l| l.strip_prefix("z: ")).unwrap().to_string();
    let bad = scratch("slimit_bad.txt");
    fs::write(&bad, text.replace(&format!("z: {z}"), "z: 1/7")).unwrap();
    let v = run(&["verify", path(&bad)]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(value(&stdout(&v), "valid"), Some("false"));
}

#[test]
fn chains_round_trip() {
    let file = scratch("chain.txt");
    let o = run(&["chain", "--map", "tent:s=2", "--from", "1/10", "--to", "9/10", "--delta", "1/8", "--out", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "found"), Some("true"));
    let v = run(&["verify", path(&file)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(value(&stdout(&v), "kind"), Some("pseudo-orbit"));
    assert_eq!(value(&stdout(&v), "valid"), Some("true"));
}

#[test]
fn sft_certificates_round_trip() {
    let file = scratch("sft.txt");
    let o = run(&["sft-shadow", "--ladder-k", "1", "--seed", "4", "--out", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "in_space"), Some("true"));
    let v = run(&["verify", path(&file)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(value(&stdout(&v), "valid"), Some("true"));

    let text = fs::read_to_string(&file).unwrap();
    let bad = scratch("sft_bad.txt");
    let z = text.lines().find(|l| l.starts_with("z: ")).unwrap();
    fs::write(&bad, text.replace(z, "z: (1)")).unwrap();
    let v = run(&["verify", path(&bad)]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(value(&stdout(&v), "valid"), Some("false"));
}

#[test]
fn shadow_set_from_file() {
    let file = scratch("po.txt");
    fs::write(&file, "map: tent:s=2\ndelta: 1/100\n1/3\n2/3\n2/3\n").unwrap();
    let o = run(&["shadow-set", "--po", path(&file), "--eps", "1/10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // 1/3 +- (1/10)/4, since deviations double twice along the orbit
    assert_eq!(value(&stdout(&o), "set"), Some("[[37/120,43/120]]"));
    assert_eq!(value(&stdout(&o), "measure"), Some("1/20"));
}

#[test]
fn omega_and_circle_demo() {
    let o = run(&["omega", "--point", "inf:0001(0)", "--point", "1:(100)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("omega: inf:(0)"), "{out}");
    assert!(out.contains("omega_size: 3"), "{out}");

    let o = run(&["circle-demo", "--delta", "1/10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "pseudo_orbit"), Some("true"));
}
