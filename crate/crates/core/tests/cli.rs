use std::process::{Command, Output};

fn hartogs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hartogs")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eval_example() {
    let out = hartogs(&["eval", "--spec", "fat:2", "--z", "0.1,0", "0.5,0", "--w", "0.2,0", "0.4,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "eval");
    assert!(v["results"]["value"]["re"].as_f64().unwrap() > 0.0);
    assert_eq!(v["results"]["near_singular"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("wall time"));
}

#[test]
fn identities_pass() {
    let out = hartogs(&["identities", "--kmax", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"]["checks"].as_array().unwrap().len(), 49);
}

#[test]
fn bell_check_exit_codes() {
    let ok = hartogs(&["bell-check", "--k", "4", "--pairs", "200", "--seed", "1", "--tol", "1e-9"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(json(&ok)["results"]["max_residual"].as_f64().unwrap() <= 1e-9);
    let strict = hartogs(&["bell-check", "--k", "4", "--pairs", "200", "--seed", "1", "--tol", "0"]);
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["volume", "--spec", "thin:2", "--n", "200000", "--seed", "5"][..],
        &["series-compare", "--spec", "thin:3", "--pairs", "5", "--seed", "2"][..],
        &["ramadanov", "--kmax", "15"][..],
        &["zero-scan", "--k", "4", "--s-steps", "10"][..],
        &["asymptotics", "--spec", "fat:3"][..],
    ] {
        let (a, b) = (hartogs(args), hartogs(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn report_to_file() {
    let dir = std::env::temp_dir().join(format!("hartogs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lqk.json");
    let out = hartogs(&["lqk", "--kmax", "6", "--thin-pairs", "1000", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"]["witnesses"].as_array().unwrap().len(), 5);
    assert_eq!(v["params"]["kmax"], 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_name_the_problem() {
    let out = hartogs(&["eval", "--spec", "fat:2", "--z", "0.1,0", "--w", "0.2,0", "0.4,0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hartogs(&["reproduce", "--spec", "fat:2", "--f", "z1^0*z2^-2", "--z", "0.1,0", "0.5,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not square integrable"));
    let out = hartogs(&["asymptotics", "--spec", "bidisc"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn biholo_thin_candidates() {
    let good = hartogs(&["biholo-check", "--map", "shear-iter:2", "--thin-candidate", "one-minus-t", "--pairs", "100"]);
    assert_eq!(good.status.code(), Some(0));
    let bad = hartogs(&["biholo-check", "--map", "shear-iter:2", "--thin-candidate", "one-minus-s", "--pairs", "100"]);
    assert_eq!(bad.status.code(), Some(2));
}
