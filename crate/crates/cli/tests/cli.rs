//! End-to-end behaviour of the command line: formats, exit codes, seeding
//! and error reporting.

use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("thompson-renorm").chain(args.iter().copied());
    let code = thompson_renorm_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thompson-renorm"))
}

#[test]
fn products_and_inverses() {
    let v = json(&["group", "mul", "((..).)|(.(..))", "(.(..))|((..).)"]);
    assert_eq!(v["product"], ".|.");
    assert_eq!(v["is_identity"], true);
    let v = json(&["group", "inv", "((..).)|(.(..))"]);
    assert_eq!(v["inverse"], "(.(..))|((..).)");
    let v = json(&["group", "reduce", "((..)(..))|((..)(..))"]);
    assert_eq!(v["reduced"], ".|.");
}

#[test]
fn mixed_kinds_are_rejected() {
    let (code, out, err) = run(&["group", "mul", "((..).)|(.(..))", "((..)(..))|((..)(..))@1"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("cannot multiply"), "{err}");
    let v = json(&["group", "mul", "((..).)|(.(..))@0", "((..)(..))|((..)(..))@1"]);
    assert_eq!(v["kind"], "T");
}

#[test]
fn rotation_reports_its_order() {
    for (a, n, order) in [("1", "3", 8), ("2", "3", 4), ("0", "2", 1)] {
        let v = json(&["group", "rotation", "--a", a, "--n", n]);
        assert_eq!(v["order"], order, "a = {a}, n = {n}");
    }
}

#[test]
fn coefficient_report() {
    let v = json(&["coeff", "--model", "edge3", "((..).)|(.(..))"]);
    assert_eq!(v["coefficient"], "1/2");
    assert_eq!((v["vertices"].as_u64(), v["edges"].as_u64(), v["faces"].as_u64()), (Some(4), Some(6), Some(4)));
    let v = json(&["coeff", "--model", "chromatic", "--d", "3", "((..).)|(.(..))"]);
    assert_eq!(v["coefficient"], "1/2");
    assert_eq!(v["config"]["d"], "3");
    let v = json(&["coeff", "--model", "face:4", "((..).)|(.(..))"]);
    assert_eq!(v["raw"], "24");
}

#[test]
fn certify_json_and_csv() {
    let v = json(&["renorm", "certify", "--d", "3"]);
    assert_eq!(v["certificate"]["n"], 2);
    assert_eq!(v["certificate"]["K"], "7/32");
    assert_eq!(v["M"], "15/4");
    assert_eq!(v["config"]["nmax"], 64);
    let (code, out, _) = run(&["renorm", "certify", "--d", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# command: renorm certify"));
    assert!(lines[1].contains("d=3") && lines[1].contains("nmax=64"));
    assert_eq!(lines[2], "n,l1,MK");
    assert_eq!(lines[4], "2,7/32,105/128");
}

#[test]
fn failures_are_reported_not_errors() {
    let v = json(&["renorm", "certify", "--m", "6", "--variant", "minus"]);
    assert_eq!(v["certificate"], Value::Null);
    assert_eq!(v["failure"]["reason"], "not-reached");
    assert_eq!(v["d"], "2");
    let v = json(&["renorm", "certify", "--m", "5", "--variant", "minus", "--digits", "30"]);
    assert_eq!(v["failure"]["reason"], "bound-invalid-below-2");
    assert_eq!(v["config"]["digits"], 30);
}

#[test]
fn irrational_parameters_carry_their_precision() {
    let v = json(&["renorm", "certify", "--m", "7", "--variant", "minus", "--digits", "20"]);
    assert_eq!(v["certificate"]["n"], 4);
    assert_eq!(v["digits"], 20);
    assert!(v["d"].as_str().unwrap().starts_with("2.2469796037"));
    let enclosure = v["d_enclosure"].as_array().unwrap();
    assert!(enclosure[0].as_str().unwrap() <= enclosure[1].as_str().unwrap());
}

#[test]
fn scan_rows_and_verdict() {
    let v = json(&["renorm", "scan", "--variant", "minus", "--m-from", "5", "--m-to", "9"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let status: Vec<&str> = rows.iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["failed", "failed", "certified", "certified", "certified"]);
    assert!(v["verdict"].as_str().unwrap().starts_with("verdict:"));
}

#[test]
fn iterate_and_profile() {
    let v = json(&["renorm", "iterate", "--d", "3", "--steps", "2"]);
    let steps: Vec<&str> = v["steps"].as_array().unwrap().iter().map(|s| s["l1"].as_str().unwrap()).collect();
    assert_eq!(steps, ["3/4", "7/32"]);
    let v = json(&["renorm", "iterate", "--d", "3", "--steps", "1", "--start", "b3"]);
    // 𝓡(b₃) = b₁
    assert_eq!(v["steps"][0]["l1"], "1");
    let v = json(&["renorm", "profile", "--d", "3", "--steps", "4"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["rows"][2]["bound_holds"], true);
}

#[test]
fn squares_and_bound() {
    let v = json(&["renorm", "squares", "--d", "3", "--samples", "20"]);
    let agrees: Vec<(String, bool)> = v["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| (l["line"].as_str().unwrap().to_string(), l["agrees"].as_bool().unwrap()))
        .collect();
    assert!(agrees.contains(&("b2 corrected".into(), true)));
    assert!(agrees.contains(&("b3 printed".into(), false)));
    let v = json(&["renorm", "bound", "--d", "3", "--samples", "200"]);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn trees() {
    let v = json(&["tree", "enumerate", "--leaves", "4"]);
    assert_eq!(v["count"], 5);
    let v = json(&["tree", "partition", "((..).)"]);
    assert_eq!(v["breakpoints"], serde_json::json!(["0", "1/4", "1/2", "1"]));
    let v = json(&["tree", "refine", "((..).)", "(.(..))"]);
    assert_eq!(v["union"], "((..)(..))");
}

#[test]
fn plmap_breakpoints() {
    let v = json(&["plmap", "((..).)|(.(..))"]);
    assert_eq!(v["slope_log2"], serde_json::json!([-1, 0, 1]));
    let (code, _, err) = run(&["plmap", "((..)(..))|((..)(..))@1"]);
    assert_eq!(code, 2);
    assert!(err.contains("element of F"));
}

#[test]
fn errors_exit_with_two() {
    for args in [
        vec!["group", "reduce", "(.."],
        vec!["renorm", "certify", "--d", "1"],
        vec!["renorm", "certify"],
        vec!["renorm", "certify", "--d", "x"],
        vec!["coeff", "--model", "bogus", ".|."],
        vec!["tree", "enumerate", "--leaves", "0"],
        vec!["no-such-command"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("renorm"));
    let (code, out, _) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("thompson-renorm"));
}

#[test]
fn timing_is_opt_in() {
    let v = json(&["renorm", "certify", "--d", "3"]);
    assert!(v.get("timing").is_none());
    let v = json(&["renorm", "certify", "--d", "3", "--timing"]);
    assert!(v["timing"]["wall_us"].is_string());
}

#[test]
fn seeding_is_reproducible() {
    let a = binary().args(["group", "random", "--count", "3", "--seed", "5"]).output().unwrap();
    let b = binary().args(["group", "random", "--count", "3"]).env("THOMPSON_RENORM_SEED", "5").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = binary().args(["group", "random", "--count", "3", "--seed", "6"]).output().unwrap();
    assert_ne!(a.stdout, c.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 5);
    let bad = binary().args(["group", "random"]).env("THOMPSON_RENORM_SEED", "nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn default_seed_is_fixed() {
    let a = binary().args(["group", "random", "--kind", "v"]).env_remove("THOMPSON_RENORM_SEED").output().unwrap();
    let b = binary().args(["group", "random", "--kind", "v"]).env_remove("THOMPSON_RENORM_SEED").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], thompson_renorm_cli::DEFAULT_SEED);
}

#[test]
fn printed_literals_reparse() {
    use thompson_renorm::thompson::GroupElement;
    for kind in ["f", "t", "v"] {
        let v = json(&["group", "random", "--kind", kind, "--count", "25", "--leaves", "7", "--seed", "11"]);
        for lit in v["elements"].as_array().unwrap() {
            let lit = lit.as_str().unwrap();
            let g: GroupElement = lit.parse().unwrap();
            assert_eq!(g.to_string(), lit);
            let inv = json(&["group", "inv", lit]);
            let back: GroupElement = inv["inverse"].as_str().unwrap().parse().unwrap();
            assert_eq!(back, g.inverse());
        }
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["renorm", "scan", "--variant", "minus", "--m-from", "6", "--m-to", "6"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0]["d"].as_str(), rows[0]["status"].as_str()), (Some("2"), Some("failed")));
}

#[test]
fn unknown_flags_are_rejected() {
    let (code, _, err) = run(&["renorm", "certify", "--d", "3", "--frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("--frobnicate"));
}
