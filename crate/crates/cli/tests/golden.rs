//! Byte-for-byte output of the binary on fixed invocations, checked
//! against `tests/golden/*.json` and the schemas in `schemas/v1`.
//! Run with `K3LAT_UPDATE_GOLDEN=1` to rewrite the expected files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    schema: &'static str,
    code: i32,
}

const CASES: &[Case] = &[
    Case { name: "involution-9-9-1", args: &["involution", "classify", "9", "9", "1"], schema: "involution-classify", code: 0 },
    Case { name: "involution-10-6-1", args: &["involution", "classify", "10", "6", "1"], schema: "involution-classify", code: 0 },
    Case { name: "involution-13-1-1", args: &["involution", "classify", "13", "1", "1"], schema: "involution-classify", code: 0 },
    Case { name: "fixture-m14", args: &["lefschetz", "fixture", "m14"], schema: "lefschetz-fixture", code: 0 },
    Case { name: "fixture-m22", args: &["lefschetz", "fixture", "m22"], schema: "lefschetz-fixture", code: 0 },
    Case { name: "table-rank-5", args: &["table", "rank", "--m", "5"], schema: "table-rank", code: 0 },
    Case { name: "table-rank-7", args: &["table", "rank", "--m", "7"], schema: "table-rank", code: 0 },
    Case { name: "table-rank", args: &["table", "rank"], schema: "table-rank", code: 0 },
    Case { name: "info-t6", args: &["info", "U + U(3) + A2*2"], schema: "info", code: 0 },
    Case { name: "info-k7", args: &["info", "[ -4 1 ; 1 -2 ]"], schema: "info", code: 0 },
    Case { name: "info-s-10-6-0", args: &["info", "S(10,6,0)"], schema: "info", code: 0 },
    Case { name: "info-omega-perp-5", args: &["info", "OmegaPerp(5)"], schema: "info", code: 0 },
    Case { name: "embed-u-h5", args: &["embed", "U + H5", "U + U(5)*2"], schema: "embed", code: 0 },
    Case { name: "embed-t9", args: &["embed", "A2(-1)", "OmegaPerp(3)"], schema: "embed", code: 0 },
    Case { name: "embed-uu", args: &["embed", "U + U", "OmegaPerp(3)"], schema: "embed", code: 0 },
    Case { name: "overlattices-u2u2", args: &["overlattices", "U(2) + U(2)", "--index", "2"], schema: "overlattices", code: 0 },
    Case { name: "lefschetz-14", args: &["lefschetz", "--order", "14", "--types", "1,2,4,5", "--h", "0"], schema: "lefschetz", code: 0 },
    Case { name: "lefschetz-14-with-6", args: &["lefschetz", "--order", "14", "--types", "1,2,4,5,6", "--h", "0"], schema: "lefschetz", code: 0 },
    Case { name: "lefschetz-22", args: &["lefschetz", "--order", "22", "--types", "1,4,6,9", "--h", "0"], schema: "lefschetz", code: 0 },
    Case { name: "lefschetz-3-range", args: &["lefschetz", "--order", "3", "--types", "1", "--h-range", "-1,2"], schema: "lefschetz", code: 0 },
    Case { name: "order3-6-3", args: &["order3", "classify", "6", "3"], schema: "order3-classify", code: 0 },
    Case { name: "order3-8-6", args: &["order3", "classify", "8", "6"], schema: "order3-classify", code: 0 },
    Case { name: "family-3-6-3", args: &["family", "--order", "3", "--fixed", "(6, 3)"], schema: "family", code: 0 },
    Case { name: "family-7", args: &["family", "--order", "7", "--fixed", "isolated-points"], schema: "family", code: 0 },
    Case { name: "error-order3-4-0", args: &["order3", "classify", "4", "0"], schema: "error", code: 2 },
    Case { name: "error-involution-range", args: &["involution", "classify", "30", "1", "1"], schema: "error", code: 2 },
    Case { name: "error-parse", args: &["info", "U + "], schema: "error", code: 2 },
    Case { name: "error-family", args: &["family", "--order", "3", "--fixed", "1,1"], schema: "error", code: 2 },
    Case { name: "error-lefschetz-type", args: &["lefschetz", "--order", "14", "--types", "9", "--h", "0"], schema: "error", code: 2 },
    Case { name: "error-fraction-degenerate", args: &["lefschetz", "--order", "5", "--types", "1", "--h", "0", "--convention", "fraction"], schema: "error", code: 2 },
];

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn k3lat(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_k3lat"));
    cmd.args(args).env_remove("K3LAT_REGISTRY").env_remove("K3LAT_FIXTURES");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = crate_dir().join("schemas/v1").join(format!("{name}.json"));
    let src = std::fs::read_to_string(&path).unwrap();
    let value: Value = serde_json::from_str(&src).unwrap();
    jsonschema::validator_for(&value).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn assert_valid(schema_name: &str, value: &Value) {
    let v = schema(schema_name);
    let errors: Vec<String> = v.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{value}");
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("K3LAT_UPDATE_GOLDEN").is_some();
    let dir = crate_dir().join("tests/golden");
    for case in CASES {
        let mut args = case.args.to_vec();
        args.push("--json");
        let out = k3lat(&args, &[]);
        assert_eq!(out.status.code(), Some(case.code), "{}: {:?}", case.name, out);
        let stdout = String::from_utf8(out.stdout).unwrap();
        let value: Value = serde_json::from_str(&stdout).unwrap();
        assert_valid(case.schema, &value);
        let path = dir.join(format!("{}.json", case.name));
        if update {
            std::fs::write(&path, &stdout).unwrap();
        }
        let expected = std::fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        assert_eq!(stdout, expected, "{}", case.name);
    }
}

#[test]
fn stated_examples() {
    let json = |args: &[&str]| -> Value {
        let mut a = args.to_vec();
        a.push("--json");
        serde_json::from_slice(&k3lat(&a, &[]).stdout).unwrap()
    };
    assert_eq!(json(&["involution", "classify", "9", "9", "1"])["admits_symplectic"], true);
    assert_eq!(json(&["lefschetz", "fixture", "m14"])["solutions"], serde_json::json!([]));
    let row = json(&["table", "rank", "--m", "5"]);
    assert_eq!(
        (&row["rho"], &row["rankT"], &row["moduli"]),
        (&serde_json::json!([18]), &serde_json::json!([4]), &serde_json::json!([0]))
    );
}

#[test]
fn output_is_stable_across_runs() {
    for case in CASES.iter().take(6) {
        let mut args = case.args.to_vec();
        args.push("--json");
        assert_eq!(k3lat(&args, &[]).stdout, k3lat(&args, &[]).stdout, "{}", case.name);
    }
}

#[test]
fn negative_verdicts_exit_zero() {
    for args in [
        &["involution", "classify", "10", "6", "1"][..],
        &["order3", "classify", "8", "6"],
        &["embed", "U + H5", "U + U(5)*2"],
        &["embed", "<2>*3", "U + E8"],
        &["table", "rank", "--m", "8"],
        &["lefschetz", "fixture", "m22"],
    ] {
        assert_eq!(k3lat(args, &[]).status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &[][..],
        &["frobnicate"],
        &["info"],
        &["involution", "classify", "9", "9"],
        &["involution", "classify", "9", "9", "x"],
        &["lefschetz", "--order", "14", "--types", "1"],
        &["lefschetz", "--order", "14", "--h", "0", "--h-range", "0,1"],
        &["lefschetz", "--order", "14", "--h-range", "0"],
        &["lefschetz", "--order", "14", "--h", "0", "--convention", "other"],
        &["lefschetz", "fixture", "m15"],
        &["table", "rank", "--m"],
    ] {
        let out = k3lat(args, &[]);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(k3lat(&["--help"], &[]).status.code(), Some(0));
}

#[test]
fn plain_output_is_readable() {
    let out = k3lat(&["table", "rank"], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("5 | 18 | 4 | 0"));
    assert!(text.contains("7 | - | - | -"));
    let out = k3lat(&["involution", "classify", "10", "10", "0"], &[]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("fixed locus: empty"));
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("k3lat-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// A copy of the bundled registry with the m = 5 entry of the
/// `Ω` ranks changed, so the table output shows which file was read.
fn write_registry(dir: &Path, rank5: u64) -> PathBuf {
    let src = include_str!("../../core/data/registry.json");
    let mut v: Value = serde_json::from_str(src).unwrap();
    for o in v["omega_ranks"].as_array_mut().unwrap() {
        if o["m"] == 5 {
            o["rank"] = rank5.into();
        }
    }
    let path = dir.join(format!("registry-{rank5}.json"));
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
fn registry_flag_wins_over_environment() {
    let dir = scratch_dir("registry");
    let from_env = write_registry(&dir, 13);
    let from_flag = write_registry(&dir, 16);
    let rho = |out: Output| -> Value {
        assert_eq!(out.status.code(), Some(0), "{out:?}");
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["rho"].clone()
    };
    let args = ["table", "rank", "--m", "5", "--json"];
    assert_eq!(rho(k3lat(&args, &[])), serde_json::json!([18]));
    assert_eq!(rho(k3lat(&args, &[("K3LAT_REGISTRY", &from_env)])), serde_json::json!([14, 18]));
    let flag = from_flag.to_str().unwrap();
    let mut with_flag = args.to_vec();
    with_flag.extend(["--registry", flag]);
    assert_eq!(rho(k3lat(&with_flag, &[("K3LAT_REGISTRY", &from_env)])), serde_json::json!([18]));

    let missing = dir.join("missing.json");
    let out = k3lat(&args, &[("K3LAT_REGISTRY", &missing)]);
    assert_eq!(out.status.code(), Some(2));
    assert_valid("error", &serde_json::from_slice(&out.stdout).unwrap());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn fixture_flag_wins_over_environment() {
    let dir = scratch_dir("fixtures");
    let (env_dir, flag_dir) = (dir.join("env"), dir.join("flag"));
    std::fs::create_dir_all(&env_dir).unwrap();
    std::fs::create_dir_all(&flag_dir).unwrap();
    // x = 1 solves the single-row system in the env copy.
    std::fs::write(env_dir.join("m14.json"), r#"{"unknowns":["x"],"rows":[[1,1]]}"#).unwrap();
    std::fs::write(flag_dir.join("m14.json"), include_str!("../../core/data/lefschetz/m14.json")).unwrap();
    let sols = |out: Output| -> Value {
        assert_eq!(out.status.code(), Some(0), "{out:?}");
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["solutions"].clone()
    };
    let args = ["lefschetz", "fixture", "m14", "--json"];
    assert_eq!(sols(k3lat(&args, &[("K3LAT_FIXTURES", &env_dir)])), serde_json::json!([[1]]));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--fixtures", flag_dir.to_str().unwrap()]);
    assert_eq!(sols(k3lat(&with_flag, &[("K3LAT_FIXTURES", &env_dir)])), serde_json::json!([]));

    std::fs::write(env_dir.join("m22.json"), r#"{"unknowns":["x"],"rows":[[1]]}"#).unwrap();
    let out = k3lat(&["lefschetz", "fixture", "m22", "--json"], &[("K3LAT_FIXTURES", &env_dir)]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn schemas_are_versioned_and_complete() {
    let dir = crate_dir().join("schemas").join(format!("v{}", k3lat::SCHEMA_VERSION));
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let mut used: Vec<String> = CASES.iter().map(|c| format!("{}.json", c.schema)).collect();
    used.sort();
    used.dedup();
    assert_eq!(names, used);
}
