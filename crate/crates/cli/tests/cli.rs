use std::process::{Command, Output};

use serde_json::Value;

fn reflectice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reflectice")).args(args).env_remove("REFLECTICE_SEED").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const ONE_SITE: &str = r#"{"t":"3","z":["2"]}"#;

#[test]
fn one_site_wavefunction_and_domain_wall() {
    let v = json(&reflectice(&["compute-wavefunction", "--M", "1", "--positions", "1", "--params", ONE_SITE]));
    assert_eq!(v["value"], "13/2");
    assert_eq!(v["schema"], "1");
    let v = json(&reflectice(&["compute-dwbp", "--M", "1", "--params", ONE_SITE]));
    assert_eq!(v["value"], "13/2");
}

#[test]
fn symplectic_character() {
    let v = json(&reflectice(&["compute-sp", "--lambda", "1", "--params", r#"{"z":["2"]}"#]));
    assert_eq!(v["value"], "5/2");
}

#[test]
fn domain_wall_is_the_full_wavefunction() {
    let params = r#"{"u":"2/3","w":["3","5/2","-4"],"alpha":["1","2","1/2","3"],"gamma":["1/3","-1","2","5"]}"#;
    let full = json(&reflectice(&["compute-wavefunction", "--kind", "II", "--M", "3", "--positions", "1,2,3", "--params", params]));
    let dwbp = json(&reflectice(&["compute-dwbp", "--kind", "II", "--M", "3", "--params", params]));
    assert_eq!(full["value"], dwbp["value"]);
}

#[test]
fn file_parameters_match_inline() {
    let path = std::env::temp_dir().join(format!("reflectice-cli-{}.json", std::process::id()));
    std::fs::write(&path, ONE_SITE).unwrap();
    let v = json(&reflectice(&["compute-dual", "--M", "1", "--positions", "1", "--params", path.to_str().unwrap()]));
    let w = json(&reflectice(&["compute-dual", "--M", "1", "--positions", "1", "--params", ONE_SITE]));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["value"], w["value"]);
}

#[test]
fn exit_codes() {
    let wrong_kind = reflectice(&["compute-wavefunction", "--kind", "II", "--M", "1", "--positions", "1", "--params", ONE_SITE]);
    assert_eq!(wrong_kind.status.code(), Some(2));
    let unordered = reflectice(&["compute-wavefunction", "--M", "2", "--positions", "2,1", "--params", r#"{"t":"3","z":["2"]}"#]);
    assert_eq!(unordered.status.code(), Some(3));
    assert_eq!(reflectice(&["verify"]).status.code(), Some(2));
}

#[test]
fn verify_small_budget_and_seed_from_environment() {
    let args = ["verify", "--max-M", "2", "--max-N", "1"];
    let flag = reflectice(&[&args[..], &["--seed", "7"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_reflectice")).args(args).env("REFLECTICE_SEED", "7").output().unwrap();
    let v = json(&flag);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["seed"], 7);
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn mutated_verify_exits_one() {
    let out = reflectice(&["verify", "--seed", "1", "--max-M", "3", "--mutate", "l-gamma:2:2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], false);
}

#[test]
fn catalogue_is_listed() {
    let v = json(&reflectice(&["list-identities"]));
    let ids: Vec<&str> = v["identities"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    for id in ["b-exchange/I", "dwbp-factorization/II", "main-correspondence/I/dual", "local/yang-baxter"] {
        assert!(ids.contains(&id), "{id} missing from {ids:?}");
    }
}
