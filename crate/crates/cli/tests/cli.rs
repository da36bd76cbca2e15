use std::process::{Command, Output};

use serde_json::Value;

fn vcstring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcstring"))
        .args(args)
        .env_remove("VCSTRING_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = vcstring(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn dim_reports_all_three_dimensions() {
    let v = json(&["dim", "011"]);
    let r = &v["results"][0];
    assert_eq!((r["vcdim"].as_u64(), r["swdim"].as_u64(), r["mdim"].as_u64()), (Some(2), Some(1), Some(1)));
    for key in ["command", "inputs", "version", "wall_time_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn dim_csv_has_header_and_row() {
    let out = vcstring(&["dim", "011", "01100", "--csv"]);
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("input,len,vcdim,swdim,mdim"));
    assert!(lines[2].starts_with("01100,5,2,2,2"));
}

#[test]
fn generated_prefixes_are_lower_bounds() {
    let v = json(&["dim", "--gen", "thue-morse", "--len", "32"]);
    assert_eq!(v["results"][0]["lower_bound"], Value::Bool(true));
    let out = vcstring(&["dim", "--gen", "cantor", "--len", "27", "--csv"]);
    assert!(stdout(&out).lines().nth(1).unwrap().contains(",≥"));
}

#[test]
fn echoed_input_parses_back_to_the_same_word() {
    let long = "0110".repeat(40);
    let first = json(&["dim", &long]);
    let echoed = first["inputs"]["words"][0].as_str().unwrap().to_string();
    assert_ne!(echoed, long, "long words are run-length encoded");
    let second = json(&["dim", &echoed]);
    assert_eq!(first["results"], second["results"]);
    let raw = json(&["--raw", "dim", &long]);
    assert_eq!(raw["inputs"]["words"][0].as_str(), Some(long.as_str()));
}

#[test]
fn empty_word_is_a_usage_error() {
    assert_eq!(vcstring(&["dim", ""]).status.code(), Some(2));
    assert_eq!(vcstring(&["dim", "01x"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = vcstring(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thue_morse_prefix() {
    let out = vcstring(&["gen", "thue-morse", "--len", "16"]);
    assert_eq!(stdout(&out).trim(), "0110100110010110");
}

#[test]
fn packed_output_puts_symbol_i_in_bit_i_mod_8() {
    let dir = std::env::temp_dir().join(format!("vcstring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tm.bin");
    let out = vcstring(&["gen", "thue-morse", "--len", "16", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    // 01101001 10010110 read from bit 0 upwards
    assert_eq!(std::fs::read(&path).unwrap(), vec![0x96, 0x69]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn three_primes_of_length_seven() {
    let out = vcstring(&["scan-primes", "--d", "3", "--max-len", "7", "--classify"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,len,d,form_tag"));
    let rows: Vec<_> = lines.collect();
    assert!(rows.contains(&"0010111,7,3,alternating(k=1)"), "{rows:?}");
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("7")));
}

#[test]
fn suites_pass_with_exit_zero() {
    for args in [
        &["verify", "t2prime", "--max-len", "12"][..],
        &["verify", "c1", "--random", "200"],
        &["verify", "cantor-complexity", "--k", "4"],
        &["verify", "sauer", "--random", "200"],
    ] {
        let out = vcstring(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}\n{}", stdout(&out));
        assert!(!stdout(&out).contains("FAIL"));
    }
}

#[test]
fn suite_json_lists_rows() {
    let v = json(&["verify", "c1", "--random", "50", "--json"]);
    assert_eq!(v["results"]["pass"], Value::Bool(true));
    assert!(v["results"]["rows"].as_array().unwrap().len() >= 3);
}

#[test]
fn failing_family_exits_one() {
    // ones-block is prime only under its constraint, so an unconstrained range has counterexamples
    let out = vcstring(&["verify-family", "--family", "ones-block", "--params", "k=1..2,l=0..4,m=1..1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = vcstring(&["verify-family", "--family", "alternating", "--params", "k=1..4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sofic_witness_verifies() {
    let v = json(&["sofic-witness", "--d", "2", "--pairs", "2"]);
    assert_eq!(v["results"]["a"], serde_json::json!([1, 10]));
}

#[test]
fn cover_csv() {
    let out = vcstring(&["reals", "cover", "--d", "1", "--depth", "8"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,n,lo,hi"));
    // prefixes of dimension at most 1: n(n+1)/2 + 1
    assert_eq!(lines.count(), 37);
}

#[test]
fn rational_profile_settles() {
    let v = json(&["reals", "profile", "--frac", "1/3"]);
    assert_eq!(v["results"]["plateau_holds"], Value::Bool(true));
}
