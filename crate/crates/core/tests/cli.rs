use std::process::Command;

use gaussian_walks::cli::run;
use gaussian_walks::construction::CertificateDocument;

fn gwalk(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["gwalk"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn member_lines() {
    let (code, out, _) = gwalk(&["member", "20", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out, "20 7 k=3 r=-1 member=true k_minus_abs_r=2\n");
    let (_, out, _) = gwalk(&["member", "20", "8"]);
    assert!(out.contains("member=false k_minus_abs_r=-1"));
    let (_, out, _) = gwalk(&["member", "1", "1"]);
    assert!(out.contains("member=true"));
}

#[test]
fn member_json() {
    let (_, out, _) = gwalk(&["member", "20", "9", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["r"], 2);
    assert_eq!(v["member"], false);
}

#[test]
fn table_csv() {
    let (code, out, _) = gwalk(&["table", "20", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "d,k,r,member,k_minus_abs_r");
    assert_eq!(lines.len(), 21);
    assert_eq!(lines[7], "7,3,-1,true,2");
    assert_eq!(lines[10], "10,2,0,true,2");
    let (_, out, _) = gwalk(&["table", "1", "--format", "csv"]);
    assert_eq!(out.lines().count(), 2);
    let (_, out, _) = gwalk(&["table", "12", "--format", "csv"]);
    let members: Vec<&str> = out
        .lines()
        .skip(1)
        .filter(|l| l.contains(",true,"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(members, ["1", "2", "3", "4", "6", "12"]);
}

#[test]
fn set_and_card() {
    assert_eq!(gwalk(&["set", "20"]).1, "{1,2,3,4,5,6,7,10,20}\n");
    assert_eq!(gwalk(&["card", "20"]).1, "6 + 4 - 2 + 1 = 9, cross-check ok\n");
    assert_eq!(gwalk(&["card", "1"]).1, "1 + 0 - 0 + 0 = 1, cross-check ok\n");
    let (_, out, _) = gwalk(&["card", "20", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total"], 9);
    assert_eq!(v["cross_check"], "ok");
}

#[test]
fn walk_outputs() {
    let (code, out, _) = gwalk(&["walk", "4", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: CertificateDocument = serde_json::from_str(&out).unwrap();
    let cert = doc.into_certificate().unwrap();
    assert_eq!(cert.walk.len(), 18);
    let (code, _, err) = gwalk(&["walk", "20", "7"]);
    assert_eq!(code, 4);
    assert!(err.contains("k = 3 ≥ |r| + 1 = 2"));
    let (code, out, _) = gwalk(&["walk", "6", "4", "--format", "ascii"]);
    assert_eq!(code, 0);
    assert!(out.contains('A') && out.contains('B'));
    let (_, out, _) = gwalk(&["walk", "7", "5", "--format", "svg"]);
    assert!(out.starts_with("<svg") && out.contains("anchor-a"));
}

#[test]
fn oracle_outputs() {
    let (code, out, _) = gwalk(&["oracle", "3", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains(": none") && out.ends_with("AGREE\n"));
    let (code, out, _) = gwalk(&["oracle", "2", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains(": found") && out.contains("path: (0,0)") && out.ends_with("AGREE\n"));
    let (code, out, _) = gwalk(&["oracle", "5", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], "found");
    assert_eq!(v["agreement"], "AGREE");
    let (code, out, _) = gwalk(&["oracle", "20", "9", "--budget", "1000"]);
    assert_eq!(code, 5);
    assert!(out.contains("budget-exceeded"));
    let (code, _, _) = gwalk(&["oracle", "5", "4", "--box", "1:6:-1:1"]);
    assert_eq!(code, 2);
    let (code, out, _) = gwalk(&["oracle", "5", "4", "--box=-2:6:-1:1"]);
    assert_eq!(code, 0);
    assert!(out.contains("box=-2:6:-1:1"));
}

#[test]
fn classify_ranges() {
    let (_, out, _) = gwalk(&["classify", "q2", "1..20"]);
    assert!(out.ends_with("members: {1,2,4,6,12}\n"));
    let (_, out, _) = gwalk(&["classify", "q4", "1..20"]);
    assert!(out.ends_with("members: {1,2,3,4,5,6,7,11,12,13,17,19}\n"));
    let (code, out, _) = gwalk(&["classify", "q5", "--k", "2", "1..40"]);
    assert_eq!(code, 0);
    assert!(out.contains("n=10 K=2 case=1 verdict=member avoids 6\n"));
    assert!(out.contains("n=12 K=2 case=3 "));
    let (code, _, err) = gwalk(&["classify", "q5", "1..4"]);
    assert_eq!(code, 2);
    assert!(err.contains("--k"));
    let (_, out, _) = gwalk(&["classify", "q4", "12", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reports"][0]["witness"]["avoids"], 5);
}

#[test]
fn fixtures_pass() {
    let (code, out, _) = gwalk(&["fixtures"]);
    assert_eq!(code, 0);
    assert!(out.contains("S1 (25 points): {1,2,3,4,5,6,7,8,9,10,20} ok"));
    assert!(out.contains("S2 (33 points)"));
    assert!(out.contains("intersection: {1,2,3,4,5,6,7,10,20} ok"));
}

#[test]
fn usage_errors() {
    assert_eq!(gwalk(&["member", "0", "3"]).0, 2);
    assert_eq!(gwalk(&["member", "-4", "3"]).0, 2);
    assert_eq!(gwalk(&["member", "x", "3"]).0, 2);
    assert_eq!(gwalk(&["set", "5", "--format", "svg"]).0, 2);
    assert_eq!(gwalk(&["classify", "q4", "9..3"]).0, 2);
    assert_eq!(gwalk(&["frobnicate"]).0, 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("gwalk-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("set.txt");
    let (code, out, _) = gwalk(&["set", "12", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "{1,2,3,4,6,12}\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn binary_exit_codes_and_env_budget() {
    let bin = env!("CARGO_BIN_EXE_gwalk");
    let status = Command::new(bin).args(["walk", "20", "7"]).output().unwrap();
    assert_eq!(status.status.code(), Some(4));
    let status = Command::new(bin)
        .args(["oracle", "12", "5"])
        .env("GW_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(5));
    let out = Command::new(bin).args(["member", "20", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "20 7 k=3 r=-1 member=true k_minus_abs_r=2\n");
}
