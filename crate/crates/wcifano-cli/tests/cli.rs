use std::path::PathBuf;
use std::process::{Command, Output};

fn db_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/families.json")
}

fn run_with(db: &std::path::Path, args: &[&str]) -> (i32, String, String) {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_wcifano"))
        .env_remove("WCIFANO_DB")
        .arg("--db")
        .arg(db)
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_with(&db_path(), args)
}

fn temp_db(name: &str, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(db_path()).unwrap()).unwrap();
    edit(&mut v);
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

fn family<'a>(v: &'a mut serde_json::Value, no: u64) -> &'a mut serde_json::Value {
    v["families"].as_array_mut().unwrap().iter_mut().find(|f| f["no"] == no).unwrap()
}

#[test]
fn tables_exit_codes() {
    let (code, out, _) = run(&["tables", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("Table 1: 8 rows"));
    assert!(out.contains("all recomputed cells match"));
    for t in ["3", "4"] {
        assert_eq!(run(&["tables", t]).0, 0);
    }
    // The printed Table 2 carries known basket and class disagreements.
    let (code, out, err) = run(&["tables", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("Table 2: 21 rows"));
    assert!(out.contains("family 67: computed"));
    assert!(err.contains("differ from the database"));
    assert_eq!(run(&["tables", "5"]).0, 2);
}

#[test]
fn tables_report_an_altered_cell() {
    let path = temp_db("a3_42.json", |v| family(v, 42)["a3"] = "1/7".into());
    let (code, out, _) = run_with(&path, &["tables", "1"]);
    assert_eq!(code, 1);
    assert!(out.contains("family 42: computed 1/6, recorded 1/7"), "{out}");
}

#[test]
fn certify_all_and_json() {
    let json = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("certs.json");
    let (code, out, _) = run(&["certify", "--all", "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("summary: 11 lct_equals_1, 18 lct_on_Xcirc_equals_1, 0 incomplete, 1 anomalies flagged, 0 mismatches"));
    let certs: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(certs.len(), 29);
    let c69 = certs.iter().find(|c| c["family_no"] == 69).unwrap();
    assert_eq!(c69["verdict"], "lct_equals_1");
    assert_eq!(c69["anomalies"].as_array().unwrap().len(), 1);
}

#[test]
fn certify_single_families() {
    let (code, out, _) = run(&["certify", "--family", "83"]);
    assert_eq!(code, 0);
    assert!(out.contains("somedistsingpt"));
    assert!(out.contains("a_k*a_j2*A3=2"));
    let (code, out, _) = run(&["certify", "--family", "54"]);
    assert_eq!(code, 0);
    assert!(out.contains("open: ") && out.contains("1/11(1,4,7)"), "{out}");
    assert_eq!(run(&["certify", "--family", "41"]).0, 2);
    assert_eq!(run(&["certify"]).0, 2);
}

#[test]
fn certify_mismatch_and_incomplete_data() {
    let path = temp_db("expected_43.json", |v| family(v, 43)["expected"] = "lct_equals_1".into());
    let (code, _, err) = run_with(&path, &["certify", "--all"]);
    assert_eq!(code, 1);
    assert!(err.contains("family 43"));
    let path = temp_db("region_43.json", |v| {
        let strata = family(v, 43)["strata"].as_array_mut().unwrap();
        strata.retain(|s| !s["id"].as_str().unwrap().starts_with("Hx_minus_Lxy"));
    });
    let (code, _, err) = run_with(&path, &["certify", "--family", "43"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("incomplete data"));
}

#[test]
fn classify_reports_rule_disagreements() {
    let (code, out, err) = run(&["classify"]);
    assert_eq!(code, 1);
    assert_eq!(out.lines().count(), 29);
    assert_eq!(out.lines().filter(|l| l.ends_with("DIFF")).count(), 6);
    assert!(err.contains("6 classification(s)"));
    let (code, out, _) = run(&["classify", "--family", "42"]);
    assert_eq!(code, 0);
    assert!(out.contains("X_{10,12} in P(1,1,4,5,6,6)  F(i)"));
}

#[test]
fn superrigid_septuples() {
    for (s, fam, dp) in [("16;1,1,5,7,8,9", 69, 14), ("18;1,1,6,8,9,10", 77, 16), ("15;1,2,5,6,7,9", 66, 14)] {
        let (code, out, _) = run(&["superrigid", "--septuple", s]);
        assert_eq!(code, 0, "{s}");
        assert!(out.contains(&format!("certified: family {fam}, d' = {dp}")), "{out}");
    }
    let (code, _, err) = run(&["superrigid", "--septuple", "12;1,2,3,5,7,9"]);
    assert_eq!(code, 1);
    assert!(err.contains("family 57"));
    assert_eq!(run(&["superrigid", "--septuple", "13;1,1,1,1,1,1"]).0, 1);
    assert_eq!(run(&["superrigid", "--septuple", "16;1,1,5,7,8"]).0, 2);
}

#[test]
fn validate_db_and_db_selection() {
    let (code, out, _) = run(&["validate-db"]);
    assert_eq!(code, 0);
    assert!(out.contains("29 families, 0 violations"));
    let path = temp_db("marks_42.json", |v| {
        for b in family(v, 42)["basket"].as_array_mut().unwrap() {
            b["marks"] = serde_json::json!([]);
        }
    });
    let (code, out, _) = run_with(&path, &["validate-db"]);
    assert_eq!(code, 1);
    assert!(out.contains("cross-reference: family 42"), "{out}");
    let missing = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("absent.json");
    let (code, _, err) = run_with(&missing, &["validate-db"]);
    assert_eq!(code, 2);
    assert!(err.contains("absent.json"));

    // The environment variable stands in for --db.
    let out = Command::new(env!("CARGO_BIN_EXE_wcifano"))
        .env("WCIFANO_DB", db_path())
        .arg("validate-db")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
