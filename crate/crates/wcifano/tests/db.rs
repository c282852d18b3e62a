mod common;

use serde_json::{json, Value};
use wcifano::db::{load_db, load_db_str, serialize_db, validate, DbError, ViolationKind};
use wcifano::report::cmd_tables;

fn shipped() -> (String, Value) {
    let text = std::fs::read_to_string(common::db_path()).unwrap();
    let value = serde_json::from_str(&text).unwrap();
    (text, value)
}

fn family_mut(v: &mut Value, no: u64) -> &mut Value {
    v["families"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|f| f["no"] == json!(no))
        .unwrap()
}

fn load(v: &Value) -> Result<wcifano::db::FamilyDb, DbError> {
    load_db_str(&serde_json::to_string(v).unwrap())
}

#[test]
fn shipped_db_is_valid_and_round_trips() {
    let (text, _) = shipped();
    let db = load_db_str(&text).unwrap();
    assert_eq!(db.families.len(), 29);
    assert!(validate(&db).is_empty());
    assert_eq!(serialize_db(&db), text);
    let again = load_db_str(&serialize_db(&db)).unwrap();
    assert_eq!(again, db);
}

#[test]
fn missing_distinguished_mark_is_a_cross_reference_error() {
    let (_, mut v) = shipped();
    let fam = family_mut(&mut v, 42);
    for b in fam["basket"].as_array_mut().unwrap() {
        b["marks"] = json!([]);
    }
    let err = load(&v).unwrap_err();
    assert!(err.has_kind(ViolationKind::CrossRef), "{err}");
    assert!(err.violations().iter().all(|x| x.family == Some(42)));
}

#[test]
fn wrong_degree_term_is_a_schema_error() {
    let (_, mut v) = shipped();
    let fam = family_mut(&mut v, 42);
    fam["lxy"]["g1"][0]["exp"] = json!([1, 1, 1, 1]);
    let err = load(&v).unwrap_err();
    assert!(err.has_kind(ViolationKind::Schema), "{err}");
    assert!(err.to_string().contains("family 42"), "{err}");
}

#[test]
fn flipped_degree_cell_is_reported_by_tables() {
    let (_, mut v) = shipped();
    family_mut(&mut v, 50)["a3"] = json!("1/21");
    let db = load(&v).unwrap();
    let report = cmd_tables(&db, 2);
    assert_eq!(report.exit_code(), 1);
    assert!(
        report.render().contains("family 50: computed 2/21, recorded 1/21"),
        "{}",
        report.render()
    );
}

#[test]
fn structural_errors() {
    assert!(matches!(load_db_str("{"), Err(DbError::Parse(_))));
    let (_, mut v) = shipped();
    family_mut(&mut v, 55).as_object_mut().unwrap().remove("degrees");
    match load(&v) {
        Err(DbError::Schema { path, message }) => {
            assert!(path.starts_with("families["), "{path}");
            assert!(message.contains("degrees"), "{message}");
        }
        other => panic!("expected a schema error, got {other:?}"),
    }
    let (_, mut v) = shipped();
    family_mut(&mut v, 55)["surprise"] = json!(1);
    assert!(matches!(load(&v), Err(DbError::Schema { .. })));
    assert!(matches!(load_db("/nonexistent/families.json"), Err(DbError::Io { .. })));
}

#[test]
fn duplicate_and_dangling_records() {
    let (_, mut v) = shipped();
    let copy = family_mut(&mut v, 42).clone();
    v["families"].as_array_mut().unwrap().push(copy);
    assert!(load(&v).unwrap_err().has_kind(ViolationKind::Schema));

    let (_, mut v) = shipped();
    family_mut(&mut v, 69)["anomalies"][0]["r"] = json!(7);
    assert!(load(&v).unwrap_err().has_kind(ViolationKind::CrossRef));

    let (_, mut v) = shipped();
    family_mut(&mut v, 43)["strata"][0]["lemma"] = json!("isol-zz");
    assert!(load(&v).unwrap_err().has_kind(ViolationKind::CrossRef));
}
