//! The family database: one JSON document with weights, degrees, baskets,
//! stratum entries, `L_xy` records and distinguished configurations.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, Rational};
use crate::certify::FamilyVerdict;
use crate::isolating::StratumEntry;
use crate::lxy::{lxy_issues, LxyRecord};
use crate::wps::{ClassTag, DistinguishedConfig, Mark, QuotientSingularity, WciFamily};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDb {
    pub version: String,
    pub families: Vec<FamilyRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasketEntry {
    pub r: u64,
    pub a: u64,
    pub count: u64,
    pub marks: Vec<Mark>,
}

impl BasketEntry {
    pub fn singularity(&self) -> QuotientSingularity {
        QuotientSingularity::new(self.r, self.a, self.count).with_marks(&self.marks)
    }

    pub fn has(&self, m: Mark) -> bool {
        self.marks.contains(&m)
    }
}

/// A check that is known to disagree with its recorded outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Anomaly {
    pub check: String,
    pub r: u64,
    pub a: u64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyRecord {
    pub no: u32,
    pub weights: Vec<u64>,
    pub degrees: Vec<u64>,
    pub a3: Rational,
    pub class: ClassTag,
    pub basket: Vec<BasketEntry>,
    pub strata: Vec<StratumEntry>,
    pub lxy: LxyRecord,
    pub distinguished: Vec<DistinguishedConfig>,
    pub assumptions: Vec<String>,
    pub expected: FamilyVerdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub anomalies: Vec<Anomaly>,
}

impl FamilyRecord {
    /// Panics on a record that did not pass validation.
    pub fn family(&self) -> WciFamily {
        let mut f = WciFamily::new(self.no, &self.weights, (self.degrees[0], self.degrees[1]));
        f.class_tag = self.class;
        f
    }

    pub fn anomaly(&self, check: &str, r: u64, a: u64) -> Option<&Anomaly> {
        let a = a.min(r - a);
        self.anomalies
            .iter()
            .find(|x| x.check == check && x.r == r && x.a.min(r - x.a) == a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Schema,
    CrossRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub family: Option<u32>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ViolationKind::Schema => "schema",
            ViolationKind::CrossRef => "cross-reference",
        };
        match self.family {
            Some(n) => write!(f, "{kind}: family {n}, {}: {}", self.field, self.message),
            None => write!(f, "{kind}: {}: {}", self.field, self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DbError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("{} violation(s):\n{}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
}

impl DbError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            DbError::Invalid(v) => v,
            _ => &[],
        }
    }

    pub fn has_kind(&self, kind: ViolationKind) -> bool {
        self.violations().iter().any(|v| v.kind == kind)
    }
}

pub fn load_db(path: impl AsRef<Path>) -> Result<FamilyDb, DbError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_db_str(&text)
}

pub fn load_db_str(text: &str) -> Result<FamilyDb, DbError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| DbError::Parse(e.to_string()))?;
    let db: FamilyDb = serde_path_to_error::deserialize(value).map_err(|e| DbError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    let violations = validate(&db);
    if violations.is_empty() {
        Ok(db)
    } else {
        Err(DbError::Invalid(violations))
    }
}

/// Pretty JSON with a trailing newline, the format of the shipped file.
pub fn serialize_db(db: &FamilyDb) -> String {
    let mut s = serde_json::to_string_pretty(db).expect("database serializes");
    s.push('\n');
    s
}

const REGIONS: [&str; 3] = ["off_Lxy", "off_Hx", "Hx_minus_Lxy"];

/// Structural and cross-reference checks. Numeric agreement with recomputed
/// invariants is left to the table and certificate commands.
pub fn validate(db: &FamilyDb) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for rec in &db.families {
        if !seen.insert(rec.no) {
            out.push(Violation {
                kind: ViolationKind::Schema,
                family: Some(rec.no),
                field: "no".into(),
                message: "duplicate family number".into(),
            });
        }
        validate_family(rec, &mut out);
    }
    out
}

fn validate_family(rec: &FamilyRecord, out: &mut Vec<Violation>) {
    let mut push = |kind, field: &str, message: String| {
        out.push(Violation {
            kind,
            family: Some(rec.no),
            field: field.to_string(),
            message,
        })
    };
    use ViolationKind::{CrossRef, Schema};
    if !(1..=85).contains(&rec.no) {
        push(Schema, "no", format!("{} is not in 1..85", rec.no));
    }
    if rec.weights.len() != 6 || rec.weights.iter().any(|&w| w == 0) {
        push(Schema, "weights", "expected 6 positive weights".into());
        return;
    }
    if rec.weights.windows(2).any(|w| w[0] > w[1]) {
        push(Schema, "weights", "weights must be ascending".into());
        return;
    }
    if rec.degrees.len() != 2 || rec.degrees[0] == 0 || rec.degrees[0] >= rec.degrees[1] {
        push(Schema, "degrees", "expected d1 < d2, both positive".into());
        return;
    }
    for (i, b) in rec.basket.iter().enumerate() {
        if b.r < 2 || b.a == 0 || b.a >= b.r || gcd(b.a, b.r) != 1 || b.count == 0 {
            push(Schema, &format!("basket[{i}]"), format!("invalid entry 1/{}({}) x{}", b.r, b.a, b.count));
        }
    }
    let family = rec.family();
    for issue in lxy_issues(&rec.lxy, &family) {
        push(Schema, "lxy", issue);
    }
    for (i, s) in rec.strata.iter().enumerate() {
        let field = format!("strata[{i}]");
        if let Err(e) = s.lemma_tag() {
            push(CrossRef, &field, e.to_string());
        }
        if !REGIONS.contains(&s.region()) {
            push(CrossRef, &field, format!("unknown region in id {:?}", s.id));
        }
    }
    let valid_basket = rec
        .basket
        .iter()
        .all(|b| b.r >= 2 && b.a >= 1 && b.a < b.r && gcd(b.a, b.r) == 1);
    for (i, c) in rec.distinguished.iter().enumerate() {
        let field = format!("distinguished[{i}]");
        let idx = [c.k, c.j1, c.j2, c.i1, c.i2];
        let distinct: BTreeSet<usize> = idx.iter().copied().collect();
        if idx.iter().any(|&x| x == 0 || x > 5) || distinct.len() != 5 {
            push(Schema, &field, "indices must be distinct in 1..5".into());
            continue;
        }
        let a = &rec.weights;
        if gcd(a[c.i1], a[c.k]) != 1 || a[c.i1] >= a[c.k] {
            push(CrossRef, &field, "not a terminal point type".into());
            continue;
        }
        let key = c.singularity(a).type_key();
        let marked = valid_basket
            && rec
                .basket
                .iter()
                .any(|b| b.singularity().type_key() == key && b.has(Mark::D));
        if !marked {
            push(
                CrossRef,
                &field,
                format!("type 1/{}(1,{},{}) has no d-marked basket entry", key.0, key.1, key.0 - key.1),
            );
        }
    }
    for (i, an) in rec.anomalies.iter().enumerate() {
        let present = rec.basket.iter().any(|b| {
            b.r == an.r && an.a < an.r && b.a.min(b.r - b.a) == an.a.min(an.r - an.a)
        });
        if !present {
            push(CrossRef, &format!("anomalies[{i}]"), "no such basket entry".into());
        }
    }
}
