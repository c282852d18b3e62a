//! Table reproduction with per-cell diffs, and certificate rendering.

use std::fmt;
use std::fmt::Write as _;

use crate::arith::Rational;
use crate::certify::{certify_family, classify_family, CertifyError, Classification, FamilyCertificate, FamilyVerdict};
use crate::db::{FamilyDb, FamilyRecord};
use crate::lxy::{lxy_issues, lxy_jacobian_sing_check, lxy_mult_at, Coeff, LxyRecord, Term};
use crate::par::par_map;
use crate::wps::{
    anticanonical_degree, compute_basket, detect_distinguished, index_check, qs_ci_weights, wellformed, ClassTag,
    Mark,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDiff {
    pub family: u32,
    pub column: String,
    pub computed: String,
    pub recorded: String,
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family {}: computed {}, recorded {} [{}]",
            self.family, self.computed, self.recorded, self.column
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub which: u8,
    pub rows: Vec<String>,
    pub diffs: Vec<CellDiff>,
}

impl TableReport {
    pub fn exit_code(&self) -> i32 {
        if self.diffs.is_empty() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let header = match self.which {
            1 | 2 => "No. | X | (A^3) | Basket of singularities",
            _ => "No. | Equations G1 = G2 = 0 | Sing(L_xy) | mult | witness",
        };
        writeln!(s, "Table {}: {} rows", self.which, self.rows.len()).unwrap();
        writeln!(s, "{header}").unwrap();
        for r in &self.rows {
            writeln!(s, "{r}").unwrap();
        }
        if self.diffs.is_empty() {
            writeln!(s, "all recomputed cells match").unwrap();
        } else {
            writeln!(s, "{} diff(s):", self.diffs.len()).unwrap();
            for d in &self.diffs {
                writeln!(s, "  {d}").unwrap();
            }
        }
        s
    }
}

fn in_table(rec: &FamilyRecord, which: u8) -> bool {
    match which {
        1 | 3 => rec.class == ClassTag::Fi,
        _ => rec.class == ClassTag::Fii,
    }
}

fn fmt_counts(c: &[(u64, u64, u64)]) -> String {
    c.iter()
        .map(|(r, a, n)| format!("{n}x1/{r}({a},{})", r - a))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Recompute the derivable columns of one Table 1/2 row.
pub fn degree_row(rec: &FamilyRecord) -> (String, Vec<CellDiff>) {
    let fam = rec.family();
    let mut diffs = Vec::new();
    let mut diff = |column: &str, computed: String, recorded: String| {
        if computed != recorded {
            diffs.push(CellDiff {
                family: rec.no,
                column: column.to_string(),
                computed,
                recorded,
            })
        }
    };
    let a3 = anticanonical_degree(&fam);
    diff("(A^3)", a3.to_string(), rec.a3.to_string());
    diff("index", index_check(&fam).to_string(), "true".into());
    diff("well formed", wellformed(fam.a(), &fam.degree_list()).to_string(), "true".into());
    diff("quasi-smooth", qs_ci_weights(fam.a(), &fam.degree_list()).to_string(), "true".into());
    let mut recorded: Vec<(u64, u64, u64)> = rec
        .basket
        .iter()
        .map(|b| (b.r, b.a.min(b.r - b.a), b.count))
        .collect();
    recorded.sort();
    match compute_basket(&fam) {
        Ok(bc) => {
            diff("basket", fmt_counts(&bc.basket.counts()), fmt_counts(&recorded));
            for s in &bc.strata {
                let sum = recorded
                    .iter()
                    .filter(|(r, _, _)| r % s.r == 0)
                    .fold(Rational::zero(), |acc, &(r, _, n)| acc + Rational::new(n as i64, r as i64));
                diff(&format!("Bezout on mu_{} stratum", s.r), s.bezout.to_string(), sum.to_string());
            }
        }
        Err(e) => diff("basket", e.to_string(), fmt_counts(&recorded)),
    }
    let mut dist: Vec<String> = detect_distinguished(&fam)
        .iter()
        .map(|c| {
            let s = c.singularity(fam.a());
            format!("1/{}({},{})", s.r, s.a, s.r - s.a)
        })
        .collect();
    dist.sort();
    dist.dedup();
    let mut marked: Vec<String> = rec
        .basket
        .iter()
        .filter(|b| b.has(Mark::D))
        .map(|b| {
            let a = b.a.min(b.r - b.a);
            format!("1/{}({a},{})", b.r, b.r - a)
        })
        .collect();
    marked.sort();
    diff("d marks", dist.join(", "), marked.join(", "));
    let class = match classify_family(&fam) {
        Classification::Fi => ClassTag::Fi,
        Classification::Fii => ClassTag::Fii,
        Classification::Other => ClassTag::Fother,
    };
    diff(
        "class",
        serde_json::to_value(class).unwrap().as_str().unwrap().to_string(),
        serde_json::to_value(rec.class).unwrap().as_str().unwrap().to_string(),
    );
    let basket: Vec<String> = rec
        .basket
        .iter()
        .map(|b| {
            let s = b.singularity();
            let marks: String = s.marks.iter().map(|m| m.to_string()).collect();
            let n = if b.count > 1 { format!("{} x ", b.count) } else { String::new() };
            format!("{n}1/{}({},{}){marks}", s.r, s.a, s.r - s.a)
        })
        .collect();
    let w: Vec<String> = rec.weights.iter().map(|x| x.to_string()).collect();
    let row = format!(
        "{} | X_{{{},{}}} in P({}) | {} | {}",
        rec.no,
        rec.degrees[0],
        rec.degrees[1],
        w.join(","),
        a3,
        basket.join(", ")
    );
    (row, diffs)
}

fn fmt_term(t: &Term, vars: &[String]) -> String {
    let mut mono = String::new();
    for (i, &e) in t.exp.iter().enumerate() {
        if e == 0 {
            continue;
        }
        mono.push_str(&vars[i]);
        if e > 1 {
            write!(mono, "^{e}").unwrap();
        }
    }
    match &t.coeff {
        Coeff::Param(p) => format!("{p} {mono}"),
        Coeff::Num(q) if *q == Rational::one() => mono,
        Coeff::Num(q) => format!("{q} {mono}"),
    }
}

pub fn fmt_lxy(r: &LxyRecord) -> String {
    let side = |ts: &[Term]| ts.iter().map(|t| fmt_term(t, &r.vars)).collect::<Vec<_>>().join(" + ");
    format!("{} = {} = 0", side(&r.g1), side(&r.g2))
}

/// Recompute the derivable columns of one Table 3/4 row.
pub fn lxy_row(rec: &FamilyRecord) -> (String, Vec<CellDiff>) {
    let fam = rec.family();
    let mut diffs = Vec::new();
    for issue in lxy_issues(&rec.lxy, &fam) {
        diffs.push(CellDiff {
            family: rec.no,
            column: "equations".into(),
            computed: issue,
            recorded: fmt_lxy(&rec.lxy),
        });
    }
    let mut mults = Vec::new();
    for p in &rec.lxy.sing {
        if !lxy_jacobian_sing_check(&rec.lxy, p).unwrap_or(false) {
            diffs.push(CellDiff {
                family: rec.no,
                column: "Sing(L_xy)".into(),
                computed: format!("{p} is not a singular point"),
                recorded: format!("{p} singular"),
            });
        }
        match lxy_mult_at(&rec.lxy, p) {
            Ok(m) => mults.push(format!("{p}:{}", m.mult)),
            Err(e) => diffs.push(CellDiff {
                family: rec.no,
                column: "mult".into(),
                computed: e.to_string(),
                recorded: p.clone(),
            }),
        }
    }
    let sing = if rec.lxy.sing.is_empty() {
        "none".to_string()
    } else {
        rec.lxy.sing.join(", ")
    };
    let row = format!(
        "{} | {} | {} | {} | {}",
        rec.no,
        fmt_lxy(&rec.lxy),
        sing,
        if mults.is_empty() { "-".into() } else { mults.join(", ") },
        if rec.lxy.witness.is_empty() { "-" } else { &rec.lxy.witness }
    );
    (row, diffs)
}

pub fn cmd_tables(db: &FamilyDb, which: u8) -> TableReport {
    assert!((1..=4).contains(&which), "tables are numbered 1 to 4");
    let mut recs: Vec<&FamilyRecord> = db.families.iter().filter(|r| in_table(r, which)).collect();
    recs.sort_by_key(|r| r.no);
    let rows = par_map(&recs, |r| if which <= 2 { degree_row(r) } else { lxy_row(r) });
    let mut out = TableReport {
        which,
        rows: Vec::new(),
        diffs: Vec::new(),
    };
    for (row, diffs) in rows {
        out.rows.push(row);
        out.diffs.extend(diffs);
    }
    out
}

pub fn render_certificate(c: &FamilyCertificate, expected: FamilyVerdict) -> String {
    let mut s = String::new();
    writeln!(s, "family {} [{}]: {} (expected {})", c.family_no, c.classification, c.verdict, expected).unwrap();
    for r in &c.point_class_results {
        let inputs: Vec<String> = r.check.inputs.iter().map(|v| format!("{}={}", v.name, v.value)).collect();
        write!(s, "  {:<44} {:<15} {:<14} {}", r.stratum, r.check.lemma_id, r.check.verdict.to_string(), inputs.join(" ")).unwrap();
        if let Some(n) = &r.check.note {
            write!(s, "  ({n})").unwrap();
        }
        s.push('\n');
    }
    if !c.open_points.is_empty() {
        writeln!(s, "  open: {}", c.open_points.join("; ")).unwrap();
    }
    for a in &c.anomalies {
        writeln!(s, "  anomaly: {a}").unwrap();
    }
    s
}

#[derive(Debug)]
pub struct CertifyRun {
    pub certificates: Vec<FamilyCertificate>,
    pub errors: Vec<CertifyError>,
    pub mismatches: Vec<(u32, FamilyVerdict, FamilyVerdict)>,
    pub text: String,
}

impl CertifyRun {
    pub fn exit_code(&self) -> i32 {
        if !self.errors.is_empty() {
            2
        } else if !self.mismatches.is_empty() {
            1
        } else {
            0
        }
    }
}

/// Certify the given families (all when `only` is `None`), in family order.
pub fn cmd_certify(db: &FamilyDb, only: Option<u32>) -> CertifyRun {
    let mut recs: Vec<&FamilyRecord> = db
        .families
        .iter()
        .filter(|r| only.map_or(true, |n| r.no == n))
        .collect();
    recs.sort_by_key(|r| r.no);
    let results = par_map(&recs, |r| certify_family(r));
    let mut run = CertifyRun {
        certificates: Vec::new(),
        errors: Vec::new(),
        mismatches: Vec::new(),
        text: String::new(),
    };
    for (rec, res) in recs.iter().zip(results) {
        match res {
            Ok(c) => {
                run.text.push_str(&render_certificate(&c, rec.expected));
                if c.verdict != rec.expected {
                    run.mismatches.push((rec.no, c.verdict, rec.expected));
                }
                run.certificates.push(c);
            }
            Err(e) => {
                writeln!(run.text, "{e}").unwrap();
                run.errors.push(e);
            }
        }
    }
    let count = |v: FamilyVerdict| run.certificates.iter().filter(|c| c.verdict == v).count();
    writeln!(
        run.text,
        "summary: {} lct_equals_1, {} lct_on_Xcirc_equals_1, {} incomplete, {} anomalies flagged, {} mismatches",
        count(FamilyVerdict::LctEquals1),
        count(FamilyVerdict::LctOnXcircEquals1),
        count(FamilyVerdict::Incomplete) + run.errors.len(),
        run.certificates.iter().map(|c| c.anomalies.len()).sum::<usize>(),
        run.mismatches.len()
    )
    .unwrap();
    run
}
