//! LCT criterion checks, the numerical classification of the `I_F` families,
//! per-family certificates and the super-rigidity check.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::db::{FamilyDb, FamilyRecord};
use crate::floplocus::{flop_prop_applicable, upsilon_boundary_check};
use crate::isolating::stratum_entry_issues;
use crate::lxy::{mult_with, on_curve, PRIMES_A, POINT_IDS};
use crate::wps::{
    anticanonical_degree, detect_distinguished, kawamata_degree, quasismooth_hypersurface,
    wellformed, weight_product, DistinguishedConfig, Mark, QuotientSingularity, WciFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    /// Fails numerically at a point the database records as a known discrepancy.
    Anomalous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not_applicable",
            Verdict::Anomalous => "anomalous",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

/// One evaluated inequality with its inputs and the hypotheses taken on trust.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionCheck {
    pub lemma_id: String,
    pub inputs: Vec<NamedValue>,
    pub verdict: Verdict,
    pub assumed: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CriterionCheck {
    pub fn new(lemma_id: &str) -> Self {
        CriterionCheck {
            lemma_id: lemma_id.to_string(),
            inputs: Vec::new(),
            verdict: Verdict::NotApplicable,
            assumed: Vec::new(),
            note: None,
        }
    }

    pub fn input(mut self, name: &str, value: impl fmt::Display) -> Self {
        self.inputs.push(NamedValue {
            name: name.to_string(),
            value: value.to_string(),
        });
        self
    }

    pub fn assume(mut self, what: &str) -> Self {
        self.assumed.push(what.to_string());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.inputs.iter().find(|n| n.name == name).map(|n| n.value.as_str())
    }

    fn q(&self, name: &str) -> Option<Rational> {
        self.get(name)?.parse().ok()
    }
}

fn pass_if(b: bool) -> Verdict {
    if b {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

const LC_S1: &str = "pair (X, S/c1) log canonical at p (generality)";

/// `r c1 c2 A^3 <= 1` and `mult <= c2`.
pub fn check_excl_l(r: u64, c1: &Rational, c2: &Rational, a3: &Rational, mult_cover: u64, lc_s1_assumed: bool) -> CriterionCheck {
    let lhs = Rational::from(r) * c1 * c2 * a3;
    let ok = lhs <= Rational::one() && Rational::from(mult_cover) <= *c2 && lc_s1_assumed;
    let mut c = CriterionCheck::new("exclL")
        .input("r", r)
        .input("c1", c1)
        .input("c2", c2)
        .input("A3", a3)
        .input("mult", mult_cover)
        .input("lc_S1", lc_s1_assumed)
        .input("r*c1*c2*A3", &lhs);
    if lc_s1_assumed {
        c = c.assume(LC_S1);
    }
    c.with_verdict(pass_if(ok))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclGVariant {
    TwoDivisors,
    LcDivisor,
}

/// `max(c1, c2) l A^3 <= 1` for two divisors, or `c l A^3 <= 1` for one.
pub fn check_excl_g(c1: &Rational, c2: Option<&Rational>, l: u64, a3: &Rational, variant: ExclGVariant) -> CriterionCheck {
    let c = match (variant, c2) {
        (ExclGVariant::TwoDivisors, Some(c2)) => c1.max(c2).clone(),
        _ => c1.clone(),
    };
    let lhs = &c * Rational::from(l) * a3;
    let mut check = CriterionCheck::new("exclG")
        .input("variant", serde_json::to_value(variant).unwrap().as_str().unwrap())
        .input("c1", c1);
    if let Some(c2) = c2 {
        check = check.input("c2", c2);
    }
    check = check.input("l", l).input("A3", a3).input("c*l*A3", &lhs);
    if variant == ExclGVariant::LcDivisor {
        check = check.assume(LC_S1);
    }
    let ok = lhs <= Rational::one() && (variant == ExclGVariant::LcDivisor || c2.is_some());
    check.with_verdict(pass_if(ok))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriwisolBranch {
    A,
    B,
}

/// Branch (a): `l d <= m` and `c m A^3 <= d`; branch (b): `l d > m` and `c l A^3 <= 1`.
/// The branch is fixed by `l d` versus `m`, so at most one applies.
pub fn criwisol_branch(c: &Rational, l: u64, d: &Rational, m: u64, a3: &Rational) -> Option<CriwisolBranch> {
    let l = Rational::from(l);
    let m = Rational::from(m);
    if &l * d <= m {
        (c * &m * a3 <= *d).then_some(CriwisolBranch::A)
    } else {
        (c * &l * a3 <= Rational::one()).then_some(CriwisolBranch::B)
    }
}

pub fn check_criwisol(c: &Rational, l: u64, d: &Rational, m: u64, a3: &Rational) -> CriterionCheck {
    let branch = criwisol_branch(c, l, d, m, a3);
    let mut check = CriterionCheck::new("criwisol")
        .input("c", c)
        .input("l", l)
        .input("d", d)
        .input("m", m)
        .input("A3", a3)
        .input("l*d", Rational::from(l) * d)
        .assume(LC_S1);
    check = match branch {
        Some(CriwisolBranch::A) => check.input("branch", "a"),
        Some(CriwisolBranch::B) => check.input("branch", "b"),
        None => check.input("branch", "none"),
    };
    check.with_verdict(pass_if(branch.is_some()))
}

const NE_ASSUMPTION: &str = "(-K_Y)^2 not in the interior of NE(Y) for the Kawamata blowup Y (not machine-checked)";

/// `(B^3) <= 0` for the Kawamata blowup, and an ambient weight `< r` among `1, a, r - a`.
pub fn check_singpt_ne_numeric(family: &WciFamily, s: &QuotientSingularity) -> CriterionCheck {
    let a3 = anticanonical_degree(family);
    let b3 = kawamata_degree(&a3, s);
    let allowed = [1, s.a, s.r - s.a];
    let witness = family.a().iter().copied().find(|&w| w < s.r && allowed.contains(&w));
    let ok = !b3.is_positive() && witness.is_some();
    CriterionCheck::new("singptNE")
        .input("r", s.r)
        .input("a", s.a)
        .input("A3", &a3)
        .input("B3", &b3)
        .input("weight", witness.map_or("none".to_string(), |w| w.to_string()))
        .assume(NE_ASSUMPTION)
        .with_verdict(pass_if(ok))
}

pub fn check_somedistsingpt(config: &DistinguishedConfig, family: &WciFamily) -> CriterionCheck {
    let a = family.a();
    let a3 = anticanonical_degree(family);
    let prod = Rational::from(a[config.k] * a[config.j2]) * &a3;
    let boundary = upsilon_boundary_check(config, family);
    let ok = boundary && prod <= Rational::from_int(2);
    CriterionCheck::new("somedistsingpt")
        .input("a_k", a[config.k])
        .input("a_j2", a[config.j2])
        .input("A3", &a3)
        .input("a_k*a_j2*A3", &prod)
        .input("Hx_meets_Upsilon_only_at_p", boundary)
        .assume("closure of Upsilon_p is e reduced curves (generality)")
        .with_verdict(pass_if(ok))
}

/// Re-evaluate a check from its recorded inputs alone. `None` for unknown lemma ids
/// or missing inputs.
pub fn recheck(c: &CriterionCheck) -> Option<bool> {
    let one = Rational::one();
    let b = |name: &str| c.get(name).and_then(|v| v.parse::<bool>().ok());
    Some(match c.lemma_id.as_str() {
        "exclL" => {
            let lhs = c.q("r")? * c.q("c1")? * c.q("c2")? * c.q("A3")?;
            lhs <= one && c.q("mult")? <= c.q("c2")? && b("lc_S1")?
        }
        "exclG" => {
            let c1 = c.q("c1")?;
            let cc = match (c.get("variant")?, c.q("c2")) {
                ("two_divisors", Some(c2)) => c1.max(c2),
                ("two_divisors", None) => return Some(false),
                _ => c1,
            };
            cc * c.q("l")? * c.q("A3")? <= one
        }
        "criwisol" => {
            let l = c.q("l")?.to_i64()? as u64;
            let m = c.q("m")?.to_i64()? as u64;
            criwisol_branch(&c.q("c")?, l, &c.q("d")?, m, &c.q("A3")?).is_some()
        }
        "singptNE" => !c.q("B3")?.is_positive() && c.get("weight")? != "none",
        "somedistsingpt" => b("Hx_meets_Upsilon_only_at_p")? && c.q("a_k*a_j2*A3")? <= Rational::from_int(2),
        "lctfflopcurve" => c.q("e")?.is_integer() && c.q("wp")? >= c.q("d1")?,
        "isolating" => false,
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "F(i)")]
    Fi,
    #[serde(rename = "F(ii)")]
    Fii,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Fi => "F(i)",
            Classification::Fii => "F(ii)",
            Classification::Other => "other",
        })
    }
}

pub fn classify_family(family: &WciFamily) -> Classification {
    let a = family.a();
    let a3 = anticanonical_degree(family);
    let x15 = Rational::from(a[1] * a[5]) * &a3;
    if x15 <= Rational::one() {
        return Classification::Fi;
    }
    let x13 = Rational::from(a[1] * a[3]) * &a3;
    let d1 = family.degrees.0;
    let configs = detect_distinguished(family);
    let flops = configs.iter().all(|c| c.wp(a) > d1);
    if x15 <= Rational::from_int(2) && x13 <= Rational::one() && flops {
        Classification::Fii
    } else {
        Classification::Other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyVerdict {
    #[serde(rename = "lct_equals_1")]
    LctEquals1,
    #[serde(rename = "lct_on_Xcirc_equals_1")]
    LctOnXcircEquals1,
    #[serde(rename = "incomplete")]
    Incomplete,
}

impl fmt::Display for FamilyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyVerdict::LctEquals1 => "lct_equals_1",
            FamilyVerdict::LctOnXcircEquals1 => "lct_on_Xcirc_equals_1",
            FamilyVerdict::Incomplete => "incomplete",
        })
    }
}

impl FamilyVerdict {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lct_equals_1" => Some(FamilyVerdict::LctEquals1),
            "lct_on_Xcirc_equals_1" => Some(FamilyVerdict::LctOnXcircEquals1),
            "incomplete" => Some(FamilyVerdict::Incomplete),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumResult {
    pub stratum: String,
    pub check: CriterionCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCertificate {
    pub family_no: u32,
    pub classification: Classification,
    pub point_class_results: Vec<StratumResult>,
    pub verdict: FamilyVerdict,
    pub open_points: Vec<String>,
    pub anomalies: Vec<String>,
    pub assumptions: Vec<String>,
}

impl FamilyCertificate {
    pub fn failures(&self) -> impl Iterator<Item = &StratumResult> {
        self.point_class_results.iter().filter(|r| r.check.verdict == Verdict::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("family {family}: incomplete data: {reason}")]
    IncompleteData { family: u32, reason: String },
}

fn point_name(s: &QuotientSingularity) -> String {
    format!("1/{}(1,{},{})", s.r, s.a, s.r - s.a)
}

/// The `L_xy` variable of sorted weight index `k`, if any.
fn lxy_var(k: usize) -> Option<usize> {
    (2..6).contains(&k).then(|| k - 2)
}

/// Cover multiplicity at the first coordinate point of weight `r` lying on `L_xy`.
fn cover_mult(rec: &FamilyRecord, candidates: &[usize]) -> Result<(u64, String), String> {
    let g = rec.lxy.instantiate(&PRIMES_A);
    for &v in candidates {
        if on_curve(&g, v) {
            return mult_with(&g, v)
                .map(|m| (m.mult as u64, POINT_IDS[v].to_string()))
                .map_err(|e| e.to_string());
        }
    }
    Ok((1, "off L_xy".to_string()))
}

pub fn certify_family(rec: &FamilyRecord) -> Result<FamilyCertificate, CertifyError> {
    let family = rec.family();
    let a = family.a();
    let a1 = Rational::from(a[1]);
    let a3 = anticanonical_degree(&family);
    let classification = classify_family(&family);
    let one = Rational::one();
    let incomplete = |reason: String| CertifyError::IncompleteData { family: rec.no, reason };

    let required: &[&str] = if a[1] == 1 { &["off_Lxy"] } else { &["off_Hx", "Hx_minus_Lxy"] };
    let present: BTreeSet<&str> = rec.strata.iter().map(|s| s.region()).collect();
    for r in required {
        if !present.contains(r) {
            return Err(incomplete(format!("no stratum entry for region {r}")));
        }
    }

    let mut results = Vec::new();
    let mut open_points = Vec::new();
    let mut anomalies = Vec::new();
    let mut push = |stratum: String, check: CriterionCheck| results.push(StratumResult { stratum, check });

    // (1) nonsingular points of L_xy
    push(
        "Lxy_nonsingular".into(),
        check_excl_l(1, &one, &a1, &a3, 1, true).note("multiplicity 1 at nonsingular points of L_xy"),
    );

    // (2) nonsingular points away from L_xy, one check per recorded branch
    for entry in &rec.strata {
        let issues = stratum_entry_issues(entry, &family).map_err(|e| incomplete(e.to_string()))?;
        let mut check = match &entry.curve {
            Some(curve) => check_criwisol(&entry.c, entry.l, &curve.degree(), curve.m, &a3),
            None => check_excl_g(&entry.c, None, entry.l, &a3, ExclGVariant::LcDivisor),
        };
        check = check.input("lemma", &entry.lemma);
        if !issues.is_empty() {
            check = check.note(issues.join("; ")).with_verdict(Verdict::Fail);
        }
        push(format!("nonsingular/{}", entry.id), check);
    }

    let configs = detect_distinguished(&family);

    // (3) flopping curves through distinguished points
    if classification == Classification::Fii {
        for c in &configs {
            let check = flop_prop_applicable(c, &family);
            let check = if check.verdict == Verdict::NotApplicable {
                check.with_verdict(Verdict::Fail)
            } else {
                check
            };
            push(format!("flop_curves/x{}", c.k), check);
        }
    }

    // (4), (5) singular points from the recorded basket
    for b in &rec.basket {
        let s = b.singularity();
        let name = point_name(&s);
        if !s.is_marked() {
            let mut check = check_singpt_ne_numeric(&family, &s);
            if check.verdict == Verdict::Fail {
                if let Some(an) = rec.anomaly("singptNE", s.r, s.a) {
                    check = check.with_verdict(Verdict::Anomalous).note(format!("anomalous: {}", an.note));
                    anomalies.push(format!("{name}: B3 = {}", check.get("B3").unwrap_or("?")));
                }
            }
            push(format!("singular/{name}"), check);
        } else if b.has(Mark::QI) || b.has(Mark::EI) {
            let cands: Vec<usize> = (2..6).filter(|&k| a[k] == s.r).filter_map(lxy_var).collect();
            let check = match cover_mult(rec, &cands) {
                Ok((m, at)) => check_excl_l(s.r, &one, &a1, &a3, m, true).input("at", at),
                Err(e) => check_excl_l(s.r, &one, &a1, &a3, 0, true)
                    .note(e)
                    .with_verdict(Verdict::Fail),
            };
            let tag = if b.has(Mark::QI) { "QI" } else { "EI" };
            push(format!("singular/{name}{tag}"), check);
        }
    }

    // (6) distinguished points
    for c in &configs {
        let s = c.singularity(a);
        let name = format!("{}d at x{}", point_name(&s), c.k);
        match classification {
            Classification::Fi => {
                let cands: Vec<usize> = lxy_var(c.k).into_iter().collect();
                let check = match cover_mult(rec, &cands) {
                    Ok((m, at)) => check_excl_l(s.r, &one, &a1, &a3, m, true).input("at", at),
                    Err(e) => check_excl_l(s.r, &one, &a1, &a3, 0, true).note(e).with_verdict(Verdict::Fail),
                };
                push(format!("distinguished/{name}"), check);
            }
            _ => {
                let check = check_somedistsingpt(c, &family);
                if check.verdict == Verdict::Pass {
                    push(format!("distinguished/{name}"), check);
                } else {
                    push(
                        format!("distinguished/{name}"),
                        check.with_verdict(Verdict::NotApplicable).note("open: no criterion applies"),
                    );
                    open_points.push(name);
                }
            }
        }
    }

    let failed = results.iter().any(|r| r.check.verdict == Verdict::Fail);
    let verdict = if failed {
        FamilyVerdict::Incomplete
    } else if open_points.is_empty() {
        FamilyVerdict::LctEquals1
    } else {
        FamilyVerdict::LctOnXcircEquals1
    };
    let mut assumptions: Vec<String> = rec.assumptions.clone();
    for r in &results {
        for a in &r.check.assumed {
            if !assumptions.contains(a) {
                assumptions.push(a.clone());
            }
        }
    }
    Ok(FamilyCertificate {
        family_no: rec.no,
        classification,
        point_class_results: results,
        verdict,
        open_points,
        anomalies,
        assumptions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuperrigidError {
    #[error("malformed septuple {0:?}: expected \"d;a0,a1,a2,a3,a4,a5\"")]
    Malformed(String),
    #[error("d' = {0} is not positive")]
    NonPositiveDPrime(i64),
    #[error("no family with degrees ({0}, {1}) in P{2:?}")]
    NoMatchingFamily(u64, u64, Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperrigidReport {
    pub d: u64,
    pub weights: Vec<u64>,
    pub d_prime: u64,
    pub family_no: u32,
    pub certified: bool,
    pub reasons: Vec<String>,
}

pub fn parse_septuple(s: &str) -> Result<(u64, Vec<u64>), SuperrigidError> {
    let bad = || SuperrigidError::Malformed(s.to_string());
    let (d, w) = s.split_once(';').ok_or_else(bad)?;
    let d: u64 = d.trim().parse().map_err(|_| bad())?;
    let w: Vec<u64> = w
        .split(',')
        .map(|x| x.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    if w.len() != 6 || d == 0 || w.contains(&0) {
        return Err(bad());
    }
    Ok((d, w))
}

pub fn superrigid_check(db: &FamilyDb, d: u64, weights: &[u64]) -> Result<SuperrigidReport, SuperrigidError> {
    let total: u64 = weights.iter().sum();
    let d_prime = total as i64 - 1 - d as i64;
    if d_prime < 1 {
        return Err(SuperrigidError::NonPositiveDPrime(d_prime));
    }
    let d_prime = d_prime as u64;
    let mut sorted = weights.to_vec();
    sorted.sort();
    let (lo, hi) = (d.min(d_prime), d.max(d_prime));
    let rec = db
        .families
        .iter()
        .find(|r| r.weights == sorted && r.degrees == [lo, hi])
        .ok_or_else(|| SuperrigidError::NoMatchingFamily(lo, hi, sorted.clone()))?;
    let mut reasons = Vec::new();
    match certify_family(rec) {
        Ok(c) if c.verdict == FamilyVerdict::LctEquals1 => {}
        Ok(c) => reasons.push(format!("family {} has verdict {}, not lct_equals_1", rec.no, c.verdict)),
        Err(e) => reasons.push(e.to_string()),
    }
    if !quasismooth_hypersurface(d, &sorted) {
        reasons.push(format!("a general hypersurface of degree {d} is not quasi-smooth"));
    }
    if !wellformed(&sorted, &[d]) {
        reasons.push(format!("the degree {d} hypersurface is not well formed"));
    }
    Ok(SuperrigidReport {
        d,
        weights: weights.to_vec(),
        d_prime,
        family_no: rec.no,
        certified: reasons.is_empty(),
        reasons,
    })
}

/// `wp` of each distinguished point, exposed for reports.
pub fn distinguished_wps(family: &WciFamily) -> Vec<u64> {
    detect_distinguished(family)
        .iter()
        .map(|c| weight_product(&c.singularity(family.a())))
        .collect()
}
