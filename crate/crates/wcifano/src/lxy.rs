//! The curve `L_xy = (x = y = 0)`: recorded normal forms, Jacobian checks at
//! coordinate points and local multiplicities on the index-one cover.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{monomials_of_degree, weighted_degree, Rational};
use crate::wps::WciFamily;

pub const POINT_IDS: [&str; 4] = ["p_z", "p_s", "p_t", "p_u"];

/// Default instantiation of named parameters.
pub const PRIMES_A: [i64; 4] = [2, 3, 5, 7];
/// Second instantiation, used to check independence of the choice.
pub const PRIMES_B: [i64; 4] = [11, 13, 17, 19];

/// A numeric coefficient or a named generic non-zero parameter (`"param:λ"`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeff {
    Num(Rational),
    Param(String),
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Num(q) => write!(f, "{q}"),
            Coeff::Param(p) => write!(f, "param:{p}"),
        }
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.strip_prefix("param:") {
            Some(name) if !name.is_empty() => Ok(Coeff::Param(name.to_string())),
            Some(_) => Err(serde::de::Error::custom("empty parameter name")),
            None => s.parse().map(Coeff::Num).map_err(serde::de::Error::custom),
        }
    }
}

pub type Exp4 = [u32; 4];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: Coeff,
    pub exp: Exp4,
}

/// A recorded generality condition; `exp` names a monomial it forces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Condition {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp: Option<Exp4>,
}

/// `G_1 = G_2 = 0` in the variables `z, s, t, u` of weights `a_2..a_5`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LxyRecord {
    pub vars: Vec<String>,
    pub g1: Vec<Term>,
    pub g2: Vec<Term>,
    pub sing: Vec<String>,
    pub witness: String,
    pub conds: Vec<Condition>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalCurveMult {
    pub point: usize,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LxyError {
    #[error("malformed L_xy record: {0}")]
    Schema(String),
    #[error("unknown coordinate point {0:?}")]
    UnknownPoint(String),
    #[error("{0} does not lie on L_xy")]
    NotOnCurve(String),
    #[error("no equation is linear in a free variable at {0}")]
    NotEliminable(String),
    #[error("the eliminated equation vanishes identically at {0}")]
    Degenerate(String),
}

pub fn point_index(id: &str) -> Result<usize, LxyError> {
    POINT_IDS
        .iter()
        .position(|p| *p == id)
        .ok_or_else(|| LxyError::UnknownPoint(id.to_string()))
}

/// Sparse polynomial in `z, s, t, u` with exact coefficients.
pub type Poly = BTreeMap<Exp4, Rational>;

impl LxyRecord {
    /// Named parameters in order of first appearance.
    pub fn params(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in self.g1.iter().chain(&self.g2) {
            if let Coeff::Param(p) = &t.coeff {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }

    /// `(G_1, G_2)` with parameters replaced by `primes` in order of appearance.
    pub fn instantiate(&self, primes: &[i64]) -> (Poly, Poly) {
        let params = self.params();
        assert!(params.len() <= primes.len(), "not enough primes for the parameters");
        let conv = |terms: &[Term]| {
            let mut p = Poly::new();
            for t in terms {
                let c = match &t.coeff {
                    Coeff::Num(q) => q.clone(),
                    Coeff::Param(name) => {
                        let i = params.iter().position(|x| x == name).unwrap();
                        Rational::from_int(primes[i])
                    }
                };
                add_term(&mut p, t.exp, c);
            }
            p
        };
        (conv(&self.g1), conv(&self.g2))
    }
}

fn add_term(p: &mut Poly, e: Exp4, c: Rational) {
    let v = p.entry(e).or_insert_with(Rational::zero);
    *v = &*v + &c;
    if v.is_zero() {
        p.remove(&e);
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
            add_term(&mut out, e, ca * cb);
        }
    }
    out
}

fn poly_pow(a: &Poly, n: u32) -> Poly {
    let mut out = Poly::new();
    out.insert([0; 4], Rational::one());
    for _ in 0..n {
        out = poly_mul(&out, a);
    }
    out
}

/// Replace variable `v` by the polynomial `h`.
pub fn substitute(p: &Poly, v: usize, h: &Poly) -> Poly {
    let mut out = Poly::new();
    for (e, c) in p {
        let mut rest = *e;
        rest[v] = 0;
        let mut m = Poly::new();
        m.insert(rest, c.clone());
        for (e2, c2) in poly_mul(&m, &poly_pow(h, e[v])) {
            add_term(&mut out, e2, c2);
        }
    }
    out
}

/// Set variable `v` to 1.
fn dehomogenize(p: &Poly, v: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in p {
        let mut e2 = *e;
        e2[v] = 0;
        add_term(&mut out, e2, c.clone());
    }
    out
}

pub fn evaluate(p: &Poly, x: &[Rational; 4]) -> Rational {
    p.iter().fold(Rational::zero(), |acc, (e, c)| {
        let mut m = c.clone();
        for i in 0..4 {
            m = m * x[i].pow(e[i]);
        }
        acc + m
    })
}

fn degree_issues(name: &str, terms: &[Term], d: u64, w: &[u64]) -> Vec<String> {
    let mut out = Vec::new();
    if terms.is_empty() {
        out.push(format!("{name} has no terms"));
    }
    let allowed: BTreeSet<Vec<u32>> = monomials_of_degree(d, w).into_iter().collect();
    let mut seen = BTreeSet::new();
    for t in terms {
        if !allowed.contains(&t.exp.to_vec()) {
            out.push(format!(
                "{name} term {:?} has degree {}, expected {d}",
                t.exp,
                weighted_degree(&t.exp, w)
            ));
        }
        if !seen.insert(t.exp) {
            out.push(format!("{name} repeats monomial {:?}", t.exp));
        }
        if matches!(&t.coeff, Coeff::Num(q) if q.is_zero()) {
            out.push(format!("{name} has a zero coefficient"));
        }
    }
    out
}

/// Structural problems with a record against its family; empty means valid.
pub fn lxy_issues(record: &LxyRecord, family: &WciFamily) -> Vec<String> {
    let a = family.a();
    let w = &a[2..6];
    let (d1, d2) = family.degrees;
    let mut out = Vec::new();
    if record.vars.len() != 4 {
        out.push(format!("expected 4 variables, got {}", record.vars.len()));
    }
    out.extend(degree_issues("g1", &record.g1, d1, w));
    out.extend(degree_issues("g2", &record.g2, d2, w));
    for p in &record.sing {
        if point_index(p).is_err() {
            out.push(format!("unknown singular point {p:?}"));
        }
    }
    if record.params().len() > PRIMES_A.len() {
        out.push("too many named parameters".into());
    }
    for c in &record.conds {
        if let Some(e) = c.exp {
            let present = record.g1.iter().chain(&record.g2).any(|t| t.exp == e);
            if !present {
                out.push(format!("condition {:?} forces {:?}, which is missing", c.text, e));
            }
        }
    }
    out
}

pub fn lxy_validate(record: &LxyRecord, family: &WciFamily) -> Result<bool, LxyError> {
    if record.vars.len() != 4 || record.g1.is_empty() || record.g2.is_empty() {
        return Err(LxyError::Schema("need 4 variables and non-empty g1, g2".into()));
    }
    Ok(lxy_issues(record, family).is_empty())
}

fn unit(i: usize) -> Exp4 {
    let mut e = [0; 4];
    e[i] = 1;
    e
}

/// Whether coordinate point `i` satisfies `G_1 = G_2 = 0`.
pub fn on_curve(g: &(Poly, Poly), i: usize) -> bool {
    let at = |p: &Poly| p.iter().any(|(e, _)| (0..4).all(|k| k == i || e[k] == 0));
    !at(&g.0) && !at(&g.1)
}

/// Row of partial derivatives of `p` at coordinate point `i`.
fn gradient_at(p: &Poly, i: usize) -> [Rational; 4] {
    let mut row: [Rational; 4] = Default::default();
    for (e, c) in p {
        for (v, slot) in row.iter_mut().enumerate() {
            if e[v] == 0 {
                continue;
            }
            let mut rest = *e;
            rest[v] -= 1;
            if (0..4).all(|k| k == i || rest[k] == 0) {
                *slot = &*slot + &(c * Rational::from(e[v] as i64));
            }
        }
    }
    row
}

/// The point lies on the curve and the Jacobian drops rank there.
pub fn jacobian_rank_drop(g: &(Poly, Poly), i: usize) -> bool {
    if !on_curve(g, i) {
        return false;
    }
    let r1 = gradient_at(&g.0, i);
    let r2 = gradient_at(&g.1, i);
    (0..4).all(|a| (a + 1..4).all(|b| (&r1[a] * &r2[b] - &r1[b] * &r2[a]).is_zero()))
}

pub fn lxy_jacobian_sing_check(record: &LxyRecord, point_id: &str) -> Result<bool, LxyError> {
    let i = point_index(point_id)?;
    Ok(jacobian_rank_drop(&record.instantiate(&PRIMES_A), i))
}

/// The elimination used at point `i`: `(equation index, variable, plane polynomial)`.
pub fn eliminate(g: &(Poly, Poly), i: usize) -> Result<(usize, usize, Poly), LxyError> {
    let id = POINT_IDS[i].to_string();
    let eqs = [dehomogenize(&g.0, i), dehomogenize(&g.1, i)];
    if eqs.iter().any(|p| p.contains_key(&[0; 4])) {
        return Err(LxyError::NotOnCurve(id));
    }
    for (k, p) in eqs.iter().enumerate() {
        for v in (0..4).filter(|&v| v != i) {
            let Some(c) = p.get(&unit(v)) else { continue };
            let alone = p.keys().filter(|e| e[v] > 0).count() == 1;
            if !alone {
                continue;
            }
            // v = -(p - c v) / c
            let mut h = Poly::new();
            for (e, ce) in p {
                if *e != unit(v) {
                    add_term(&mut h, *e, -(ce / c));
                }
            }
            let plane = substitute(&eqs[1 - k], v, &h);
            if plane.is_empty() {
                return Err(LxyError::Degenerate(id));
            }
            return Ok((k, v, plane));
        }
    }
    Err(LxyError::NotEliminable(id))
}

pub fn mult_with(g: &(Poly, Poly), i: usize) -> Result<LocalCurveMult, LxyError> {
    let (_, _, plane) = eliminate(g, i)?;
    let mult = plane.keys().map(|e| e.iter().sum::<u32>()).min().unwrap();
    Ok(LocalCurveMult { point: i, mult })
}

/// Multiplicity at the coordinate point of the curve germ on the index-one cover.
pub fn lxy_mult_at(record: &LxyRecord, point_id: &str) -> Result<LocalCurveMult, LxyError> {
    let i = point_index(point_id)?;
    mult_with(&record.instantiate(&PRIMES_A), i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Vec<Term> {
        s.split('+')
            .map(|m| {
                let (coeff, body) = match m.strip_prefix('L') {
                    Some(rest) => (Coeff::Param("λ".into()), rest),
                    None => (Coeff::Num(Rational::one()), m),
                };
                let mut exp = [0u32; 4];
                let chars: Vec<char> = body.chars().collect();
                let mut k = 0;
                while k < chars.len() {
                    let v = "zstu".find(chars[k]).unwrap();
                    k += 1;
                    let mut e = 1;
                    if k < chars.len() && chars[k] == '^' {
                        e = chars[k + 1].to_digit(10).unwrap();
                        k += 2;
                    }
                    exp[v] += e;
                }
                Term { coeff, exp }
            })
            .collect()
    }

    fn rec(g1: &str, g2: &str) -> LxyRecord {
        LxyRecord {
            vars: ["z", "s", "t", "u"].map(String::from).to_vec(),
            g1: parse(g1),
            g2: parse(g2),
            sing: vec![],
            witness: String::new(),
            conds: vec![],
        }
    }

    #[test]
    fn multiplicities() {
        assert_eq!(lxy_mult_at(&rec("s^3+z^4", "us+t^2"), "p_u").unwrap().mult, 4);
        assert_eq!(lxy_mult_at(&rec("s^3+z^4", "uz+t^2"), "p_u").unwrap().mult, 3);
        assert_eq!(lxy_mult_at(&rec("uz+s^2", "us+t^2"), "p_z").unwrap().mult, 2);
    }

    #[test]
    fn jacobian() {
        assert!(lxy_jacobian_sing_check(&rec("uz+s^2", "us+t^2"), "p_z").unwrap());
        assert!(!lxy_jacobian_sing_check(&rec("uz+s^2", "us+t^2"), "p_u").unwrap());
        assert!(lxy_jacobian_sing_check(&rec("s^3+z^4", "us+t^2"), "p_u").unwrap());
        assert!(matches!(lxy_jacobian_sing_check(&rec("uz+s^2", "us+t^2"), "p_w"), Err(LxyError::UnknownPoint(_))));
    }

    #[test]
    fn validate_degrees() {
        let f69 = WciFamily::new(69, &[1, 1, 5, 7, 8, 9], (14, 16));
        assert!(lxy_validate(&rec("uz+s^2", "us+t^2"), &f69).unwrap());
        assert!(!lxy_validate(&rec("uz+s^3", "us+t^2"), &f69).unwrap());
        let f40 = WciFamily::new(40, &[1, 1, 3, 4, 5, 9], (10, 12));
        let mut r = rec("t^2+sz^2", "uz+s^3");
        r.conds.push(Condition { text: "s z^2 in F_1".into(), exp: Some([2, 1, 0, 0]) });
        assert!(lxy_validate(&r, &f40).unwrap());
        r.g1.pop();
        assert!(!lxy_validate(&r, &f40).unwrap());
    }

    #[test]
    fn params_instantiate() {
        let r = rec("uz+s^2", "us+t^2+Lz^3");
        let (_, g2) = r.instantiate(&PRIMES_B);
        assert_eq!(g2.get(&[3, 0, 0, 0]), Some(&Rational::from_int(11)));
    }

    #[test]
    fn not_on_curve() {
        assert!(matches!(lxy_mult_at(&rec("uz+s^2", "us+t^2+z^3"), "p_z"), Err(LxyError::NotOnCurve(_))));
    }
}
