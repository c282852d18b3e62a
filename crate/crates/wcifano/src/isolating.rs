//! Isolating classes: the projection and semigroup recipes, and verification of
//! the per-stratum data recorded in the family database.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{lcm, semigroup_min_multiple, Rational};
use crate::wps::{anticanonical_degree, WciFamily};

/// `l` for a point off `H_{x_j}`: the largest `lcm(a_j, a_k)`, `k != j`.
pub fn isolating_by_projection(weights: &[u64], j: usize) -> u64 {
    assert!(j < weights.len(), "index out of range");
    if weights.len() == 1 {
        return weights[0];
    }
    (0..weights.len())
        .filter(|&k| k != j)
        .map(|k| lcm(weights[j], weights[k]))
        .max()
        .unwrap()
}

/// `l` when the first two coordinates are non-zero at the point. Non-zero
/// coordinates contribute `a_i * min{k : k a_i in <a_0, a_1>}`, zero ones `a_i`.
pub fn isolating_structured(weights: &[u64], nonzero: &[bool]) -> u64 {
    assert!(weights.len() >= 2 && weights.len() == nonzero.len());
    assert!(nonzero[0] && nonzero[1], "the first two coordinates must be non-zero");
    let (a0, a1) = (weights[0], weights[1]);
    let mut l = lcm(a0, a1);
    for i in 2..weights.len() {
        let li = if nonzero[i] {
            weights[i] * semigroup_min_multiple(a0, a1, weights[i])
        } else {
            weights[i]
        };
        l = l.max(li);
    }
    l
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsolatingKind {
    Point,
    Curve,
}

/// `(A . Gamma) = d_num / d_den` and `mult_p Gamma = m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveData {
    pub d_num: u64,
    pub d_den: u64,
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

impl CurveData {
    pub fn degree(&self) -> Rational {
        Rational::new(self.d_num as i64, self.d_den as i64)
    }
}

/// The class `lA`, possibly only `(p, Gamma)`-isolating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingClass {
    pub l: u64,
    pub kind: IsolatingKind,
    pub curve: Option<CurveData>,
}

/// How `l` is re-derived. Coordinates index the sorted weights; for `isolstr`
/// the first two listed coordinates play the role of `a_0, a_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Recipe {
    Findisol { coords: Vec<usize>, j: usize },
    Isolstr { coords: Vec<usize>, nonzero: Vec<bool> },
}

impl Recipe {
    pub fn coords(&self) -> &[usize] {
        match self {
            Recipe::Findisol { coords, .. } | Recipe::Isolstr { coords, .. } => coords,
        }
    }

    /// Recompute `l` from the family weights.
    pub fn evaluate(&self, weights: &[u64]) -> Result<u64, String> {
        let coords = self.coords();
        if coords.is_empty() || coords.iter().any(|&i| i >= weights.len()) {
            return Err(format!("coordinates {coords:?} out of range"));
        }
        let w: Vec<u64> = coords.iter().map(|&i| weights[i]).collect();
        match self {
            Recipe::Findisol { j, .. } => {
                let pos = coords
                    .iter()
                    .position(|c| c == j)
                    .ok_or_else(|| format!("j = {j} is not among the coordinates"))?;
                Ok(isolating_by_projection(&w, pos))
            }
            Recipe::Isolstr { nonzero, .. } => {
                if nonzero.len() != coords.len() || coords.len() < 2 || !nonzero[0] || !nonzero[1] {
                    return Err("mask must match the coordinates and start with two non-zero entries".into());
                }
                Ok(isolating_structured(&w, nonzero))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaTag {
    Findisol,
    Isolstr,
    IsolI,
    IsolIia,
    IsolIibc1,
    IsolIic,
}

impl LemmaTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            LemmaTag::Findisol => "findisol",
            LemmaTag::Isolstr => "isolstr",
            LemmaTag::IsolI => "isol-i",
            LemmaTag::IsolIia => "isol-iia",
            LemmaTag::IsolIibc1 => "isol-iibc1",
            LemmaTag::IsolIic => "isol-iic",
        }
    }
}

impl fmt::Display for LemmaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaTag {
    type Err = IsolatingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "findisol" => LemmaTag::Findisol,
            "isolstr" => LemmaTag::Isolstr,
            "isol-i" => LemmaTag::IsolI,
            "isol-iia" => LemmaTag::IsolIia,
            "isol-iibc1" => LemmaTag::IsolIibc1,
            "isol-iic" => LemmaTag::IsolIic,
            other => return Err(IsolatingError::UnknownLemmaTag(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsolatingError {
    #[error("unknown lemma tag {0:?}")]
    UnknownLemmaTag(String),
}

/// One recorded branch of a nonsingular-point stratum. The id is
/// `region[/branch]` with region one of `off_Lxy`, `off_Hx`, `Hx_minus_Lxy`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumEntry {
    pub id: String,
    pub lemma: String,
    pub l: u64,
    /// The divisor `S` is taken in `|cA|`.
    pub c: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<Recipe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveData>,
}

impl StratumEntry {
    pub fn region(&self) -> &str {
        self.id.split('/').next().unwrap_or("")
    }

    pub fn lemma_tag(&self) -> Result<LemmaTag, IsolatingError> {
        self.lemma.parse()
    }

    pub fn isolating_class(&self) -> IsolatingClass {
        IsolatingClass {
            l: self.l,
            kind: if self.curve.is_some() {
                IsolatingKind::Curve
            } else {
                IsolatingKind::Point
            },
            curve: self.curve.clone(),
        }
    }
}

/// Closed form of `(A . Gamma)` named by a formula tag, if the tag is known.
fn curve_formula(tag: &str, weights: &[u64]) -> Option<Rational> {
    let a4 = weights[4] as i64;
    let a5 = weights[5] as i64;
    match tag {
        "(a4+a5)/(a4*a5)" => Some(Rational::new(a4 + a5, a4 * a5)),
        "2/a5" => Some(Rational::new(2, a5)),
        _ => None,
    }
}

/// Everything wrong with an entry; empty means verified.
pub fn stratum_entry_issues(entry: &StratumEntry, family: &WciFamily) -> Result<Vec<String>, IsolatingError> {
    let tag = entry.lemma_tag()?;
    let a = family.a();
    let mut issues = Vec::new();
    if entry.l == 0 {
        issues.push("l must be positive".to_string());
    }
    if !entry.c.is_positive() {
        issues.push(format!("c = {} must be positive", entry.c));
    }
    match &entry.recipe {
        Some(recipe) => match recipe.evaluate(a) {
            Ok(l) if l == entry.l => {}
            Ok(l) => issues.push(format!("recipe gives l = {l}, recorded {}", entry.l)),
            Err(e) => issues.push(e),
        },
        None if matches!(tag, LemmaTag::Findisol | LemmaTag::Isolstr) => {
            issues.push(format!("lemma {tag} needs a recipe"));
        }
        None => {}
    }
    if let Some(curve) = &entry.curve {
        if curve.d_num == 0 || curve.d_den == 0 || curve.m == 0 {
            issues.push("curve data must be positive".to_string());
        } else {
            let recorded = curve.degree();
            match curve.formula.as_deref() {
                None | Some("explicit") => {}
                Some(tag) => match curve_formula(tag, a) {
                    Some(v) if v == recorded => {}
                    Some(v) => issues.push(format!("(A.Gamma) = {v} by {tag}, recorded {recorded}")),
                    None => issues.push(format!("unknown curve formula {tag:?}")),
                },
            }
        }
    }
    if tag == LemmaTag::IsolIic {
        let bound = Rational::from(entry.l) * anticanonical_degree(family);
        if bound > Rational::one() {
            issues.push(format!("l = {} exceeds 1/(A^3)", entry.l));
        }
    }
    Ok(issues)
}

pub fn verify_stratum_entry(entry: &StratumEntry, family: &WciFamily) -> Result<bool, IsolatingError> {
    Ok(stratum_entry_issues(entry, family)?.is_empty())
}
