//! Weighted projective spaces and codimension-2 weighted complete intersections.
//!
//! Everything here works on the combinatorics of weights and degrees only: a
//! "general member" is modelled by the full monomial support of each degree.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_all, monomials_of_degree, Rational};

/// Weights stored ascending, with `perm[i]` the caller's original index of sorted slot `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSpace {
    weights: Vec<u64>,
    perm: Vec<usize>,
}

impl WeightedSpace {
    pub fn new(weights: &[u64]) -> Self {
        assert!(weights.iter().all(|&w| w >= 1), "weights must be positive");
        let mut perm: Vec<usize> = (0..weights.len()).collect();
        perm.sort_by_key(|&i| (weights[i], i));
        WeightedSpace {
            weights: perm.iter().map(|&i| weights[i]).collect(),
            perm,
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    #[serde(rename = "br")]
    Br,
    #[serde(rename = "F(i)")]
    Fi,
    #[serde(rename = "F(ii)")]
    Fii,
    #[serde(rename = "F(other)")]
    Fother,
    #[serde(rename = "dP")]
    DP,
    #[serde(rename = "unknown")]
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WciFamily {
    pub no: u32,
    pub space: WeightedSpace,
    pub degrees: (u64, u64),
    pub class_tag: ClassTag,
}

impl WciFamily {
    pub fn new(no: u32, weights: &[u64], degrees: (u64, u64)) -> Self {
        WciFamily {
            no,
            space: WeightedSpace::new(weights),
            degrees,
            class_tag: ClassTag::Unknown,
        }
    }

    /// Sorted weights `a_0 <= ... <= a_5`.
    pub fn a(&self) -> &[u64] {
        self.space.weights()
    }

    pub fn degree_list(&self) -> [u64; 2] {
        [self.degrees.0, self.degrees.1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mark {
    QI,
    EI,
    #[serde(rename = "d")]
    D,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mark::QI => write!(f, "QI"),
            Mark::EI => write!(f, "EI"),
            Mark::D => write!(f, "d"),
        }
    }
}

/// `count` points of type `1/r(1,a,r-a)` with `a <= r - a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientSingularity {
    pub r: u64,
    pub a: u64,
    pub count: u64,
    pub marks: BTreeSet<Mark>,
}

impl QuotientSingularity {
    pub fn new(r: u64, a: u64, count: u64) -> Self {
        assert!(r >= 2 && a >= 1 && a < r && gcd(a, r) == 1, "invalid type 1/{r}(1,{a},{})", r.saturating_sub(a));
        QuotientSingularity {
            r,
            a: a.min(r - a),
            count,
            marks: BTreeSet::new(),
        }
    }

    pub fn with_marks(mut self, marks: &[Mark]) -> Self {
        self.marks = marks.iter().copied().collect();
        self
    }

    pub fn is_marked(&self) -> bool {
        !self.marks.is_empty()
    }

    pub fn type_key(&self) -> (u64, u64) {
        (self.r, self.a)
    }
}

impl fmt::Display for QuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count > 1 {
            write!(f, "{}x", self.count)?;
        }
        write!(f, "1/{}(1,{},{})", self.r, self.a, self.r - self.a)?;
        for m in &self.marks {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

pub fn weight_product(s: &QuotientSingularity) -> u64 {
    s.a * (s.r - s.a)
}

/// `(-K_Y)^3` for the Kawamata blowup of a point of type `s`.
pub fn kawamata_degree(a3: &Rational, s: &QuotientSingularity) -> Rational {
    a3 - Rational::new(1, (s.r * weight_product(s)) as i64)
}

/// Multiset of singularities, canonically ordered by `(r, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Basket(pub Vec<QuotientSingularity>);

impl Basket {
    /// Merge equal types and sort; marks are kept from the first occurrence.
    pub fn canonical(mut items: Vec<QuotientSingularity>) -> Self {
        items.sort_by_key(|s| (s.r, s.a));
        let mut out: Vec<QuotientSingularity> = Vec::new();
        for s in items {
            match out.last_mut() {
                Some(last) if last.type_key() == s.type_key() && last.marks == s.marks => {
                    last.count += s.count
                }
                _ => out.push(s),
            }
        }
        Basket(out)
    }

    /// `(r, a, count)` multiset with marks ignored.
    pub fn counts(&self) -> Vec<(u64, u64, u64)> {
        let mut m: std::collections::BTreeMap<(u64, u64), u64> = Default::default();
        for s in &self.0 {
            *m.entry(s.type_key()).or_default() += s.count;
        }
        m.into_iter().map(|((r, a), c)| (r, a, c)).collect()
    }

    pub fn total_points(&self) -> u64 {
        self.0.iter().map(|s| s.count).sum()
    }
}

impl fmt::Display for Basket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Index assignment `(k, j1, j2, i1, i2)` into the sorted weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DistinguishedConfig {
    pub k: usize,
    pub j1: usize,
    pub j2: usize,
    pub i1: usize,
    pub i2: usize,
}

impl DistinguishedConfig {
    pub fn singularity(&self, a: &[u64]) -> QuotientSingularity {
        QuotientSingularity::new(a[self.k], a[self.i1], 1)
    }

    pub fn wp(&self, a: &[u64]) -> u64 {
        a[self.i1] * a[self.i2]
    }
}

pub fn anticanonical_degree(family: &WciFamily) -> Rational {
    let (d1, d2) = family.degrees;
    let prod: u64 = family.a().iter().product();
    Rational::new((d1 * d2) as i64, prod as i64)
}

pub fn index_check(family: &WciFamily) -> bool {
    let s: u64 = family.a().iter().sum();
    s as i64 - (family.degrees.0 + family.degrees.1) as i64 == 1
}

fn subset(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

/// Monomials of degree `d` in the variables `vars` only, as full-length exponent vectors.
fn restricted(d: u64, weights: &[u64], vars: &[usize]) -> Vec<Vec<u32>> {
    if vars.is_empty() {
        return if d == 0 { vec![vec![0; weights.len()]] } else { vec![] };
    }
    let w: Vec<u64> = vars.iter().map(|&i| weights[i]).collect();
    monomials_of_degree(d, &w)
        .into_iter()
        .map(|e| {
            let mut full = vec![0u32; weights.len()];
            for (k, &i) in vars.iter().enumerate() {
                full[i] = e[k];
            }
            full
        })
        .collect()
}

/// Monomials `x_I^M * x_e` of degree `d` (with `M` possibly trivial).
fn external(d: u64, weights: &[u64], vars: &[usize], e: usize) -> Vec<Vec<u32>> {
    if weights[e] > d {
        return vec![];
    }
    let mut out = restricted(d - weights[e], weights, vars);
    for m in &mut out {
        m[e] += 1;
    }
    out
}

/// Ambient and member well-formedness.
pub fn wellformed(weights: &[u64], degrees: &[u64]) -> bool {
    assert!(degrees.len() <= 2);
    let n = weights.len();
    let ambient = (0..n).all(|skip| {
        let rest: Vec<u64> = (0..n).filter(|&i| i != skip).map(|i| weights[i]).collect();
        gcd_all(&rest) == 1
    });
    if !ambient || degrees.is_empty() {
        return ambient;
    }
    let dim_x = (n - 1) as i64 - degrees.len() as i64;
    let maxw = *weights.iter().max().unwrap();
    (2..=maxw).all(|r| {
        let j: Vec<usize> = (0..n).filter(|&i| weights[i] % r == 0).collect();
        if j.is_empty() {
            return true;
        }
        let m = degrees
            .iter()
            .filter(|&&d| !restricted(d, weights, &j).is_empty())
            .count() as i64;
        j.len() as i64 - 1 - m <= dim_x - 2
    })
}

/// Quasi-smoothness of a general hypersurface of degree `d`.
pub fn quasismooth_hypersurface(d: u64, weights: &[u64]) -> bool {
    assert!(d >= 1);
    let n = weights.len();
    (1u32..(1 << n)).all(|mask| {
        let vars = subset(mask, n);
        if !restricted(d, weights, &vars).is_empty() {
            return true;
        }
        let ext = (0..n)
            .filter(|e| mask & (1 << e) == 0)
            .filter(|&e| !external(d, weights, &vars, e).is_empty())
            .count();
        ext >= vars.len()
    })
}

/// Stratum-by-stratum necessary conditions for quasi-smoothness of a general
/// codimension-2 complete intersection of the given degrees.
pub fn quasismooth_ci_necessary(family: &WciFamily) -> bool {
    qs_ci_weights(family.a(), &family.degree_list())
}

/// Same as [`quasismooth_ci_necessary`] on raw weights and degrees.
pub fn qs_ci_weights(weights: &[u64], degrees: &[u64; 2]) -> bool {
    let n = weights.len();
    (1u32..(1 << n)).all(|mask| qs_ci_stratum_ok(weights, degrees, mask))
}

fn qs_ci_stratum_ok(weights: &[u64], degrees: &[u64; 2], mask: u32) -> bool {
    let n = weights.len();
    let vars = subset(mask, n);
    let size = vars.len();
    let outside: Vec<usize> = (0..n).filter(|e| mask & (1 << e) == 0).collect();
    let pure: Vec<usize> = degrees
        .iter()
        .map(|&d| restricted(d, weights, &vars).len())
        .collect();
    // For each equation: external directions with a non-zero derivative on the
    // stratum, and those where the derivative is a single monomial.
    let ext: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = degrees
        .iter()
        .map(|&d| {
            let mut nz = BTreeSet::new();
            let mut mono = BTreeSet::new();
            for &e in &outside {
                let c = external(d, weights, &vars, e).len();
                if c > 0 {
                    nz.insert(e);
                }
                if c == 1 {
                    mono.insert(e);
                }
            }
            (nz, mono)
        })
        .collect();
    let row_ok = |j: usize, need: usize| !ext[j].1.is_empty() || ext[j].0.len() >= need;
    match (pure[0] > 0, pure[1] > 0) {
        (true, true) => true,
        (false, true) | (true, false) => {
            let (zero, other) = if pure[0] == 0 { (0, 1) } else { (1, 0) };
            // The other equation cuts a non-empty hypersurface of the torus only
            // when it has at least two monomials.
            if pure[other] < 2 {
                return true;
            }
            !ext[zero].0.is_empty() && row_ok(zero, size - 1)
        }
        (false, false) => {
            let (n1, m1) = &ext[0];
            let (n2, m2) = &ext[1];
            let matching = n1.iter().any(|e1| n2.iter().any(|e2| e1 != e2));
            if !matching || !row_ok(0, size) || !row_ok(1, size) {
                return false;
            }
            if size == 1 {
                return true;
            }
            let cols = n1.union(n2).count();
            let monomial_minor = m1.iter().any(|&e1| {
                m2.iter()
                    .any(|&e2| e1 != e2 && (!n1.contains(&e2) || !n2.contains(&e1)))
            });
            cols > size || monomial_minor
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasketError {
    #[error("stratum mu_{r} on coordinates {coords:?}: {reason}")]
    AmbiguousStratum {
        r: u64,
        coords: Vec<usize>,
        reason: String,
    },
}

/// One fixed locus `P(a_J)`, `J = {i : r | a_i}`, met in finitely many points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumReport {
    pub r: u64,
    pub coords: Vec<usize>,
    /// Product of the non-vanishing restricted degrees over the product of the stratum weights.
    pub bezout: Rational,
    /// Points of the stratum grouped by exact stabilizer order: `(order, count)`.
    pub points: Vec<(u64, u64)>,
}

impl StratumReport {
    pub fn orbifold_sum(&self) -> Rational {
        self.points
            .iter()
            .fold(Rational::zero(), |acc, &(r, c)| acc + Rational::new(c as i64, r as i64))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasketComputation {
    pub basket: Basket,
    pub strata: Vec<StratumReport>,
}

/// Stratified basket of a general member; see the module docs for the model.
pub fn compute_basket(family: &WciFamily) -> Result<BasketComputation, BasketError> {
    basket_of(family.a(), &family.degree_list())
}

pub fn basket_of(weights: &[u64], degrees: &[u64; 2]) -> Result<BasketComputation, BasketError> {
    let n = weights.len();
    let maxw = *weights.iter().max().unwrap();
    // (exact stabilizer, count, a)
    let mut found: Vec<(u64, u64, u64)> = Vec::new();
    let mut strata = Vec::new();
    for r in (2..=maxw).rev() {
        let j: Vec<usize> = (0..n).filter(|&i| weights[i] % r == 0).collect();
        if j.is_empty() {
            continue;
        }
        let live: Vec<usize> = (0..2)
            .filter(|&k| !restricted(degrees[k], weights, &j).is_empty())
            .collect();
        let dim = j.len() as i64 - 1 - live.len() as i64;
        let ambiguous = |reason: &str| BasketError::AmbiguousStratum {
            r,
            coords: j.clone(),
            reason: reason.to_string(),
        };
        if dim > 0 {
            return Err(ambiguous("positive-dimensional intersection"));
        }
        if dim < 0 {
            continue;
        }
        if j.len() == 2 && live.len() == 1 {
            // A binary form vanishing to order > 1 at a vertex would be counted
            // with multiplicity by Bezout.
            let mons = restricted(degrees[live[0]], weights, &j);
            for &v in &j {
                let other = if v == j[0] { j[1] } else { j[0] };
                let ord = mons.iter().map(|m| m[other]).min().unwrap();
                let at_vertex = mons.iter().all(|m| m[v] == 0 || m[other] > 0);
                if at_vertex && ord > 1 {
                    return Err(ambiguous("non-reduced vertex"));
                }
            }
        }
        let num: u64 = live.iter().map(|&k| degrees[k]).product();
        let den: u64 = j.iter().map(|&i| weights[i]).product();
        let bezout = Rational::new(num as i64, den as i64);
        let mut points: Vec<(u64, u64)> = found
            .iter()
            .filter(|(r2, _, _)| r2 % r == 0)
            .map(|&(r2, c, _)| (r2, c))
            .collect();
        let prior = points
            .iter()
            .fold(Rational::zero(), |acc, &(r2, c)| acc + Rational::new(c as i64, r2 as i64));
        let fresh = (&bezout - &prior) * Rational::from(r);
        let count = match fresh.to_i64() {
            Some(c) if c >= 0 => c as u64,
            _ => return Err(ambiguous(&format!("non-integral point count {fresh}"))),
        };
        if count > 0 {
            let a = local_type(r, weights, degrees, &j)
                .map_err(|e| ambiguous(&e))?;
            found.push((r, count, a));
            points.push((r, count));
        }
        strata.push(StratumReport {
            r,
            coords: j,
            bezout,
            points,
        });
    }
    let items = found
        .into_iter()
        .map(|(r, c, a)| QuotientSingularity::new(r, a, c))
        .collect();
    strata.reverse();
    Ok(BasketComputation {
        basket: Basket::canonical(items),
        strata,
    })
}

/// Every admissible choice of eliminated directions at a point of the stratum
/// `coords`, as `(eliminated, normalized a)`.
pub fn local_type_choices(
    r: u64,
    weights: &[u64],
    degrees: &[u64; 2],
    coords: &[usize],
) -> Vec<(Vec<usize>, Option<u64>)> {
    let n = weights.len();
    let transverse: Vec<usize> = (0..n).filter(|i| !coords.contains(i)).collect();
    let vanishing: Vec<u64> = degrees
        .iter()
        .copied()
        .filter(|&d| restricted(d, weights, coords).is_empty())
        .collect();
    let candidates: Vec<Vec<usize>> = vanishing
        .iter()
        .map(|&d| {
            transverse
                .iter()
                .copied()
                .filter(|&e| !external(d, weights, coords, e).is_empty())
                .collect()
        })
        .collect();
    let mut choices: Vec<Vec<usize>> = vec![vec![]];
    for cands in &candidates {
        let mut next = Vec::new();
        for ch in &choices {
            for &e in cands {
                if !ch.contains(&e) {
                    let mut c = ch.clone();
                    c.push(e);
                    next.push(c);
                }
            }
        }
        choices = next;
    }
    choices
        .into_iter()
        .map(|elim| {
            let rest: Vec<u64> = transverse
                .iter()
                .filter(|i| !elim.contains(i))
                .map(|&i| weights[i] % r)
                .collect();
            let a = if rest.len() == 3 { normalize_type(r, &rest) } else { None };
            (elim, a)
        })
        .collect()
}

fn local_type(r: u64, weights: &[u64], degrees: &[u64; 2], coords: &[usize]) -> Result<u64, String> {
    let mut choices = local_type_choices(r, weights, degrees, coords);
    choices.sort();
    match choices.first() {
        None => Err("no admissible eliminated directions".into()),
        Some((_, None)) => Err("local type is not terminal".into()),
        Some((_, Some(a))) => Ok(*a),
    }
}

/// Bring `1/r(w1,w2,w3)` to the form `1/r(1,a,r-a)` and return `min(a, r-a)`.
pub fn normalize_type(r: u64, w: &[u64]) -> Option<u64> {
    for &wi in w {
        let Some(inv) = mod_inverse(wi % r, r) else { continue };
        let mut v: Vec<u64> = w.iter().map(|&x| (x % r) * inv % r).collect();
        v.sort();
        if let Some(pos) = v.iter().position(|&x| x == 1) {
            v.remove(pos);
            if v[0] > 0 && v[0] + v[1] == r {
                return Some(v[0].min(v[1]));
            }
        }
    }
    None
}

fn mod_inverse(x: u64, r: u64) -> Option<u64> {
    (1..r).find(|&y| x * y % r == 1)
}

/// Whether a general member meets `P(a_K)`, `K = {i : a_i = a_k}`, so that after a
/// linear change among equal-weight coordinates one of its points is `p_k`.
pub fn coordinate_point_on_member(weights: &[u64], degrees: &[u64; 2], k: usize) -> bool {
    let same = weights.iter().filter(|&&w| w == weights[k]).count();
    let live = degrees.iter().filter(|&&d| d % weights[k] == 0).count();
    live < same
}

/// All flop configurations `(k, j1, j2, i1, i2)` over the coordinates other than `x = x_0`.
pub fn detect_distinguished(family: &WciFamily) -> Vec<DistinguishedConfig> {
    let a = family.a();
    let (d1, d2) = family.degrees;
    let idx: Vec<usize> = (1..a.len()).collect();
    let mut out = Vec::new();
    for &k in &idx {
        if !coordinate_point_on_member(a, &family.degree_list(), k) {
            continue;
        }
        for &j1 in &idx {
            for &j2 in &idx {
                let distinct = [k, j1, j2];
                if j1 == j2 || j1 == k || j2 == k {
                    continue;
                }
                if a[k] + a[j1] != d1 || a[k] + a[j2] != d2 {
                    continue;
                }
                let rest: Vec<usize> = idx.iter().copied().filter(|i| !distinct.contains(i)).collect();
                if rest.len() != 2 {
                    continue;
                }
                let (i1, i2) = if a[rest[0]] <= a[rest[1]] { (rest[0], rest[1]) } else { (rest[1], rest[0]) };
                if a[i1] < a[i2] && a[i2] < a[k] {
                    out.push(DistinguishedConfig { k, j1, j2, i1, i2 });
                }
            }
        }
    }
    out
}
