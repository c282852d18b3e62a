//! Randomized search for singular points of the affine cone over a general
//! weighted complete intersection, over the prime field `F_p`, `p = 2^31 - 1`.
//!
//! A random member has every monomial of each degree with a random non-zero
//! coefficient. For each coordinate stratum we restrict to a random line
//! `x_f = t` (other stratum coordinates random non-zero constants, the rest 0)
//! and solve for `t` where the equations and all maximal Jacobian minors vanish.
//! Any point found is verified by direct evaluation, so a positive answer is a
//! proof that this member is not quasi-smooth.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::monomials_of_degree;

pub const P: u64 = 2_147_483_647;

fn mul(a: u64, b: u64) -> u64 {
    a * b % P
}

fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    assert!(a != 0);
    pow(a, P - 2)
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
type UPoly = Vec<u64>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn padd(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % P).collect())
}

fn psub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect())
}

fn pmul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul(x, y)) % P;
        }
    }
    trim(out)
}

fn prem(a: &UPoly, m: &UPoly) -> UPoly {
    let mut r = a.clone();
    let lead = inv(*m.last().unwrap());
    while r.len() >= m.len() {
        let c = mul(*r.last().unwrap(), lead);
        let shift = r.len() - m.len();
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = sub(r[shift + i], mul(c, mi));
        }
        r = trim(r);
    }
    r
}

fn monic(p: UPoly) -> UPoly {
    match p.last() {
        None => p,
        Some(&l) => {
            let li = inv(l);
            p.into_iter().map(|c| mul(c, li)).collect()
        }
    }
}

fn pgcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn ppowmod(base: &UPoly, mut e: u64, m: &UPoly) -> UPoly {
    let mut acc: UPoly = prem(&vec![1], m);
    let mut b = prem(base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = prem(&pmul(&acc, &b), m);
        }
        b = prem(&pmul(&b, &b), m);
        e >>= 1;
    }
    acc
}

/// All roots in `F_p` of a non-zero polynomial.
fn roots<R: Rng>(f: &UPoly, rng: &mut R) -> Vec<u64> {
    let f = monic(trim(f.clone()));
    if f.len() <= 1 {
        return vec![];
    }
    // product of the distinct linear factors
    let xp = ppowmod(&vec![0, 1], P, &f);
    let h = pgcd(&f, &psub(&xp, &vec![0, 1]));
    let mut out = Vec::new();
    split(&h, rng, &mut out);
    out.sort();
    out.dedup();
    out
}

fn split<R: Rng>(h: &UPoly, rng: &mut R, out: &mut Vec<u64>) {
    match h.len() {
        0 | 1 => {}
        2 => out.push(sub(0, h[0])),
        _ => loop {
            let delta = rng.gen_range(0..P);
            let g = ppowmod(&vec![delta, 1], (P - 1) / 2, h);
            let g = pgcd(h, &psub(&g, &vec![1]));
            if g.len() > 1 && g.len() < h.len() {
                let q = pdiv_exact(h, &g);
                split(&g, rng, out);
                split(&q, rng, out);
                return;
            }
        },
    }
}

fn pdiv_exact(a: &UPoly, b: &UPoly) -> UPoly {
    let mut r = a.clone();
    let lead = inv(*b.last().unwrap());
    let mut q = vec![0; a.len() - b.len() + 1];
    while r.len() >= b.len() {
        let c = mul(*r.last().unwrap(), lead);
        let shift = r.len() - b.len();
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = sub(r[shift + i], mul(c, bi));
        }
        r = trim(r);
    }
    trim(q)
}

/// A random member: every monomial of each degree with a non-zero coefficient.
#[derive(Debug, Clone)]
pub struct Member {
    pub weights: Vec<u64>,
    pub eqs: Vec<Vec<(Vec<u32>, u64)>>,
}

impl Member {
    pub fn random<R: Rng>(weights: &[u64], degrees: &[u64], rng: &mut R) -> Self {
        let eqs = degrees
            .iter()
            .map(|&d| {
                monomials_of_degree(d, weights)
                    .into_iter()
                    .map(|e| (e, rng.gen_range(1..P)))
                    .collect()
            })
            .collect();
        Member {
            weights: weights.to_vec(),
            eqs,
        }
    }

    fn eval_term(e: &[u32], c: u64, x: &[u64]) -> u64 {
        e.iter().zip(x).fold(c, |acc, (&ei, &xi)| mul(acc, pow(xi, ei as u64)))
    }

    /// Equation values and Jacobian rows at `x`.
    pub fn evaluate(&self, x: &[u64]) -> (Vec<u64>, Vec<Vec<u64>>) {
        let n = x.len();
        let vals = self
            .eqs
            .iter()
            .map(|eq| eq.iter().fold(0, |acc, (e, c)| (acc + Self::eval_term(e, *c, x)) % P))
            .collect();
        let jac = self
            .eqs
            .iter()
            .map(|eq| {
                (0..n)
                    .map(|k| {
                        eq.iter().fold(0, |acc, (e, c)| {
                            if e[k] == 0 {
                                return acc;
                            }
                            let mut d = e.clone();
                            d[k] -= 1;
                            (acc + Self::eval_term(&d, mul(*c, e[k] as u64 % P), x)) % P
                        })
                    })
                    .collect()
            })
            .collect();
        (vals, jac)
    }

    /// Whether `x` is a non-zero point of the cone where the Jacobian is not of full rank.
    pub fn is_singular_cone_point(&self, x: &[u64]) -> bool {
        if x.iter().all(|&v| v == 0) {
            return false;
        }
        let (vals, jac) = self.evaluate(x);
        vals.iter().all(|&v| v == 0) && minors(&jac).iter().all(|&m| m == 0)
    }
}

/// Maximal minors of a 1- or 2-row matrix over `F_p`.
fn minors(rows: &[Vec<u64>]) -> Vec<u64> {
    match rows.len() {
        1 => rows[0].clone(),
        2 => {
            let n = rows[0].len();
            let mut out = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    out.push(sub(mul(rows[0][a], rows[1][b]), mul(rows[0][b], rows[1][a])));
                }
            }
            out
        }
        _ => panic!("only one or two equations are supported"),
    }
}

/// `c x^e` restricted to the line; empty if it vanishes there.
fn term_on_line(e: &[u32], c: u64, x: &[u64], f: usize, support: u32) -> UPoly {
    if (0..e.len()).any(|i| e[i] > 0 && support & (1 << i) == 0) {
        return vec![];
    }
    let coeff = (0..e.len())
        .filter(|&i| i != f)
        .fold(c, |acc, i| mul(acc, pow(x[i], e[i] as u64)));
    let mut p = vec![0; e[f] as usize + 1];
    p[e[f] as usize] = coeff;
    trim(p)
}

fn search_line<R: Rng>(member: &Member, support: u32, f: usize, x: &mut Vec<u64>, rng: &mut R) -> Option<Vec<u64>> {
    let n = member.weights.len();
    let mut eqs: Vec<UPoly> = Vec::new();
    let mut jac: Vec<Vec<UPoly>> = Vec::new();
    for eq in &member.eqs {
        let mut val = vec![];
        let mut row = vec![vec![]; n];
        for (e, c) in eq {
            val = padd(&val, &term_on_line(e, *c, x, f, support));
            for k in 0..n {
                if e[k] > 0 {
                    let mut d = e.clone();
                    d[k] -= 1;
                    row[k] = padd(&row[k], &term_on_line(&d, mul(*c, e[k] as u64), x, f, support));
                }
            }
        }
        eqs.push(val);
        jac.push(row);
    }
    let mut polys = eqs;
    if jac.len() == 1 {
        polys.extend(jac[0].iter().cloned());
    } else {
        for a in 0..n {
            for b in a + 1..n {
                polys.push(psub(&pmul(&jac[0][a], &jac[1][b]), &pmul(&jac[0][b], &jac[1][a])));
            }
        }
    }
    let mut g: UPoly = vec![];
    for p in &polys {
        if !p.is_empty() {
            g = if g.is_empty() { monic(p.clone()) } else { pgcd(&g, p) };
        }
    }
    let candidates = if g.is_empty() {
        vec![rng.gen_range(1..P)]
    } else {
        roots(&g, rng)
    };
    for t in candidates {
        x[f] = t;
        if member.is_singular_cone_point(x) {
            return Some(x.clone());
        }
    }
    None
}

/// Search every coordinate stratum of one member for a singular cone point.
pub fn find_singular_point<R: Rng>(member: &Member, trials: usize, rng: &mut R) -> Option<Vec<u64>> {
    let n = member.weights.len();
    for support in 1u32..(1 << n) {
        let coords: Vec<usize> = (0..n).filter(|i| support & (1 << i) != 0).collect();
        for trial in 0..trials {
            let f = coords[trial % coords.len()];
            let mut x = vec![0u64; n];
            for &i in &coords {
                x[i] = rng.gen_range(1..P);
            }
            if let Some(p) = search_line(member, support, f, &mut x, rng) {
                return Some(p);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalsifierReport {
    pub members: usize,
    /// Members on which a verified singular cone point was found.
    pub singular_members: usize,
    pub witness: Option<Vec<u64>>,
}

impl FalsifierReport {
    /// The agreed threshold for declaring the general member not quasi-smooth.
    pub fn found(&self) -> bool {
        self.singular_members >= 3
    }
}

pub const MEMBERS: usize = 5;
pub const TRIALS: usize = 3;

/// Run the falsifier on `MEMBERS` random members of the given degrees.
pub fn falsify(weights: &[u64], degrees: &[u64], seed: u64) -> FalsifierReport {
    assert!(matches!(degrees.len(), 1 | 2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut singular_members = 0;
    let mut witness = None;
    for _ in 0..MEMBERS {
        let member = Member::random(weights, degrees, &mut rng);
        if let Some(p) = find_singular_point(&member, TRIALS, &mut rng) {
            singular_members += 1;
            witness.get_or_insert(p);
        }
    }
    FalsifierReport {
        members: MEMBERS,
        singular_members,
        witness,
    }
}

/// Seeded perturbations (one weight or one degree moved by 1) of the given
/// `(weights, degrees)` pairs, excluding the originals.
pub fn perturbed_corpus(base: &[(Vec<u64>, Vec<u64>)], count: usize, seed: u64) -> Vec<(Vec<u64>, Vec<u64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100_000, "cannot build the perturbed corpus");
        let (w, d) = &base[rng.gen_range(0..base.len())];
        let (mut w, mut d) = (w.clone(), d.clone());
        let up = rng.gen_bool(0.5);
        let target = if rng.gen_bool(0.5) { &mut w } else { &mut d };
        let i = rng.gen_range(0..target.len());
        if up {
            target[i] += 1;
        } else if target[i] > 1 {
            target[i] -= 1;
        } else {
            continue;
        }
        w.sort();
        d.sort();
        if d.windows(2).any(|p| p[0] == p[1]) {
            continue;
        }
        let candidate = (w, d);
        if base.contains(&candidate) || out.contains(&candidate) {
            continue;
        }
        out.push(candidate);
    }
    out
}
