//! Printed family data, transcribed by hand and frozen. `1/r` without a
//! subscript pair is read as `1/r(1, r-1)` when that is the only type of index
//! `r`; otherwise the pair is left unspecified and recorded as `a = 0`.

#![allow(dead_code)]

use std::path::PathBuf;

pub struct Printed {
    pub no: u32,
    pub weights: [u64; 6],
    pub degrees: (u64, u64),
    pub a3: (i64, i64),
    /// `(r, a, count, mark)` with mark one of "", "QI", "EI", "d".
    pub basket: &'static [(u64, u64, u64, &'static str)],
}

const fn p(
    no: u32,
    degrees: (u64, u64),
    weights: [u64; 6],
    a3: (i64, i64),
    basket: &'static [(u64, u64, u64, &'static str)],
) -> Printed {
    Printed { no, weights, degrees, a3, basket }
}

pub const FI: [u32; 8] = [42, 55, 66, 68, 69, 77, 81, 82];
pub const FII: [u32; 21] = [40, 43, 50, 52, 53, 54, 56, 57, 58, 61, 62, 63, 65, 67, 70, 72, 73, 74, 79, 80, 83];
pub const LCT_ONE: [u32; 11] = [42, 55, 66, 68, 69, 77, 79, 80, 81, 82, 83];

pub const PRINTED: [Printed; 29] = [
    p(42, (10, 12), [1, 1, 4, 5, 6, 6], (1, 6), &[(2, 1, 1, ""), (6, 1, 2, "d")]),
    p(55, (12, 14), [1, 1, 4, 6, 7, 8], (1, 8), &[(2, 1, 1, ""), (4, 1, 1, "QI"), (8, 1, 1, "d")]),
    p(66, (14, 15), [1, 2, 5, 6, 7, 9], (1, 18), &[(2, 1, 2, ""), (6, 1, 1, "QI"), (9, 2, 1, "d")]),
    p(68, (14, 15), [1, 3, 5, 6, 7, 8], (1, 24), &[(3, 1, 2, ""), (6, 1, 1, "EI"), (8, 3, 1, "d")]),
    p(69, (14, 16), [1, 1, 5, 7, 8, 9], (4, 45), &[(5, 2, 1, ""), (9, 1, 1, "d")]),
    p(77, (16, 18), [1, 1, 6, 8, 9, 10], (1, 15), &[(2, 1, 1, ""), (3, 1, 1, ""), (10, 1, 1, "d")]),
    p(81, (18, 20), [1, 5, 6, 7, 9, 11], (4, 231), &[(3, 1, 1, ""), (7, 2, 1, "EI"), (11, 5, 1, "d")]),
    p(82, (18, 22), [1, 2, 5, 9, 11, 13], (2, 65), &[(5, 1, 1, ""), (13, 2, 1, "d")]),
    p(40, (10, 12), [1, 1, 3, 4, 5, 9], (2, 9), &[(3, 1, 1, "QI"), (9, 4, 1, "d")]),
    p(43, (10, 12), [1, 2, 3, 4, 5, 8], (1, 8), &[(2, 1, 3, ""), (4, 1, 1, "QI"), (8, 3, 1, "d")]),
    p(50, (10, 14), [1, 2, 3, 5, 7, 7], (2, 21), &[(3, 1, 1, ""), (7, 2, 2, "d")]),
    p(52, (10, 15), [1, 2, 3, 5, 7, 8], (5, 56), &[(2, 1, 1, ""), (7, 2, 1, "d"), (8, 3, 1, "d")]),
    p(53, (12, 13), [1, 3, 4, 5, 6, 7], (13, 210), &[(2, 1, 1, ""), (3, 1, 2, ""), (5, 1, 1, "EI"), (7, 3, 1, "d")]),
    p(54, (12, 14), [1, 1, 3, 4, 7, 11], (2, 11), &[(11, 4, 1, "d")]),
    p(56, (12, 14), [1, 2, 3, 4, 7, 10], (1, 10), &[(2, 1, 4, ""), (10, 3, 1, "d")]),
    p(57, (12, 14), [1, 2, 3, 5, 7, 9], (4, 45), &[(3, 1, 1, ""), (5, 2, 1, "d"), (9, 2, 1, "d")]),
    p(58, (12, 14), [1, 3, 4, 5, 7, 7], (2, 35), &[(5, 0, 1, "QI"), (7, 3, 2, "d")]),
    p(61, (12, 15), [1, 1, 4, 5, 6, 11], (3, 22), &[(2, 1, 1, ""), (11, 5, 1, "d")]),
    p(62, (12, 15), [1, 3, 4, 5, 6, 9], (1, 18), &[(2, 1, 1, ""), (3, 1, 3, ""), (9, 4, 1, "d")]),
    p(63, (12, 15), [1, 3, 4, 5, 7, 8], (3, 56), &[(4, 1, 1, ""), (7, 3, 1, "d"), (8, 3, 1, "d")]),
    p(65, (14, 15), [1, 2, 3, 5, 7, 12], (1, 12), &[(2, 1, 1, ""), (3, 1, 1, ""), (12, 5, 1, "d")]),
    p(67, (14, 15), [1, 3, 4, 5, 7, 10], (1, 20), &[(2, 1, 1, ""), (4, 1, 1, ""), (5, 2, 1, "QI"), (10, 3, 1, "d")]),
    p(70, (14, 16), [1, 3, 4, 5, 7, 11], (8, 165), &[(3, 1, 1, ""), (5, 2, 1, "QI"), (11, 4, 1, "d")]),
    p(72, (15, 16), [1, 2, 3, 5, 8, 13], (1, 13), &[(2, 1, 2, ""), (13, 5, 1, "d")]),
    p(73, (15, 16), [1, 3, 4, 5, 8, 11], (1, 22), &[(4, 1, 2, ""), (11, 3, 1, "d")]),
    p(74, (14, 18), [1, 2, 3, 7, 9, 11], (2, 33), &[(3, 1, 2, ""), (11, 2, 1, "d")]),
    p(79, (18, 20), [1, 4, 5, 6, 9, 14], (1, 42), &[(2, 1, 2, ""), (3, 1, 2, ""), (14, 5, 1, "d")]),
    p(80, (18, 20), [1, 4, 5, 7, 9, 13], (2, 91), &[(7, 2, 1, "QI"), (13, 4, 1, "d")]),
    p(83, (20, 21), [1, 3, 4, 7, 10, 17], (1, 34), &[(2, 1, 1, ""), (17, 7, 1, "d")]),
];

pub fn printed(no: u32) -> &'static Printed {
    PRINTED.iter().find(|f| f.no == no).unwrap()
}

/// `(r, a, count)` with marks dropped, equal types merged.
pub fn printed_counts(f: &Printed) -> Vec<(u64, u64, u64)> {
    let mut m = std::collections::BTreeMap::new();
    for &(r, a, c, _) in f.basket {
        *m.entry((r, a.min(r - a))).or_insert(0) += c;
    }
    m.into_iter().map(|((r, a), c)| (r, a, c)).collect()
}

pub fn fully_specified(f: &Printed) -> bool {
    f.basket.iter().all(|e| e.1 != 0)
}

/// Whether a computed `(r, a, count)` multiset agrees with the print, an
/// unspecified pair matching any type of the same index.
pub fn matches_print(f: &Printed, got: &[(u64, u64, u64)]) -> bool {
    let want = printed_counts(f);
    let fixed = |v: &[(u64, u64, u64)], r: u64| v.iter().filter(|e| e.0 == r).map(|e| e.2).sum::<u64>();
    let rs: std::collections::BTreeSet<u64> = want.iter().chain(got).map(|e| e.0).collect();
    rs.into_iter().all(|r| {
        if want.iter().any(|e| e.0 == r && e.1 == 0) {
            fixed(&want, r) == fixed(got, r)
        } else {
            want.iter().filter(|e| e.0 == r).eq(got.iter().filter(|e| e.0 == r))
        }
    })
}

pub fn db_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/families.json")
}

pub fn db() -> wcifano::db::FamilyDb {
    wcifano::db::load_db(db_path()).expect("shipped database loads")
}

/// `h^0(-K)` from the plurigenus formula for a Fano 3-fold of index one:
/// `(A^3)/2 + 3 - sum b(r-b)/(2r)`, where the point is `1/r(1,-1,b)`.
pub fn rr_h0(a3: (i64, i64), basket: &[(u64, u64, u64)]) -> num_rational::Ratio<i64> {
    use num_rational::Ratio;
    let mut h = Ratio::new(a3.0, 2 * a3.1) + Ratio::from_integer(3);
    for &(r, a, c) in basket {
        // 1/r(1, a, r-a) ~ 1/r(a^{-1}, 1, -1): b = a^{-1} mod r.
        let b = (1..r).find(|&y| y * a % r == 1).unwrap();
        h -= Ratio::new((c * b * (r - b)) as i64, (2 * r) as i64);
    }
    h
}
