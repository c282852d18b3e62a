mod common;

use wcifano::ffield::{falsify, perturbed_corpus};
use wcifano::par::par_map;
use wcifano::wps::qs_ci_weights;

fn pairs() -> Vec<(Vec<u64>, Vec<u64>)> {
    common::db()
        .families
        .iter()
        .map(|r| (r.weights.clone(), r.degrees.clone()))
        .collect()
}

fn agree(w: &[u64], d: &[u64], seed: u64) -> (bool, bool) {
    let qs = qs_ci_weights(w, &[d[0], d[1]]);
    (qs, falsify(w, d, seed).found())
}

#[test]
fn database_families_are_never_falsified() {
    let base = pairs();
    for ((w, d), (qs, found)) in base.iter().zip(par_map(&base, |(w, d)| agree(w, d, 7))) {
        assert!(qs && !found, "{w:?} {d:?}");
    }
}

#[test]
fn perturbed_non_examples_agree() {
    let corpus = perturbed_corpus(&pairs(), 50, 2024);
    assert_eq!(corpus.len(), 50);
    let results = par_map(&corpus, |(w, d)| agree(w, d, 11));
    for ((w, d), (qs, found)) in corpus.iter().zip(&results) {
        assert_eq!(*qs, !found, "{w:?} {d:?}");
    }
    // The corpus must exercise both outcomes.
    assert!(results.iter().any(|r| r.0) && results.iter().any(|r| !r.0));
}

#[test]
fn falsifier_finds_known_singular_members() {
    // Both quintics lie in (x, y)^2 along P(3,3,3,3), so every member is singular there.
    let report = falsify(&[1, 1, 3, 3, 3, 3], &[5, 5], 3);
    assert!(report.found());
    assert!(!qs_ci_weights(&[1, 1, 3, 3, 3, 3], &[5, 5]));
    let smooth = falsify(&[1, 1, 1, 1, 1, 1], &[2, 3], 3);
    assert!(!smooth.found());
}
