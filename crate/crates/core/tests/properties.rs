use std::collections::HashMap;

use clipseq_core::textio::{
    format_permutation, format_permutation_compact, format_polygon, parse_permutation,
    parse_polygon, Polygon,
};
use clipseq_core::{
    all_dissections, all_triangulations, build_triangulation, catalan, clip_sequence, compose_312,
    contains_312_naive, crossing, decent_to_dissection, decompose_312, dissection_to_decent,
    find_312, post_order, random_312_avoider, to_binary_tree, Diagonal, Dissection, Permutation,
};
use proptest::prelude::*;

fn permutation(max: usize) -> impl Strategy<Value = Vec<u32>> {
    (1..=max).prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle())
}

proptest! {
    #[test]
    fn crossing_is_symmetric(a in 1u32..12, b in 1u32..12, c in 1u32..12, d in 1u32..12) {
        prop_assume!(a != b && c != d);
        let x = Diagonal::new(a, b);
        let y = Diagonal::new(c, d);
        prop_assert_eq!(crossing(x, y), crossing(y, x));
        prop_assert!(!crossing(x, x));
    }

    #[test]
    fn fast_312_search_agrees_with_cubic(p in permutation(40)) {
        prop_assert_eq!(find_312(&p).is_some(), contains_312_naive(&p));
    }

    #[test]
    fn random_avoiders_round_trip(m in 1u32..200, seed in any::<u64>()) {
        let p = random_312_avoider(m, seed);
        prop_assert!(!contains_312_naive(&p));
        let t = build_triangulation(&p).unwrap();
        prop_assert_eq!(&clip_sequence(&t).unwrap().0, &p);
        prop_assert_eq!(&post_order(&to_binary_tree(&t)), &p);
        let text = format_polygon(&Polygon::Triangulation(t.clone()));
        prop_assert_eq!(parse_polygon(&text).unwrap(), Polygon::Triangulation(t));
    }

    #[test]
    fn normal_form_round_trip(m in 1u32..60, seed in any::<u64>()) {
        let p = random_312_avoider(m, seed);
        let dec = decompose_312(&p).unwrap();
        prop_assert_eq!(compose_312(&dec.alpha, &dec.beta, m).unwrap(), p);
    }

    #[test]
    fn permutation_text_round_trip(p in permutation(30)) {
        let p = Permutation::new(p).unwrap();
        prop_assert_eq!(&parse_permutation(&format_permutation(&p)).unwrap(), &p);
        prop_assert_eq!(&parse_permutation(&format_permutation_compact(&p)).unwrap(), &p);
    }

    #[test]
    fn doubled_avoiders_dissect_and_invert(m in 1u32..5, seed in any::<u64>()) {
        // Replacing each value v by the pair 2v, 2v-1 gives a decent avoider.
        let base = random_312_avoider(m, seed);
        let p = Permutation::new(base.iter().flat_map(|&v| [2 * v, 2 * v - 1]).collect()).unwrap();
        let map = decent_to_dissection(&p).unwrap();
        let r = map.report.runs.len() as u32;
        prop_assert_eq!(map.dissection.n_vertices(), 2 * m - r + 2);
        prop_assert_eq!(map.dissection.diagonals().len() as u32, r - 1);
        prop_assert_eq!(dissection_to_decent(&map.dissection, 14).unwrap(), p);
    }
}

#[test]
fn polygon_text_round_trip_exhaustive() {
    for n in 3..=10 {
        for k in 0..=n - 3 {
            for d in all_dissections(n, k).unwrap() {
                let text = d.to_string();
                let back = parse_polygon(&text).unwrap().into_dissection();
                assert_eq!(back, d);
                assert_eq!(back.to_string(), text);
            }
        }
    }
}

#[test]
fn permutation_text_round_trip_exhaustive() {
    for m in 1..=8 {
        for p in clipseq_core::all_312_avoiders(m).unwrap() {
            assert_eq!(parse_permutation(&format_permutation(&p)).unwrap(), p);
            assert_eq!(
                parse_permutation(&format_permutation_compact(&p)).unwrap(),
                p
            );
        }
    }
}

#[test]
fn random_avoiders_are_uniform() {
    // 132 avoiders of length 6; each bin must stay within five standard
    // deviations of its expectation.
    let m = 6;
    let samples = 10_000u64;
    let total = u64::try_from(catalan(m)).unwrap();
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for seed in 0..samples {
        *counts
            .entry(random_312_avoider(m, seed).into_vec())
            .or_default() += 1;
    }
    assert_eq!(counts.len() as u64, total);
    let p = 1.0 / total as f64;
    let mean = samples as f64 * p;
    let sd = (samples as f64 * p * (1.0 - p)).sqrt();
    for (perm, &c) in &counts {
        assert!(
            (c as f64 - mean).abs() <= 5.0 * sd,
            "{perm:?} drawn {c} times, expected {mean:.1} +- {sd:.1}"
        );
    }
}

#[test]
fn random_avoider_is_deterministic() {
    assert_eq!(random_312_avoider(1000, 42), random_312_avoider(1000, 42));
    assert_ne!(random_312_avoider(1000, 42), random_312_avoider(1000, 43));
}

#[test]
fn triangulations_are_dissections() {
    for t in all_triangulations(8).unwrap() {
        let d = Dissection::from(t.clone());
        assert!(d.is_triangulation());
        assert_eq!(d.to_string(), t.to_string());
    }
}
