mod support;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refclass::quality::{accuracy, herfindahl, modularity, Z_99};
use support::{gold_fixture, gold_graph, graph, newman_modularity, partition_view, random_graph};

#[test]
fn herfindahl_fixtures() {
    assert_eq!(herfindahl(&[7]), Some(1.0));
    assert_eq!(herfindahl(&[2, 2, 2, 2]), Some(0.25));
    assert_eq!(herfindahl(&[3, 1]), Some(0.625));
    let (view, g, gold) = gold_graph(&[(vec![3, 1], 2)]);
    let r = accuracy(&view, &g, &gold).unwrap();
    assert_eq!(r.he, 0.625);
}

#[test]
fn accuracy_matches_independent_script() {
    let fixture = gold_fixture();
    let papers = fixture.papers();
    let (view, g, gold) = gold_graph(&papers);
    let r = accuracy(&view, &g, &gold).unwrap();
    assert_eq!(r.n, 100);
    for ((_, got), want) in r.per_paper.iter().zip(&fixture.he) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!((r.he - fixture.mean).abs() < 1e-12);
    assert!((r.sd.unwrap() - fixture.sd).abs() < 1e-12);
    assert!((r.std_error.unwrap() - fixture.std_error).abs() < 1e-12);
    let (lo, hi) = r.ci99.unwrap();
    assert!((lo - fixture.ci99[0]).abs() < 1e-12 && (hi - fixture.ci99[1]).abs() < 1e-12);
    assert!((hi - r.he - Z_99 * r.std_error.unwrap()).abs() < 1e-12);
}

#[test]
fn one_class_scores_exactly_zero() {
    for seed in 0..50 {
        let (n, edges, _) = random_graph(seed, 1);
        let (view, _) = partition_view(&vec![0; n]);
        assert_eq!(modularity(&view, &graph(n, &edges)).unwrap().h, 0.0);
    }
}

#[test]
fn random_partition_of_a_large_random_graph_is_near_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 5000;
    let edges: Vec<(u32, u32)> = (0..20000).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
    let classes: Vec<u32> = (0..n).map(|_| rng.random_range(0..20)).collect();
    let (view, _) = partition_view(&classes);
    let r = modularity(&view, &graph(n as usize, &edges)).unwrap();
    assert!(r.m >= 10_000);
    assert!(r.h.abs() <= 0.02, "{}", r.h);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn modularity_equals_newman(seed in any::<u64>(), k in 1usize..8) {
        let (n, edges, classes) = random_graph(seed, k);
        let (view, _) = partition_view(&classes);
        let got = modularity(&view, &graph(n, &edges)).unwrap().h;
        let want = newman_modularity(n, &edges, &classes);
        prop_assert!((got - want).abs() <= 1e-12, "{} vs {}", got, want);
    }

    #[test]
    fn herfindahl_bounds(counts in prop::collection::vec(0u64..20, 1..8)) {
        prop_assume!(counts.iter().sum::<u64>() > 0);
        let touched = counts.iter().filter(|&&c| c > 0).count() as f64;
        let h = herfindahl(&counts).unwrap();
        prop_assert!(h <= 1.0 + 1e-15 && h >= 1.0 / touched - 1e-15);
    }

    /// Splitting one class in two never raises a paper's concentration.
    #[test]
    fn refinement_never_increases_he(
        counts in prop::collection::vec(1u32..10, 1..6),
        cut in prop::collection::vec(0u32..10, 6),
    ) {
        let coarse = gold_graph(&[(counts.clone(), 0)]);
        let mut fine: Vec<u32> = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            let left = cut[i].min(c);
            fine.push(left);
            fine.push(c - left);
        }
        let fine = gold_graph(&[(fine, 0)]);
        let a = accuracy(&coarse.0, &coarse.1, &coarse.2).unwrap().he;
        let b = accuracy(&fine.0, &fine.1, &fine.2).unwrap().he;
        prop_assert!(b <= a + 1e-15);
    }
}
