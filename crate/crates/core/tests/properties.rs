//! Cross-module property tests at desk scale: the NEB/matching
//! equivalence on small trees, re-assertions of the NEB conditions from
//! independent primitives, and the dual-route rank checks.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewmatch::graph::{
    brute_force_matching_number, maximum_matching, odd_components_after_deletion,
    relabel_for_matching, spanning_tree_containing, tutte_has_perfect_matching, Matching,
};
use skewmatch::neb::{minimal_non_neb_subtree, neb_at, neb_report, subtree_after_path};
use skewmatch::spectral::{rank_exact_rational, rank_numeric, skew_eigen, SkewMatrix};
use skewmatch::{Graph, Rational};

#[test]
fn neb_iff_full_matching_exhaustive_small() {
    for n in 1..=8 {
        let mut count = 0usize;
        for_each_tree(n, |t| {
            count += 1;
            let report = neb_report(t).unwrap();
            let full = brute_force_matching_number(t) == n / 2;
            assert_eq!(
                report.is_neb_somewhere, full,
                "tree {:?} disagrees",
                t.edges().collect::<Vec<_>>()
            );
        });
        let expected = match n {
            1 | 2 => 1,
            _ => n.pow(n as u32 - 2),
        };
        assert_eq!(count, expected);
    }
}

#[test]
fn neb_roots_satisfy_condition_i_independently() {
    // re-assert condition (i) with the component counter, not the engine
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let n = rng.random_range(2..=12);
        let t = random_tree(n, &mut rng);
        let report = neb_report(&t).unwrap();
        for &w in &report.neb_roots {
            let odd = odd_components_after_deletion(&t, &[w]).unwrap();
            if n % 2 == 0 {
                assert_eq!(odd, 1, "even order needs exactly one odd component");
            } else {
                assert_eq!(odd, 0, "odd order needs no odd component");
            }
        }
    }
}

#[test]
fn witness_always_has_two_odd_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut found = 0usize;
    while found < 60 {
        let n = rng.random_range(4..=13);
        let t = random_tree(n, &mut rng);
        let report = neb_report(&t).unwrap();
        if report.is_neb_somewhere {
            assert_eq!(report.witness, None);
            continue;
        }
        found += 1;
        let w = report.witness.expect("witness accompanies empty roots");
        assert!(
            odd_components_after_deletion(&t, &[w]).unwrap() >= 2,
            "witness {w} of {:?}",
            t.edges().collect::<Vec<_>>()
        );
    }
}

#[test]
fn minimal_non_neb_subtree_property_holds_from_scratch() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut found = 0usize;
    while found < 40 {
        let n = rng.random_range(3..=12);
        let t = random_tree(n, &mut rng);
        let v1 = rng.random_range(1..=n);
        if neb_at(&t, v1).unwrap() {
            continue;
        }
        found += 1;
        let sub = minimal_non_neb_subtree(&t, v1).unwrap();
        // deleted path must walk into the subtree per the deletion notation
        let rebuilt = subtree_after_path(&t, sub.deleted_path(), sub.root()).unwrap();
        assert_eq!(rebuilt.vertices(), sub.vertices());
        let (tree, root, _) = sub.extract();
        assert!(!neb_at(&tree, root).unwrap(), "subtree must be non-NEB at its root");
        let adj = tree.adjacency();
        for &child in &adj[root] {
            let branch = subtree_after_path(&tree, &[root], child).unwrap();
            let (branch_tree, branch_root, _) = branch.extract();
            assert!(
                neb_at(&branch_tree, branch_root).unwrap(),
                "every child branch must be NEB"
            );
        }
    }
}

#[test]
fn blossom_agrees_with_oracle_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..200 {
        let n = rng.random_range(1..=10);
        let p = [0.2, 0.4, 0.7][rng.random_range(0..3)];
        let g = random_graph(n, p, &mut rng);
        let m = maximum_matching(&g);
        m.validate_for(&g).unwrap();
        assert_eq!(m.len(), brute_force_matching_number(&g));
    }
}

#[test]
fn tutte_agrees_with_matching_number_on_even_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for _ in 0..120 {
        let n = 2 * rng.random_range(1..=5);
        let g = random_graph(n, 0.45, &mut rng);
        let cert = tutte_has_perfect_matching(&g).unwrap();
        let perfect = brute_force_matching_number(&g) == n / 2;
        assert_eq!(cert.has_perfect_matching, perfect);
        if let Some(s) = cert.witness {
            assert!(odd_components_after_deletion(&g, &s).unwrap() > s.len());
        }
    }
}

#[test]
fn rank_numeric_counts_nonzero_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for _ in 0..60 {
        let n = rng.random_range(2..=10);
        let g = random_graph(n, 0.5, &mut rng);
        let a = random_skew_on_graph(&g, &mut rng);
        let eig = skew_eigen(&a);
        assert_eq!(rank_numeric(&a, 1e-9), eig.spectrum.nonzero_eigenvalue_count());
        assert!(rank_numeric(&a, 1e-9) <= 2 * maximum_matching(&g).len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The spanning-tree property holds for arbitrary matchings, not
    /// only maximum ones: the tree keeps every matched edge.
    #[test]
    fn spanning_tree_contains_any_matching(seed in 0u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=9);
        let g = random_connected_graph(n, 0.5, &mut rng);
        // greedy sub-matching with random skips
        let mut edges = Vec::new();
        let mut covered = vec![false; n + 1];
        for (u, v) in g.edges() {
            if !covered[u] && !covered[v] && rng.random::<bool>() {
                covered[u] = true;
                covered[v] = true;
                edges.push((u, v));
            }
        }
        let m = Matching::new(&g, edges).unwrap();
        let t = spanning_tree_containing(&g, &m).unwrap();
        prop_assert_eq!(t.edge_count(), n - 1);
        prop_assert!(t.is_tree());
        for &(u, v) in m.edges() {
            prop_assert!(t.has_edge(u, v));
        }
        for (u, v) in t.edges() {
            prop_assert!(g.has_edge(u, v));
        }
    }

    /// Relabeling is a bijection sending the j-th matching edge to
    /// (2j-1, 2j); pulling the image graph back restores the original.
    #[test]
    fn relabeling_round_trips(seed in 0u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=10);
        let g = random_graph(n, 0.4, &mut rng);
        let m = maximum_matching(&g);
        let r = relabel_for_matching(&g, &m).unwrap();
        let mut seen = vec![false; n + 1];
        for v in 1..=n {
            let image = r.apply(v);
            prop_assert!((1..=n).contains(&image));
            prop_assert!(!seen[image]);
            seen[image] = true;
            prop_assert_eq!(r.invert(image), v);
        }
        for (j, &(a, b)) in m.edges().iter().enumerate() {
            prop_assert_eq!((r.apply(a), r.apply(b)), (2 * j + 1, 2 * j + 2));
        }
        let forward = r.apply_graph(&g);
        let back = Graph::new(n, forward.edges().map(|(u, v)| (r.invert(u), r.invert(v)))).unwrap();
        prop_assert_eq!(back, g);
    }

    /// Printing a graph as edge-list text and re-parsing it restores the
    /// graph, isolated vertices included.
    #[test]
    fn edge_list_text_round_trips(seed in 0u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=12);
        let g = random_graph(n, 0.3, &mut rng);
        let mut text = format!("n {n}\n");
        for (u, v) in g.edges() {
            text.push_str(&format!("{u} {v}\n"));
        }
        let back = Graph::parse(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    /// Exact rational rank agrees with the SVD rank on small-integer
    /// skew matrices.
    #[test]
    fn rank_routes_agree_on_integer_matrices(seed in 0u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=8);
        let mut numeric = SkewMatrix::<f64>::zeros(n);
        let mut exact = SkewMatrix::<Rational>::zeros(n);
        for i in 1..=n {
            for j in (i + 1)..=n {
                if rng.random::<f64>() < 0.6 {
                    let v = rng.random_range(-3i64..=3);
                    if v != 0 {
                        numeric.set(i, j, v as f64);
                        exact.set(i, j, Rational::from_integer(v.into()));
                    }
                }
            }
        }
        prop_assert_eq!(rank_numeric(&numeric, 1e-9), rank_exact_rational(&exact));
    }
}
