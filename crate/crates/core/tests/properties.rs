use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use powerspec::graph::{canonical_certificate, connected_subgraph_census};
use powerspec::signed::{char_poly_exact, signed_spectral_moment, SignedGraph};
use powerspec::tensor::{
    eulerian_walk_count, lift_from_core, reduce_to_core, EulerianMethod, Multidigraph,
};
use powerspec::walks::{covering_parity_closed_count, parity_closed_count, CoveringMethod, ParityMethod};
use powerspec::{Budget, Graph};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        proptest::sample::subsequence(pairs.clone(), 1..=pairs.len())
            .prop_map(move |edges| Graph::new(n, edges).unwrap())
    })
}

fn signed_graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    graph(max_n).prop_flat_map(|g| {
        let m = g.edge_count();
        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], m)
            .prop_map(move |signs| SignedGraph::new(g.clone(), signs).unwrap())
    })
}

/// Sums of doubled directed cycles, so every edge total is even.
fn even_eulerian(max_n: usize) -> impl Strategy<Value = Multidigraph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let cycle = Just((0..n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_flat_map(move |order| (2..=n).prop_map(move |len| order[..len].to_vec()));
            (Just(n), proptest::collection::vec(cycle, 1..=3))
        })
        .prop_map(|(n, cycles)| {
            let mut d = Multidigraph::new(n);
            for c in cycles {
                for i in 0..c.len() {
                    d.add_arcs(c[i], c[(i + 1) % c.len()], 2).unwrap();
                }
            }
            d
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificate_ignores_labels(g in graph(6), perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let n = g.vertex_count();
        let perm: Vec<usize> = perm.into_iter().filter(|&v| v < n).collect();
        let h = Graph::new(n, g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap();
        let b = Budget::default();
        prop_assert_eq!(canonical_certificate(&g, &b).unwrap(), canonical_certificate(&h, &b).unwrap());
    }

    #[test]
    fn switching_keeps_char_poly(sg in signed_graph(6), flips in proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 6)) {
        let flip = &flips[..sg.base().vertex_count()];
        prop_assert_eq!(char_poly_exact(&sg).unwrap(), char_poly_exact(&sg.switched(flip)).unwrap());
    }

    #[test]
    fn power_sums_match_spectral_moments(sg in signed_graph(6)) {
        let sums = char_poly_exact(&sg).unwrap().power_sums(10);
        for (d, s) in sums.iter().enumerate() {
            prop_assert_eq!(s, &signed_spectral_moment(&sg, d));
        }
    }

    #[test]
    fn parity_dp_matches_signed_mean(g in graph(5), d in 0usize..=8) {
        let b = Budget::default();
        prop_assert_eq!(
            parity_closed_count(&g, d, ParityMethod::Dp, &b).unwrap(),
            parity_closed_count(&g, d, ParityMethod::SignedMean, &b).unwrap()
        );
    }

    #[test]
    fn decomposition_holds(g in graph(5), d in 1usize..=8) {
        let b = Budget::default();
        let census = connected_subgraph_census(&g, g.edge_count(), &b).unwrap();
        let mut rhs = BigUint::default();
        for entry in &census.entries {
            let p = covering_parity_closed_count(&entry.motif.graph, d, CoveringMethod::Dp, &b).unwrap();
            rhs += p.value * BigUint::from(entry.count);
        }
        prop_assert_eq!(parity_closed_count(&g, d, ParityMethod::Dp, &b).unwrap().value, rhs);
    }

    #[test]
    fn best_matches_brute(d in even_eulerian(4)) {
        prop_assume!(d.is_eulerian() && d.arc_count() <= 12);
        let b = Budget::default();
        prop_assert_eq!(
            eulerian_walk_count(&d, EulerianMethod::Best, &b).unwrap(),
            eulerian_walk_count(&d, EulerianMethod::Brute, &b).unwrap()
        );
    }

    #[test]
    fn lift_then_reduce_is_identity(d in even_eulerian(5), k in 3usize..=5) {
        prop_assume!(d.is_eulerian());
        let lift = lift_from_core(&d, k).unwrap();
        prop_assert!(lift.digraph.is_eulerian());
        prop_assert_eq!(reduce_to_core(&lift.digraph, &lift.hypergraph).unwrap(), d);
    }
}

#[test]
fn negation_flips_odd_moments() {
    let sg = SignedGraph::all_positive(Graph::cycle(5).unwrap());
    for d in 0..8 {
        let m = signed_spectral_moment(&sg.negated(), d);
        let sign = if d % 2 == 0 { 1 } else { -1 };
        assert_eq!(m, signed_spectral_moment(&sg, d) * BigInt::from(sign));
    }
}
