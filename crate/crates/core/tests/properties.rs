use num_bigint::BigInt;
use proptest::prelude::*;

use ihara_core::graph::HalfEdgeGraph;
use ihara_core::voltage::Permutation;
use ihara_core::zeta::{closed_geodesic_counts, zeta_inverse, ZetaConfig};

fn multigraph() -> impl Strategy<Value = HalfEdgeGraph> {
    (1usize..6).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..9)
            .prop_map(move |edges| HalfEdgeGraph::from_edges(n, &edges).expect("endpoints in range"))
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::new(images).expect("shuffle is a bijection"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bass_identity_on_multigraphs(g in multigraph()) {
        let zr = zeta_inverse(&g, &ZetaConfig::default()).unwrap();
        prop_assert!(zr.bass_identity_holds());
    }

    #[test]
    fn traces_match_determinant(g in multigraph()) {
        let zr = zeta_inverse(&g, &ZetaConfig::default()).unwrap();
        let walks: Vec<BigInt> = closed_geodesic_counts(&g, 8).unwrap().into_iter().map(BigInt::from).collect();
        prop_assert_eq!(zr.hashimoto_det.log_derivative_traces(8), walks);
    }

    #[test]
    fn permutation_group_laws((p, q) in (1usize..8).prop_flat_map(|n| (permutation(n), permutation(n)))) {
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.then(&q).inverse(), q.inverse().then(&p.inverse()));
        prop_assert_eq!(p.then(&q).matrix(), p.matrix() * q.matrix());
    }
}
