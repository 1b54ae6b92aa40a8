mod common;

use cayley_core::cayley::{CayleyGraph, ConnectionSet, GraphJson};
use cayley_core::gf2m::{Gf2Element, Gf2Field};
use cayley_core::groupring::{difference_counts, verify_gds};
use cayley_core::searcher::{connection_from_encoding, degree_of_encoding, encoding_of_residues};
use cayley_core::spectral::{spectrum_by_characters, spectrum_oracle, ORACLE_TOLERANCE};
use cayley_core::{AbelianGroup, GroupElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_group() -> impl Strategy<Value = AbelianGroup> {
    prop::collection::vec(2u64..7, 1..4)
        .prop_filter("order bound", |f| f.iter().product::<u64>() <= 96)
        .prop_map(|f| AbelianGroup::new(f).unwrap())
}

fn group_and_indices() -> impl Strategy<Value = (AbelianGroup, usize, usize, usize)> {
    small_group().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), 0..n, 0..n, 0..n)
    })
}

fn graph_from_seed(group: &AbelianGroup, seed: u64, density: f64) -> CayleyGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CayleyGraph::from_connection(common::random_symmetric(group, &mut rng, density))
}

fn field_and_elements() -> impl Strategy<Value = (u32, u64, u64, u64)> {
    (1u32..=12).prop_flat_map(|m| {
        let q = 1u64 << m;
        (Just(m), 0..q, 0..q, 0..q)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws((g, a, b, c) in group_and_indices()) {
        prop_assert_eq!(g.add_index(a, b), g.add_index(b, a));
        prop_assert_eq!(g.add_index(g.add_index(a, b), c), g.add_index(a, g.add_index(b, c)));
        prop_assert_eq!(g.add_index(a, 0), a);
        prop_assert_eq!(g.add_index(a, g.neg_index(a)), 0);
        prop_assert_eq!(g.sub_index(g.add_index(a, b), b), a);
        let x = g.element_at(a);
        prop_assert_eq!(g.index_of(&x).unwrap(), a);
        let y = g.element_at(b);
        prop_assert_eq!(g.index_of(&g.add(&x, &y).unwrap()).unwrap(), g.add_index(a, b));
    }

    #[test]
    fn field_axioms((m, a, b, c) in field_and_elements()) {
        let f = Gf2Field::new(m).unwrap();
        let (a, b, c) = (Gf2Element(a), Gf2Element(b), Gf2Element(c));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.square(a), f.mul(a, a));
        prop_assert_eq!(f.frobenius(a, m), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf2Element(1));
        }
        prop_assert_eq!(f.abs_trace(f.add(a, b)), f.abs_trace(a) ^ f.abs_trace(b));
        prop_assert_eq!(f.abs_trace(f.square(a)), f.abs_trace(a));
        prop_assert_eq!(f.trace_by_frobenius(a).bits(), f.abs_trace(a) as u64);
    }

    #[test]
    fn difference_counts_sum_to_k_squared((g, t, _, _) in group_and_indices(), seed in any::<u64>()) {
        let graph = graph_from_seed(&g, seed, 0.3);
        let c = graph.connection().elements().to_vec();
        let k = c.len() as u64;
        let counts = difference_counts(&g, &c).unwrap();
        prop_assert_eq!(counts.counts().iter().sum::<u64>(), k * k);
        prop_assert_eq!(counts.identity_coefficient(), k);
        // Translates have the same difference multiset, hence the same GDS status.
        let shift = g.element_at(t);
        let moved: Vec<GroupElement> = c.iter().map(|x| g.add(x, &shift).unwrap()).collect();
        let moved_counts = difference_counts(&g, &moved).unwrap();
        prop_assert_eq!(moved_counts.counts(), counts.counts());
        let before = verify_gds(&g, &c).unwrap().map(|cert| cert.parameters());
        let after = verify_gds(&g, &moved).unwrap().map(|cert| cert.parameters());
        prop_assert_eq!(before, after);
    }

    #[test]
    fn graph_structure((g, u, _, _) in group_and_indices(), seed in any::<u64>()) {
        let graph = graph_from_seed(&g, seed, 0.25);
        let k = graph.degree();
        for v in 0..graph.order() {
            prop_assert_eq!(graph.neighbors(v).count(), k);
        }
        let expected: Vec<usize> = {
            let mut x: Vec<usize> = graph.connection().indices().iter().map(|&c| g.add_index(u, c)).collect();
            x.sort_unstable();
            x
        };
        let mut got: Vec<usize> = graph.neighbors(u).collect();
        got.sort_unstable();
        prop_assert_eq!(got, expected);
        let sub = g.subgroup_generated(graph.connection().elements()).unwrap();
        prop_assert_eq!(graph.components(), g.order() / sub.len());
    }

    #[test]
    fn characters_agree_with_oracle((g, _, _, _) in group_and_indices(), seed in any::<u64>()) {
        let graph = graph_from_seed(&g, seed, 0.3);
        let fast = spectrum_by_characters(&graph);
        let dense = spectrum_oracle(&graph).unwrap();
        prop_assert!(fast.matches(&dense, ORACLE_TOLERANCE));
        prop_assert_eq!(fast.order(), g.order());
        prop_assert!(fast.satisfies_trace_identities(graph.degree()));
    }

    #[test]
    fn walsh_path_matches_direct_sum(m in 1u32..=7, seed in any::<u64>()) {
        let g = AbelianGroup::elementary_abelian_2(m).unwrap();
        let graph = graph_from_seed(&g, seed, 0.4);
        let fast = spectrum_by_characters(&graph);
        let direct: Vec<f64> = g
            .characters()
            .map(|a| g.character_sum(&a, graph.connection().elements()).unwrap().re)
            .collect();
        let direct = cayley_core::spectral::Spectrum::from_values(&direct);
        prop_assert!(fast.matches(&direct, 1e-9));
    }

    #[test]
    fn encoding_roundtrip(n in 3u32..=24, raw in any::<u64>()) {
        let s = raw & ((1u64 << (n / 2)) - 1);
        let c = connection_from_encoding(n, s).unwrap();
        prop_assert_eq!(c.len(), degree_of_encoding(n, s).unwrap());
        prop_assert_eq!(encoding_of_residues(n, &c).unwrap(), s);
    }

    #[test]
    fn json_roundtrip((g, _, _, _) in group_and_indices(), seed in any::<u64>()) {
        let graph = graph_from_seed(&g, seed, 0.3);
        let text = serde_json::to_string(&graph.to_json()).unwrap();
        let back = CayleyGraph::from_json_str(&text).unwrap();
        prop_assert_eq!(back.connection().indices(), graph.connection().indices());
        prop_assert_eq!(&serde_json::to_string(&back.to_json()).unwrap(), &text);
        let parsed: GraphJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(CayleyGraph::from_json(&parsed).unwrap().order(), g.order());
    }

    #[test]
    fn asymmetric_sets_rejected(n in 3u64..40, c in 1u64..40) {
        let c = c % n;
        prop_assume!(c != 0 && 2 * c != n);
        let g = AbelianGroup::cyclic(n).unwrap();
        let idx = g.index_of(&GroupElement(vec![c])).unwrap();
        prop_assert!(ConnectionSet::from_indices(g, vec![idx]).is_err());
    }
}
