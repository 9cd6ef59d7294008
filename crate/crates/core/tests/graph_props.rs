mod common;

use common::*;
use gbs_core::*;
use proptest::prelude::*;

fn graph_from(seed: u64) -> Graph {
    random_graph(&mut rng(seed), 4, 5, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cycle_count_is_betti(seed in any::<u64>()) {
        let g = graph_from(seed);
        prop_assert_eq!(g.fundamental_cycles().len(), g.edge_pair_count() + 1 - g.vertex_count());
        for v in g.vertices() {
            prop_assert_eq!(g.fundamental_cycles_from(v).len(), g.betti());
        }
    }

    #[test]
    fn equivalence_relation(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y) = (graph_from(a), graph_from(b));
        let z = if c % 2 == 0 { random_symmetry(&mut rng(c), &y) } else { graph_from(c) };
        prop_assert!(are_equivalent(&x, &x));
        prop_assert_eq!(are_equivalent(&x, &y), are_equivalent(&y, &x));
        if are_equivalent(&x, &y) && are_equivalent(&y, &z) {
            prop_assert!(are_equivalent(&x, &z));
        }
    }

    #[test]
    fn canonical_form_agrees_with_brute_force(a in any::<u64>(), b in any::<u64>(), twin in any::<bool>()) {
        let x = random_graph(&mut rng(a), 4, 4, 6);
        let y = if twin { random_symmetry(&mut rng(b), &x) } else { random_graph(&mut rng(b), 4, 4, 6) };
        prop_assert_eq!(are_equivalent(&x, &y), brute_equivalent(&x, &y));
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let g = graph_from(seed);
        prop_assert_eq!(parse_graph(&g.to_json()).unwrap(), g);
    }
}

#[test]
fn canonical_form_survives_1000_symmetries() {
    let mut r = rng(11);
    for k in 0..1000 {
        let g = random_graph(&mut r, 4, 5, 9);
        let mut h = g.clone();
        for _ in 0..1 + k % 4 {
            h = random_symmetry(&mut r, &h);
        }
        assert_eq!(canonical_form(&g), canonical_form(&h), "{} vs {}", g.to_json(), h.to_json());
    }
}
