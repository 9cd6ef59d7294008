mod common;

use common::*;
use gbs_core::moves::{reduce, Move, MoveKind};
use gbs_core::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn moves_keep_graphs_valid(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut g = random_graph(&mut r, 4, 5, 12);
        for _ in 0..6 {
            let Some((_, h)) = random_move(&mut r, &g, ALL_MOVES) else { break };
            prop_assert!(h.validate().is_ok());
            g = h;
        }
    }

    #[test]
    fn collapse_undoes_expansion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 5, 12);
        let m = random_expansion(&mut r, &g);
        if let Ok(h) = m.apply(&g) {
            let Move::Expansion { new_edge, new_side, .. } = &m else { unreachable!() };
            let back = Move::Collapse { edge: End { edge: new_edge.clone(), side: *new_side } }.apply(&h).unwrap();
            prop_assert!(are_equivalent(&back, &g));
        }
    }

    #[test]
    fn every_inverse_undoes_its_move(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 5, 12);
        if let Some((m, h)) = random_move(&mut r, &g, ALL_MOVES) {
            let back = m.inverse(&g).unwrap().apply(&h).unwrap();
            prop_assert!(are_equivalent(&back, &g), "{}", m);
        }
    }

    #[test]
    fn moduli_are_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 5, 12);
        let base = modular_group(&g);
        if let Some((m, h)) = random_move(&mut r, &g, ALL_MOVES) {
            let l = modular_group(&h);
            prop_assert!(l.same_unsigned(&base), "{}", m);
            prop_assert!(l.same_signed(&base), "{}", m);
        }
    }

    #[test]
    fn counts_under_moves(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 5, 12);
        if let Some((m, h)) = random_move(&mut r, &g, ALL_MOVES) {
            let (dv, de) = match m.kind() {
                MoveKind::Slide | MoveKind::Induction => (0, 0),
                MoveKind::Collapse => (-1, -1),
                MoveKind::Expansion => (1, 1),
            };
            prop_assert_eq!(h.vertex_count() as i64, g.vertex_count() as i64 + dv);
            prop_assert_eq!(h.edge_pair_count() as i64, g.edge_pair_count() as i64 + de);
            prop_assert_eq!(h.betti(), g.betti());
        }
    }

    #[test]
    fn reduce_is_idempotent(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 5, 6, 4);
        let (r1, d) = reduce(&g);
        prop_assert!(r1.is_reduced());
        prop_assert_eq!(d.replay(&g).unwrap(), r1.clone());
        prop_assert!(reduce(&r1).1.is_empty());
    }

    #[test]
    fn deformation_json_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 5, 12);
        let d = random_reduced_run(&mut r, &g, 5);
        prop_assert_eq!(gbs_core::moves::Deformation::from_json(&d.to_json()).unwrap(), d);
    }
}
