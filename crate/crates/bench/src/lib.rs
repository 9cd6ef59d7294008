//! Shared inputs for the benchmarks.

use gbs_core::fixtures::h_graph;
use gbs_core::moves::{apply_expansion, Deformation, Move};
use gbs_core::{End, Graph, Side, VertexId};

/// A loop with a chain of `len` pendant edges of index 2 at the far end.
pub fn chain(len: usize) -> Graph {
    let verts: Vec<String> = (0..=len).map(|k| format!("v{k}")).collect();
    let names: Vec<String> = (0..len).map(|k| format!("e{k}")).collect();
    let mut edges = vec![("l", "v0", "v0", 2, 3)];
    for k in 0..len {
        edges.push((names[k].as_str(), verts[k].as_str(), verts[k + 1].as_str(), 2, 3));
    }
    let vs: Vec<&str> = verts.iter().map(String::as_str).collect();
    Graph::build(&vs, &edges).expect("valid chain")
}

/// `H(4)` with `rounds` alternating expansions and slides, ready for
/// normalization.
pub fn expansion_slide_run(rounds: usize) -> (Graph, Deformation) {
    let start = h_graph(4);
    let mut g = start.clone();
    let mut d = Deformation::new();
    for _ in 0..rounds {
        let (h, e) =
            apply_expansion(&g, &VertexId::new("w"), &[End::new("f", Side::To)], 1, 1).expect("expansion");
        let s = Move::Slide { moving_end: End::new("f", Side::From), over: End::new("e", Side::From) };
        let Ok(h2) = s.apply(&h) else { break };
        let Move::Expansion { new_edge, new_side, .. } = &e else { unreachable!() };
        let c = Move::Collapse { edge: End { edge: new_edge.clone(), side: *new_side } };
        let Ok(h3) = c.apply(&h2) else { break };
        d.extend([e, s, c].into_iter().collect());
        g = h3;
    }
    (start, d)
}
