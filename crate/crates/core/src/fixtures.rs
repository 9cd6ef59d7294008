//! Small named graphs used by tests, benchmarks and documentation.

use crate::graph::Graph;

/// A single loop at `v` with indices `a` (from) and `b` (to).
pub fn loop_graph(a: i64, b: i64) -> Graph {
    Graph::build(&["v"], &[("e", "v", "v", a, b)]).expect("valid loop")
}

/// A single edge `u -- w` with indices `a` at `u` and `b` at `w`.
pub fn segment(a: i64, b: i64) -> Graph {
    Graph::build(&["u", "w"], &[("f", "u", "w", a, b)]).expect("valid segment")
}

/// A single vertex, no edges.
pub fn point() -> Graph {
    Graph::build(&["v"], &[]).expect("valid point")
}

/// `loop(2,3)` at `v` with a pendant edge of index `k` at `v` and 5 at `w`.
pub fn h_graph(k: i64) -> Graph {
    Graph::build(&["v", "w"], &[("e", "v", "v", 2, 3), ("f", "v", "w", k, 5)]).expect("valid H graph")
}

/// Reduced but not fully reduced: `loop(1,6)` at `u` and an edge `u:3 -- w:5`.
pub fn bs_5_30_unreduced() -> Graph {
    Graph::build(&["u", "w"], &[("e", "u", "u", 1, 6), ("f", "u", "w", 3, 5)]).expect("valid graph")
}

/// `loop(1,6)` at `u` and an edge `u:1 -- w:5`; one collapse from `loop(5,30)`.
pub fn bs_5_30_middle() -> Graph {
    Graph::build(&["u", "w"], &[("e", "u", "u", 1, 6), ("f", "u", "w", 1, 5)]).expect("valid graph")
}
