//! Canonical forms of edge-indexed graphs.
//!
//! Two graphs present the same graph of groups when they differ by relabeling
//! vertices and edges, reversing the orientation of edge pairs, negating both
//! indices of a pair, or negating every index at one vertex. The canonical
//! form is the least serialization over all vertex labelings (refined by local
//! invariants). Signs are recorded per pair as the product of its two index
//! signs; vertex negations act on these products by coboundaries, so each
//! labeling is additionally minimized over all vertex sign flips.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexId};

/// Deterministic serialization; equal exactly for equivalent graphs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// (label, label, |index|, |index|, sign product)
type Record = (usize, usize, u64, u64, i8);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct VertexInvariant {
    degree: usize,
    loops: Vec<(u64, u64)>,
    abs_indices: Vec<u64>,
}

fn vertex_invariants(g: &Graph) -> BTreeMap<&VertexId, VertexInvariant> {
    let mut inv: BTreeMap<&VertexId, VertexInvariant> = g
        .vertices()
        .map(|v| (v, VertexInvariant { degree: 0, loops: vec![], abs_indices: vec![] }))
        .collect();
    for (_, e) in g.edges() {
        let (a, b) = (e.idx_from.unsigned_abs(), e.idx_to.unsigned_abs());
        for (v, i) in [(&e.from, a), (&e.to, b)] {
            let x = inv.get_mut(v).unwrap();
            x.degree += 1;
            x.abs_indices.push(i);
        }
        if e.is_loop() {
            inv.get_mut(&e.from).unwrap().loops.push((a.min(b), a.max(b)));
        }
    }
    for x in inv.values_mut() {
        x.loops.sort_unstable();
        x.abs_indices.sort_unstable();
    }
    inv
}

/// All labelings compatible with the invariant partition, as vectors indexed by
/// position in `order` giving the label.
fn labelings(classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n: usize = classes.iter().map(Vec::len).sum();
    let mut out = vec![vec![usize::MAX; n]];
    let mut next_label = 0;
    for class in classes {
        let mut grown = Vec::new();
        for partial in &out {
            for perm in class.iter().permutations(class.len()) {
                let mut l = partial.clone();
                for (k, &&v) in perm.iter().enumerate() {
                    l[v] = next_label + k;
                }
                grown.push(l);
            }
        }
        next_label += class.len();
        out = grown;
    }
    out
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let verts: Vec<&VertexId> = g.vertices().collect();
    let pos: BTreeMap<&VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let inv = vertex_invariants(g);

    let mut classes: BTreeMap<&VertexInvariant, Vec<usize>> = BTreeMap::new();
    for (i, v) in verts.iter().enumerate() {
        classes.entry(&inv[v]).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();

    // (from position, to position, |from index|, |to index|, sign product)
    let raw: Vec<(usize, usize, u64, u64, i8)> = g
        .edges()
        .map(|(_, e)| {
            let sign = if (e.idx_from < 0) == (e.idx_to < 0) { 1 } else { -1 };
            (pos[&e.from], pos[&e.to], e.idx_from.unsigned_abs(), e.idx_to.unsigned_abs(), sign)
        })
        .collect();

    let n = verts.len();
    let mut best: Option<Vec<Record>> = None;
    let mut records: Vec<Record> = Vec::with_capacity(raw.len());
    for label in labelings(&classes) {
        let base: Vec<Record> = raw
            .iter()
            .map(|&(p, q, a, b, s)| {
                let (lp, lq) = (label[p], label[q]);
                if lp == lq {
                    (lp, lq, a.min(b), a.max(b), s)
                } else if lp < lq {
                    (lp, lq, a, b, s)
                } else {
                    (lq, lp, b, a, s)
                }
            })
            .collect();
        // label 0 is never flipped: flipping every vertex is the identity on signs
        for flips in 0u64..(1u64 << n.saturating_sub(1)) {
            let flipped = |l: usize| l > 0 && (flips >> (l - 1)) & 1 == 1;
            records.clear();
            records.extend(base.iter().map(|&(x, y, a, b, s)| {
                let s = if x != y && flipped(x) != flipped(y) { -s } else { s };
                (x, y, a, b, s)
            }));
            records.sort_unstable();
            if best.as_ref().is_none_or(|b| records < *b) {
                best = Some(records.clone());
            }
        }
    }

    let best = best.unwrap_or_default();
    let body = best
        .iter()
        .map(|(x, y, a, b, s)| format!("{x}-{y}:{a},{b}{}", if *s > 0 { '+' } else { '-' }))
        .join(";");
    CanonicalForm(format!("v{n}|{body}"))
}

pub fn are_equivalent(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_pair_count() == b.edge_pair_count()
        && canonical_form(a) == canonical_form(b)
}
