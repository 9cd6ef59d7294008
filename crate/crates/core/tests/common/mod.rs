//! Random generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use gbs_core::fixtures::*;
use gbs_core::moves::{reduce, Deformation, Direction, Move};
use gbs_core::{EdgeId, EdgePair, End, Graph, Side, VertexId};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Indices produced by random moves stay below this bound.
pub const INDEX_CAP: i64 = 10_000;

fn nonzero(rng: &mut TestRng, max: i64) -> i64 {
    let x = rng.gen_range(1..=max);
    if rng.gen_bool(0.5) {
        -x
    } else {
        x
    }
}

/// A random connected graph: a random spanning tree plus extra pairs.
pub fn random_graph(rng: &mut TestRng, max_vertices: usize, max_pairs: usize, max_index: i64) -> Graph {
    let nv = rng.gen_range(1..=max_vertices);
    let np = rng.gen_range(nv - 1..=max_pairs.max(nv - 1));
    let verts: Vec<String> = (0..nv).map(|k| format!("v{k}")).collect();
    let mut edges = Vec::new();
    for k in 1..nv {
        let parent = rng.gen_range(0..k);
        edges.push((parent, k));
    }
    while edges.len() < np {
        edges.push((rng.gen_range(0..nv), rng.gen_range(0..nv)));
    }
    edges.shuffle(rng);
    let pairs = edges.into_iter().enumerate().map(|(k, (a, b))| {
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        (
            EdgeId::new(format!("e{k}")),
            EdgePair {
                from: VertexId::new(&verts[a]),
                to: VertexId::new(&verts[b]),
                idx_from: nonzero(rng, max_index),
                idx_to: nonzero(rng, max_index),
            },
        )
    });
    Graph::new(verts.iter().map(VertexId::new), pairs).expect("generated graph is valid")
}

/// One of the symmetries the canonical form quotients by, applied at random:
/// relabeling, reversing pairs, negating a pair, negating a vertex.
pub fn random_symmetry(rng: &mut TestRng, g: &Graph) -> Graph {
    let mut verts: Vec<VertexId> = g.vertices().cloned().collect();
    let old = verts.clone();
    verts.shuffle(rng);
    let tag: u32 = rng.gen();
    let vmap: BTreeMap<VertexId, VertexId> =
        old.iter().zip(&verts).map(|(a, b)| (a.clone(), VertexId::new(format!("{}_{tag}", b)))).collect();
    let flips: BTreeMap<VertexId, i64> =
        old.iter().map(|v| (v.clone(), if rng.gen_bool(0.5) { -1 } else { 1 })).collect();
    let mut ids: Vec<EdgeId> = g.edges().map(|(e, _)| e.clone()).collect();
    ids.shuffle(rng);
    let edges: Vec<(EdgeId, EdgePair)> = g
        .edges()
        .zip(ids)
        .map(|((_, p), id)| {
            let pair_sign = if rng.gen_bool(0.5) { -1 } else { 1 };
            let mut q = EdgePair {
                from: vmap[&p.from].clone(),
                to: vmap[&p.to].clone(),
                idx_from: p.idx_from * flips[&p.from] * pair_sign,
                idx_to: p.idx_to * flips[&p.to] * pair_sign,
            };
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut q.from, &mut q.to);
                std::mem::swap(&mut q.idx_from, &mut q.idx_to);
            }
            (EdgeId::new(format!("x{}_{tag}", id)), q)
        })
        .collect();
    Graph::new(vmap.values().cloned(), edges).unwrap()
}

// ---- brute-force equivalence ----

/// `(from, to, idx_from, idx_to)` with vertices as positions.
type Pair = (usize, usize, i64, i64);

fn pairs_of(g: &Graph) -> (Vec<VertexId>, Vec<Pair>) {
    let verts: Vec<VertexId> = g.vertices().cloned().collect();
    let pos = |v: &VertexId| verts.iter().position(|x| x == v).unwrap();
    let pairs = g.edges().map(|(_, p)| (pos(&p.from), pos(&p.to), p.idx_from, p.idx_to)).collect();
    (verts, pairs)
}

/// Searches vertex bijections, edge bijections with orientations, and the
/// whole group generated by vertex negations and pair negations.
pub fn brute_equivalent(a: &Graph, b: &Graph) -> bool {
    let (va, pa) = pairs_of(a);
    let (vb, pb) = pairs_of(b);
    if va.len() != vb.len() || pa.len() != pb.len() {
        return false;
    }
    let n = va.len();
    let m = pa.len();
    for vperm in (0..n).permutations(n) {
        for eperm in (0..m).permutations(m) {
            'orient: for orient in 0u32..(1 << m) {
                // oriented image of each a pair, before signs
                let mut mapped = Vec::with_capacity(m);
                for (k, &(x, y, i, j)) in pa.iter().enumerate() {
                    let (bx, by, bi, bj) = pb[eperm[k]];
                    let (bx, by, bi, bj) =
                        if orient >> k & 1 == 1 { (by, bx, bj, bi) } else { (bx, by, bi, bj) };
                    if vperm[x] != bx || vperm[y] != by || i.abs() != bi.abs() || j.abs() != bj.abs() {
                        continue 'orient;
                    }
                    mapped.push((x, y, i, j, bi, bj));
                }
                for vflip in 0u32..(1 << n) {
                    for pflip in 0u32..(1 << m) {
                        let ok = mapped.iter().enumerate().all(|(k, &(x, y, i, j, bi, bj))| {
                            let p = if pflip >> k & 1 == 1 { -1 } else { 1 };
                            let fx = if vflip >> x & 1 == 1 { -1 } else { 1 };
                            let fy = if vflip >> y & 1 == 1 { -1 } else { 1 };
                            i * fx * p == bi && j * fy * p == bj
                        });
                        if ok {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

// ---- brute-force integral moduli ----

/// Whether some integer combination with coefficients in `[-bound, bound]`
/// is non-zero with all entries nonnegative.
pub fn brute_integral(vectors: &[Vec<i64>], bound: i64) -> bool {
    if vectors.is_empty() {
        return false;
    }
    let dim = vectors[0].len();
    let k = vectors.len();
    let span = (2 * bound + 1) as usize;
    (0..span.pow(k as u32)).any(|mut code| {
        let mut v = vec![0i64; dim];
        for g in vectors {
            let c = (code % span) as i64 - bound;
            code /= span;
            for (x, y) in v.iter_mut().zip(g) {
                *x += c * y;
            }
        }
        v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x > 0)
    })
}

// ---- random moves ----

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    (1..=n).filter(|d| n % d == 0).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn within_cap(g: &Graph) -> bool {
    g.edges().all(|(_, p)| p.idx_from.abs() <= INDEX_CAP && p.idx_to.abs() <= INDEX_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveMix {
    pub collapse: bool,
    pub expansion: bool,
    pub slide: bool,
    pub induction: bool,
}

pub const ALL_MOVES: MoveMix = MoveMix { collapse: true, expansion: true, slide: true, induction: true };

/// A random legal expansion at a random vertex.
pub fn random_expansion(rng: &mut TestRng, g: &Graph) -> Move {
    let verts: Vec<&VertexId> = g.vertices().collect();
    let v = (*verts.choose(rng).unwrap()).clone();
    let ends: Vec<End> = g.ends_at(&v).collect();
    let moved: Vec<End> = ends.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    let common = moved.iter().fold(0, |acc, h| gcd(acc, g.index(h).unwrap()));
    let choices = if common == 0 { vec![1, 2, 3, 4, 5, 6] } else { divisors(common) };
    let n = *choices.choose(rng).unwrap() * if rng.gen_bool(0.5) { -1 } else { 1 };
    Move::Expansion {
        vertex: v,
        moved_ends: moved,
        n,
        sign: if rng.gen_bool(0.5) { -1 } else { 1 },
        new_vertex: g.fresh_vertex_id("n"),
        new_edge: g.fresh_edge_id("m"),
        new_side: if rng.gen_bool(0.5) { Side::To } else { Side::From },
    }
}

/// All legal slides, collapses and inductions of `g` (inductions with
/// factors dividing the loop index).
pub fn legal_moves(g: &Graph, mix: MoveMix) -> Vec<Move> {
    let mut out = Vec::new();
    for h in g.ends() {
        let p = g.pair(&h.edge).unwrap();
        let i = p.index(h.side);
        if mix.collapse && !p.is_loop() && i.abs() == 1 {
            out.push(Move::Collapse { edge: h.clone() });
        }
        if mix.induction && p.is_loop() && i.abs() == 1 {
            let other = p.index(h.side.flip());
            for l in divisors(other).into_iter().filter(|&l| l > 1) {
                out.push(Move::Induction { loop_end: h.clone(), factor: l, direction: Direction::Multiply });
                let v = &p.from;
                let divisible =
                    g.ends_at(v).filter(|x| x.edge != h.edge).all(|x| g.index(&x).unwrap() % l == 0);
                if divisible {
                    out.push(Move::Induction {
                        loop_end: h.clone(),
                        factor: l,
                        direction: Direction::Divide,
                    });
                }
            }
        }
        if mix.slide {
            let v = g.origin(&h).unwrap();
            for over in g.ends_at(v) {
                if over.edge != h.edge && i % g.index(&over).unwrap() == 0 {
                    out.push(Move::Slide { moving_end: h.clone(), over });
                }
            }
        }
    }
    out
}

/// A random legal move whose result keeps indices under [`INDEX_CAP`].
pub fn random_move(rng: &mut TestRng, g: &Graph, mix: MoveMix) -> Option<(Move, Graph)> {
    for _ in 0..20 {
        let m = if mix.expansion && rng.gen_bool(0.3) {
            random_expansion(rng, g)
        } else {
            let all = legal_moves(g, mix);
            match all.choose(rng) {
                Some(m) => m.clone(),
                None if mix.expansion => random_expansion(rng, g),
                None => return None,
            }
        };
        if let Ok(h) = m.apply(g) {
            if within_cap(&h) && h.vertex_count() <= 6 {
                return Some((m, h));
            }
        }
    }
    None
}

/// A run from `start` of random moves (no inductions) closed off by greedy
/// reduction, so a reduced start gives a reduced end.
pub fn random_reduced_run(rng: &mut TestRng, start: &Graph, steps: usize) -> Deformation {
    let mix = MoveMix { induction: false, ..ALL_MOVES };
    let mut g = start.clone();
    let mut moves = Deformation::new();
    for _ in 0..steps {
        if let Some((m, h)) = random_move(rng, &g, mix) {
            moves.push(m);
            g = h;
        }
    }
    moves.extend(reduce(&g).1);
    moves
}

// ---- fixtures ----

/// Reduced graphs whose modular image has no integer other than 1.
pub fn no_integral_fixtures() -> Vec<Graph> {
    vec![
        h_graph(4),
        h_graph(6),
        loop_graph(2, 3),
        loop_graph(-2, 3),
        segment(2, 3),
        Graph::build(&["u", "w", "z"], &[("a", "u", "w", 2, 3), ("b", "w", "z", 4, 5)]).unwrap(),
        Graph::build(&["v"], &[("a", "v", "v", 2, 3), ("b", "v", "v", 5, 7)]).unwrap(),
        Graph::build(&["v", "w"], &[("a", "v", "w", 2, 3), ("b", "v", "w", 2, 3)]).unwrap(),
        Graph::build(&["v", "w"], &[("a", "v", "v", 4, 6), ("f", "v", "w", 6, 5)]).unwrap(),
        Graph::build(
            &["v", "w", "z"],
            &[("a", "v", "v", 2, 3), ("f", "v", "w", 4, 5), ("g", "w", "z", 10, 7)],
        )
        .unwrap(),
    ]
}

/// Assorted graphs for move tests, including ascending loops.
pub fn move_fixtures(rng: &mut TestRng, count: usize) -> Vec<Graph> {
    let mut out = vec![bs_5_30_unreduced(), bs_5_30_middle(), loop_graph(1, 4), h_graph(4)];
    while out.len() < count {
        out.push(random_graph(rng, 4, 5, 12));
    }
    out
}
