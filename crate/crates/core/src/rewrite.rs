//! Rewriting deformations into the order collapses, then slides, then
//! expansions.
//!
//! Each local rule replaces a pair of adjacent moves by a short sequence with
//! the same effect. The replacement may build an equivalent graph under
//! different names (for instance the new edge may take over the name of an
//! old one), so every replacement is replayed and matched against the
//! original intermediate graph; the resulting renaming is then pushed through
//! the rest of the sequence.

use std::collections::{BTreeMap, BTreeSet};

use crate::canon::are_equivalent;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, End, Graph, VertexId};
use crate::moves::{Deformation, Direction, Move, MoveKind};

/// A start graph, a deformation and the graph it ends at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSequenceRun {
    pub start: Graph,
    pub moves: Deformation,
    pub end: Graph,
}

impl MoveSequenceRun {
    pub fn new(start: Graph, moves: Deformation) -> Result<Self> {
        let end = moves.replay(&start)?;
        Ok(MoveSequenceRun { start, moves, end })
    }

    /// Graphs before each move, plus the end graph.
    fn trace(&self) -> Result<Vec<Graph>> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(self.start.clone());
        for m in self.moves.iter() {
            let next = m.apply(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Run-length summary such as `C^2 S^5 E^1`.
pub fn pattern_summary(d: &Deformation) -> String {
    let letter = |k: MoveKind| match k {
        MoveKind::Collapse => 'C',
        MoveKind::Expansion => 'E',
        MoveKind::Slide => 'S',
        MoveKind::Induction => 'I',
    };
    let mut parts: Vec<(char, usize)> = Vec::new();
    for m in d.iter() {
        let c = letter(m.kind());
        match parts.last_mut() {
            Some((p, n)) if *p == c => *n += 1,
            _ => parts.push((c, 1)),
        }
    }
    parts.iter().map(|(c, n)| format!("{c}^{n}")).collect::<Vec<_>>().join(" ")
}

/// True when the moves read `C* S* E*`.
pub fn is_cse(d: &Deformation) -> bool {
    let rank = |m: &Move| match m.kind() {
        MoveKind::Collapse => 0,
        MoveKind::Slide => 1,
        MoveKind::Expansion => 2,
        MoveKind::Induction => 3,
    };
    d.iter().all(|m| rank(m) < 3) && d.0.windows(2).all(|w| rank(&w[0]) <= rank(&w[1]))
}

// ---- renaming ----

/// A renaming of vertex and edge ids; an edge may also swap its two sides.
/// Ids absent from the maps are left alone.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relabel {
    vertices: BTreeMap<VertexId, VertexId>,
    edges: BTreeMap<EdgeId, (EdgeId, bool)>,
}

impl Relabel {
    pub fn vertex(&self, v: &VertexId) -> VertexId {
        self.vertices.get(v).cloned().unwrap_or_else(|| v.clone())
    }

    pub fn end(&self, h: &End) -> End {
        match self.edges.get(&h.edge) {
            Some((e, flip)) => End { edge: e.clone(), side: if *flip { h.side.flip() } else { h.side } },
            None => h.clone(),
        }
    }

    pub fn apply(&self, m: &Move) -> Move {
        match m {
            Move::Collapse { edge } => Move::Collapse { edge: self.end(edge) },
            Move::Expansion { vertex, moved_ends, n, sign, new_vertex, new_edge, new_side } => {
                let c = self.end(&End { edge: new_edge.clone(), side: *new_side });
                Move::Expansion {
                    vertex: self.vertex(vertex),
                    moved_ends: moved_ends.iter().map(|h| self.end(h)).collect(),
                    n: *n,
                    sign: *sign,
                    new_vertex: self.vertex(new_vertex),
                    new_edge: c.edge,
                    new_side: c.side,
                }
            }
            Move::Slide { moving_end, over } => {
                Move::Slide { moving_end: self.end(moving_end), over: self.end(over) }
            }
            Move::Induction { loop_end, factor, direction } => {
                Move::Induction { loop_end: self.end(loop_end), factor: *factor, direction: *direction }
            }
        }
    }

    pub fn apply_graph(&self, g: &Graph) -> Result<Graph> {
        let vertices = g.vertices().map(|v| self.vertex(v));
        let edges = g.edges().map(|(id, p)| {
            let mut p = p.clone();
            p.from = self.vertex(&p.from);
            p.to = self.vertex(&p.to);
            let (e, flip) = self.edges.get(id).cloned().unwrap_or((id.clone(), false));
            if flip {
                std::mem::swap(&mut p.from, &mut p.to);
                std::mem::swap(&mut p.idx_from, &mut p.idx_to);
            }
            (e, p)
        });
        Graph::new(vertices, edges)
    }

    pub fn inverse(&self) -> Relabel {
        Relabel {
            vertices: self.vertices.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            edges: self.edges.iter().map(|(a, (b, f))| (b.clone(), (a.clone(), *f))).collect(),
        }
    }

    /// Extends an injective partial map to a permutation by sending the ids
    /// it uses but does not move back onto the ids it vacates.
    fn into_permutation(mut self) -> Relabel {
        let dom: BTreeSet<VertexId> = self.vertices.keys().cloned().collect();
        let img: BTreeSet<VertexId> = self.vertices.values().cloned().collect();
        for (x, y) in img.difference(&dom).cloned().zip(dom.difference(&img).cloned()).collect::<Vec<_>>() {
            self.vertices.insert(x, y);
        }
        let dom: BTreeSet<EdgeId> = self.edges.keys().cloned().collect();
        let img: BTreeSet<EdgeId> = self.edges.values().map(|(e, _)| e.clone()).collect();
        for (x, y) in img.difference(&dom).cloned().zip(dom.difference(&img).cloned()).collect::<Vec<_>>() {
            self.edges.insert(x, (y, false));
        }
        self.vertices.retain(|a, b| a != b);
        self.edges.retain(|a, (b, f)| a != b || *f);
        self
    }
}

fn sign(x: i64) -> i8 {
    if x < 0 {
        -1
    } else {
        1
    }
}

/// Whether the per-pair sign products of `a` and `b` differ by a vertex
/// coboundary, where `pairs` lists matching edges `(a edge, b edge)`
/// and `vmap` sends `a` vertices to `b` vertices.
fn gauge_equivalent(
    a: &Graph,
    b: &Graph,
    vmap: &BTreeMap<VertexId, VertexId>,
    pairs: &[(EdgeId, EdgeId)],
) -> bool {
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, i8)>> = BTreeMap::new();
    for (ea, eb) in pairs {
        let pa = a.pair(ea).unwrap();
        let pb = b.pair(eb).unwrap();
        let delta = sign(pa.idx_from) * sign(pa.idx_to) * sign(pb.idx_from) * sign(pb.idx_to);
        let (x, y) = (vmap[&pa.from].clone(), vmap[&pa.to].clone());
        if x == y {
            if delta < 0 {
                return false;
            }
            continue;
        }
        adj.entry(x.clone()).or_default().push((y.clone(), delta));
        adj.entry(y).or_default().push((x, delta));
    }
    let mut color: BTreeMap<VertexId, i8> = BTreeMap::new();
    for start in adj.keys() {
        if color.contains_key(start) {
            continue;
        }
        color.insert(start.clone(), 1);
        let mut stack = vec![start.clone()];
        while let Some(x) = stack.pop() {
            let cx = color[&x];
            for (y, d) in &adj[&x] {
                let want = cx * d;
                match color.get(y) {
                    Some(&cy) if cy != want => return false,
                    Some(_) => {}
                    None => {
                        color.insert(y.clone(), want);
                        stack.push(y.clone());
                    }
                }
            }
        }
    }
    true
}

/// Finds a renaming of `a` onto `b` that fixes every id outside the flexible
/// sets, matches absolute indices exactly and signs up to the equivalences
/// of the canonical form.
pub fn find_relabel(
    a: &Graph,
    b: &Graph,
    flex_v: &BTreeSet<VertexId>,
    flex_e: &BTreeSet<EdgeId>,
) -> Option<Relabel> {
    if a.vertex_count() != b.vertex_count() || a.edge_pair_count() != b.edge_pair_count() {
        return None;
    }
    let av: Vec<VertexId> =
        a.vertices().filter(|v| flex_v.contains(*v) || !b.has_vertex(v)).cloned().collect();
    let fixed_v: Vec<&VertexId> = a.vertices().filter(|v| !av.contains(v)).collect();
    let bv: Vec<VertexId> = b.vertices().filter(|v| !fixed_v.contains(v)).cloned().collect();
    let ae: Vec<EdgeId> =
        a.edges().map(|(e, _)| e).filter(|e| flex_e.contains(*e) || !b.has_edge(e)).cloned().collect();
    let fixed_e: Vec<&EdgeId> = a.edges().map(|(e, _)| e).filter(|e| !ae.contains(e)).collect();
    let be: Vec<EdgeId> = b.edges().map(|(e, _)| e).filter(|e| !fixed_e.contains(e)).cloned().collect();
    if av.len() != bv.len() || ae.len() != be.len() {
        return None;
    }

    for perm in permutations(bv.len()) {
        let mut vmap: BTreeMap<VertexId, VertexId> =
            fixed_v.iter().map(|v| ((*v).clone(), (*v).clone())).collect();
        for (k, j) in perm.iter().enumerate() {
            vmap.insert(av[k].clone(), bv[*j].clone());
        }
        let fixed_ok = fixed_e.iter().all(|e| {
            let (pa, pb) = (a.pair(e).unwrap(), b.pair(e).unwrap());
            vmap[&pa.from] == pb.from
                && vmap[&pa.to] == pb.to
                && pa.idx_from.abs() == pb.idx_from.abs()
                && pa.idx_to.abs() == pb.idx_to.abs()
        });
        if !fixed_ok {
            continue;
        }
        let mut assignment = Vec::new();
        let mut used = vec![false; be.len()];
        if let Some(r) = assign_edges(a, b, &vmap, &ae, &be, &fixed_e, &mut used, &mut assignment) {
            return Some(r);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn assign_edges(
    a: &Graph,
    b: &Graph,
    vmap: &BTreeMap<VertexId, VertexId>,
    ae: &[EdgeId],
    be: &[EdgeId],
    fixed_e: &[&EdgeId],
    used: &mut Vec<bool>,
    assignment: &mut Vec<(usize, bool)>,
) -> Option<Relabel> {
    let k = assignment.len();
    if k == ae.len() {
        let mut pairs: Vec<(EdgeId, EdgeId)> = fixed_e.iter().map(|e| ((*e).clone(), (*e).clone())).collect();
        // flipped edges are compared as the b pair read backwards, which has
        // the same sign product, so flips do not matter here
        pairs.extend(assignment.iter().enumerate().map(|(i, (j, _))| (ae[i].clone(), be[*j].clone())));
        if !gauge_equivalent(a, b, vmap, &pairs) {
            return None;
        }
        let r = Relabel {
            vertices: vmap.iter().filter(|(x, y)| x != y).map(|(x, y)| (x.clone(), y.clone())).collect(),
            edges: assignment
                .iter()
                .enumerate()
                .map(|(i, (j, f))| (ae[i].clone(), (be[*j].clone(), *f)))
                .filter(|(x, (y, f))| x != y || *f)
                .collect(),
        };
        return Some(r);
    }
    let pa = a.pair(&ae[k]).unwrap();
    let (x, y) = (&vmap[&pa.from], &vmap[&pa.to]);
    for j in 0..be.len() {
        if used[j] {
            continue;
        }
        let pb = b.pair(&be[j]).unwrap();
        for flip in [false, true] {
            let (bx, by, bi, bj) = if flip {
                (&pb.to, &pb.from, pb.idx_to, pb.idx_from)
            } else {
                (&pb.from, &pb.to, pb.idx_from, pb.idx_to)
            };
            if x == bx && y == by && pa.idx_from.abs() == bi.abs() && pa.idx_to.abs() == bj.abs() {
                used[j] = true;
                assignment.push((j, flip));
                let r = assign_edges(a, b, vmap, ae, be, fixed_e, used, assignment);
                assignment.pop();
                used[j] = false;
                if r.is_some() {
                    return r;
                }
            }
        }
    }
    None
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

// ---- fresh names ----

struct Fresh {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<EdgeId>,
}

impl Fresh {
    fn for_run(start: &Graph, moves: &Deformation) -> Fresh {
        let mut vertices: BTreeSet<VertexId> = start.vertices().cloned().collect();
        let mut edges: BTreeSet<EdgeId> = start.edges().map(|(e, _)| e.clone()).collect();
        for m in moves.iter() {
            vertices.extend(m.vertex_ids());
            edges.extend(m.edge_ids());
        }
        Fresh { vertices, edges }
    }

    fn vertex(&mut self) -> VertexId {
        let v = (0..).map(|k| VertexId(format!("rv{k}"))).find(|v| !self.vertices.contains(v)).unwrap();
        self.vertices.insert(v.clone());
        v
    }

    fn edge(&mut self) -> EdgeId {
        let e = (0..).map(|k| EdgeId(format!("re{k}"))).find(|e| !self.edges.contains(e)).unwrap();
        self.edges.insert(e.clone());
        e
    }
}

// ---- rules ----

fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

/// Ids a sequence of moves acts on structurally, for use as flexible sets.
fn touched(start: &Graph, moves: &[Move]) -> Result<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
    let mut vs = BTreeSet::new();
    let mut es = BTreeSet::new();
    let mut g = start.clone();
    for m in moves {
        match m {
            Move::Collapse { edge } => {
                vs.insert(g.origin(edge)?.clone());
                vs.insert(g.terminus(edge)?.clone());
                es.insert(edge.edge.clone());
            }
            Move::Expansion { vertex, new_vertex, new_edge, .. } => {
                vs.insert(vertex.clone());
                vs.insert(new_vertex.clone());
                es.insert(new_edge.clone());
            }
            Move::Slide { moving_end, over } => {
                vs.insert(g.origin(moving_end)?.clone());
                vs.insert(g.terminus(over)?.clone());
                es.insert(over.edge.clone());
            }
            Move::Induction { loop_end, .. } => {
                vs.insert(g.origin(loop_end)?.clone());
                es.insert(loop_end.edge.clone());
            }
        }
        g = m.apply(&g)?;
    }
    Ok((vs, es))
}

struct ExpansionData {
    v: VertexId,
    moved: Vec<End>,
    n: i64,
    s: i64,
    u: VertexId,
    c: EdgeId,
    side: crate::graph::Side,
}

impl ExpansionData {
    fn of(m: &Move) -> Option<Self> {
        match m {
            Move::Expansion { vertex, moved_ends, n, sign, new_vertex, new_edge, new_side } => {
                Some(ExpansionData {
                    v: vertex.clone(),
                    moved: moved_ends.clone(),
                    n: *n,
                    s: *sign,
                    u: new_vertex.clone(),
                    c: new_edge.clone(),
                    side: *new_side,
                })
            }
            _ => None,
        }
    }

    fn cu(&self) -> End {
        End { edge: self.c.clone(), side: self.side }
    }

    fn cv(&self) -> End {
        self.cu().reverse()
    }

    fn with(&self, vertex: VertexId, moved: Vec<End>, n: i64, s: i64, c: EdgeId) -> Move {
        Move::Expansion {
            vertex,
            moved_ends: moved,
            n,
            sign: s,
            new_vertex: self.u.clone(),
            new_edge: c,
            new_side: self.side,
        }
    }
}

/// The expansion that rebuilds `f` from `f` with `cu` collapsed.
fn recreate(f: &Graph, e: &ExpansionData) -> Result<Move> {
    let cu = e.cu();
    let cv = e.cv();
    let s = f.index(&cu)?;
    if s.abs() != 1 || f.is_loop(&e.c)? {
        return Err(internal(format!("edge {} cannot be re-expanded", e.c)));
    }
    let moved: Vec<End> = f.ends_at(&e.u).filter(|h| *h != cu).collect();
    Ok(e.with(f.origin(&cv)?.clone(), moved, f.index(&cv)? * s, s, e.c.clone()))
}

fn slides_over(ends: impl IntoIterator<Item = End>, over: &End) -> Vec<Move> {
    ends.into_iter().map(|h| Move::Slide { moving_end: h, over: over.clone() }).collect()
}

/// Expansion followed by a slide, with `p` the graph before the expansion and
/// `f` the graph after the slide. Returns moves from `p` reaching a graph
/// equivalent to `f`: slides followed by at most one expansion.
fn rule_es(
    p: &Graph,
    exp: &Move,
    slide: &Move,
    f: &Graph,
    pos: usize,
    fresh: &mut Fresh,
) -> Result<Vec<Move>> {
    let e = ExpansionData::of(exp).ok_or_else(|| internal("expected an expansion"))?;
    let Move::Slide { moving_end: g0, over: e1 } = slide else { return Err(internal("expected a slide")) };
    let q = exp.apply(p)?;
    let on_c = |h: &End| h.edge == e.c;
    let in_s = |h: &End| e.moved.contains(h);

    if !on_c(g0) && !on_c(e1) {
        return Ok(vec![slide.clone(), recreate(f, &e)?]);
    }
    if on_c(e1) {
        return Ok(vec![recreate(f, &e)?]);
    }
    let e1bar = e1.reverse();
    if *g0 == e.cv() {
        if q.terminus(e1)? == &e.u {
            let (a, b) = (p.index(e1)?, p.index(&e1bar)?);
            if a.abs() != b.abs() {
                return Err(Error::AscendingLoopObstruction(pos));
            }
            let mut moved = e.moved.clone();
            moved.push(e1.clone());
            return Ok(vec![e.with(e.v.clone(), moved, e.n, e.s, e.c.clone())]);
        }
        let mut out = slides_over(e.moved.iter().cloned(), e1);
        out.push(recreate(f, &e)?);
        return Ok(out);
    }
    if *g0 == e.cu() {
        if in_s(&e1bar) {
            let (a, b) = (q.index(e1)?, q.index(&e1bar)?);
            if b % a != 0 || (b / a).abs() != 1 {
                return Err(Error::AscendingLoopObstruction(pos));
            }
            if b / a == 1 {
                return Ok(vec![exp.clone()]);
            }
            let others = e.moved.iter().filter(|h| h.edge != e1.edge).cloned();
            let mut out = slides_over(others, e1);
            out.push(e.with(e.v.clone(), e.moved.clone(), -e.n, -e.s, e.c.clone()));
            return Ok(out);
        }
        let a = p.index(e1)?;
        if a % e.n != 0 || (a / e.n).abs() != 1 {
            return Err(internal("slide of the new edge over a non-unit end"));
        }
        let eps = a / e.n;
        let w = p.terminus(e1)?.clone();
        let rest: Vec<End> = e.moved.iter().filter(|h| *h != e1).cloned().collect();
        let mut out = slides_over(rest.iter().cloned(), e1);
        let n2 = p.index(&e1bar)? * eps;
        out.push(Move::Expansion {
            vertex: w,
            moved_ends: rest,
            n: n2,
            sign: eps,
            new_vertex: e.u.clone(),
            new_edge: fresh.edge(),
            new_side: e.side,
        });
        return Ok(out);
    }
    Err(internal("unclassified expansion-slide pair"))
}

/// Expansion followed by a collapse.
fn rule_ec(p: &Graph, exp: &Move, collapse: &Move, f: &Graph, pos: usize) -> Result<Vec<Move>> {
    let e = ExpansionData::of(exp).ok_or_else(|| internal("expected an expansion"))?;
    let Move::Collapse { edge: x } = collapse else { return Err(internal("expected a collapse")) };
    let q = exp.apply(p)?;
    if *x == e.cu() || *x == e.cv() {
        return Ok(vec![]);
    }
    let origin = q.origin(x)?;
    if origin == &e.u {
        let rest = e.moved.iter().filter(|h| *h != x).cloned();
        return Ok(slides_over(rest, x));
    }
    if origin == &e.v && q.terminus(x)? == &e.u {
        if p.index(&x.reverse())?.abs() != 1 {
            return Err(Error::AscendingLoopObstruction(pos));
        }
        return Ok(vec![]);
    }
    Ok(vec![collapse.clone(), recreate(f, &e)?])
}

/// Slide followed by a collapse, handled by reversing the pair.
fn rule_sc(
    p: &Graph,
    slide: &Move,
    collapse: &Move,
    f: &Graph,
    pos: usize,
    fresh: &mut Fresh,
) -> Result<Vec<Move>> {
    let q = slide.apply(p)?;
    let e_inv = collapse.inverse(&q)?;
    let s_inv = slide.inverse(p)?;
    let reversed = rule_es(f, &e_inv, &s_inv, p, pos, fresh)?;

    let mut graphs = vec![f.clone()];
    for m in &reversed {
        let next = m.apply(graphs.last().unwrap())?;
        graphs.push(next);
    }
    let p2 = graphs.last().unwrap().clone();
    let mut back = Vec::with_capacity(reversed.len());
    for (k, m) in reversed.iter().enumerate().rev() {
        back.push(m.inverse(&graphs[k])?);
    }
    let mut tv = touched(f, &[e_inv, s_inv])?;
    let tr = touched(f, &reversed)?;
    tv.0.extend(tr.0);
    tv.1.extend(tr.1);
    let rho = find_relabel(&p2, p, &tv.0, &tv.1)
        .ok_or_else(|| internal(format!("reversed rewrite at {pos} does not match")))?
        .into_permutation();
    Ok(back.iter().map(|m| rho.apply(m)).collect())
}

fn replace_pair(run: &MoveSequenceRun, pos: usize, fresh: &mut Fresh) -> Result<MoveSequenceRun> {
    let moves = &run.moves.0;
    if pos + 1 >= moves.len() {
        return Err(Error::NoPattern(pos));
    }
    let trace = run.trace()?;
    let (p, f) = (&trace[pos], &trace[pos + 2]);
    let (first, second) = (&moves[pos], &moves[pos + 1]);
    let replacement = match (first.kind(), second.kind()) {
        (MoveKind::Expansion, MoveKind::Slide) => rule_es(p, first, second, f, pos, fresh)?,
        (MoveKind::Expansion, MoveKind::Collapse) => rule_ec(p, first, second, f, pos)?,
        (MoveKind::Slide, MoveKind::Collapse) => rule_sc(p, first, second, f, pos, fresh)?,
        _ => return Err(Error::NoPattern(pos)),
    };
    splice(run, &trace, pos, 2, replacement)
}

/// Replaces `len` moves at `pos` with `replacement`, renames the rest of the
/// sequence to fit, and checks the end graph.
fn splice(
    run: &MoveSequenceRun,
    trace: &[Graph],
    pos: usize,
    len: usize,
    replacement: Vec<Move>,
) -> Result<MoveSequenceRun> {
    let p = &trace[pos];
    let f = &trace[pos + len];
    let q2 = Deformation(replacement.clone()).replay(p)?;
    let mut tv = touched(p, &run.moves.0[pos..pos + len])?;
    let tr = touched(p, &replacement)?;
    tv.0.extend(tr.0);
    tv.1.extend(tr.1);
    let rho = find_relabel(&q2, f, &tv.0, &tv.1)
        .ok_or_else(|| internal(format!("rewrite at {pos} changed the graph")))?;
    let back = rho.inverse().into_permutation();

    let mut moves = run.moves.0[..pos].to_vec();
    moves.extend(replacement);
    moves.extend(run.moves.0[pos + len..].iter().map(|m| back.apply(m)));
    let out = MoveSequenceRun::new(run.start.clone(), Deformation(moves))
        .map_err(|e| internal(format!("rewritten sequence does not replay: {e}")))?;
    if !are_equivalent(&out.end, &run.end) {
        return Err(internal("rewritten sequence ends elsewhere"));
    }
    Ok(out)
}

/// Applies the rewrite rule matching the moves at `position` and
/// `position + 1`.
pub fn rewrite_step(run: &MoveSequenceRun, position: usize) -> Result<MoveSequenceRun> {
    let mut fresh = Fresh::for_run(&run.start, &run.moves);
    replace_pair(run, position, &mut fresh)
}

/// Replaces every induction by an expansion and a collapse.
pub fn elementarize(run: &MoveSequenceRun) -> Result<MoveSequenceRun> {
    let mut fresh = Fresh::for_run(&run.start, &run.moves);
    let mut cur = run.clone();
    while let Some(pos) = cur.moves.iter().position(|m| m.kind() == MoveKind::Induction) {
        let trace = cur.trace()?;
        let g = &trace[pos];
        let Move::Induction { loop_end: e, factor, direction } = &cur.moves.0[pos] else { unreachable!() };
        let s = g.index(e)?;
        let big_m = g.index(&e.reverse())?;
        let v = g.origin(e)?.clone();
        let (moved, n) = match direction {
            Direction::Multiply => (vec![e.reverse()], big_m / (factor * s)),
            Direction::Divide => (g.ends_at(&v).filter(|h| h != e).collect(), *factor),
        };
        let exp = Move::Expansion {
            vertex: v,
            moved_ends: moved,
            n,
            sign: s,
            new_vertex: fresh.vertex(),
            new_edge: fresh.edge(),
            new_side: e.side,
        };
        cur = splice(&cur, &trace, pos, 1, vec![exp, Move::Collapse { edge: e.clone() }])?;
    }
    Ok(cur)
}

/// Rewrites until the sequence reads `C* S* E*`.
pub fn normalize_cse(run: &MoveSequenceRun) -> Result<MoveSequenceRun> {
    let budget = 10_000usize.max(100 * run.moves.len() * run.moves.len());
    normalize_cse_with_budget(run, budget)
}

pub fn normalize_cse_with_budget(run: &MoveSequenceRun, budget: usize) -> Result<MoveSequenceRun> {
    let mut cur = elementarize(run)?;
    let mut fresh = Fresh::for_run(&cur.start, &cur.moves);
    for _ in 0..budget {
        let ms = &cur.moves.0;
        let first_collapse = (1..ms.len()).find(|&i| {
            ms[i].kind() == MoveKind::Collapse
                && matches!(ms[i - 1].kind(), MoveKind::Expansion | MoveKind::Slide)
        });
        let pos = match first_collapse {
            Some(i) => i - 1,
            None => {
                let last_exp = (0..ms.len().saturating_sub(1)).rev().find(|&i| {
                    ms[i].kind() == MoveKind::Expansion
                        && matches!(ms[i + 1].kind(), MoveKind::Collapse | MoveKind::Slide)
                });
                match last_exp {
                    Some(i) => i,
                    None => return Ok(cur),
                }
            }
        };
        cur = replace_pair(&cur, pos, &mut fresh)?;
    }
    Err(Error::NonTerminating(budget))
}
