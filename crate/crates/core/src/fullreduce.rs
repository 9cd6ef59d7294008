//! Admissible paths and the full-reduction deformation.
//!
//! A path `(e1, ..., ek, f)` of loops at a vertex followed by a non-loop edge
//! is walked with a running quotient `C`, starting at 1: an entry `x` needs
//! `i(x) | C` and replaces `C` by `C / |i(x)| * |i(x̄)|`. The path is
//! admissible when every step of the walk, including the final `i(f) | C`,
//! succeeds.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::arith::ExponentVector;
use crate::error::{Error, Result};
use crate::graph::{End, Graph, VertexId};
use crate::moves::{reduce, Deformation, Direction, Move};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AdmissiblePath {
    pub loops: Vec<End>,
    pub target: End,
}

impl AdmissiblePath {
    pub fn new(loops: Vec<End>, target: End) -> Self {
        AdmissiblePath { loops, target }
    }

    pub fn base_vertex<'g>(&self, g: &'g Graph) -> Result<&'g VertexId> {
        g.origin(&self.target)
    }

    /// Number of loops whose entering index is not +-1.
    pub fn essential_length(&self, g: &Graph) -> Result<usize> {
        let mut n = 0;
        for x in &self.loops {
            if g.index(x)?.abs() != 1 {
                n += 1;
            }
        }
        Ok(n)
    }

    /// `m_i = i(ē_i)` for each loop.
    pub fn m(&self, g: &Graph) -> Result<Vec<i64>> {
        self.loops.iter().map(|x| g.index(&x.reverse())).collect()
    }

    /// `n_i = i(e_{i+1})`, ending with `i(f)`.
    pub fn n(&self, g: &Graph) -> Result<Vec<i64>> {
        self.loops.iter().skip(1).chain(std::iter::once(&self.target)).map(|x| g.index(x)).collect()
    }
}

fn check_shape(g: &Graph, p: &AdmissiblePath) -> Result<()> {
    let f = &p.target;
    let pair = g.pair(&f.edge).map_err(|_| Error::MalformedPath(format!("unknown edge {}", f.edge)))?;
    if pair.is_loop() {
        return Err(Error::MalformedPath(format!("target {f} is a loop")));
    }
    let v = pair.vertex(f.side);
    for x in &p.loops {
        let lp = g.pair(&x.edge).map_err(|_| Error::MalformedPath(format!("unknown edge {}", x.edge)))?;
        if !lp.is_loop() || lp.from != *v {
            return Err(Error::MalformedPath(format!("{x} is not a loop at {v}")));
        }
    }
    Ok(())
}

fn step(g: &Graph, c: &ExponentVector, x: &End) -> Option<ExponentVector> {
    let i = g.index(x).ok()?;
    let rest = c.div(&ExponentVector::from_int(i.unsigned_abs()));
    if !rest.is_integral() {
        return None;
    }
    Some(rest.mul(&ExponentVector::from_int(g.index(&x.reverse()).ok()?.unsigned_abs())))
}

fn divides(g: &Graph, c: &ExponentVector, x: &End) -> bool {
    g.index(x).is_ok_and(|i| c.div(&ExponentVector::from_int(i.unsigned_abs())).is_integral())
}

pub fn is_admissible(g: &Graph, p: &AdmissiblePath) -> Result<bool> {
    check_shape(g, p)?;
    let mut c = ExponentVector::one();
    for x in &p.loops {
        match step(g, &c, x) {
            Some(next) => c = next,
            None => return Ok(false),
        }
    }
    Ok(divides(g, &c, &p.target))
}

fn require_admissible(g: &Graph, p: &AdmissiblePath) -> Result<()> {
    if is_admissible(g, p)? {
        Ok(())
    } else {
        Err(Error::NotAdmissible)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathSearch {
    Found(AdmissiblePath),
    /// `exhaustive` is true when every reachable quotient was explored within
    /// the depth bound, so no admissible path of any length exists.
    NotFound {
        exhaustive: bool,
    },
}

impl PathSearch {
    pub fn path(self) -> Option<AdmissiblePath> {
        match self {
            PathSearch::Found(p) => Some(p),
            PathSearch::NotFound { .. } => None,
        }
    }
}

/// Breadth-first search over loop sequences at the origin of `f`, memoized on
/// the running quotient. Paths use at most `depth_bound` loops.
pub fn find_admissible_path(g: &Graph, f: &End, depth_bound: usize) -> Result<PathSearch> {
    if g.is_loop(&f.edge)? {
        return Err(Error::MalformedPath(format!("target {f} is a loop")));
    }
    let v = g.origin(f)?;
    let loops: Vec<End> = g.ends_at(v).filter(|h| g.pair(&h.edge).unwrap().is_loop()).collect();

    // quotient -> (parent quotient, loop taken)
    let mut parent: HashMap<ExponentVector, Option<(ExponentVector, End)>> = HashMap::new();
    let start = ExponentVector::one();
    parent.insert(start.clone(), None);
    let mut frontier = VecDeque::from([(start, 0usize)]);
    let mut truncated = false;

    while let Some((c, depth)) = frontier.pop_front() {
        if depth > 0 && divides(g, &c, f) {
            let mut path = Vec::new();
            let mut cur = c;
            while let Some(Some((prev, x))) = parent.get(&cur) {
                path.push(x.clone());
                cur = prev.clone();
            }
            path.reverse();
            return Ok(PathSearch::Found(AdmissiblePath::new(path, f.clone())));
        }
        for x in &loops {
            let Some(next) = step(g, &c, x) else { continue };
            if parent.contains_key(&next) {
                continue;
            }
            if depth == depth_bound {
                truncated = true;
                continue;
            }
            parent.insert(next.clone(), Some((c.clone(), x.clone())));
            frontier.push_back((next, depth + 1));
        }
    }
    Ok(PathSearch::NotFound { exhaustive: !truncated })
}

/// Moves the inessential loops to the front of the path and replaces them all
/// by copies of the first loop, sliding its reverse over the others so the
/// quotient is not lost.
pub fn normalize_prefix(g: &Graph, p: &AdmissiblePath) -> Result<(Graph, AdmissiblePath, Deformation)> {
    require_admissible(g, p)?;
    let e1 = p.loops[0].clone();
    let e1bar = e1.reverse();
    let mut inessential = Vec::new();
    let mut essential = Vec::new();
    for x in &p.loops {
        if g.index(x)?.abs() == 1 {
            inessential.push(x.clone());
        } else {
            essential.push(x.clone());
        }
    }
    let already = inessential.iter().all(|x| *x == e1) && p.loops[..inessential.len()] == inessential[..];
    if already {
        return Ok((g.clone(), p.clone(), Deformation::new()));
    }

    let others: BTreeSet<End> = inessential.iter().filter(|x| x.edge != e1.edge).cloned().collect();
    let mut cur = g.clone();
    let mut moves = Deformation::new();
    for x in others {
        let m = Move::Slide { moving_end: e1bar.clone(), over: x };
        cur = m.apply(&cur)?;
        moves.push(m);
    }
    let extra = if moves.is_empty() { 0 } else { essential.iter().filter(|x| **x == e1bar).count() };
    let mut loops = vec![e1; inessential.len() + extra];
    loops.extend(essential);
    let out = AdmissiblePath::new(loops, p.target.clone());
    require_admissible(&cur, &out)?;
    Ok((cur, out, moves))
}

fn split_prefix(g: &Graph, p: &AdmissiblePath) -> Result<usize> {
    let e1 = &p.loops[0];
    if g.index(e1)?.abs() != 1 {
        return Err(Error::WrongShape("first loop is essential".into()));
    }
    let j = p.loops.iter().take_while(|x| *x == e1).count();
    for x in &p.loops[j..] {
        if g.index(x)?.abs() == 1 {
            return Err(Error::WrongShape(format!("inessential entry {x} after the prefix")));
        }
    }
    Ok(j)
}

/// Inserts copies of the first loop until the path is admissible again.
fn pad(g: &Graph, p: &mut AdmissiblePath, limit: usize) -> Result<()> {
    for _ in 0..=limit {
        if is_admissible(g, p)? {
            return Ok(());
        }
        p.loops.insert(0, p.loops[0].clone());
    }
    Err(Error::NotAdmissible)
}

/// Inductions on the first loop until the first essential index (or `i(f)`
/// when there is none) is `± i(ē1)^r`.
pub fn align_by_induction(g: &Graph, p: &AdmissiblePath) -> Result<(Graph, AdmissiblePath, Deformation)> {
    require_admissible(g, p)?;
    let mut j = split_prefix(g, p)?;
    let e1 = p.loops[0].clone();
    let e1bar = e1.reverse();
    let mut path = p.clone();
    while path.loops.get(j) == Some(&e1bar) {
        path.loops.remove(j);
    }
    j = split_prefix(g, &path)?;
    let t = path.loops.get(j).cloned().unwrap_or_else(|| path.target.clone());

    let big_m = g.index(&e1bar)?.unsigned_abs();
    let a = g.index(&t)?.unsigned_abs();
    let mut q = ExponentVector::one();
    let mv = ExponentVector::from_int(big_m);
    let av = ExponentVector::from_int(a);
    let mut r = 0;
    while !q.div(&av).is_integral() {
        if r > 64 || mv.is_one() {
            return Err(Error::NotAdmissible);
        }
        q = q.mul(&mv);
        r += 1;
    }
    let mut q = q.div(&av);

    let mut cur = g.clone();
    let mut moves = Deformation::new();
    while !q.is_one() {
        let l = q.iter().map(|(p, e)| p.pow(e.min(mv.exponent(p)) as u32)).product::<u64>();
        let m = Move::Induction { loop_end: e1.clone(), factor: l as i64, direction: Direction::Multiply };
        cur = m.apply(&cur)?;
        moves.push(m);
        q = q.div(&ExponentVector::from_int(l));
    }
    pad(&cur, &mut path, moves.len())?;
    Ok((cur, path, moves))
}

/// Result of [`full_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullReduction {
    pub graph: Graph,
    pub deformation: Deformation,
    /// True when every final path search explored its whole state space.
    pub exhaustive: bool,
}

fn apply_all(g: &mut Graph, moves: &mut Deformation, more: Deformation) -> Result<()> {
    for m in more.0 {
        *g = m.apply(g)?;
        moves.push(m);
    }
    Ok(())
}

/// Removes the target edge of an admissible path, returning the moves used.
fn eliminate(g: &Graph, p: &AdmissiblePath) -> Result<(Graph, Deformation)> {
    let mut cur = g.clone();
    let mut path = p.clone();
    let mut moves = Deformation::new();
    loop {
        let (next, np, d) = normalize_prefix(&cur, &path)?;
        cur = next;
        path = np;
        moves.extend(d);
        let (next, np, d) = align_by_induction(&cur, &path)?;
        cur = next;
        path = np;
        moves.extend(d);

        let j = split_prefix(&cur, &path)?;
        let e1bar = path.loops[0].reverse();
        let t = path.loops.get(j).cloned().unwrap_or_else(|| path.target.clone());
        let mut slides = Deformation::new();
        let mut probe = cur.clone();
        while probe.index(&t)?.abs() != 1 {
            let m = Move::Slide { moving_end: t.clone(), over: e1bar.clone() };
            probe = m.apply(&probe)?;
            slides.push(m);
        }
        apply_all(&mut cur, &mut moves, slides)?;
        if j == path.loops.len() {
            let c = Move::Collapse { edge: t };
            cur = c.apply(&cur)?;
            moves.push(c);
            return Ok((cur, moves));
        }
        require_admissible(&cur, &path)?;
    }
}

pub fn full_reduce(g: &Graph, depth_bound: usize) -> Result<FullReduction> {
    let (mut cur, mut moves) = reduce(g);
    'outer: loop {
        let mut exhaustive = true;
        let targets: Vec<End> = cur.ends().filter(|h| !cur.pair(&h.edge).unwrap().is_loop()).collect();
        for f in targets {
            match find_admissible_path(&cur, &f, depth_bound)? {
                PathSearch::Found(p) => {
                    let (next, d) = eliminate(&cur, &p)?;
                    moves.extend(d);
                    let (next, d) = reduce(&next);
                    moves.extend(d);
                    cur = next;
                    continue 'outer;
                }
                PathSearch::NotFound { exhaustive: e } => exhaustive &= e,
            }
        }
        return Ok(FullReduction { graph: cur, deformation: moves, exhaustive });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_equivalent;
    use crate::fixtures::*;
    use crate::graph::Side;

    fn end(e: &str) -> End {
        End::new(e, Side::From)
    }

    #[test]
    fn admissibility_examples() {
        let g = bs_5_30_unreduced();
        assert!(is_admissible(&g, &AdmissiblePath::new(vec![end("e")], end("f"))).unwrap());

        let two = Graph::build(&["u", "w"], &[("e", "u", "u", 2, 6), ("f", "u", "w", 2, 5)]).unwrap();
        assert!(!is_admissible(&two, &AdmissiblePath::new(vec![end("e")], end("f"))).unwrap());

        let g =
            Graph::build(&["u", "w"], &[("a", "u", "u", 1, 4), ("b", "u", "u", 1, 6), ("f", "u", "w", 3, 5)])
                .unwrap();
        let p = AdmissiblePath::new(vec![end("a"), end("b")], end("f"));
        assert!(is_admissible(&g, &p).unwrap());
        assert_eq!(p.m(&g).unwrap(), vec![4, 6]);
        assert_eq!(p.n(&g).unwrap(), vec![1, 3]);
        assert_eq!(p.essential_length(&g).unwrap(), 0);
    }

    #[test]
    fn malformed_paths() {
        let g = bs_5_30_unreduced();
        let err = is_admissible(&g, &AdmissiblePath::new(vec![end("e")], end("e")));
        assert_eq!(err.unwrap_err().code(), "MalformedPath");
        let err = is_admissible(&g, &AdmissiblePath::new(vec![end("f")], end("f")));
        assert_eq!(err.unwrap_err().code(), "MalformedPath");
    }

    #[test]
    fn search_examples() {
        let g = bs_5_30_unreduced();
        let p = find_admissible_path(&g, &end("f"), 16).unwrap().path().unwrap();
        assert_eq!(p, AdmissiblePath::new(vec![end("e")], end("f")));

        let seg = segment(2, 3);
        assert_eq!(
            find_admissible_path(&seg, &end("f"), 16).unwrap(),
            PathSearch::NotFound { exhaustive: true }
        );
        let h = h_graph(4);
        assert_eq!(
            find_admissible_path(&h, &end("f"), 16).unwrap(),
            PathSearch::NotFound { exhaustive: true }
        );
    }

    #[test]
    fn search_can_be_truncated() {
        // C grows as 2^k, and f needs 2^20
        let g = Graph::build(&["u", "w"], &[("e", "u", "u", 1, 2), ("f", "u", "w", 1 << 20, 3)]).unwrap();
        assert_eq!(
            find_admissible_path(&g, &end("f"), 16).unwrap(),
            PathSearch::NotFound { exhaustive: false }
        );
        let p = find_admissible_path(&g, &end("f"), 20).unwrap().path().unwrap();
        assert_eq!(p.loops.len(), 20);
    }

    #[test]
    fn normalize_slides_over_inessential_loops() {
        let g =
            Graph::build(&["u", "w"], &[("a", "u", "u", 1, 2), ("b", "u", "u", 1, 2), ("f", "u", "w", 4, 5)])
                .unwrap();
        let p = AdmissiblePath::new(vec![end("a"), end("b")], end("f"));
        let (h, q, d) = normalize_prefix(&g, &p).unwrap();
        assert_eq!(d.len(), 1);
        assert!(matches!(d.0[0], Move::Slide { .. }));
        assert_eq!(h.index(&End::new("a", Side::To)).unwrap(), 4);
        assert_eq!(q.loops, vec![end("a"), end("a")]);
        assert!(is_admissible(&h, &q).unwrap());
    }

    #[test]
    fn normalize_is_identity_on_normal_paths() {
        let g = bs_5_30_unreduced();
        let p = AdmissiblePath::new(vec![end("e"), end("e")], end("f"));
        let (h, q, d) = normalize_prefix(&g, &p).unwrap();
        assert!(d.is_empty());
        assert_eq!((h, q), (g, p));
    }

    #[test]
    fn normalize_adjoins_copies_for_reversed_first_loop() {
        let g =
            Graph::build(&["u", "w"], &[("a", "u", "u", 1, 2), ("b", "u", "u", 1, 3), ("f", "u", "w", 2, 5)])
                .unwrap();
        let abar = End::new("a", Side::To);
        let p = AdmissiblePath::new(vec![end("a"), end("b"), end("a"), abar.clone(), end("a")], end("f"));
        assert!(is_admissible(&g, &p).unwrap());
        let (h, q, _) = normalize_prefix(&g, &p).unwrap();
        assert_eq!(q.loops.iter().filter(|x| **x == end("a")).count(), 5);
        assert!(q.loops.contains(&abar));
        assert!(is_admissible(&h, &q).unwrap());
    }

    #[test]
    fn align_examples() {
        let g = Graph::build(&["u", "w"], &[("e", "u", "u", 1, 4), ("f", "u", "w", 2, 5)]).unwrap();
        let p = AdmissiblePath::new(vec![end("e")], end("f"));
        let (h, q, d) = align_by_induction(&g, &p).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(h.index(&end("f")).unwrap(), 4);
        assert!(is_admissible(&h, &q).unwrap());

        let g = Graph::build(&["u", "w"], &[("e", "u", "u", 1, 4), ("f", "u", "w", 16, 5)]).unwrap();
        let p = AdmissiblePath::new(vec![end("e"), end("e")], end("f"));
        let (_, q, d) = align_by_induction(&g, &p).unwrap();
        assert!(d.is_empty());
        assert_eq!(q, p);

        let ebar = End::new("e", Side::To);
        let g = Graph::build(&["u", "w"], &[("e", "u", "u", 1, 4), ("f", "u", "w", 4, 5)]).unwrap();
        let p = AdmissiblePath::new(vec![end("e"), end("e"), ebar], end("f"));
        assert!(is_admissible(&g, &p).unwrap());
        let (_, q, _) = align_by_induction(&g, &p).unwrap();
        assert_eq!(q.loops, vec![end("e"), end("e")]);
    }

    #[test]
    fn full_reduce_examples() {
        let out = full_reduce(&bs_5_30_unreduced(), 16).unwrap();
        assert!(are_equivalent(&out.graph, &loop_graph(5, 30)));
        assert!(out.exhaustive);
        assert_eq!(out.deformation.replay(&bs_5_30_unreduced()).unwrap(), out.graph);
        assert!(out.deformation.iter().any(|m| matches!(m, Move::Induction { .. })));
        assert!(out.deformation.iter().any(|m| matches!(m, Move::Collapse { .. })));

        let out = full_reduce(&loop_graph(2, 3), 16).unwrap();
        assert_eq!(out.graph, loop_graph(2, 3));
        assert!(out.deformation.is_empty());

        let out = full_reduce(&bs_5_30_middle(), 16).unwrap();
        assert!(are_equivalent(&out.graph, &loop_graph(5, 30)));
    }

    #[test]
    fn essential_descent() {
        // the essential loop b (2,4) must first be made inessential
        let g =
            Graph::build(&["u", "w"], &[("a", "u", "u", 1, 2), ("b", "u", "u", 2, 4), ("f", "u", "w", 8, 3)])
                .unwrap();
        let p = find_admissible_path(&g, &end("f"), 16).unwrap().path().unwrap();
        let out = full_reduce(&g, 16).unwrap();
        assert_eq!(out.graph.edge_pair_count(), 2);
        assert_eq!(out.deformation.replay(&g).unwrap(), out.graph);
        assert!(p.loops.len() >= 2);
    }
}
