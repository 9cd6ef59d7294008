//! Elementary moves in index form, greedy reduction and the elementary
//! reduced graphs.
//!
//! Index arithmetic always uses signed ratios such as `i(ē)/i(e)`, so the sign
//! data needed by the signed modular homomorphism survives every move.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgePair, End, Graph, Side, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Multiply,
    Divide,
}

fn one() -> i64 {
    1
}

fn to_side() -> Side {
    Side::To
}

/// One replayable elementary move.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Move {
    /// Collapse the non-loop edge whose end `edge` carries index +-1; the
    /// origin of `edge` is absorbed into its terminus.
    Collapse { edge: End },
    /// Split `vertex`: the ends in `moved_ends` are re-rooted at `new_vertex`
    /// with their indices divided by `n`, and `new_edge` joins the two with
    /// index `n * sign` at `vertex` and `sign` at `new_vertex`. `new_side` is
    /// the side of `new_edge` that lies at `new_vertex`.
    Expansion {
        vertex: VertexId,
        moved_ends: Vec<End>,
        n: i64,
        #[serde(default = "one")]
        sign: i64,
        new_vertex: VertexId,
        new_edge: EdgeId,
        #[serde(default = "to_side")]
        new_side: Side,
    },
    /// Slide `moving_end` across `over`; both must start at the same vertex.
    Slide { moving_end: End, over: End },
    /// Expansion and collapse along the ascending loop `loop`: every other
    /// end at its vertex is multiplied or divided by `factor`.
    Induction {
        #[serde(rename = "loop")]
        loop_end: End,
        factor: i64,
        direction: Direction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Collapse,
    Expansion,
    Slide,
    Induction,
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Collapse { .. } => MoveKind::Collapse,
            Move::Expansion { .. } => MoveKind::Expansion,
            Move::Slide { .. } => MoveKind::Slide,
            Move::Induction { .. } => MoveKind::Induction,
        }
    }

    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        match self {
            Move::Collapse { edge } => apply_collapse(g, edge),
            Move::Expansion { vertex, moved_ends, n, sign, new_vertex, new_edge, new_side } => {
                expand(g, vertex, moved_ends, *n, *sign, new_vertex, new_edge, *new_side)
            }
            Move::Slide { moving_end, over } => apply_slide(g, moving_end, over),
            Move::Induction { loop_end, factor, direction } => {
                apply_induction(g, loop_end, *factor, *direction)
            }
        }
    }

    /// The move undoing `self`, expressed against the graph `before` that
    /// `self` is applied to. Replaying `self` then the inverse returns
    /// exactly `before`.
    pub fn inverse(&self, before: &Graph) -> Result<Move> {
        Ok(match self {
            Move::Collapse { edge } => {
                let dying = before.origin(edge)?.clone();
                let keep = before.terminus(edge)?.clone();
                let i = before.index(edge)?;
                let j = before.index(&edge.reverse())?;
                Move::Expansion {
                    vertex: keep,
                    moved_ends: before.ends_at(&dying).filter(|h| h != edge).collect(),
                    n: checked_mul(i, j)?,
                    sign: i,
                    new_vertex: dying,
                    new_edge: edge.edge.clone(),
                    new_side: edge.side,
                }
            }
            Move::Expansion { new_edge, new_side, .. } => {
                Move::Collapse { edge: End { edge: new_edge.clone(), side: *new_side } }
            }
            Move::Slide { moving_end, over } => {
                Move::Slide { moving_end: moving_end.clone(), over: over.reverse() }
            }
            Move::Induction { loop_end, factor, direction } => Move::Induction {
                loop_end: loop_end.clone(),
                factor: *factor,
                direction: match direction {
                    Direction::Multiply => Direction::Divide,
                    Direction::Divide => Direction::Multiply,
                },
            },
        })
    }

    /// Vertex ids mentioned by the move, including any it creates.
    pub fn vertex_ids(&self) -> BTreeSet<VertexId> {
        match self {
            Move::Expansion { vertex, new_vertex, .. } => [vertex.clone(), new_vertex.clone()].into(),
            _ => BTreeSet::new(),
        }
    }

    /// Edge ids mentioned by the move, including any it creates.
    pub fn edge_ids(&self) -> BTreeSet<EdgeId> {
        match self {
            Move::Collapse { edge } => [edge.edge.clone()].into(),
            Move::Expansion { moved_ends, new_edge, .. } => {
                moved_ends.iter().map(|h| h.edge.clone()).chain(std::iter::once(new_edge.clone())).collect()
            }
            Move::Slide { moving_end, over } => [moving_end.edge.clone(), over.edge.clone()].into(),
            Move::Induction { loop_end, .. } => [loop_end.edge.clone()].into(),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Collapse { edge } => write!(f, "C({edge})"),
            Move::Expansion { vertex, moved_ends, n, new_vertex, .. } => {
                write!(f, "E({vertex}->{new_vertex}, n={n}, [")?;
                for (k, h) in moved_ends.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{h}")?;
                }
                f.write_str("])")
            }
            Move::Slide { moving_end, over } => write!(f, "S({moving_end} over {over})"),
            Move::Induction { loop_end, factor, direction } => {
                let op = if *direction == Direction::Multiply { '*' } else { '/' };
                write!(f, "I({loop_end}, {op}{factor})")
            }
        }
    }
}

/// A finite sequence of moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Deformation(pub Vec<Move>);

impl Deformation {
    pub fn new() -> Self {
        Deformation(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn push(&mut self, m: Move) {
        self.0.push(m);
    }

    pub fn extend(&mut self, other: Deformation) {
        self.0.extend(other.0);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Move> {
        self.0.iter()
    }

    /// Applies every move in order.
    pub fn replay(&self, start: &Graph) -> Result<Graph> {
        self.0.iter().try_fold(start.clone(), |g, m| m.apply(&g))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Deformation> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }
}

impl FromIterator<Move> for Deformation {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        Deformation(iter.into_iter().collect())
    }
}

pub(crate) fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn require_end(g: &Graph, h: &End) -> Result<()> {
    g.pair(&h.edge).map(|_| ())
}

/// Collapses the non-loop edge `e`, whose index must be +-1. Its origin is
/// merged into its terminus and every other end there is multiplied by
/// `i(ē)/i(e)`.
pub fn apply_collapse(g: &Graph, e: &End) -> Result<Graph> {
    let pair = g.pair(&e.edge)?;
    if pair.is_loop() {
        return Err(Error::LoopCollapse(e.to_string()));
    }
    let i = pair.index(e.side);
    if i.abs() != 1 {
        return Err(Error::NotCollapsible(e.to_string()));
    }
    let factor = pair.index(e.side.flip()) * i;
    let dying = pair.vertex(e.side).clone();
    let keep = pair.vertex(e.side.flip()).clone();

    let mut out = g.clone();
    out.remove_edge(&e.edge);
    for h in g.ends_at(&dying).filter(|h| h.edge != e.edge) {
        let idx = checked_mul(g.index(&h)?, factor)?;
        out.set_index(&h, idx);
        out.set_origin(&h, keep.clone());
    }
    out.remove_vertex(&dying);
    Ok(out)
}

/// Expansion with freshly generated vertex and edge ids.
pub fn apply_expansion(
    g: &Graph,
    v: &VertexId,
    moved_ends: &[End],
    n: i64,
    sign: i64,
) -> Result<(Graph, Move)> {
    let m = Move::Expansion {
        vertex: v.clone(),
        moved_ends: moved_ends.to_vec(),
        n,
        sign,
        new_vertex: g.fresh_vertex_id("x"),
        new_edge: g.fresh_edge_id("c"),
        new_side: Side::To,
    };
    Ok((m.apply(g)?, m))
}

#[allow(clippy::too_many_arguments)]
fn expand(
    g: &Graph,
    v: &VertexId,
    moved_ends: &[End],
    n: i64,
    sign: i64,
    new_vertex: &VertexId,
    new_edge: &EdgeId,
    new_side: Side,
) -> Result<Graph> {
    if !g.has_vertex(v) {
        return Err(Error::EmptyVertex(v.0.clone()));
    }
    if n == 0 {
        return Err(Error::ZeroIndex(new_edge.0.clone()));
    }
    if sign.abs() != 1 {
        return Err(Error::MalformedInput(format!("expansion sign must be +-1, got {sign}")));
    }
    if g.has_vertex(new_vertex) {
        return Err(Error::DuplicateId(new_vertex.0.clone()));
    }
    if g.has_edge(new_edge) {
        return Err(Error::DuplicateId(new_edge.0.clone()));
    }
    let mut seen = BTreeSet::new();
    for h in moved_ends {
        require_end(g, h)?;
        if !seen.insert(h) {
            return Err(Error::MalformedInput(format!("end {h} listed twice")));
        }
        if g.origin(h)? != v {
            return Err(Error::NotCoincident(h.to_string()));
        }
        if g.index(h)? % n != 0 {
            return Err(Error::IndivisibleEnd { end: h.to_string(), n });
        }
    }

    let mut out = g.clone();
    out.insert_vertex(new_vertex.clone());
    for h in moved_ends {
        out.set_index(h, g.index(h)? / n);
        out.set_origin(h, new_vertex.clone());
    }
    let at_old = checked_mul(n, sign)?;
    let pair = match new_side {
        Side::To => EdgePair { from: v.clone(), to: new_vertex.clone(), idx_from: at_old, idx_to: sign },
        Side::From => EdgePair { from: new_vertex.clone(), to: v.clone(), idx_from: sign, idx_to: at_old },
    };
    out.insert_edge(new_edge.clone(), pair);
    Ok(out)
}

/// Slides `moving` across `over`. Requires a common origin and
/// `i(over) | i(moving)`; the end lands at the terminus of `over` with index
/// `i(moving) * i(over̄) / i(over)`.
pub fn apply_slide(g: &Graph, moving: &End, over: &End) -> Result<Graph> {
    require_end(g, moving)?;
    require_end(g, over)?;
    if moving.edge == over.edge {
        return Err(Error::SelfSlide(moving.edge.0.clone()));
    }
    if g.origin(moving)? != g.origin(over)? {
        return Err(Error::NotCoincident(moving.to_string()));
    }
    let i = g.index(moving)?;
    let d = g.index(over)?;
    if i % d != 0 {
        return Err(Error::NotDivisible { end: moving.to_string(), over: over.to_string() });
    }
    let new_index = checked_mul(i / d, g.index(&over.reverse())?)?;
    let mut out = g.clone();
    out.set_index(moving, new_index);
    out.set_origin(moving, g.terminus(over)?.clone());
    Ok(out)
}

/// Induction along the ascending loop `lp` (`i(lp) = ±1`): every end at its
/// vertex other than the loop's own two ends is multiplied or divided by
/// `factor`, which must divide `i(l̄p)`.
pub fn apply_induction(g: &Graph, lp: &End, factor: i64, direction: Direction) -> Result<Graph> {
    let pair = g.pair(&lp.edge)?;
    if !pair.is_loop() || pair.index(lp.side).abs() != 1 {
        return Err(Error::NotAscendingLoop(lp.to_string()));
    }
    let other = pair.index(lp.side.flip());
    if factor == 0 || other % factor != 0 {
        return Err(Error::FactorNotDividing { factor, index: other });
    }
    let v = pair.from.clone();
    let mut out = g.clone();
    for h in g.ends_at(&v).filter(|h| h.edge != lp.edge) {
        let i = g.index(&h)?;
        let new = match direction {
            Direction::Multiply => checked_mul(i, factor)?,
            Direction::Divide => {
                if i % factor != 0 {
                    return Err(Error::EndNotDivisible { end: h.to_string(), factor });
                }
                i / factor
            }
        };
        out.set_index(&h, new);
    }
    Ok(out)
}

/// Collapses the least collapsible edge end until none remains.
pub fn reduce(g: &Graph) -> (Graph, Deformation) {
    let mut cur = g.clone();
    let mut moves = Deformation::new();
    loop {
        let next = cur.ends().find(|h| {
            let p = cur.pair(&h.edge).unwrap();
            !p.is_loop() && p.index(h.side).abs() == 1
        });
        let Some(h) = next else { break };
        let m = Move::Collapse { edge: h };
        cur = m.apply(&cur).expect("collapse of a +-1 non-loop end is always legal");
        moves.push(m);
    }
    (cur, moves)
}

/// The four reduced graphs whose group has a line or point fixed by the
/// action, and everything else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementaryClass {
    Z,
    ZxZ,
    Klein,
    NonElementary,
}

pub fn classify_elementary(g: &Graph) -> Result<ElementaryClass> {
    if !g.is_reduced() {
        return Err(Error::NotReduced);
    }
    let pairs: Vec<&EdgePair> = g.edges().map(|(_, p)| p).collect();
    Ok(match (g.vertex_count(), pairs.as_slice()) {
        (1, []) => ElementaryClass::Z,
        (1, [p]) if p.idx_from.abs() == 1 && p.idx_to.abs() == 1 => {
            if p.idx_from == p.idx_to {
                ElementaryClass::ZxZ
            } else {
                ElementaryClass::Klein
            }
        }
        (2, [p]) if p.idx_from.abs() == 2 && p.idx_to.abs() == 2 => ElementaryClass::Klein,
        _ => ElementaryClass::NonElementary,
    })
}
