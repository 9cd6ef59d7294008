//! Edge-indexed graphs.
//!
//! A graph of infinite cyclic groups is encoded by a finite connected graph
//! together with a non-zero integer on every oriented edge: the inclusion of
//! the edge group into the vertex group at the initial vertex is
//! multiplication by that integer.
//!
//! Edges are stored as pairs. An oriented edge is named by an [`End`]: the
//! pair id plus the [`Side`] at which the oriented edge starts. Its index is
//! the integer stored at that side, and its reverse is the other side of the
//! same pair. A loop therefore has two distinct ends at the same vertex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl VertexId {
    pub fn new(s: impl Into<String>) -> Self {
        VertexId(s.into())
    }
}

impl EdgeId {
    pub fn new(s: impl Into<String>) -> Self {
        EdgeId(s.into())
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    From,
    To,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::From => Side::To,
            Side::To => Side::From,
        }
    }
}

/// An oriented edge, identified by the side of its pair where it starts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct End {
    pub edge: EdgeId,
    pub side: Side,
}

impl End {
    pub fn new(edge: impl Into<String>, side: Side) -> Self {
        End { edge: EdgeId(edge.into()), side }
    }

    pub fn from_side(edge: &EdgeId) -> Self {
        End { edge: edge.clone(), side: Side::From }
    }

    pub fn reverse(&self) -> End {
        End { edge: self.edge.clone(), side: self.side.flip() }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::From => write!(f, "{}", self.edge),
            Side::To => write!(f, "~{}", self.edge),
        }
    }
}

/// One edge pair: `from`/`to` are the vertices at the two sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePair {
    pub from: VertexId,
    pub to: VertexId,
    pub idx_from: i64,
    pub idx_to: i64,
}

impl EdgePair {
    pub fn vertex(&self, side: Side) -> &VertexId {
        match side {
            Side::From => &self.from,
            Side::To => &self.to,
        }
    }

    pub fn index(&self, side: Side) -> i64 {
        match side {
            Side::From => self.idx_from,
            Side::To => self.idx_to,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    fn set_vertex(&mut self, side: Side, v: VertexId) {
        match side {
            Side::From => self.from = v,
            Side::To => self.to = v,
        }
    }

    fn set_index(&mut self, side: Side, i: i64) {
        match side {
            Side::From => self.idx_from = i,
            Side::To => self.idx_to = i,
        }
    }
}

/// A finite connected edge-indexed graph. Immutable through the public API;
/// every move produces a new value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, EdgePair>,
}

impl Graph {
    /// Builds and validates a graph.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, EdgePair)>,
    ) -> Result<Graph> {
        let mut vs = BTreeSet::new();
        for v in vertices {
            if !vs.insert(v.clone()) {
                return Err(Error::MalformedInput(format!("duplicate vertex {v}")));
            }
        }
        let mut es = BTreeMap::new();
        for (id, pair) in edges {
            if es.contains_key(&id) {
                return Err(Error::BadInvolution(format!("duplicate edge id {id}")));
            }
            es.insert(id, pair);
        }
        let g = Graph { vertices: vs, edges: es };
        g.validate()?;
        Ok(g)
    }

    /// Convenience constructor used heavily in tests and fixtures:
    /// `(id, from, to, idx_from, idx_to)` tuples.
    pub fn build(vertices: &[&str], edges: &[(&str, &str, &str, i64, i64)]) -> Result<Graph> {
        Graph::new(
            vertices.iter().map(|v| VertexId::new(*v)),
            edges.iter().map(|&(id, from, to, a, b)| {
                (
                    EdgeId::new(id),
                    EdgePair { from: VertexId::new(from), to: VertexId::new(to), idx_from: a, idx_to: b },
                )
            }),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::MalformedInput("graph has no vertices".into()));
        }
        for (id, e) in &self.edges {
            for v in [&e.from, &e.to] {
                if !self.vertices.contains(v) {
                    return Err(Error::BadInvolution(format!("edge {id} attaches to unknown vertex {v}")));
                }
            }
            if e.idx_from == 0 || e.idx_to == 0 {
                return Err(Error::ZeroIndex(id.0.clone()));
            }
        }
        let seen = self.reachable(self.vertices.iter().next().unwrap());
        if seen.len() != self.vertices.len() {
            return Err(Error::Disconnected(self.vertices.len() - seen.len()));
        }
        Ok(())
    }

    fn reachable(&self, start: &VertexId) -> BTreeSet<VertexId> {
        let mut adj: BTreeMap<&VertexId, Vec<&VertexId>> = BTreeMap::new();
        for e in self.edges.values() {
            adj.entry(&e.from).or_default().push(&e.to);
            adj.entry(&e.to).or_default().push(&e.from);
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start.clone());
        while let Some(v) = queue.pop_front() {
            for w in adj.get(v).into_iter().flatten() {
                if seen.insert((*w).clone()) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &EdgePair)> {
        self.edges.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_pair_count(&self) -> usize {
        self.edges.len()
    }

    /// First Betti number of the underlying graph.
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn has_edge(&self, e: &EdgeId) -> bool {
        self.edges.contains_key(e)
    }

    pub fn pair(&self, e: &EdgeId) -> Result<&EdgePair> {
        self.edges.get(e).ok_or_else(|| Error::UnknownEdge(e.0.clone()))
    }

    /// Initial vertex of the oriented edge.
    pub fn origin(&self, end: &End) -> Result<&VertexId> {
        Ok(self.pair(&end.edge)?.vertex(end.side))
    }

    /// Terminal vertex of the oriented edge.
    pub fn terminus(&self, end: &End) -> Result<&VertexId> {
        Ok(self.pair(&end.edge)?.vertex(end.side.flip()))
    }

    /// `i(e)`.
    pub fn index(&self, end: &End) -> Result<i64> {
        Ok(self.pair(&end.edge)?.index(end.side))
    }

    pub fn is_loop(&self, edge: &EdgeId) -> Result<bool> {
        Ok(self.pair(edge)?.is_loop())
    }

    /// All oriented edges, ordered by (edge id, side).
    pub fn ends(&self) -> impl Iterator<Item = End> + '_ {
        self.edges
            .keys()
            .flat_map(|id| [Side::From, Side::To].into_iter().map(move |side| End { edge: id.clone(), side }))
    }

    /// Oriented edges with initial vertex `v`, ordered by (edge id, side).
    pub fn ends_at<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = End> + 'a {
        self.ends().filter(move |h| self.edges[&h.edge].vertex(h.side) == v)
    }

    /// `(oriented edge, index)` pairs at `v`.
    pub fn indices_at(&self, v: &VertexId) -> Vec<(End, i64)> {
        self.ends_at(v)
            .map(|h| {
                let i = self.edges[&h.edge].index(h.side);
                (h, i)
            })
            .collect()
    }

    /// A graph admits a collapse exactly when some non-loop end has index +-1.
    pub fn is_reduced(&self) -> bool {
        self.edges.values().all(|e| e.is_loop() || (e.idx_from.abs() != 1 && e.idx_to.abs() != 1))
    }

    pub fn fresh_vertex_id(&self, stem: &str) -> VertexId {
        (0..).map(|k| VertexId(format!("{stem}{k}"))).find(|v| !self.vertices.contains(v)).unwrap()
    }

    pub fn fresh_edge_id(&self, stem: &str) -> EdgeId {
        (0..).map(|k| EdgeId(format!("{stem}{k}"))).find(|e| !self.edges.contains_key(e)).unwrap()
    }

    // ---- crate-internal mutation helpers used by the moves ----

    pub(crate) fn set_index(&mut self, end: &End, i: i64) {
        self.edges.get_mut(&end.edge).expect("known edge").set_index(end.side, i);
    }

    pub(crate) fn set_origin(&mut self, end: &End, v: VertexId) {
        self.edges.get_mut(&end.edge).expect("known edge").set_vertex(end.side, v);
    }

    pub(crate) fn remove_edge(&mut self, e: &EdgeId) -> Option<EdgePair> {
        self.edges.remove(e)
    }

    pub(crate) fn insert_edge(&mut self, id: EdgeId, pair: EdgePair) {
        self.edges.insert(id, pair);
    }

    pub(crate) fn remove_vertex(&mut self, v: &VertexId) {
        self.vertices.remove(v);
    }

    pub(crate) fn insert_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    // ---- cycles ----

    /// One oriented cycle per edge pair outside a breadth-first spanning tree
    /// rooted at the least vertex. Each cycle starts with the non-tree edge in
    /// its `from -> to` orientation and returns along the tree.
    pub fn fundamental_cycles(&self) -> Vec<Vec<End>> {
        self.fundamental_cycles_from(self.vertices.iter().next().expect("non-empty"))
    }

    /// Same as [`Graph::fundamental_cycles`] with an explicit root.
    pub fn fundamental_cycles_from(&self, root: &VertexId) -> Vec<Vec<End>> {
        // parent[v] = tree end pointing from the parent into v
        let mut parent: BTreeMap<VertexId, End> = BTreeMap::new();
        let mut depth: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut tree: BTreeSet<EdgeId> = BTreeSet::new();
        depth.insert(root.clone(), 0);
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(x) = queue.pop_front() {
            let d = depth[&x];
            for h in self.ends_at(&x).collect::<Vec<_>>() {
                let y = self.edges[&h.edge].vertex(h.side.flip()).clone();
                if !depth.contains_key(&y) {
                    depth.insert(y.clone(), d + 1);
                    tree.insert(h.edge.clone());
                    parent.insert(y.clone(), h);
                    queue.push_back(y);
                }
            }
        }

        let mut cycles = Vec::new();
        for (id, pair) in &self.edges {
            if tree.contains(id) {
                continue;
            }
            let mut cycle = vec![End::from_side(id)];
            // walk from `to` back to `from` through the tree
            let (mut a, mut b) = (pair.to.clone(), pair.from.clone());
            let mut down = Vec::new();
            while a != b {
                if depth[&a] >= depth[&b] {
                    let p = &parent[&a];
                    cycle.push(p.reverse());
                    a = self.edges[&p.edge].vertex(p.side).clone();
                } else {
                    let p = &parent[&b];
                    down.push(p.clone());
                    b = self.edges[&p.edge].vertex(p.side).clone();
                }
            }
            cycle.extend(down.into_iter().rev());
            cycles.push(cycle);
        }
        cycles
    }

    // ---- serialization ----

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.iter().map(|v| v.0.clone()).collect(),
            edges: self
                .edges
                .iter()
                .map(|(id, e)| EdgeJson {
                    id: id.0.clone(),
                    from: e.from.0.clone(),
                    to: e.to.0.clone(),
                    idx_from: e.idx_from,
                    idx_to: e.idx_to,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    /// Graphviz rendering; each edge pair is labelled `idx_from|idx_to`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gbs {\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{}\";\n", v.0));
        }
        for (id, e) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [id=\"{}\", label=\"{}|{}\"];\n",
                e.from.0, e.to.0, id.0, e.idx_from, e.idx_to
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Wire format of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub from: String,
    pub to: String,
    pub idx_from: i64,
    pub idx_to: i64,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        Graph::new(
            j.vertices.into_iter().map(VertexId),
            j.edges.into_iter().map(|e| {
                (
                    EdgeId(e.id),
                    EdgePair {
                        from: VertexId(e.from),
                        to: VertexId(e.to),
                        idx_from: e.idx_from,
                        idx_to: e.idx_to,
                    },
                )
            }),
        )
    }
}

/// Parses and validates the JSON graph format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
    Graph::try_from(j)
}
