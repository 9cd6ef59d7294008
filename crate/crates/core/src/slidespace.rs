//! Closures of reduced graphs under slide moves, and the isomorphism test
//! built on them.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::moduli::{has_nontrivial_integral_modulus, modular_group};
use crate::moves::{apply_slide, classify_elementary, reduce, ElementaryClass, Move};

pub const DEFAULT_MAX_STATES: usize = 100_000;

/// Every single slide from `g`, one representative per resulting
/// canonical form, in the order the slides were found.
pub fn slide_neighbors(g: &Graph) -> Result<Vec<(Move, Graph)>> {
    if !g.is_reduced() {
        return Err(Error::NotReduced);
    }
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for moving in g.ends() {
        let origin = g.origin(&moving)?;
        let i = g.index(&moving)?;
        for over in g.ends_at(origin) {
            if over.edge == moving.edge || i % g.index(&over)? != 0 {
                continue;
            }
            let h = apply_slide(g, &moving, &over)?;
            if seen.insert(canonical_form(&h), ()).is_none() {
                out.push((Move::Slide { moving_end: moving.clone(), over }, h));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub from: CanonicalForm,
    /// Slide expressed on the representative graph of `from`.
    pub slide: Move,
    pub to: CanonicalForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureGraph {
    pub start: CanonicalForm,
    /// Canonical form to the first graph found with that form.
    pub states: BTreeMap<CanonicalForm, Graph>,
    pub transitions: Vec<Transition>,
}

impl ClosureGraph {
    pub fn contains(&self, g: &Graph) -> bool {
        self.states.contains_key(&canonical_form(g))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Transitions whose endpoints differ.
    pub fn proper_transitions(&self) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(|t| t.from != t.to)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "start": self.start,
            "states": self.states.iter().map(|(k, g)| json!({"form": k, "graph": g.to_json_value()})).collect::<Vec<_>>(),
            "transitions": self.transitions,
        })
    }

    pub fn to_dot(&self) -> String {
        let names: BTreeMap<&CanonicalForm, usize> =
            self.states.keys().enumerate().map(|(k, f)| (f, k)).collect();
        let mut s = String::from("digraph closure {\n");
        for (f, k) in &names {
            let shape = if **f == self.start { "doublecircle" } else { "circle" };
            writeln!(s, "  s{k} [shape={shape}, label=\"{f}\"];").unwrap();
        }
        for t in &self.transitions {
            writeln!(s, "  s{} -> s{} [label=\"{}\"];", names[&t.from], names[&t.to], t.slide).unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// Breadth-first closure of a reduced graph under slides.
pub fn slide_closure(g: &Graph, max_states: usize) -> Result<ClosureGraph> {
    if !g.is_reduced() {
        return Err(Error::NotReduced);
    }
    if has_nontrivial_integral_modulus(&modular_group(g)) {
        return Err(Error::IntegralModuli);
    }
    let start = canonical_form(g);
    let mut states = BTreeMap::from([(start.clone(), g.clone())]);
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([(start.clone(), g.clone())]);
    while let Some((form, cur)) = queue.pop_front() {
        for (slide, next) in slide_neighbors(&cur)? {
            if !next.is_reduced() {
                return Err(Error::CollapsibleStateReached);
            }
            let to = canonical_form(&next);
            if !states.contains_key(&to) {
                if states.len() >= max_states {
                    return Err(Error::StateBudgetExceeded(max_states));
                }
                states.insert(to.clone(), next.clone());
                queue.push_back((to.clone(), next));
            }
            transitions.push(Transition { from: form.clone(), slide, to });
        }
    }
    Ok(ClosureGraph { start, states, transitions })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IsoVerdict {
    Isomorphic,
    NotIsomorphic,
}

pub fn decide_isomorphic(a: &Graph, b: &Graph) -> Result<IsoVerdict> {
    decide_isomorphic_with_budget(a, b, DEFAULT_MAX_STATES)
}

pub fn decide_isomorphic_with_budget(a: &Graph, b: &Graph, max_states: usize) -> Result<IsoVerdict> {
    let verdict = |same: bool| if same { IsoVerdict::Isomorphic } else { IsoVerdict::NotIsomorphic };
    let (ra, _) = reduce(a);
    let (rb, _) = reduce(b);
    let ca = classify_elementary(&ra)?;
    let cb = classify_elementary(&rb)?;
    if ca != ElementaryClass::NonElementary || cb != ElementaryClass::NonElementary {
        return Ok(verdict(ca == cb));
    }
    let la = modular_group(&ra);
    if has_nontrivial_integral_modulus(&la) {
        return Err(Error::IntegralModuli);
    }
    let lb = modular_group(&rb);
    if !la.same_unsigned(&lb) || !la.same_signed(&lb) {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    if ra.vertex_count() != rb.vertex_count() || ra.edge_pair_count() != rb.edge_pair_count() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    let closure = slide_closure(&ra, max_states)?;
    Ok(verdict(closure.contains(&rb)))
}
