//! Generalized Baumslag-Solitar groups as edge-indexed graphs.
//!
//! The crate covers the elementary deformation moves, modular invariants,
//! full reduction, slide-move closures with an isomorphism test, and the
//! normalization of deformations into collapse-slide-expansion order.

pub mod arith;
pub mod canon;
pub mod error;
pub mod fixtures;
pub mod fullreduce;
pub mod graph;
pub mod lattice;
pub mod moduli;
pub mod moves;
pub mod rewrite;
pub mod simplex;
pub mod slidespace;

pub use arith::{ExponentVector, SignedRational};
pub use canon::{are_equivalent, canonical_form, CanonicalForm};
pub use error::{Error, Result};
pub use fullreduce::{
    align_by_induction, find_admissible_path, full_reduce, is_admissible, normalize_prefix, AdmissiblePath,
    FullReduction, PathSearch,
};
pub use graph::{parse_graph, EdgeId, EdgePair, End, Graph, Side, VertexId};
pub use moduli::{has_nontrivial_integral_modulus, integral_coset, modular_group, ModuliLattice};
pub use moves::{
    apply_collapse, apply_expansion, apply_induction, apply_slide, classify_elementary, reduce, Deformation,
    Direction, ElementaryClass, Move,
};

pub use rewrite::{normalize_cse, pattern_summary, rewrite_step, MoveSequenceRun};
pub use slidespace::{decide_isomorphic, slide_closure, slide_neighbors, ClosureGraph, IsoVerdict};
