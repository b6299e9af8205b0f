//! Diagram combinatorics of the stratification.

pub mod complex;
pub mod divisor;
pub mod exhaustive;
pub mod model;
pub mod perm;
pub mod strata;
pub mod types;

pub use complex::{
    related_pairs, related_triangle_families, Component, Edge, Face, FaceKind, FaceLabel,
    RelatedPair, SharpEdge, TriangleCopy, TriangleFamily,
};
pub use divisor::{Divisor, DivisorKind, DivisorSet};
pub use exhaustive::{compare_with_strata, exhaustive_rule_enumeration, RuleComparison};
pub use model::{diagram_of, sharp_marks, Diagram, Violation};
pub use perm::Perm;
pub use strata::{
    check_poset, clique_names, cliques, compatible, decompose, enumerate_strata, orbit_sizes, poset_leq, strata,
    PosetReport, StrataError, StratumRecord,
};
pub use types::{ShiftMask, SplitType, StratumType, TypeRow};
