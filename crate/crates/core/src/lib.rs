//! Orbit trees of bireversible Mealy automata.
//!
//! The crate computes the connected components of the powers of an
//! automaton, arranges them into the labelled orbit tree, derives the
//! orbital word graph from it, and uses both to study the order of
//! elements and the finiteness of the generated group.

pub mod automaton;
pub mod budget;
pub mod census;
pub mod error;
pub mod examples;
pub mod format;
pub mod orbit_tree;
pub mod orbits;
pub mod order;
pub mod word;
pub mod words;

pub use automaton::{are_isomorphic, MealyAutomaton};
pub use budget::Budgets;
pub use census::{Census, CensusConfig, CensusSummary, ItemReport};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use format::{parse_automaton, serialize};
pub use orbit_tree::{BlockProfile, HeavyBranch, NodeId, OrbitTree, ReductionEdge, TreeEdge};
pub use orbits::{
    child_components, component_of, components_at_level, connection_degree, dual_step, Component, ConnectionDegree,
    MemberSet,
};
pub use order::{
    actions_equal, classify_group, component_growth, element_order, find_infinite_order_element, is_trivial_action,
    semigroup_closure, verify_certificate, Certificate, CertificateKind, Classification, Closure, Growth,
    InfiniteSearch, OrderVerdict,
};
pub use word::{least_rotation, LetterWord, StateWord};
pub use words::{cyclically_orbital_equivalent, Equivalent, WindowGraph};
