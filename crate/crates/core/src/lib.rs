//! Kernel for multiplicative structures: labeled linear hypergraphs whose
//! links carry partition-based behaviors.
//!
//! The crate is organized bottom-up:
//!
//! - [`partitions`]: finite-set partitions, incidence graphs, orthogonality,
//!   and brute-force orthogonal sets;
//! - [`hypergraph`]: directed linear hypergraphs, undirected shadows,
//!   connectivity and acyclicity, disjoint union and interface composition;
//! - [`mstructure`]: link types, multiplicative structures, switchings, tests,
//!   behaviors, and the correctness / net / component / transitory predicates;
//! - [`expansion`]: gluing a component onto the inputs of another, both as a
//!   direct semantic check and as a polynomial characterization over behaviors;
//! - [`connectives`]: basic partitions and the `G(u,v)` family of generalized
//!   connectives, with decomposability probes over formula trees;
//! - [`program`]: methods-as-bipoles, compilation to components, and bounded
//!   execution by structure expansion;
//! - [`dsl`]: the textual program format;
//! - [`json`]: serialization of structures, behaviors and verdicts, plus DOT
//!   export.

pub mod connectives;
pub mod dsl;
pub mod expansion;
pub mod hypergraph;
pub mod json;
pub mod mstructure;
pub mod partitions;
pub mod program;

pub use hypergraph::{Hypergraph, Hyperedge, UndirectedHypergraph};
pub use mstructure::{LinkType, MStructure, Signature, Switching};
pub use partitions::{ElemId, Partition, PartitionSet};
