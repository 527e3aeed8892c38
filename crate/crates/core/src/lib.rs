//! Sublinear-time testers for Max Cut, Max E2Lin(q) and Unique Label Cover on
//! expander graphs in the adjacency-list oracle model, together with the exact
//! (exponential- or polynomial-time) desk-scale oracles used to certify them.
//!
//! The crate is organised around a query-counted oracle interface
//! ([`oracle::QueryGraph`]): every tester interacts with a graph only through
//! degree queries, i-th-neighbor queries and degree-weighted vertex sampling,
//! and the oracle keeps an exact tally of those calls. Everything else
//! (spectra, conductance profiles, brute-force optima) lives in [`exact`] and
//! is used as ground truth in tests and the `verify-lemmas` experiments.

pub mod cluster;
pub mod corpus;
pub mod dist;
pub mod e2lin;
pub mod error;
pub mod exact;
pub mod extend;
pub mod gen;
pub mod graph;
pub mod maxcut;
pub mod oracle;
pub mod rng;
pub mod ulc;
pub mod verdict;
pub mod walks;

pub use error::Error;
pub use graph::{E2LinInstance, Graph, Instance, UlcInstance};
pub use oracle::{GraphOracle, QueryGraph};
pub use verdict::{Decision, Verdict};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
