//! Exact solvers for the fault-tolerant path problem.
//!
//! An instance asks for a cheapest edge set `K` in a directed or undirected
//! graph with *safe* and *vulnerable* edges such that after deleting any `k`
//! vulnerable edges of `K` an `s`-`t`-path survives. This crate provides
//!
//! * instance representation and shortest-path primitives ([`graph`]),
//! * an integral max-flow / min-cost-flow engine and the flow relaxation
//!   that defines the cost bound `C` ([`flow`]),
//! * an exact directed Steiner linkage solver built on forest patterns over
//!   the metric closure ([`dsl`]),
//! * the guess-based solvers, a brute-force oracle, verification, and
//!   witness decomposition ([`ftp`]),
//! * generators for instances derived from Biclique, Steiner Tree, and
//!   Hitting Set, plus a seeded random generator ([`reduce`]).
//!
//! The crate is `no_std` (with `alloc`); all solvers are pure functions over
//! immutable inputs and deterministic, so they can be driven from parallel
//! workers without changing results.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dsl;
pub mod flow;
pub mod ftp;
pub mod graph;
pub mod reduce;

pub use dsl::{DslInstance, DslSolution};
pub use flow::{FlowNetwork, FlowResult};
pub use ftp::{GuessMode, Parameters, Verdict};
pub use graph::{EdgeId, EdgeKind, EdgeSet, ExtCost, FtpInstance, VertexId};
