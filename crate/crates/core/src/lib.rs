// SPDX-License-Identifier: Apache-2.0

//! Shared-memory network analysis toolkit.
//!
//! The [`Graph`] adjacency array is the substrate for every algorithm in the
//! crate: generators, centrality measures, group centrality maximization,
//! community detection, edge sparsification and the profiling report.

pub mod centrality;
pub mod community;
pub mod error;
pub mod generators;
pub mod graph;
pub mod group;
pub mod io;
pub mod random;
pub mod sparsify;
pub mod stats;
pub mod traversal;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Graph, Node};
