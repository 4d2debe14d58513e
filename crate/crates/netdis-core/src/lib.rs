//! Network disintegration toolkit.
//!
//! Finds small node sets whose removal fragments an undirected network.
//! The crate provides the graph substrate and percolation criterion,
//! seeded generators for BA/ER/WS networks plus embedded benchmarks,
//! classical and neighborhood-information centralities, four attack
//! strategies (NIPA, OAS, HDF, HBF) with an exhaustive oracle, robustness
//! metrics, and a configuration-driven experiment runner.

pub mod centrality;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod netgen;
pub mod rng;
pub mod strategies;

pub use error::{Error, Result};
pub use graph::{Graph, NodeMask};
pub use strategies::AttackSolution;
