//! Sequential social learning with random arrival order on a fixed network.
//!
//! Agents arrive in uniformly random order, each sees a private binary signal
//! and the actions of friends who arrived earlier, and picks an action. This
//! crate builds the networks of interest (cliques, celebrity graphs, random
//! regular graphs, LPS Ramanujan expanders), simulates the arrival process
//! under several decision rules, computes exact Bayesian learning quality on
//! small graphs, certifies the local learning requirement, and evaluates the
//! closed-form learning-quality bounds against simulation.

pub mod bounds;
pub mod decision;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod llr;
pub mod netgen;
pub mod oracle;
pub mod realization;
pub mod rng;
pub mod spectral;

pub use decision::{DecisionRule, InformationSet, Precision, WorldState};
pub use error::{Error, Result};
pub use graph::{Graph, Length, Subgraph, VertexSet};
pub use llr::LlrCertificate;
pub use netgen::{GenRecipe, LpsParams, Part};
pub use realization::{Realization, RealizedView};
pub use spectral::SpectralReport;
