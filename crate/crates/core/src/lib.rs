//! Planted independent sets in semi-random `r`-uniform hypergraphs.
//!
//! The crate generates instances of the planted model, compiles the
//! relaxation whose vectors cluster the planted set, solves it with a
//! first-order splitting method, rounds the solution with Algorithm 1 and
//! checks the structural lemmas numerically against brute-force oracles.
//!
//! ```
//! use hypis::hypergraph::{generate_planted, ModelParams};
//! use hypis::rounding::{round, RoundingMode, RoundingOptions};
//! use hypis::sdp::planted_reference_solution;
//!
//! let inst = generate_planted(ModelParams::new(10, 5, 2, 1.0), 7)?;
//! let sol = planted_reference_solution(&inst)?;
//! let opts = RoundingOptions { planted: Some(inst.planted_set()), ..Default::default() };
//! let report = round(inst.hypergraph(), &sol, RoundingMode::ExactRecovery, &opts)?;
//! assert_eq!(report.planted_found, Some(true));
//! # Ok::<(), hypis::Error>(())
//! ```

pub mod analysis;
pub mod container;
pub mod error;
pub mod experiment;
pub mod hypergraph;
mod linalg;
pub mod oracle;
pub mod rounding;
pub mod sdp;
pub mod solver;
pub mod subset;
pub mod subset_index;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, ModelParams, PlantedInstance};
pub use sdp::{SdpProblem, SdpSolution};
pub use subset::VertexSet;
pub use subset_index::SubsetIndex;
