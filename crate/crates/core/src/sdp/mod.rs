//! The relaxation: compilation, reference solutions, verification, export.

mod problem;
mod sdpa;
mod solution;
mod verify;

pub use problem::{build_problem, build_problem_with, BuildOptions, Pin, Row, SdpProblem, Term};
pub use sdpa::{expected_counts, export_sdpa, read_sdpa_counts, SdpaCounts};
pub use solution::{
    mass_split, orthonormal_solution, planted_reference_solution, MassSplit, ProgressRow,
    SdpSolution, SolveMeta,
};
pub use verify::{min_eigenvalue_on_support, verify_feasibility, FamilyViolation, ViolationReport};
