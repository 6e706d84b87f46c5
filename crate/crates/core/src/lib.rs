//! Solver for bipolar fuzzy relational equations
//! `A⁺ φ x ∨ A⁻ φ (1 − x) = b` over continuous t-norms.
//!
//! The feasible region is computed exactly as a finite union of boxes, and
//! objectives that are monotone in each coordinate are minimized globally
//! over it.

pub mod eigen;
pub mod error;
pub mod interval;
pub mod optimize;
pub mod oracle;
pub mod resolution;
pub mod simplify;
pub mod system;
pub mod tnorm;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalUnion, EPS};
pub use optimize::{global_optimum, objective_catalog, Candidate, MonotoneObjective, ObjectiveParams};
pub use resolution::{feasible_region, FeasibleBox, Resolution, ResolveOptions};
pub use simplify::{simplify_to_fixpoint, ReductionState, ReductionStep, Rule};
pub use system::{Analysis, BipolarSystem, CellSets, Verdict};
pub use tnorm::{ScalarEqSolution, TNorm, TNormKind};
