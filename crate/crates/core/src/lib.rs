//! Circle patterns on closed surfaces.
//!
//! A pattern assigns one circle to every face of a cell-decomposed closed
//! surface so that circles sharing an edge intersect at that edge's
//! prescribed angle and each face's circle closes up with its prescribed
//! cone angle. This crate decides whether a prescription is realizable,
//! and — when it is — computes the radii in Euclidean (unique up to scale)
//! or hyperbolic (unique) geometry by two independent numerical routes,
//! cross-checked through a concave energy whose critical points are
//! exactly the solutions.

pub mod complex;
pub mod energy;
pub mod error;
pub mod feasibility;
pub mod fixtures;
mod flow;
pub mod format;
pub mod layout;
pub mod lobachevsky;
pub mod problem;
mod simplex;
pub mod solver;
pub mod triangle;

pub use complex::{CellComplex, Diagnostic, Edge, Face, Severity};
pub use error::{Error, Result};
pub use feasibility::{
    DualCertificate, FeasibilityReport, FeasibilityStatus, MaxMarginStructure, SubsetCertificate,
};
pub use problem::{
    AngleStructure, ForwardMap, Geometry, PatternProblem, RadiusAssignment, MAX_HYPERBOLIC_RADIUS,
};
pub use solver::{EuclideanGauge, SolveMethod, SolveOptions, SolveReport};
pub use triangle::{ApexTriangle, Degeneracy};
