//! Exact arithmetic for plumbings of rational curves.
//!
//! A configuration is a set of disjoint linear chains of smooth rational
//! curves `C_ij` with self-intersections `-b_ij` together with the degrees
//! `a_ij = H.C_ij` of an ample divisor `H`. From that data the crate
//!
//! * validates the configuration (negative definiteness, Hirzebruch–Jung
//!   invariants, fundamental cycles, rationality),
//! * solves for the primitive positive divisor `L = x0 H + E` orthogonal to
//!   every curve of the chains,
//! * peels effective cycles one reduced curve at a time and tracks exact
//!   bounds on `h^0` and `h^1` of the twisted tangent sheaf restricted to the
//!   cycle, including sweeps over `nE`.
//!
//! Everything except the rendered growth coefficient is computed with exact
//! integers and rationals.

pub mod cohomology;
pub mod config;
pub mod divisor;
pub mod error;
pub mod linalg;
pub mod plumbing;
pub mod report;

pub use cohomology::{
    alpha_bound, check_component_h0_vanishing, check_h0_reduced_e_vanishing, discrepancy_report, growth_analysis,
    p1_cohomology, paper_closed_form_m1, peel_ledger, peel_summary, twist_degrees, CohomologyLedger, DimInterval,
    DiscrepancyRow, GrowthReport, LedgerSummary, LineBundleDegreePair, PeelOrder, PeelStep,
};
pub use config::{parse_config, ConfigFile, ParseError, ParseErrorKind};
pub use divisor::{
    build_block_system, closed_form_small_m, kernel_basis, primitive_positive_solution, verify_orthogonality,
    BlockSystem, DivisorSolution,
};
pub use error::{Error, Result};
pub use plumbing::{
    cycle_genus, fundamental_cycle, hirzebruch_jung, intersection_matrix, is_negative_definite, validate_config,
    ChainSpec, ChainValidation, CurveId, Cycle, HjInvariant, IntersectionMatrix, PlumbingConfig, ValidationReport,
};

/// Exact rational scalar used throughout the crate.
pub type ExactScalar = num_rational::BigRational;
