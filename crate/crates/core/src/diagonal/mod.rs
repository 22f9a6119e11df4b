//! The generalized diagonal construction and the bookkeeping around it.
//!
//! `j` packages the common shape of every diagonal argument in this crate: an
//! index set guarding which arguments participate, a self-application that may
//! or may not settle, and a fixed-point-free post-map applied to whatever the
//! self-application produced. The two concrete diagonals from the lower layers
//! (`diagonal_h` over the recursion calculus, `diagonal_g` over machine
//! tables) are re-derivable as instances, and tests hold them to that.
//!
//! `registry` records which closure properties each computational model on
//! file actually has. Nothing in the registry is taken on faith alone: a
//! status is either backed by a named executable check from `checks`, or
//! explicitly declared with a citation to published literature.
//!
//! `witness` turns the one remaining step into running code: assume a model
//! had every property at once, build the diagonal inside it, and print the
//! transcript that ends in a value unequal to itself.

pub mod checks;
mod j;
mod registry;
mod witness;

pub use checks::{capability_audit, check_names, run_check, AuditReport, CheckReport};
pub use j::{
    build_j, instantiate_g_as_j, instantiate_h_as_j, DefaultReason, DiagEval, IndexSet,
    JBuildError, JOutcome, JSpec, KResult, OutputSpace, ValidationReport,
};
pub use registry::{
    registry, registry_invariants, AlternateCoding, ModelRow, PropertyId, PropertyStatus,
};
pub use witness::{contradiction_witness, DiagonalClash, WitnessRefusal, WitnessStep, WitnessTarget, WitnessTranscript};
