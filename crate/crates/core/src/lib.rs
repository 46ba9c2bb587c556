//! Circuit toolkit for proving facts about multiple sequence alignments.
//!
//! The centerpiece is a validator circuit over rank-1 constraints: given
//! public input sequences and a public sum-of-pairs score, it checks that a
//! *hidden* alignment is consistent with both — each alignment row strips to
//! its sequence, and the claimed score equals the alignment's sum-of-pairs
//! score. The crate provides everything around that circuit:
//!
//! - [`field`]: arithmetic in the BN254 scalar field, including the signed
//!   encoding used for scores.
//! - [`r1cs`]: a constraint-system builder with an embedded witness-generation
//!   program, satisfaction checking, JSON interchange, and circuit statistics.
//! - [`gadgets`]: comparator and boolean building blocks with fixed,
//!   documented constraint costs.
//! - [`circuit`]: the validator itself — column scoring, sum-of-pairs
//!   aggregation, and the routing grid that checks sequence/alignment
//!   consistency.
//! - [`oracle`]: a plain string-level reference implementation of validation,
//!   sharing no code with the circuit path.
//! - [`backend`]: setup/prove/verify behind a swappable interface, with a
//!   development backend included.
//! - [`sample`]: deterministic instance generators for tests and demos.
//!
//! With the default `parallel` feature, constraint checking and statistics
//! sweeps fan out over rayon; disabling it falls back to the sequential
//! implementations.

pub mod backend;
pub mod circuit;
pub mod field;
pub mod gadgets;
pub mod oracle;
pub mod r1cs;
pub mod sample;
pub mod sweep;

pub use backend::{DevBackend, Proof, ProofSystem, ProvingKey, VerifyingKey};
pub use circuit::{
    build_validator, encode_instance, predicted_nonlinear_constraints, Alphabet, CircuitParams,
    MsaInstance, VisibilityMask,
};
pub use field::FieldElement;
pub use r1cs::{CircuitBuilder, CircuitStats, ConstraintSystem, Lc, SignalId, Witness};
