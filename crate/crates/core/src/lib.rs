//! Exact arithmetic for positive-definite integer quadratic lattices:
//! reduction of binary forms, short-vector enumeration, representation
//! testing with explicit embeddings, truants and escalations, and the
//! rank-2 universality criterion with irredundancy witnesses.
//!
//! Everything is computed over the integers (with arbitrary precision
//! where intermediate values demand it); no verdict in this crate rests on
//! floating-point comparisons. Floats appear only as heuristic estimates
//! that exact checks then correct.
//!
//! The central objects are [`BinaryForm`] (an integer-matrix binary form
//! `a x^2 + 2 b x y + c y^2`, printed `[a,b,c]`) and [`GramLattice`] (a
//! symmetric positive-definite integer Gram matrix of any rank, printed
//! `<d1,...>` when diagonal). The [`grammar`] module parses the same
//! texts the `Display` implementations emit, including orthogonal sums
//! written with `++`.

// Symmetric in-place matrix updates here index several rows of one matrix
// at once; the indexed loops say that more plainly than split borrows.
#![allow(clippy::needless_range_loop)]

pub mod enumeration;
pub mod error;
pub mod escalation;
pub mod forms;
pub mod grammar;
pub mod oracle;
pub mod representation;

pub mod criterion;

pub use crate::criterion::{
    build_witness, check_2_universal, is_2_universal, s2, uniqueness_demo, verify_witness,
    witness_search, Recipe, SearchOutcome, UniquenessCase, WitnessReport, DEFAULT_SEARCH_ENTRY_CAP,
    DEFAULT_SEARCH_RANK_CAP, S1,
};
pub use crate::enumeration::{
    ldl, minimum, vectors_up_to, vectors_with_norm, LdlFactorization, ShortVector,
};
pub use crate::error::{Error, Result};
pub use crate::escalation::{
    binary_truant, escalation_tree, escalations_by_binary, escalations_by_integer, fifteen_demo,
    integer_truant, isometric, tidy, EscalationCaps, EscalationNode, FifteenReport, FormOrdering,
    TruantKind, UniversalityMode,
};
pub use crate::forms::{BinaryForm, FormSet, GramLattice};
pub use crate::grammar::{format_form, parse_binary, parse_form};
pub use crate::representation::{
    reduced_forms_up_to_det, represented_binaries_up_to, represents_all, represents_binary,
    represents_integer, Embedding, MemberVerdict, RepresentationReport,
};
