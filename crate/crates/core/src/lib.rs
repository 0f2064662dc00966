//! Exact-rational computational backend for the cohomology of Kahler
//! mapping tori and their co-Kahler models.
//!
//! The crate builds finite graded-commutative (differential) algebras
//! over `Q` from presentations, computes cohomology rings and invariant
//! subalgebras under finite cyclic actions, synthesizes mapping-torus
//! cohomology `H^G (x) exterior(eta)`, and verifies hard Lefschetz,
//! co-Kahler Lefschetz, Property B, toral-rank certificates and Sullivan
//! minimal-model splittings on concrete instances.
//!
//! All values are immutable after construction and every operation is a
//! pure function; results are deterministic and bit-identical across
//! runs.

pub mod axioms;
pub mod cohomology;
pub mod cokahler_model;
pub mod derivations;
pub mod error;
pub mod lefschetz;
pub mod graded;
pub mod linalg;
pub mod presentation;
pub mod report;
pub mod scalar;
pub mod sullivan;
pub mod toral;
#[cfg(test)]
pub(crate) mod testutil;

pub use cohomology::{
    betti_numbers, cohomology, induce_on_cohomology, invariant_subalgebra, poincare_duality_check,
    CohomologyRing, GroupActionSpec, InvariantSubalgebra,
};
pub use cokahler_model::{
    betti_relation_checks, circle_algebra, cokahler_model_from_classes, mapping_torus_algebra,
    verify_contraction, CoKahlerModel,
};
pub use derivations::{
    derivation_space, property_b_check, tensor_property_b_probe, Derivation, DerivationSpace,
    PropertyBOutcome,
};
pub use error::{AlgebraError, Result};
pub use sullivan::{
    minimal_model_of_formal, minimal_model_of_formal_seeded, model_fingerprint,
    model_tensor_split_check, models_isomorphic, verify_quasi_iso, ModelFingerprint, ModelMap,
    SullivanAlgebra,
};
pub use toral::{alpha_tilde_1, max_exterior_rank, toral_rank_bound, trc_check, TorusCertificate};
pub use lefschetz::{
    hard_lefschetz_check, invariant_kahler_check, LefschetzEntry, LefschetzReport,
};
pub use graded::{
    tensor_product, AlgebraMap, ChainComplexAlgebra, Element, GradedAlgebra, GradedBasis,
};
pub use presentation::{build_from_presentation, BuiltPresentation, FreeElement, Presentation};
pub use report::{Check, CheckStatus, Report};
pub use scalar::Rat;
