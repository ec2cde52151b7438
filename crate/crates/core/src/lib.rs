//! Exact-arithmetic pipeline for bending symmetric-power representations of
//! a hyperbolic orbifold group and certifying Zariski density of the result.
//!
//! Everything is computed over Q, Q(sqrt2), or one quadratic extension of
//! Q(sqrt2); there is no floating point anywhere in the crate.

pub mod bend;
pub mod certify;
pub mod cover;
pub mod descent;
pub mod error;
pub mod intmat;
pub mod matrix;
pub mod scalar;
pub mod sympow;
pub mod words;

pub use bend::{bend, loxodromy_certificate, BendParameter, BentRepresentation};
pub use certify::{
    base_representation, certify_path_point, certify_psl2_base, Certificate,
    CertifyOptions, CERT_SCHEMA, THEOREM_DEPENDENCIES,
};
pub use cover::{surface_cover_mod3, SubgroupData};
pub use descent::{
    integralize, rationalize, solve_norm_equation, DescentWitness, LatticeBasis,
    DEFAULT_NORM_BOUND, DEFAULT_SAT_BOUND,
};
pub use error::{Error, Result};
pub use intmat::{abelian_invariants, col_hnf, snf, IntMat};
pub use matrix::Mat;
pub use scalar::{rat, rat_from_str, rat_to_string, Field, Rational, Sqrt2, Tower};
pub use sympow::{
    commutant, invariant_forms, omega_n, psl2_density_witness, FormSolution,
    Psl2Witness, Symmetry,
};
pub use words::{
    check_relations, orbifold_presentation, sigma_representation, theta_generators,
    triangle_generators, triangle_presentation, GroupWord, Presentation,
    RelationCheck, Representation,
};
