//! Exact symbolic computation over polynomial OI-algebras.
//!
//! The OI category has objects the totally ordered finite sets `[w] = {1 < 2 < … < w}`
//! and morphisms the order-preserving injections between them.  A polynomial
//! OI-algebra assigns to each width `w` a polynomial ring whose variables are
//! indexed by OI-morphisms into `[w]`; free OI-modules over such an algebra have
//! width-wise bases indexed by OI-morphisms as well, and every OI-morphism acts by
//! relabeling both variables and basis elements.
//!
//! This crate builds those objects explicitly — free modules, their tensor,
//! exterior, and symmetric powers with explicit free bases, and the width-wise
//! Koszul and Buchsbaum–Eisenbud complexes attached to a module morphism — and
//! verifies their defining identities (`d ∘ d = 0`, naturality under width
//! transitions, gradedness, width-wise minimality, and generic exactness probed at
//! random rational points) by exact arithmetic over ℚ.  No floating point is used
//! anywhere.
//!
//! Module map:
//! - [`oi_cat`]: order-preserving injections, their enumeration, composition, and
//!   the canonical basis order.
//! - [`polyring`]: sparse multivariate polynomials over ℚ with OI-indexed
//!   variables, plus matrices and exact determinants.
//! - [`oi_algebra`]: signatures of polynomial OI-algebras and their width-wise
//!   variable sets.
//! - [`free_mod`]: free OI-modules, elements, and module morphisms given by
//!   generator images.
//! - [`multilinear`]: free decompositions of tensor, exterior, and symmetric
//!   powers, width-0 duals, and rank-identity certificates.
//! - [`complexes`]: width-wise Koszul and Buchsbaum–Eisenbud complexes and the
//!   transition maps that assemble them into OI-complexes.
//! - [`verify`]: exact checks (d∘d, naturality, grading, minimality) and the
//!   seeded rational-point probe for generic exactness.

pub mod complexes;
pub mod error;
pub mod free_mod;
pub mod multilinear;
pub mod oi_algebra;
pub mod oi_cat;
pub mod polyring;
pub mod verify;

pub use complexes::{
    assemble_oi_complex, be_at_width, koszul_at_width, mixed_codomain_degrees, ComplexKind,
    ModuleSlot, Mutation, OIComplexFamily, OIComplexSpec, WidthComplex, WidthTransition,
};
pub use error::OiError;
pub use free_mod::{FreeOIModule, Generator, ModuleElement, ModuleMorphism};
pub use multilinear::{
    certify_rank_identity, dual_width0, sym_decompose, tensor_decompose, wedge_decompose,
    FreeDecomposition, Summand, Witness,
};
pub use oi_algebra::AlgebraSignature;
pub use oi_cat::{BasisOrderKey, OIMorphism};
pub use polyring::{Monomial, PolyMatrix, Polynomial, Rat, VariableId};
pub use verify::{
    check_dd_zero, check_graded, check_minimality, check_transitions, homology_at_point,
    homology_vector_at_point, monomials_of_degree, point_stream, probe_generic_acyclicity,
    random_point, rational_rank, strand_homology_dimension, verify_family, CheckOutcome,
    HomologyProbe, VerificationReport,
};
