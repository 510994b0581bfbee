//! Sullivan minimal models of finitely presented commutative differential graded
//! algebras over the rationals.
//!
//! The crate builds minimal models degree by degree (adjoin closed generators for
//! missing cohomology, adjoin primitives to kill kernel), computes cohomology with
//! exact rational linear algebra, and checks minimality of twisted tensor products.

pub mod algebra;
pub mod cdga;
pub mod cohomology;
pub mod error;
pub mod format;
pub mod ks;
pub mod library;
pub mod linalg;
pub mod minimal_model;

pub use num_rational::BigRational as Rational;

pub use algebra::{decompose_homogeneous, monomial_basis, multiply, Element, Generator, GeneratorTable, Monomial};
pub use cdga::{
    apply_differential, check_minimality, validate, validate_morphism, FreeCdga, MinimalityVerdict, Morphism,
    PresentedCdga, ValidationReport,
};
pub use cohomology::{
    cohomology, cohomology_summary, induced_map, solve_in_degree, CohomologyClass, CohomologyGroup, CohomologySummary,
    InducedMap,
};
pub use error::{Error, Result};
pub use format::{parse_model, ModelDescription};
pub use ks::{check_tensor_minimality, check_triangularity, total_space_dims, KsExtension, TensorMinimality};
pub use library::{
    chevalley_eilenberg, heisenberg_model, lie_nilpotency_class, projective_model, sphere_model, tensor_product,
    torus_model, unit_model, LieAlgebra, Nilpotency,
};
pub use linalg::{rref, RationalMatrix, Rref};
pub use minimal_model::{
    construct_minimal_model, rational_homotopy_dims, verify_quasi_isomorphism, verify_truncated, HomotopyDims,
    MinimalModelResult, VerificationReport, DEFAULT_KILL_CAP,
};
