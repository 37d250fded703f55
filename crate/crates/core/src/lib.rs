//! Exact finite-dimensional algebras over the complex rationals: direct
//! sums, unitizations, Lau products and generalized Lau products, with
//! verified homomorphisms, isomorphisms and isomorphism-invariant
//! fingerprints.

pub mod algebra;
pub mod analysis;
pub mod construct;
pub mod corpus;
pub mod format;
pub mod lab;
pub mod linalg;
pub mod morphism;
pub mod scalar;

pub use algebra::{find_identity, is_associative, multiply, Algebra, AlgebraError, Element};
pub use analysis::{distinguish, fingerprint, norm_report, Certificate, Fingerprint};
pub use construct::{
    character_to_hom, collapse, direct_sum, generalized_lau_product, lau_product,
    trivializing_isomorphism, unitization, unitization_embedding, ConstructionError,
};
pub use corpus::{CatalogSpec, Family, HomSpec, HomStrategy};
pub use morphism::{
    is_character, is_homomorphism, subspace_report, verify_isomorphism, LinearMap, Subspace,
};
pub use scalar::Scalar;
