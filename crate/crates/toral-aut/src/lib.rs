//! Exact computation of automorphism groups for subvarieties of algebraic
//! tori cut out by Laurent polynomial equations with Gaussian rational
//! coefficients.
//!
//! The pipeline: parse generators ([`parser`]), extract the exponent lattice
//! spanned by support differences and the quasitorus acting trivially on
//! invertible functions ([`structure`]), split off the maximal torus factor,
//! and — for hypersurface residues — enumerate the group of unimodular affine
//! symmetries of the Newton support compatible with the coefficients
//! ([`gaff`]), together with checkable certificates for the induced torus
//! automorphisms. [`assemble`] combines the pieces into a structure report and
//! [`cli`] exposes everything as the `toral-aut` binary.

pub mod assemble;
pub mod cli;
pub mod gaff;
pub mod gaussian;
pub mod laurent;
pub mod parser;
pub mod structure;
pub mod zlattice;

pub use gaussian::GaussianRational;
pub use laurent::{LatticeVector, LaurentPoly, MonomialMap, ScalarTuple};
pub use zlattice::IntMatrix;
