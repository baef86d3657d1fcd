//! Exact computations around lattices in the complex Heisenberg group.
//!
//! The crate covers exact field arithmetic ([`field`]), lattices in ℚᵐ
//! ([`zlattice`]), the Heisenberg group and its cocompact lattices
//! ([`heisenberg`]), complex tori with rational Hodge data ([`hodge`]), the
//! Chevalley–Eilenberg model of nilmanifold cohomology ([`cohomology`]), the
//! cocycle of the Iwasawa bundle ([`chern`]) and composed verification
//! checks ([`verifier`]) over a bundled set of examples ([`corpus`]).

pub mod chern;
pub mod cohomology;
pub mod corpus;
pub mod field;
pub mod heisenberg;
pub mod hodge;
pub mod linalg;
pub mod verifier;
pub mod zlattice;
