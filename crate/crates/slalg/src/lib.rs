//! Exact-arithmetic engine for convolution algebras of strong semilattices
//! of finite-dimensional algebras, and their Hochschild homology.
//!
//! Everything is computed over the rationals with no rounding: structure
//! constants, boundary matrices, chain projections, homotopies and Betti
//! numbers are all exact, so every identity checked by the verification
//! suites is a genuine matrix identity, not an approximation.

pub mod algebras;
pub mod cli;
pub mod diagrams;
pub mod fixtures;
pub mod homology;
pub mod linalg;
pub mod report;
pub mod semigroups;
