//! Rotation numbers as bounded cohomology classes.
//!
//! The Euler cocycle of a group acting on a cyclic cover, pulled back along
//! `k ↦ g^k`, has a class in `H²_b(ℤ; ℤ) ≅ ℝ/ℤ`. This crate computes that class
//! and compares it with the rotation number of `g`, for circle
//! homeomorphisms and for real symplectic matrices.

pub mod circle;
pub mod cohomology;
mod error;
pub mod io;
pub mod linalg;
pub mod symplectic;
pub mod translation;

pub use circle::{CircleCoverElement, CircleLift};
pub use cohomology::{ClassValue, IntegerCochain1, IntegerCochain2};
pub use error::{Error, Result};
pub use symplectic::{CoverElement, SymplecticMatrix};
pub use translation::TranslationNumber;
