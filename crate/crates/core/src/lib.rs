//! Exact rational tools for degree-2 Prouhet-Tarry-Escott solutions.
//!
//! * [`linalg`]: canonical rationals and dense rational matrices (RREF, inverse, rank).
//! * [`pte`]: r-dimensional PTE solutions, power-sum verification, normalization.
//! * [`n2`]: the group `N2(n)` of rational orthogonal matrices fixing `1`, its
//!   Cayley parametrization and the conjugation onto `O(diag[2, 6, .., n(n-1)])`.
//! * [`quadform`]: positive definite rational forms, orthogonal groups, the
//!   similarity classification of `diag[1, 3, .., n(n-1)/2]`.
//! * [`designs`]: exact verification of and bounded search for rational
//!   ellipsoidal t-designs.
//! * [`fano`]: the Fano-plane solution of PTE_7 as an end-to-end example.

pub mod designs;
pub mod error;
pub mod fano;
pub mod linalg;
pub mod n2;
pub mod perm;
pub mod pte;
pub mod quadform;

pub use error::{Error, Result};
pub use linalg::{Matrix, Rational};
