//! Exact construction and certification of normal and central extensions of
//! superpotential algebras.
//!
//! A twisted superpotential `w` of degree m+1 in n variables defines the
//! derivation-quotient algebra A(w) = TV/(∂_1 w, …, ∂_n w). For an index k and
//! a tuple p with p_k = q_k the algebra D(w,p) drops the k-th relation and adds
//! the commutation relations x_i ∂_k w − p_i ∂_k w x_i; this crate builds D,
//! decides which tuples are good, and checks the finite consequences of D being
//! a regular normal extension of A to a chosen degree.

pub mod certify;
pub mod error;
pub mod family;
pub mod freealg;
pub mod linalg;
pub mod quotient;
pub mod scalars;
pub mod superpotential;
pub mod tuples;

pub use error::{Error, Result};
