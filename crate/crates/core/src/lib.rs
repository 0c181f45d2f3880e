//! Exact machinery for proving the half-plane property of matroids.
//!
//! The crate builds matroids from explicit basis lists (including the
//! extended Vámos family), their basis-generating polynomials and Rayleigh
//! differences, checks sum-of-squares Gram certificates in exact rational
//! arithmetic, and replays an inductive half-plane-property proof for the
//! 10-element Vámos extension.

pub mod certificate;
pub mod data;
pub mod matrix;
pub mod matroid;
pub mod par;
pub mod poly;
pub mod proof;
pub mod rational;
pub mod stability;

pub use matrix::RationalMatrix;
pub use matroid::{GroundSetLabeling, LabeledMatroid, Matroid};
pub use rational::Q;
