//! Exact computation with integral linear recursive sequences: the Hadamard
//! product and Hankel coproduct that make them a bi-ring, their realization by
//! single-input single-output linear control systems, and finite-field point
//! counts of the resulting moduli spaces together with their zeta functions
//! and motives over the field with one element.

pub mod cli;
pub mod coring;
pub mod exactla;
pub mod pointcount;
pub mod seqcore;
pub mod systems;

pub use exactla::{RatMatrix, Rational};
pub use seqcore::{LinRecSequence, SequencePrefix};
