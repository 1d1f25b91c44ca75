//! Online convex optimization: first- and second-order online learners,
//! projection-free and bandit methods, expert algorithms, zero-sum game
//! solving, and application harnesses with exact regret accounting.

pub mod applications;
pub mod error;
pub mod experts;
pub mod games;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod losses;
pub mod offline;
pub mod online;
pub mod vecops;

pub use error::{OcoError, Result};
