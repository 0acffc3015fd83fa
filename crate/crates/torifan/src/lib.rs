//! Exact computational toolkit for smooth complete toric fans.
//!
//! The crate computes primitive collections and relations, Mori cone
//! generators, crepant contraction certificates, and the one-parameter
//! deformations they induce, entirely in arbitrary-precision arithmetic.

pub mod cli;
pub mod corpus;
pub mod deform;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod lp;
pub mod mori;
pub mod special;

pub use error::{Error, Result};
