//! Exact Witt-vector arithmetic and relative K-groups of truncated polynomial algebras.

pub mod arith;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod group;
pub mod kgroup;
pub mod ring;
pub mod tr;
pub mod witt;

pub use error::{Error, Result};
