//! Exact k-dependence profiles of matroids over small finite fields,
//! closed-form representability bounds, exhaustive extremal search and
//! seeded sampling of random matrices.
//!
//! The crate is `no_std` and needs only `alloc`. Parallel drivers, file
//! formats and the command-line tool live in the companion `kdep` crate;
//! every long-running routine here is exposed in a shardable form
//! (subset-rank ranges, search partitions, sample indices) so that any
//! scheduler produces identical results.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod field;
pub mod linalg;
pub mod matroid;
pub mod montecarlo;
pub mod search;
pub mod subset;
pub mod table;

pub use field::{Field, FieldElement, FieldError};
pub use linalg::{GfMatrix, LinalgError};
pub use matroid::{DependenceCount, DependenceProfile, Matroid, MatroidError};
