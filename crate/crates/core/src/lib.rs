//! Exact structure constants for twisted categories of relations.
//!
//! Starting from a finite regular category equipped with a degree function,
//! this crate linearizes its relation calculus over Z[t], splits the
//! canonical subobject idempotents, and computes compositions and tensor
//! products in the resulting summand bases — every closed formula next to a
//! brute-force expansion it must agree with.  The `opset` backend (opposite
//! of finite sets, degree `t^(#X - #Y)`) reproduces the structure constants
//! of the interpolation category Rep S_t; the `finset` backend is the
//! untwisted control case.

pub mod backend;
pub mod error;
pub mod lattice;
pub mod maltsev;
pub mod poly;
pub mod projector;
pub mod star;
pub mod verify;
pub mod rel;

pub use error::{Error, Result};
