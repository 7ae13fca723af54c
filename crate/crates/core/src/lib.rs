//! Exact-arithmetic toolkit for the coherent-constructible correspondence
//! on smooth toric surfaces.
//!
//! Everything is computed over exact rationals: fans and their duals,
//! the FLTZ skeleton and the induced cell decomposition of the torus,
//! combinatorial constructible sheaves with graded homs, Euler-calculus
//! convolution, ray-removal localization, and the polyhedral resolution
//! of cell closures.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI
//! live in the companion `ccc-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod arrangement;
pub mod blocks;
pub mod ccc;
pub mod consheaf;
pub mod convolution;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod linalg;
pub mod localization;
pub mod polyhedra;
pub mod resolver;
pub mod skeleton;

pub use error::CccError;
pub use lattice::{LatticeVector, Rat, RatPoint};
