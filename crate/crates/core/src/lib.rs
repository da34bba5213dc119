//! Term language, rewriting engine, surface reconstruction and Frobenius
//! evaluation for generators-and-relations presentations of the 2D bordism
//! bicategory.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod algfile;
pub mod eval;
pub mod linalg;
pub mod linear;
pub mod parse;
pub mod presentations;
pub mod random;
pub mod rewrite;
pub mod surface;
pub mod tangle;
pub mod term;
pub mod typing;

pub use num_rational::BigRational as Q;
