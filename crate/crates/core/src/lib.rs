//! Numerical laboratory for bilinear spherical averages and bilinear
//! Bochner-Riesz multipliers on periodic grids.
//!
//! Everything here is `no_std` with `alloc`. Transcendental functions come
//! from `libm`; the FFT is an in-crate radix-2 implementation since every grid
//! side is a power of two.
#![no_std]
// `!(x > 0.0)`-style guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bochner_riesz;
pub mod counterexamples;
mod error;
pub mod exponents;
pub mod fft;
pub mod grid;
pub mod maximal;
pub mod quadrature;
pub mod spherical;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
