//! Arithmetic core: exact multiplicative sieves for the ideal-count
//! coefficients of a non-normal cubic field, Jacobi's eight-squares
//! kernel, their hybrid partial sums, and the analytic main term
//! `x^4 (c1 log x + c0)` they converge to.
//!
//! This crate is `no_std` (alloc required); all IO, parallelism and the
//! CLI live in the companion `akr8` crate.

#![no_std]

extern crate alloc;

pub mod acc;
pub mod arith;
pub mod field;
pub mod fit;
pub mod hybrid;
pub mod series;
pub mod squares;

pub use acc::U256;
pub use arith::{Factorization, MultiplicativeSpec, SieveTable};
pub use field::{ClassData, CubicField, SplittingTable, SplittingType};
pub use hybrid::{SumSample, SumSeries};
