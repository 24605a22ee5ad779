//! Exact computations on fibred surfaces built as double covers of P1 x P1.

#![no_std]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod config;
pub mod fibre;
pub mod invariants;
pub mod orbifold;
pub mod pipeline;
pub mod poly;
pub mod presets;
pub mod resolution;
pub mod search;
