//! Screening elliptic curves over `Q` for isolated points on `X1(n)`,
//! starting from the adelic Galois image given at a finite level.

pub mod arith;
pub mod degrees;
mod error;
pub mod genus;
pub mod gl2;
pub mod levels;

pub use error::{Error, Result};
pub use gl2::{ImageGroup, Mat2, OrbitTable, Vec2};
pub mod pipeline;
pub mod record;
