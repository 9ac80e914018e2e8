//! Matrices, subgroups and orbits in `GL2(Z/NZ)`.

mod group;
mod matrix;
mod orbits;

pub(crate) use group::check_ceiling;
pub use group::{
    enumerate_elements, max_modulus, preimage_divisors, sl2_generators, unit_generators,
    ImageGroup, DEFAULT_MAX_MODULUS,
};
pub use matrix::{Mat2, Vec2};
pub use orbits::{Orbit, OrbitTable};
