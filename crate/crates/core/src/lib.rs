//! Computational toolkit for the moduli space of invariant connections on
//! homogeneous principal `GL_N(C)`-bundles over hermitian symmetric spaces.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`linalg`]: dense complex matrices, the involution `h ↦ (h†)⁻¹` and its
//!   Lie-algebra differential `X ↦ −X†`, hermitian square roots, SVD.
//! * [`weights`]: weight-space and chain decompositions of a torus
//!   homomorphism, and its centralizer.
//! * [`connection`]: covariant connection data `(A, B)`, frame tuples,
//!   purity, the involution and hermitian fixed points, gauge action.
//! * [`quiver`]: chain quivers and their doubles, moment maps, gauge action,
//!   cycle enumeration and trace invariants.
//! * [`jordan`]: the type I hermitian Jordan triple `C^{p×q}`.
//! * [`selftest`]: the randomized property suite run by `modulikit selftest`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod connection;
pub mod error;
pub mod jordan;
pub mod linalg;
pub mod quiver;
pub mod sampling;
pub mod selftest;
pub mod weights;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};

/// Global default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Absolute floor used wherever a tolerance is scaled by a norm.
pub const NORM_FLOOR: f64 = 1e-14;

/// `max(norm, NORM_FLOOR)`: the scale a relative tolerance is multiplied by.
#[inline]
pub fn scale_of(norm: f64) -> f64 {
    if norm > NORM_FLOOR {
        norm
    } else {
        NORM_FLOOR
    }
}
