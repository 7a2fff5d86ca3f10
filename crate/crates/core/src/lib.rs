//! Numerical inverse Laplace transform for time-fractional Kelvin-Voigt beams.
//!
//! The solver transforms the beam equation in time, solves the resulting
//! fourth-order boundary value problem at every quadrature node of a
//! hyperbolic or parabolic contour with an ultraspherical spectral method, and
//! sums the nodes to recover the solution at any time in a window.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod contour;
pub mod error;
pub mod exec;
pub mod pencil;
pub mod quad;
pub mod resolvent;
pub mod solver;
pub mod special;
pub mod speclin;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
