//! Chebyshev and ultraspherical spectral linear algebra.
//!
//! Functions on `[-1, 1]` are stored as coefficient vectors in the Chebyshev
//! basis `T_k` or in an ultraspherical basis `C^(lam)_k`. Differentiation,
//! conversion and multiplication are banded between these bases, so a linear
//! ODE with polynomial-like coefficients becomes a banded operator with a few
//! dense boundary rows on top, solved in linear time.

mod band;
mod ops;
mod series;
mod solve;

pub use band::BandMatrix;
pub use ops::{
    chebyshev_derivative_at_end, conversion_section, derivative_section, multiplication_section, BandedOp, BoundaryRow,
    MULT_TRUNCATION_TOL,
};
pub use series::{cheb_transform, ChebSeries};
pub use solve::{boundary_mismatch, residual_norm, residual_vector, solve_almost_banded, solve_dense, AlmostBandedSystem};
