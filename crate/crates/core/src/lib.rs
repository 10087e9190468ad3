//! Exact Riemann theory, centred-wave backgrounds and acoustical-geometry
//! diagnostics for the two-dimensional isentropic compressible Euler equations.
//!
//! The theory layers are generic over [`Real`]; the grid simulator and the
//! diagnostics work in `f64`, which is also the on-disk snapshot format.

pub mod diag;
pub mod error;
pub mod field;
pub mod fv2d;
pub mod jets;
pub mod pattern;
pub mod riemann;
pub mod roots;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Gas = state::GasParams<f64>;
pub type Prim = state::PrimState<f64>;
pub type Cons = state::ConsState<f64>;
pub type Fan = riemann::WaveFan<f64>;
pub type Data = riemann::RiemannData<f64>;
pub type Gas32 = state::GasParams<f32>;
pub type Prim32 = state::PrimState<f32>;
