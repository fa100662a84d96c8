//! Discontinuous Galerkin solvers for degenerate convection-diffusion equations with a
//! fractional Laplacian, `u_t + f(u)_x = (a(u) u_x)_x + b L[u]`, where `L` has symbol `-|ξ|^λ`.

pub mod analysis;
pub mod audit;
pub mod cli;
pub mod config;
pub mod error;
pub mod flux;
pub mod fractional;
pub mod poly;
pub mod problem;
pub mod quadrature;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
