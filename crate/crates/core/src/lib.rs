//! Flux-reconstruction / summation-by-parts solver for the 1-D linear
//! advection equation with a variable coefficient,
//!
//!   u_t + (a(x) u)_x = 0,   x in [x_L, x_R],   t >= 0,
//!
//! with inflow boundary data at the left end, plus the long-time error
//! experiments and theory diagnostics built on top of it.
//!
//! The building blocks: Legendre quadrature rules ([`quadrature`]),
//! SBP operator sets on Gauss, Lobatto and finite-difference nodes
//! ([`operators`]), meshes and coefficient sampling ([`mesh`]), numerical
//! fluxes and scheme configuration ([`scheme`]), the semidiscrete
//! right-hand side ([`semidisc`]), SSPRK(10,4) time integration
//! ([`timeint`]), benchmark problems with closed-form solutions and a
//! characteristics oracle ([`solutions`]), and error/theory diagnostics
//! ([`diagnostics`]).

pub mod convergence;
pub mod diagnostics;
pub mod error;
pub mod mesh;
pub mod operators;
pub mod output;
pub mod presets;
pub mod quadrature;
pub mod run;
pub mod scheme;
pub mod semidisc;
pub mod solutions;
pub mod timeint;

pub use error::{Error, Result};

/// Library version string recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
