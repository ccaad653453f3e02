//! Numerics for the full-curvature thin-film model of a viscous liquid coating
//! a vertical fibre.
//!
//! The film position `v(ξ, t)` (measured from the fibre axis) obeys
//!
//! ```text
//! v v_t + σ⁻¹ [ Q(v) J(v)_ξ ]_ξ + ( μ Q(v) − (V/2) v² )_ξ = 0,
//! J(v) = (Φ'(v_ξ))_ξ − f(v_ξ)/v + A v⁻ᵐ,
//! ```
//!
//! on an `L`-periodic domain. The crate provides the scalar building blocks
//! ([`model`]), integral diagnostics ([`functionals`]), closed-form energy
//! minimizers ([`minimizers`]), a fully implicit time integrator ([`pde`]) and
//! a travelling-wave solver with natural-parameter continuation
//! ([`travelling_wave`]).
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the command
//! line live in the companion `fibrefilm` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod functionals;
pub mod grid;
pub mod linalg;
pub mod minimizers;
pub mod model;
pub mod pde;
pub mod quadrature;
pub mod roots;
pub mod travelling_wave;

pub use error::{Error, Result};
pub use grid::{FilmProfile, PeriodicGrid, PressureField};
pub use model::ModelParams;
