//! Pseudospectral laboratory for the L²-critical higher-order cubic
//! Schrödinger equation
//!
//! ```text
//! i ∂ₜu + Λᵏu = −|u|²u,    Λ = √(−Δ)
//! ```
//!
//! posed on a periodic box `[−L, L)^d`. The crate provides spectral
//! operators (Fourier multipliers, Littlewood–Paley projections, the
//! I-operator), a split-step integrator with exact substeps, and numerical
//! experiments checking the quantitative estimates of the I-method theory.

pub mod error;
pub mod estimates;
pub mod evolution;
pub mod harness;
pub mod i_method;
pub mod littlewood_paley;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spectral::{Field, GridSpec, MultiplierSpec};
