//! Periodic grids, transforms, Fourier multipliers and discrete norms.

mod fft;
mod field;
mod grid;
pub mod io;
mod multiplier;
mod norms;

pub use fft::{forward_1d, inverse_1d};
pub(crate) use fft::{forward as fft_forward, inverse as fft_inverse};
pub use field::Field;
pub use grid::GridSpec;
pub use multiplier::{apply_multiplier, apply_weights, MultiplierSpec};
pub use norms::{lp_norm, multiplier_l2, sobolev_norm, spacetime_norm, time_norm};
