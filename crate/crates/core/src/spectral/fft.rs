use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::GridSpec;

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    // The planner caches plans internally; plans themselves are Send + Sync.
    let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

/// In-place unnormalised d-dimensional DFT over a row-major `n^d` buffer.
fn transform(data: &mut [Complex64], n: usize, d: usize, inverse: bool) {
    debug_assert_eq!(data.len(), n.pow(d as u32));
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // Last axis is contiguous: one batched call covers every line.
    fft.process_with_scratch(data, &mut scratch);

    let mut line = vec![Complex64::default(); n];
    for axis in (0..d.saturating_sub(1)).rev() {
        let stride = n.pow((d - 1 - axis) as u32);
        let outer = data.len() / (n * stride);
        for o in 0..outer {
            let base = o * n * stride;
            for inner in 0..stride {
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + inner + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[base + inner + j * stride] = *v;
                }
            }
        }
    }
}

/// Physical samples to unnormalised spectral coefficients.
pub fn forward(grid: &GridSpec, data: &mut [Complex64]) {
    transform(data, grid.n(), grid.d(), false);
}

/// Spectral coefficients back to physical samples (normalised by `1/n^d`).
pub fn inverse(grid: &GridSpec, data: &mut [Complex64]) {
    transform(data, grid.n(), grid.d(), true);
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// One-dimensional forward DFT of arbitrary length (used for time series).
pub fn forward_1d(data: &mut [Complex64]) {
    let n = data.len();
    if n == 0 {
        return;
    }
    let fft = plan(n, false);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
}

/// One-dimensional normalised inverse DFT of arbitrary length.
pub fn inverse_1d(data: &mut [Complex64]) {
    let n = data.len();
    if n == 0 {
        return;
    }
    let fft = plan(n, true);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    let scale = 1.0 / n as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}
