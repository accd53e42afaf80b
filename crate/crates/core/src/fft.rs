use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// In-place 2-D DFT of a row-major `width x height` buffer (unnormalised).
pub(crate) fn fft2(data: &mut [Complex64], width: usize, height: usize, direction: FftDirection) {
    debug_assert_eq!(data.len(), width * height);
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft(width, direction);
    row_fft.process(data);

    let col_fft = planner.plan_fft(height, direction);
    let mut column = vec![Complex64::default(); height];
    for x in 0..width {
        for (y, c) in column.iter_mut().enumerate() {
            *c = data[y * width + x];
        }
        col_fft.process(&mut column);
        for (y, c) in column.iter().enumerate() {
            data[y * width + x] = *c;
        }
    }
}

/// Signed frequency index of DFT bin `k` in an `n`-point transform.
pub(crate) fn signed_bin(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}
