//! In-place iterative radix-2 FFT for power-of-two lengths, plus 2-D and
//! frequency-grid helpers.
//!
//! Convention: `forward` computes `X_k = Σ_j x_j e^{-2πi jk/N}`, `inverse`
//! computes `x_j = (1/N) Σ_k X_k e^{2πi jk/N}`.

use crate::util::prelude::*;
use core::f64::consts::PI;
use num_complex::Complex64;

fn bit_reverse(data: &mut [Complex64]) {
    let n = data.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
}

fn transform(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two, got {n}");
    if n <= 1 {
        return;
    }
    bit_reverse(data);
    let mut len = 2;
    while len <= n {
        let angle = sign * 2.0 * PI / len as f64;
        let half = len / 2;
        // twiddles computed directly per stage keep the rounding error O(log n)
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| Complex64::from_polar(1.0, angle * k as f64))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let a = data[start + k];
                let b = data[start + k + half] * twiddles[k];
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

pub fn forward(data: &mut [Complex64]) {
    transform(data, -1.0);
}

pub fn inverse(data: &mut [Complex64]) {
    transform(data, 1.0);
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Row-major 2-D transform over a `rows × cols` array.
pub fn forward_2d(data: &mut [Complex64], rows: usize, cols: usize) {
    transform_2d(data, rows, cols, false);
}

pub fn inverse_2d(data: &mut [Complex64], rows: usize, cols: usize) {
    transform_2d(data, rows, cols, true);
}

fn transform_2d(data: &mut [Complex64], rows: usize, cols: usize, inv: bool) {
    assert_eq!(data.len(), rows * cols);
    let run = |d: &mut [Complex64]| if inv { inverse(d) } else { forward(d) };
    for r in 0..rows {
        run(&mut data[r * cols..(r + 1) * cols]);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        run(&mut column);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
}

/// Angular frequency of FFT bin `k` for `n` samples at spacing `h`.
pub fn angular_frequency(k: usize, n: usize, h: f64) -> f64 {
    let signed = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
    2.0 * PI * signed / (n as f64 * h)
}

/// Nyquist angular frequency `π/h`.
pub fn nyquist(h: f64) -> f64 {
    PI / h
}

/// Plain O(N²) DFT with the same convention as [`forward`]. Reference only.
pub fn naive_dft(data: &[Complex64]) -> Vec<Complex64> {
    let n = data.len();
    (0..n)
        .map(|k| {
            data.iter()
                .enumerate()
                .map(|(j, v)| {
                    v * Complex64::from_polar(1.0, -2.0 * PI * (j * k % n) as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_naive_dft(values in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64)) {
            let data: Vec<Complex64> = values.iter().map(|(a, b)| Complex64::new(*a, *b)).collect();
            let mut fast = data.clone();
            forward(&mut fast);
            let slow = naive_dft(&data);
            for (a, b) in fast.iter().zip(&slow) {
                prop_assert!((a - b).norm() < 1e-12);
            }
            inverse(&mut fast);
            for (a, b) in fast.iter().zip(&data) {
                prop_assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn two_dimensional_round_trip() {
        let mut data: Vec<Complex64> =
            (0..32).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let orig = data.clone();
        forward_2d(&mut data, 4, 8);
        inverse_2d(&mut data, 4, 8);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn frequencies_wrap_at_half() {
        assert_eq!(angular_frequency(0, 8, 1.0), 0.0);
        assert!(angular_frequency(5, 8, 1.0) < 0.0);
    }
}
