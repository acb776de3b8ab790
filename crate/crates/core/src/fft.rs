//! Radix-2 complex FFT and its tensor-product extension to d-dimensional
//! row-major arrays.
//!
//! Unnormalized in both directions: `forward` computes
//! `F[k] = Σ_j f[j] e^{-2πi jk/n}` and `inverse` the conjugate sum.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Precomputed twiddles and bit-reversal table for one transform length.
#[derive(Clone, Debug)]
pub struct Fft {
    n: usize,
    twiddles: Vec<Complex64>,
    rev: Vec<usize>,
}

impl Fft {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let bits = n.trailing_zeros();
        let rev = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        // Each twiddle evaluated directly rather than by repeated rotation.
        let twiddles = (0..n / 2)
            .map(|k| {
                let a = -2.0 * core::f64::consts::PI * k as f64 / n as f64;
                Complex64::new(libm::cos(a), libm::sin(a))
            })
            .collect();
        Ok(Self { n, twiddles, rev })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        debug_assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.rev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

/// Transform every axis of a row-major `n^d` array in place.
pub fn transform_nd(plan: &Fft, d: usize, data: &mut [Complex64], inverse: bool) {
    let n = plan.len();
    debug_assert_eq!(data.len(), n.pow(d as u32));
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..d {
        // Stride between consecutive entries along `axis`.
        let stride = n.pow((d - 1 - axis) as u32);
        let block = stride * n;
        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                plan.run(&mut line, inverse);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let a = -2.0 * core::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                        v * Complex64::new(libm::cos(a), libm::sin(a))
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(Fft::new(12).unwrap_err(), Error::NotPowerOfTwo(12));
    }

    #[test]
    fn matches_naive_dft() {
        for n in [1usize, 2, 4, 16, 64] {
            let x: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(libm::sin(i as f64 * 0.7), libm::cos(i as f64 * 1.3)))
                .collect();
            let mut y = x.clone();
            Fft::new(n).unwrap().forward(&mut y);
            for (a, b) in y.iter().zip(naive_dft(&x)) {
                assert!((a - b).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn round_trip_2d() {
        let n = 8;
        let plan = Fft::new(n).unwrap();
        let x: Vec<Complex64> = (0..n * n).map(|i| Complex64::new(i as f64, -(i as f64) / 3.0)).collect();
        let mut y = x.clone();
        transform_nd(&plan, 2, &mut y, false);
        transform_nd(&plan, 2, &mut y, true);
        for (a, b) in y.iter().zip(&x) {
            assert!((a / (n * n) as f64 - b).norm() < 1e-12);
        }
    }
}
