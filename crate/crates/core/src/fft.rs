//! Radix-2 FFT for power-of-two grids.
//!
//! Grids in this crate are powers of two by construction, so a plain
//! iterative Cooley-Tukey transform with a precomputed twiddle table covers
//! every use. Twiddles are evaluated directly (no recurrences) to keep the
//! roundoff at the few-ulp level the Plancherel tests demand.

use crate::C64;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// A transform plan for a fixed power-of-two length.
pub struct Fft {
    log2n: u32,
    // e^{-2πi k/N} for k < N/2
    twiddles: Vec<C64>,
}

impl Fft {
    pub fn new(log2n: u32) -> Self {
        assert!(log2n <= 30, "transform length out of range");
        let n = 1usize << log2n;
        let twiddles = (0..n / 2)
            .map(|k| {
                let theta = -core::f64::consts::TAU * k as f64 / n as f64;
                let (s, c) = theta.sin_cos();
                C64::new(c, s)
            })
            .collect();
        Fft { log2n, twiddles }
    }

    pub fn len(&self) -> usize {
        1usize << self.log2n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// In-place unnormalized DFT: X_q = sum_n x_n e^{-2πiqn/N}.
    pub fn forward(&self, buf: &mut [C64]) {
        self.transform(buf, false);
    }

    /// In-place unnormalized inverse: x_n = sum_q X_q e^{+2πiqn/N}.
    ///
    /// `inverse(forward(x)) = N * x`; callers scale as needed.
    pub fn inverse(&self, buf: &mut [C64]) {
        self.transform(buf, true);
    }

    fn transform(&self, buf: &mut [C64], conjugate: bool) {
        let n = self.len();
        assert_eq!(buf.len(), n, "buffer length does not match plan");
        if n == 1 {
            return;
        }
        // bit-reversal permutation
        let shift = 64 - self.log2n;
        for i in 0..n {
            let j = (i as u64).reverse_bits() >> shift;
            let j = j as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2usize;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * step];
                    if conjugate {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}
