//! Boundary signals: samples on a dyadic grid with Fourier access.
//!
//! A signal is immutable after construction. The spectrum is either cached
//! at construction (when it is known or cheap to certify) or computed on
//! demand; either way the sample values are the source of truth.
//!
//! "Analytic" means the spectrum is numerically one-sided: the energy in
//! negative frequencies is at most 1e-16 of the total.

use crate::error::{Error, Result};
use crate::fft::Fft;
use crate::grid::BoundaryGrid;
use crate::stats::kahan_sum;
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// Relative negative-frequency energy below which a signal counts as
/// analytic.
pub const ANALYTIC_ENERGY_TOL: f64 = 1e-16;

#[derive(Debug, Clone)]
pub struct BoundarySignal {
    grid: BoundaryGrid,
    values: Vec<C64>,
    spectrum: Option<Vec<C64>>,
    analytic: bool,
}

impl BoundarySignal {
    /// Build from raw samples; runs one FFT to cache the spectrum and
    /// decide the analytic flag.
    pub fn from_samples(grid: BoundaryGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::GridMismatch);
        }
        let spectrum = spectrum_of(&values, grid);
        let analytic = one_sided(&spectrum);
        Ok(BoundarySignal {
            grid,
            values,
            spectrum: Some(spectrum),
            analytic,
        })
    }

    /// Build from spectrum bins in FFT order (bin q holds frequency q for
    /// q < N/2, q - N otherwise).
    pub fn from_spectrum(grid: BoundaryGrid, bins: Vec<C64>) -> Result<Self> {
        if bins.len() != grid.size() {
            return Err(Error::GridMismatch);
        }
        let analytic = one_sided(&bins);
        let mut values = bins.clone();
        Fft::new(grid.log2_size()).inverse(&mut values);
        Ok(BoundarySignal {
            grid,
            values,
            spectrum: Some(bins),
            analytic,
        })
    }

    /// Build from a one-sided Taylor coefficient sequence c_0..c_{K-1},
    /// i.e. samples of sum_k c_k z^k on the grid.
    ///
    /// The length is capped at N/2 so the spectrum stays one-sided under
    /// the symmetric frequency convention.
    pub fn from_taylor(grid: BoundaryGrid, coeffs: &[C64]) -> Result<Self> {
        let n = grid.size();
        if coeffs.is_empty() {
            return Err(Error::DomainError);
        }
        if coeffs.len() > n / 2 {
            return Err(Error::Resolution);
        }
        let mut bins = vec![C64::new(0.0, 0.0); n];
        bins[..coeffs.len()].copy_from_slice(coeffs);
        Self::from_spectrum(grid, bins)
    }

    /// Real-valued samples (maximal functions, square-function levels).
    /// No spectrum is computed; the signal is not flagged analytic.
    pub fn from_real_samples(grid: BoundaryGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::GridMismatch);
        }
        Ok(BoundarySignal {
            grid,
            values: values.into_iter().map(|v| C64::new(v, 0.0)).collect(),
            spectrum: None,
            analytic: false,
        })
    }

    /// Samples that are known by construction to come from an analytic
    /// function (finite combinations of basis functions). Skips the FFT.
    pub(crate) fn from_analytic_samples(grid: BoundaryGrid, values: Vec<C64>) -> Self {
        debug_assert_eq!(values.len(), grid.size());
        BoundarySignal {
            grid,
            values,
            spectrum: None,
            analytic: true,
        }
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_analytic(&self) -> bool {
        self.analytic
    }

    /// Fourier coefficients with symmetric indexing -N/2 <= nu < N/2.
    ///
    /// Returns the cached spectrum when one was computed at construction,
    /// otherwise runs one FFT.
    pub fn fourier_coefficients(&self) -> Spectrum {
        let bins = match &self.spectrum {
            Some(b) => b.clone(),
            None => spectrum_of(&self.values, self.grid),
        };
        Spectrum { bins }
    }
}

fn spectrum_of(values: &[C64], grid: BoundaryGrid) -> Vec<C64> {
    let mut buf = values.to_vec();
    Fft::new(grid.log2_size()).forward(&mut buf);
    let scale = 1.0 / grid.size() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
    buf
}

fn one_sided(bins: &[C64]) -> bool {
    let n = bins.len();
    let total: f64 = kahan_sum(bins.iter().map(|c| c.norm_sqr()));
    if total == 0.0 {
        return true;
    }
    // negative frequencies occupy bins (N/2..N); bin N/2 is -N/2
    let neg: f64 = kahan_sum(bins[n / 2..].iter().map(|c| c.norm_sqr()));
    neg <= ANALYTIC_ENERGY_TOL * total
}

/// Fourier coefficients of a signal, indexed by signed frequency.
#[derive(Debug, Clone)]
pub struct Spectrum {
    bins: Vec<C64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Coefficient at signed frequency nu, for -N/2 <= nu < N/2.
    pub fn at(&self, nu: i64) -> C64 {
        let n = self.bins.len() as i64;
        assert!(nu >= -n / 2 && nu < n / 2, "frequency out of range");
        let q = if nu >= 0 { nu } else { nu + n } as usize;
        self.bins[q]
    }

    /// Raw bins in FFT order.
    pub fn bins(&self) -> &[C64] {
        &self.bins
    }

    pub fn total_energy(&self) -> f64 {
        kahan_sum(self.bins.iter().map(|c| c.norm_sqr()))
    }

    pub fn negative_energy(&self) -> f64 {
        let n = self.bins.len();
        kahan_sum(self.bins[n / 2..].iter().map(|c| c.norm_sqr()))
    }
}

/// Boundary pairing (1/N) sum_n f(x_n) conj(g(x_n)).
///
/// The rectangle rule on a uniform periodic grid; spectrally accurate for
/// smooth periodic integrands. Conjugate-symmetric and linear in `f`.
pub fn inner_product(f: &BoundarySignal, g: &BoundarySignal) -> Result<C64> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    Ok(raw_inner_product(&f.values, &g.values))
}

/// The same pairing on raw sample slices of equal length.
pub fn raw_inner_product(f: &[C64], g: &[C64]) -> C64 {
    assert_eq!(f.len(), g.len(), "sample slices must match");
    let re = kahan_sum(f.iter().zip(g).map(|(a, b)| a.re * b.re + a.im * b.im));
    let im = kahan_sum(f.iter().zip(g).map(|(a, b)| a.im * b.re - a.re * b.im));
    let scale = 1.0 / f.len() as f64;
    C64::new(re * scale, im * scale)
}

/// Grid L^p norm ((1/N) sum |f|^p)^(1/p) for p in (1, inf).
pub fn lp_norm(f: &BoundarySignal, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_of_modulus_sq(f.values.iter().map(|v| v.norm_sqr()), f.len(), p))
}

/// Shared kernel: L^p mean of sqrt(modulus squared) values.
pub(crate) fn lp_of_modulus_sq<I: IntoIterator<Item = f64>>(sq: I, n: usize, p: f64) -> f64 {
    let half_p = 0.5 * p;
    let sum = kahan_sum(sq.into_iter().map(|m| m.powf(half_p)));
    (sum / n as f64).powf(1.0 / p)
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange)
    }
}
