//! Moment equivalence for fair-sign sums.
//!
//! For a finite coefficient sequence α and i.i.d. fair signs ω, all L^p
//! moments of S(ω) = Σ α_λ ω_λ are comparable to the l^2 norm of α. This
//! module estimates the ratio
//!
//! ```text
//!     (E |S(ω)|^p)^(1/p) / (Σ |α_λ|^2)^(1/2)
//! ```
//!
//! exhaustively for short sequences and by seeded Monte-Carlo otherwise.

use crate::error::{Error, Result};
use crate::report::{RatioReport, SamplingMethod};
use crate::signs::{counter_hash, sign_of};
use crate::stats::kahan_sum;
use crate::C64;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// Sequences up to this length are enumerated over all 2^len patterns.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Estimate the moment ratio for `alpha` at exponent `p` in (0, inf).
///
/// Per-trial records hold |S(ω)| / ||α||_2; the aggregate is the p-th
/// power mean of those records. A single-coefficient sequence yields
/// ratio 1 exactly.
pub fn khintchine_ratio(alpha: &[C64], p: f64, n_trials: u32, seed: u64) -> Result<RatioReport> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::ParameterOutOfRange);
    }
    if alpha.is_empty() {
        return Err(Error::ZeroSequence);
    }
    let l2_sq = kahan_sum(alpha.iter().map(|a| a.norm_sqr()));
    if l2_sq == 0.0 {
        return Err(Error::ZeroSequence);
    }
    let l2 = l2_sq.sqrt();
    let n = alpha.len();
    if n <= EXHAUSTIVE_LIMIT {
        let count = 1u64 << n;
        let mut ratios = Vec::with_capacity(count as usize);
        for pattern in 0..count {
            let mut s = C64::new(0.0, 0.0);
            for (i, a) in alpha.iter().enumerate() {
                if pattern >> i & 1 == 0 {
                    s += a;
                } else {
                    s -= a;
                }
            }
            // same sqrt path as l2 so one-term sequences divide exactly
            ratios.push(s.norm_sqr().sqrt() / l2);
        }
        Ok(RatioReport::power_mean(p, SamplingMethod::Exhaustive, ratios))
    } else {
        if n_trials == 0 {
            return Err(Error::DomainError);
        }
        let mut ratios = Vec::with_capacity(n_trials as usize);
        for trial in 0..n_trials as u64 {
            let mut s = C64::new(0.0, 0.0);
            for (i, a) in alpha.iter().enumerate() {
                let w = sign_of(counter_hash(seed, trial, (i + 1) as u64));
                s += a * w;
            }
            ratios.push(s.norm_sqr().sqrt() / l2);
        }
        Ok(RatioReport::power_mean(p, SamplingMethod::MonteCarlo, ratios))
    }
}

/// Complex standard Gaussian draw keyed by (seed, stream, counter).
pub fn complex_gaussian(seed: u64, stream: u64, counter: u64) -> C64 {
    let u1 = crate::signs::uniform01(counter_hash(seed, stream, 2 * counter));
    let u2 = crate::signs::uniform01(counter_hash(seed, stream, 2 * counter + 1));
    // Box-Muller, unit total variance split across re/im
    let r = (-(1.0 - u1).ln()).sqrt();
    let theta = core::f64::consts::TAU * u2;
    C64::from_polar(r, theta)
}
