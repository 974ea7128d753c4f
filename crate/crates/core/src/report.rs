//! Aggregated ratio statistics for randomized experiments.

use crate::stats::{mean, sample_std};
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// How the trial set was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMethod {
    /// Every sign pattern enumerated.
    Exhaustive,
    /// Seeded Monte-Carlo draws.
    MonteCarlo,
}

/// Summary of per-trial ratios from one experiment.
///
/// `mean_ratio` is the aggregation each operation documents: the sign-flip
/// experiments use the arithmetic mean of per-trial ratios, while the
/// moment-equivalence estimate uses the p-th power mean, matching the
/// functional it approximates. `baseline_ratio` is set where an unsigned
/// reference run is meaningful (the truncation ratio for sign-flip runs).
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub p: f64,
    pub n_trials: u32,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub std_error: Option<f64>,
    pub baseline_ratio: Option<f64>,
    pub method: SamplingMethod,
    /// Per-trial records in trial order.
    pub ratios: Vec<f64>,
}

impl RatioReport {
    /// Aggregate with the arithmetic mean.
    pub fn arithmetic(p: f64, method: SamplingMethod, ratios: Vec<f64>) -> Self {
        let (min, max) = min_max(&ratios);
        let m = mean(&ratios);
        let std_error = match method {
            SamplingMethod::MonteCarlo if ratios.len() > 1 => {
                Some(sample_std(&ratios) / (ratios.len() as f64).sqrt())
            }
            _ => None,
        };
        RatioReport {
            p,
            n_trials: ratios.len() as u32,
            min_ratio: min,
            max_ratio: max,
            mean_ratio: m,
            std_error,
            baseline_ratio: None,
            method,
            ratios,
        }
    }

    /// Aggregate with the p-th power mean (mean of ratios^p, then 1/p root).
    pub fn power_mean(p: f64, method: SamplingMethod, ratios: Vec<f64>) -> Self {
        let (min, max) = min_max(&ratios);
        let powered: Vec<f64> = ratios.iter().map(|r| r.powf(p)).collect();
        let mp = mean(&powered);
        let agg = mp.powf(1.0 / p);
        // delta-method error bar for the root of the estimated moment
        let std_error = match method {
            SamplingMethod::MonteCarlo if ratios.len() > 1 => {
                let se_mp = sample_std(&powered) / (powered.len() as f64).sqrt();
                Some(se_mp * agg.powf(1.0 - p) / p)
            }
            _ => None,
        };
        RatioReport {
            p,
            n_trials: ratios.len() as u32,
            min_ratio: min,
            max_ratio: max,
            mean_ratio: agg,
            std_error,
            baseline_ratio: None,
            method,
            ratios,
        }
    }

    pub fn with_baseline(mut self, baseline: f64) -> Self {
        self.baseline_ratio = Some(baseline);
        self
    }
}

fn min_max(values: &[f64]) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    (min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ordering_invariant() {
        let r = RatioReport::arithmetic(2.0, SamplingMethod::MonteCarlo, vec![0.5, 1.5, 1.0]);
        assert!(r.min_ratio <= r.mean_ratio && r.mean_ratio <= r.max_ratio);
        assert_eq!(r.n_trials, 3);
        assert!(r.std_error.is_some());
    }

    #[test]
    fn power_mean_dominates_arithmetic_for_large_p() {
        let vals = vec![0.5, 2.0, 1.0, 1.3];
        let a = RatioReport::arithmetic(4.0, SamplingMethod::Exhaustive, vals.clone());
        let q = RatioReport::power_mean(4.0, SamplingMethod::Exhaustive, vals);
        assert!(q.mean_ratio >= a.mean_ratio);
        assert!(q.mean_ratio <= q.max_ratio + 1e-15);
        assert!(q.std_error.is_none());
    }
}
