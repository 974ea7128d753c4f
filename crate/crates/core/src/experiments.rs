//! Sign-flip experiments: the positive evidence runs for the dyadic
//! schemes, the power-basis counterexample, and the boundary bound scans.
//!
//! Each experiment is split into a per-trial pure function plus an ordered
//! aggregation, so callers may fan trials out across threads and still get
//! bit-identical reports.

use crate::basis::{boundary_modulus_sq, BasisBank};
use crate::error::{Error, Result};
use crate::grid::BoundaryGrid;
use crate::report::{RatioReport, SamplingMethod};
use crate::scheme::{DyadicIndex, PoleScheme, SchemeKind};
use crate::signal::{lp_norm, BoundarySignal};
use crate::signs::{apply_signs, counter_hash, sign_of, SignPattern};
use crate::tree::{analyze_with_bank, synthesize_with_bank, CoefficientTree};
use crate::{fft::Fft, C64};
use alloc::vec;
use alloc::vec::Vec;

/// Prepared state for one sign-flip experiment on a fixed signal.
pub struct ScrambleContext<'a> {
    tree: CoefficientTree,
    bank: &'a BasisBank,
    raw_norm: f64,
    baseline: f64,
    p: f64,
    seed: u64,
}

impl<'a> ScrambleContext<'a> {
    /// Analyze `f` against the bank's scheme and fix the denominators.
    pub fn new(f: &BoundarySignal, bank: &'a BasisBank, p: f64, seed: u64) -> Result<Self> {
        let tree = analyze_with_bank(f, bank)?;
        let raw_norm = lp_norm(f, p)?;
        if raw_norm == 0.0 {
            return Err(Error::ZeroSequence);
        }
        let identity = synthesize_with_bank(&tree, bank)?;
        let baseline = lp_norm(&identity, p)? / raw_norm;
        Ok(ScrambleContext {
            tree,
            bank,
            raw_norm,
            baseline,
            p,
            seed,
        })
    }

    pub fn tree(&self) -> &CoefficientTree {
        &self.tree
    }

    /// Truncation ratio ||P f||_p / ||f||_p from the all-plus pattern.
    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    /// One trial: draw the pattern, flip, synthesize, take the norm ratio
    /// against the raw signal.
    pub fn trial(&self, trial: u32) -> f64 {
        let pattern = SignPattern::draw(self.seed, trial as u64, self.tree.basis_len());
        let flipped = apply_signs(&self.tree, &pattern).expect("pattern covers tree");
        let g = synthesize_with_bank(&flipped, self.bank).expect("bank covers tree");
        lp_norm(&g, self.p).expect("p validated") / self.raw_norm
    }

    /// Assemble the report from per-trial ratios in trial order.
    pub fn report(&self, ratios: Vec<f64>) -> RatioReport {
        RatioReport::arithmetic(self.p, SamplingMethod::MonteCarlo, ratios)
            .with_baseline(self.baseline)
    }
}

/// Serial driver: analyze, run `n_trials` sign patterns, aggregate.
pub fn scramble_experiment(
    f: &BoundarySignal,
    bank: &BasisBank,
    p: f64,
    n_trials: u32,
    seed: u64,
) -> Result<RatioReport> {
    let ctx = ScrambleContext::new(f, bank, p, seed)?;
    let ratios = (0..n_trials).map(|t| ctx.trial(t)).collect();
    Ok(ctx.report(ratios))
}

/// One row of the power-basis counterexample table.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeScrambleRow {
    pub degree: u32,
    pub lp_norm: f64,
    pub mean_scrambled_norm: f64,
    pub ratio: f64,
}

/// Prepared state for the power-basis counterexample at one exponent.
///
/// The test family is the Dirichlet-type polynomial sum_{k<N} z^k, whose
/// L^p norm grows like N^(1-1/p) while fair-sign scrambles of it sit at
/// the l^2 scale sqrt(N); the ratio trend exposes the unbounded sign
/// operators for p != 2.
pub struct CounterexampleContext {
    grid: BoundaryGrid,
    p: f64,
    seed: u64,
}

impl CounterexampleContext {
    pub fn new(grid: BoundaryGrid, p: f64, seed: u64) -> Result<Self> {
        crate::signal::check_exponent(p)?;
        Ok(CounterexampleContext { grid, p, seed })
    }

    /// Scrambled norm for one (degree, trial) pair.
    pub fn trial_norm(&self, degree: u32, trial: u32) -> Result<f64> {
        let n = self.grid.size();
        if degree as usize > n / 2 {
            return Err(Error::Resolution);
        }
        let mut bins = vec![C64::new(0.0, 0.0); n];
        for (k, bin) in bins.iter_mut().enumerate().take(degree as usize) {
            let w = sign_of(counter_hash(self.seed, trial as u64, (k + 1) as u64));
            *bin = C64::new(w, 0.0);
        }
        Fft::new(self.grid.log2_size()).inverse(&mut bins);
        let g = BoundarySignal::from_analytic_samples(self.grid, bins);
        lp_norm(&g, self.p)
    }

    /// Unscrambled norm of the degree-N family member.
    pub fn base_norm(&self, degree: u32) -> Result<f64> {
        let n = self.grid.size();
        if degree as usize > n / 2 {
            return Err(Error::Resolution);
        }
        let coeffs = vec![C64::new(1.0, 0.0); degree as usize];
        let f = BoundarySignal::from_taylor(self.grid, &coeffs)?;
        lp_norm(&f, self.p)
    }

    pub fn row(&self, degree: u32, trial_norms: &[f64]) -> Result<DegreeScrambleRow> {
        let base = self.base_norm(degree)?;
        let mean = crate::stats::mean(trial_norms);
        Ok(DegreeScrambleRow {
            degree,
            lp_norm: base,
            mean_scrambled_norm: mean,
            ratio: mean / base,
        })
    }
}

/// Serial driver over a degree ladder.
pub fn power_basis_counterexample(
    p: f64,
    degrees: &[u32],
    n_trials: u32,
    seed: u64,
    grid: BoundaryGrid,
) -> Result<Vec<DegreeScrambleRow>> {
    if degrees.is_empty() {
        return Err(Error::DomainError);
    }
    let ctx = CounterexampleContext::new(grid, p, seed)?;
    let mut rows = Vec::with_capacity(degrees.len());
    for &deg in degrees {
        let norms: Result<Vec<f64>> = (0..n_trials).map(|t| ctx.trial_norm(deg, t)).collect();
        rows.push(ctx.row(deg, &norms?)?);
    }
    Ok(rows)
}

/// Per-level boundary bounds from the O(1) closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelBounds {
    pub j: u32,
    /// min over sampled x in a support cell of |B|^2 / 2^j.
    pub lower: f64,
    /// max over sampled x of (sum_k |B_{j,k}|^2) / 2^j.
    pub upper: f64,
}

/// Result of the boundary bound scan.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundScan {
    pub levels: Vec<LevelBounds>,
    /// min of the per-level lower bounds.
    pub lower_est: f64,
    /// max of the per-level upper bounds.
    pub upper_est: f64,
}

/// Scan the two-sided boundary bounds level by level.
///
/// The lower scan samples every support cell; the upper scan exploits the
/// 2^-j translation symmetry of the full pole lattice and samples one cell
/// per level (for the half lattice, an edge cell and an interior cell).
pub fn boundary_bound_scan(kind: SchemeKind, j_max: u32, samples_per_cell: u32) -> Result<BoundScan> {
    if samples_per_cell < 8 {
        return Err(Error::DomainError);
    }
    if kind == SchemeKind::PowerBasis {
        return Err(Error::UnsupportedScheme);
    }
    let scheme = PoleScheme::new(kind, j_max)?;
    let spc = samples_per_cell as usize;
    let mut levels = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let width = kind.level_width(j)? as usize;
        let cell = crate::scheme::exp2_neg(j);
        let weight = (1u64 << j) as f64;

        let mut lower = f64::INFINITY;
        for k in 0..width {
            let idx = DyadicIndex::new(j, k as u32);
            let left = cell * k as f64;
            for t in 0..spc {
                let x = left + cell * t as f64 / spc as f64;
                let v = boundary_modulus_sq(&scheme, idx, x)? / weight;
                if v < lower {
                    lower = v;
                }
            }
        }

        let probe_cells: &[usize] = match kind {
            SchemeKind::Case1 => &[0],
            _ => &[0, width / 2],
        };
        let mut upper = f64::NEG_INFINITY;
        for &pc in probe_cells {
            for t in 0..spc {
                let x = cell * (pc as f64 + t as f64 / spc as f64);
                let mut sum = 0.0;
                for k in 0..width {
                    sum += boundary_modulus_sq(&scheme, DyadicIndex::new(j, k as u32), x)?;
                }
                let v = sum / weight;
                if v > upper {
                    upper = v;
                }
            }
        }
        levels.push(LevelBounds { j, lower, upper });
    }
    let lower_est = levels.iter().map(|l| l.lower).fold(f64::INFINITY, f64::min);
    let upper_est = levels
        .iter()
        .map(|l| l.upper)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundScan {
        levels,
        lower_est,
        upper_est,
    })
}
