//! Equivalent norms built from analysis coefficients: the dyadic
//! square-function norm, its kernel-weighted variant, and the per-level
//! square-function stacks.

use crate::basis::boundary_modulus_sq;
use crate::error::{Error, Result};
use crate::grid::BoundaryGrid;
use crate::scheme::{exp2_neg, DyadicIndex};
use crate::signal::{check_exponent, lp_of_modulus_sq, BoundarySignal};
use crate::tree::CoefficientTree;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// Head moduli |f1| (+ |f2|) that prefix every equivalent norm.
fn head_term(tree: &CoefficientTree) -> f64 {
    tree.head1().norm() + tree.head2().map_or(0.0, |h| h.norm())
}

/// Square-function norm: heads + || (sum_{j,k} 2^j |c_{j,k}|^2 χ_{j,k})^(1/2) ||_p.
///
/// The indicator sum is piecewise constant on the cells of the deepest
/// level, so the integral is evaluated exactly on those cells; the only
/// floating error left is in the coefficients themselves.
pub fn hp_square_norm(tree: &CoefficientTree, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let j_max = tree.j_max();
    let n_cells = 1usize << j_max;
    let mut cell_sq = vec![0.0f64; n_cells];
    for j in 1..=j_max {
        let weight = (1u64 << j) as f64;
        let shift = j_max - j;
        for (k, c) in tree.level(j)?.iter().enumerate() {
            let sq = weight * c.norm_sqr();
            if sq == 0.0 {
                continue;
            }
            let start = k << shift;
            for cell in &mut cell_sq[start..start + (1usize << shift)] {
                *cell += sq;
            }
        }
    }
    Ok(head_term(tree) + lp_of_modulus_sq(cell_sq.iter().copied(), n_cells, p))
}

/// Pointwise kernel-weighted profile sum_{j,k} |c_{j,k}|^2 |B_{j,k}|^2 on
/// the grid, via the O(1) closed form per term.
///
/// Shared by [`np_functional`] for all exponents; callers evaluating
/// several `p` values compute it once.
pub fn np_profile(tree: &CoefficientTree, grid: &BoundaryGrid) -> Result<Vec<f64>> {
    if !grid.resolves_level(tree.j_max()) {
        return Err(Error::Resolution);
    }
    let scheme = tree.scheme();
    let n = grid.size();
    let mut acc = vec![0.0f64; n];
    for j in 1..=tree.j_max() {
        for (k, c) in tree.level(j)?.iter().enumerate() {
            let sq = c.norm_sqr();
            if sq == 0.0 {
                continue;
            }
            let idx = DyadicIndex::new(j, k as u32);
            for (i, slot) in acc.iter_mut().enumerate() {
                *slot += sq * boundary_modulus_sq(&scheme, idx, grid.node(i))?;
            }
        }
    }
    Ok(acc)
}

/// Heads + L^p norm of the square root of a kernel-weighted profile.
pub fn np_from_profile(tree: &CoefficientTree, profile: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(head_term(tree) + lp_of_modulus_sq(profile.iter().copied(), profile.len(), p))
}

/// Kernel-weighted variant: the indicator weight 2^j χ is replaced by the
/// boundary modulus |B_{j,k}|^2, evaluated on the grid via the closed form.
pub fn np_functional(tree: &CoefficientTree, p: f64, grid: &BoundaryGrid) -> Result<f64> {
    let profile = np_profile(tree, grid)?;
    np_from_profile(tree, &profile, p)
}

/// Per-level square-function signals.
///
/// `levels[j-1]` is the piecewise-constant 2^{j/2}|c_{j,k}| χ profile;
/// `weighted_levels[j-1]` replaces the indicator by the boundary modulus.
pub struct SquareFunctionStack {
    grid: BoundaryGrid,
    head_term: f64,
    levels: Vec<BoundarySignal>,
    weighted_levels: Vec<BoundarySignal>,
}

/// Materialize the stacks for a tree on a grid.
pub fn square_stack(tree: &CoefficientTree, grid: &BoundaryGrid) -> Result<SquareFunctionStack> {
    if !grid.resolves_level(tree.j_max()) {
        return Err(Error::Resolution);
    }
    let scheme = tree.scheme();
    let n = grid.size();
    let mut levels = Vec::with_capacity(tree.j_max() as usize);
    let mut weighted = Vec::with_capacity(tree.j_max() as usize);
    for j in 1..=tree.j_max() {
        let amp = ((1u64 << j) as f64).sqrt();
        let cell_width = exp2_neg(j);
        let coeffs = tree.level(j)?;
        let mut flat = vec![0.0f64; n];
        let mut kernel = vec![0.0f64; n];
        for (i, slot) in flat.iter_mut().enumerate() {
            let x = grid.node(i);
            let k = (x / cell_width) as usize;
            if k < coeffs.len() {
                *slot = amp * coeffs[k].norm();
            }
        }
        for (k, c) in coeffs.iter().enumerate() {
            let sq = c.norm_sqr();
            if sq == 0.0 {
                continue;
            }
            let idx = DyadicIndex::new(j, k as u32);
            for (i, slot) in kernel.iter_mut().enumerate() {
                *slot += sq * boundary_modulus_sq(&scheme, idx, grid.node(i))?;
            }
        }
        levels.push(BoundarySignal::from_real_samples(*grid, flat)?);
        weighted.push(BoundarySignal::from_real_samples(*grid, kernel)?);
    }
    Ok(SquareFunctionStack {
        grid: *grid,
        head_term: head_term(tree),
        levels,
        weighted_levels: weighted,
    })
}

impl SquareFunctionStack {
    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn head_term(&self) -> f64 {
        self.head_term
    }

    /// Level profile (1-based).
    pub fn level(&self, j: u32) -> &BoundarySignal {
        &self.levels[(j - 1) as usize]
    }

    /// Kernel-weighted level profile (1-based).
    pub fn weighted_level(&self, j: u32) -> &BoundarySignal {
        &self.weighted_levels[(j - 1) as usize]
    }

    /// Pointwise square function (sum_j |f_j|^2)^(1/2).
    pub fn square_function(&self) -> BoundarySignal {
        let n = self.grid.size();
        let mut acc = vec![0.0f64; n];
        for level in &self.levels {
            for (a, v) in acc.iter_mut().zip(level.values()) {
                *a += v.re * v.re;
            }
        }
        let vals = acc.into_iter().map(|s| s.sqrt()).collect();
        BoundarySignal::from_real_samples(self.grid, vals).expect("same grid")
    }

    /// Pointwise kernel-weighted square function (sum_j bf_j)^(1/2).
    pub fn weighted_square_function(&self) -> BoundarySignal {
        let n = self.grid.size();
        let mut acc = vec![0.0f64; n];
        for level in &self.weighted_levels {
            for (a, v) in acc.iter_mut().zip(level.values()) {
                *a += v.re;
            }
        }
        let vals = acc.into_iter().map(|s| s.sqrt()).collect();
        BoundarySignal::from_real_samples(self.grid, vals).expect("same grid")
    }

    /// Heads + grid L^p norm of the square function; agrees with
    /// [`hp_square_norm`] up to summation grouping.
    pub fn square_norm(&self, p: f64) -> Result<f64> {
        let sf = self.square_function();
        let sq = sf.values().iter().map(|v| v.re * v.re);
        check_exponent(p)?;
        Ok(self.head_term + lp_of_modulus_sq(sq, self.grid.size(), p))
    }
}
