//! Evaluation of the rational orthogonal basis.
//!
//! The `m`-th basis function is a normalized reproducing-kernel factor at
//! the `m`-th pole times the Möbius factors of all earlier poles:
//!
//! ```text
//!     B_m(z) = sqrt(1 - |a_m|^2) / (1 - conj(a_m) z)
//!              * prod_{l < m} (z - a_l) / (1 - conj(a_l) z)
//! ```
//!
//! Head poles sit at the origin, so their Möbius factors degenerate to `z`
//! and the power basis reduces to plain monomials. All factors are
//! unimodular on the unit circle, which gives the O(1) closed form for the
//! boundary modulus used by the bound scans.

use crate::error::{Error, Result};
use crate::grid::BoundaryGrid;
use crate::scheme::{exp2_neg, DyadicIndex, Pole, PoleScheme, SchemeKind};
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// Normalized reproducing-kernel factor at `a`, evaluated at `z` (|z| <= 1).
pub fn szego_kernel(a: &Pole, z: C64) -> C64 {
    let av = a.value();
    let num = (1.0 - a.radius() * a.radius()).sqrt();
    num / (C64::new(1.0, 0.0) - av.conj() * z)
}

/// Single Möbius factor (z - a) / (1 - conj(a) z); unimodular for |z| = 1.
pub fn blaschke_factor(a: &Pole, z: C64) -> C64 {
    let av = a.value();
    (z - av) / (C64::new(1.0, 0.0) - av.conj() * z)
}

/// Evaluate the `m`-th basis function (1-based) of a scheme at `z`.
///
/// Runs the length-(m-1) Möbius product in enumeration order; costs O(m).
/// For whole-grid work prefer [`scan_basis`] or [`BasisBank`], which share
/// the running product across all `m`.
pub fn tm_basis_eval(scheme: &PoleScheme, m: u64, z: C64) -> Result<C64> {
    if m == 0 {
        return Err(Error::DomainError);
    }
    if let Some(cap) = scheme.capacity() {
        if m > cap {
            return Err(Error::IndexOutOfRange);
        }
    }
    let mut prod = C64::new(1.0, 0.0);
    for l in 1..m {
        prod *= blaschke_factor(&scheme.pole_of_linear(l)?, z);
    }
    Ok(szego_kernel(&scheme.pole_of_linear(m)?, z) * prod)
}

/// |B_{j,k}|^2 on the boundary via the closed form, O(1) per point.
///
/// Because every Möbius factor has modulus one on the circle, only the
/// kernel factor survives:
///
/// ```text
///     |B_{j,k}(e^{2πix})|^2 = 2^-j / ((1-r)^2 + 4 r sin^2(π(x - h)))
/// ```
///
/// with 1 - r^2 = 2^-j exact and 1 - r = 2^-j/(1+r) to avoid cancellation.
pub fn boundary_modulus_sq(scheme: &PoleScheme, idx: DyadicIndex, x: f64) -> Result<f64> {
    let pole = scheme.pole_of(idx)?;
    let two_neg_j = exp2_neg(idx.j);
    let gap = two_neg_j / (1.0 + pole.radius());
    let s = (PI * (x - pole.turn())).sin();
    Ok(two_neg_j / (gap * gap + 4.0 * pole.radius() * s * s))
}

/// Partial sum of boundary gaps sum_{m<=count} (1 - |a_m|).
///
/// Divergence of the full series is the density condition for the system
/// to span the whole space; this reports the finite prefix.
pub fn nonseparability_partial_sum(scheme: &PoleScheme, count: u64) -> Result<f64> {
    if let Some(cap) = scheme.capacity() {
        if count > cap {
            return Err(Error::IndexOutOfRange);
        }
    }
    let mut sum = 0.0;
    for m in 1..=count {
        sum += scheme.pole_of_linear(m)?.boundary_gap();
    }
    Ok(sum)
}

/// Per-level contribution 2^j (1 - r_j) to the gap sum, in closed form.
pub fn level_gap_contribution(j: u32) -> f64 {
    let two_neg_j = exp2_neg(j);
    let r = (1.0 - two_neg_j).sqrt();
    (1u64 << j) as f64 * (two_neg_j / (1.0 + r))
}

/// Stream the first `m_max` basis functions over a boundary grid.
///
/// The visitor receives `(m, row)` with `row[n] = B_m(e^{2πi n/N})`. A
/// single running Möbius product is shared across all `m`, so the whole
/// scan costs O(m_max · N) rather than O(m_max^2 · N).
pub fn scan_basis<F>(scheme: &PoleScheme, m_max: u64, grid: &BoundaryGrid, mut visit: F) -> Result<()>
where
    F: FnMut(u64, &[C64]),
{
    if m_max == 0 {
        return Err(Error::DomainError);
    }
    if let Some(cap) = scheme.capacity() {
        if m_max > cap {
            return Err(Error::IndexOutOfRange);
        }
    }
    let nodes = grid.unit_circle_nodes();
    let n = nodes.len();
    let mut prod = vec![C64::new(1.0, 0.0); n];
    let mut row = vec![C64::new(0.0, 0.0); n];
    for m in 1..=m_max {
        let pole = scheme.pole_of_linear(m)?;
        let av = pole.value();
        let ac = av.conj();
        let num = (1.0 - pole.radius() * pole.radius()).sqrt();
        for i in 0..n {
            let denom = C64::new(1.0, 0.0) - ac * nodes[i];
            row[i] = prod[i] * (num / denom);
            // fold this pole's Möbius factor in for the next index
            prod[i] *= (nodes[i] - av) / denom;
        }
        visit(m, &row);
    }
    Ok(())
}

/// The first `m_max` basis functions materialized on a grid.
///
/// Rows are stored in enumeration order; memory is `m_max * N` complex
/// samples, so keep depths modest on fine grids.
pub struct BasisBank {
    scheme: PoleScheme,
    grid: BoundaryGrid,
    rows: Vec<Vec<C64>>,
}

impl BasisBank {
    pub fn build(scheme: PoleScheme, m_max: u64, grid: BoundaryGrid) -> Result<Self> {
        let mut rows = Vec::with_capacity(m_max as usize);
        scan_basis(&scheme, m_max, &grid, |_, row| rows.push(row.to_vec()))?;
        Ok(BasisBank { scheme, grid, rows })
    }

    /// Bank over the complete dyadic range through `j_cap` levels.
    pub fn for_depth(kind: SchemeKind, j_cap: u32, grid: BoundaryGrid) -> Result<Self> {
        let scheme = PoleScheme::new(kind, j_cap)?;
        let m_max = scheme.capacity().ok_or(Error::UnsupportedScheme)?;
        Self::build(scheme, m_max, grid)
    }

    pub fn scheme(&self) -> &PoleScheme {
        &self.scheme
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn len(&self) -> u64 {
        self.rows.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Samples of the `m`-th basis function (1-based).
    pub fn row(&self, m: u64) -> Result<&[C64]> {
        self.rows
            .get(m.checked_sub(1).ok_or(Error::DomainError)? as usize)
            .map(|r| r.as_slice())
            .ok_or(Error::IndexOutOfRange)
    }
}
