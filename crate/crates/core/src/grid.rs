//! Uniform dyadic grids on the circle [0, 1).

use crate::error::{Error, Result};
use crate::C64;
use alloc::vec::Vec;

/// A uniform grid of N = 2^J nodes x_n = n/N on the circle.
///
/// Nodes are exactly representable dyadic fractions. J is capped below at 4
/// (coarser grids resolve nothing useful) and above to keep allocations
/// sane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryGrid {
    log2_size: u32,
}

impl BoundaryGrid {
    pub const MIN_LOG2: u32 = 4;
    pub const MAX_LOG2: u32 = 26;

    pub fn new(log2_size: u32) -> Result<Self> {
        if (Self::MIN_LOG2..=Self::MAX_LOG2).contains(&log2_size) {
            Ok(BoundaryGrid { log2_size })
        } else {
            Err(Error::InvalidGrid)
        }
    }

    pub fn log2_size(&self) -> u32 {
        self.log2_size
    }

    pub fn size(&self) -> usize {
        1usize << self.log2_size
    }

    /// The n-th node n/N, exact.
    pub fn node(&self, n: usize) -> f64 {
        n as f64 / self.size() as f64
    }

    /// e^{2πi n/N} for all nodes.
    pub fn unit_circle_nodes(&self) -> Vec<C64> {
        let n = self.size();
        (0..n)
            .map(|i| C64::from_polar(1.0, core::f64::consts::TAU * self.node(i)))
            .collect()
    }

    /// Whether this grid resolves dyadic level `j` under the resolution
    /// policy N >= 2^(j+6).
    pub fn resolves_level(&self, j: u32) -> bool {
        self.log2_size >= j + 6
    }
}
