//! Pole schemes and index maps.
//!
//! Three systems are supported: the power basis (all poles at the origin)
//! and two dyadic schemes. In the dyadic schemes the non-zero poles live on
//! the lattice
//!
//! ```text
//!     radius(j)   = sqrt(1 - 2^-j)
//!     angle(j, k) = k * 2^-j          (as a fraction of a full turn)
//! ```
//!
//! enumerated level by level, `j` ascending then `k` ascending. The first
//! scheme keeps one head function (constant) before the lattice and uses
//! `2^j` translates per level; the second keeps two heads (constant and
//! identity) and uses `2^(j-1)` translates per level.

use crate::error::{Error, Result};
use crate::C64;
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// A point in the open unit disk parameterizing one basis factor.
///
/// Stored as (radius, turn fraction) so lattice radii stay exact to full
/// precision; the cartesian value is derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    r: f64,
    h: f64,
}

impl Pole {
    pub fn new(r: f64, h: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) || !(0.0..1.0).contains(&h) {
            return Err(Error::InvalidPole);
        }
        Ok(Pole { r, h })
    }

    /// The pole at the origin (used for head indices).
    pub const fn origin() -> Self {
        Pole { r: 0.0, h: 0.0 }
    }

    /// Lattice pole at level `j`, translate `k`.
    pub fn at_level(j: u32, k: u32) -> Self {
        let two_neg_j = exp2_neg(j);
        Pole {
            r: (1.0 - two_neg_j).sqrt(),
            h: two_neg_j * k as f64,
        }
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// Argument as a fraction of a full turn, in [0, 1).
    pub fn turn(&self) -> f64 {
        self.h
    }

    /// Cartesian value r·e^{2πih}.
    pub fn value(&self) -> C64 {
        C64::from_polar(self.r, core::f64::consts::TAU * self.h)
    }

    /// Distance to the boundary, 1 - r, computed without cancellation.
    ///
    /// For lattice poles 1 - r^2 is the exact power of two 2^-j, so
    /// 1 - r = 2^-j / (1 + r) keeps full precision at any depth.
    pub fn boundary_gap(&self) -> f64 {
        (1.0 - self.r * self.r) / (1.0 + self.r)
    }
}

/// 2^-j as an exact f64.
pub(crate) fn exp2_neg(j: u32) -> f64 {
    debug_assert!(j <= 1023);
    1.0 / ((1u64 << j.min(63)) as f64)
}

/// Which of the three systems is being enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// All poles at the origin: the monomials 1, z, z^2, ...
    PowerBasis,
    /// One head (constant), then the full lattice: 2^j translates at level j.
    Case1,
    /// Two heads (constant, identity), then 2^(j-1) translates at level j.
    Case2,
}

impl SchemeKind {
    /// Number of head indices preceding the dyadic lattice.
    pub fn head_count(self) -> u32 {
        match self {
            SchemeKind::PowerBasis => 0,
            SchemeKind::Case1 => 1,
            SchemeKind::Case2 => 2,
        }
    }

    /// Number of translates at level `j >= 1`.
    pub fn level_width(self, j: u32) -> Result<u64> {
        if j == 0 {
            return Err(Error::IndexOutOfRange);
        }
        match self {
            SchemeKind::PowerBasis => Err(Error::UnsupportedScheme),
            SchemeKind::Case1 => Ok(1u64 << j),
            SchemeKind::Case2 => Ok(1u64 << (j - 1)),
        }
    }
}

/// A dyadic position: level `j >= 1` and translate `k` within the level.
///
/// The associated support cell on the circle is `[k·2^-j, (k+1)·2^-j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicIndex {
    pub j: u32,
    pub k: u32,
}

impl DyadicIndex {
    pub fn new(j: u32, k: u32) -> Self {
        DyadicIndex { j, k }
    }

    /// Left endpoint of the support cell.
    pub fn cell_start(&self) -> f64 {
        exp2_neg(self.j) * self.k as f64
    }

    /// Width of the support cell.
    pub fn cell_width(&self) -> f64 {
        exp2_neg(self.j)
    }
}

/// Where a linear index lands in a scheme's enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisPosition {
    /// Head index (1-based: 1 for the constant, 2 for the identity).
    Head(u32),
    Dyadic(DyadicIndex),
}

/// A scheme kind together with its maximum enumerated level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PoleScheme {
    kind: SchemeKind,
    j_max: u32,
}

impl PoleScheme {
    pub fn new(kind: SchemeKind, j_max: u32) -> Result<Self> {
        if j_max == 0 || j_max > 40 {
            return Err(Error::IndexOutOfRange);
        }
        Ok(PoleScheme { kind, j_max })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    /// Total number of enumerated basis functions, if bounded.
    ///
    /// The power basis has no dyadic structure and no level cap.
    pub fn capacity(&self) -> Option<u64> {
        match self.kind {
            SchemeKind::PowerBasis => None,
            SchemeKind::Case1 => Some((1u64 << (self.j_max + 1)) - 1),
            SchemeKind::Case2 => Some((1u64 << self.j_max) + 1),
        }
    }

    /// Number of basis functions through complete level `j`.
    pub fn count_through_level(&self, j: u32) -> Result<u64> {
        if j == 0 || j > self.j_max {
            return Err(Error::IndexOutOfRange);
        }
        match self.kind {
            SchemeKind::PowerBasis => Err(Error::UnsupportedScheme),
            SchemeKind::Case1 => Ok((1u64 << (j + 1)) - 1),
            SchemeKind::Case2 => Ok((1u64 << j) + 1),
        }
    }

    fn check_index(&self, idx: DyadicIndex) -> Result<()> {
        if idx.j == 0 || idx.j > self.j_max {
            return Err(Error::IndexOutOfRange);
        }
        if (idx.k as u64) < self.kind.level_width(idx.j)? {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange)
        }
    }

    /// Lattice pole for a dyadic index.
    pub fn pole_of(&self, idx: DyadicIndex) -> Result<Pole> {
        self.check_index(idx)?;
        Ok(Pole::at_level(idx.j, idx.k))
    }

    /// Map a 1-based linear index to its head-or-dyadic position.
    pub fn linear_to_dyadic(&self, m: u64) -> Result<BasisPosition> {
        if m == 0 {
            return Err(Error::DomainError);
        }
        if let Some(cap) = self.capacity() {
            if m > cap {
                return Err(Error::IndexOutOfRange);
            }
        }
        match self.kind {
            SchemeKind::PowerBasis => Err(Error::UnsupportedScheme),
            SchemeKind::Case1 => {
                if m == 1 {
                    Ok(BasisPosition::Head(1))
                } else {
                    // m = 2^j + k with 0 <= k < 2^j
                    let j = 63 - m.leading_zeros();
                    let k = (m - (1u64 << j)) as u32;
                    Ok(BasisPosition::Dyadic(DyadicIndex::new(j, k)))
                }
            }
            SchemeKind::Case2 => match m {
                1 => Ok(BasisPosition::Head(1)),
                2 => Ok(BasisPosition::Head(2)),
                _ => {
                    // m = 2^(j-1) + k + 2 with 0 <= k < 2^(j-1)
                    let t = m - 2;
                    let j = 64 - t.leading_zeros();
                    let k = (t - (1u64 << (j - 1))) as u32;
                    Ok(BasisPosition::Dyadic(DyadicIndex::new(j, k)))
                }
            },
        }
    }

    /// Inverse of [`linear_to_dyadic`](Self::linear_to_dyadic).
    pub fn dyadic_to_linear(&self, idx: DyadicIndex) -> Result<u64> {
        self.check_index(idx)?;
        match self.kind {
            SchemeKind::PowerBasis => Err(Error::UnsupportedScheme),
            SchemeKind::Case1 => Ok((1u64 << idx.j) + idx.k as u64),
            SchemeKind::Case2 => Ok((1u64 << (idx.j - 1)) + idx.k as u64 + 2),
        }
    }

    /// Pole attached to the `m`-th basis function (heads map to the origin).
    pub fn pole_of_linear(&self, m: u64) -> Result<Pole> {
        match self.kind {
            SchemeKind::PowerBasis => {
                if m == 0 {
                    Err(Error::DomainError)
                } else {
                    Ok(Pole::origin())
                }
            }
            _ => match self.linear_to_dyadic(m)? {
                BasisPosition::Head(_) => Ok(Pole::origin()),
                BasisPosition::Dyadic(idx) => self.pole_of(idx),
            },
        }
    }

    /// Iterate the complete dyadic index set through `j_cap` levels,
    /// in enumeration order.
    pub fn indices_through(&self, j_cap: u32) -> Result<impl Iterator<Item = DyadicIndex>> {
        if j_cap == 0 || j_cap > self.j_max {
            return Err(Error::IndexOutOfRange);
        }
        let kind = self.kind;
        match kind {
            SchemeKind::PowerBasis => Err(Error::UnsupportedScheme),
            _ => Ok((1..=j_cap).flat_map(move |j| {
                let width = kind.level_width(j).expect("j >= 1") as u32;
                (0..width).map(move |k| DyadicIndex::new(j, k))
            })),
        }
    }
}
