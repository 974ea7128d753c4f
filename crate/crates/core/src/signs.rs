//! Reproducible fair-sign draws and the sign operators.
//!
//! Signs come from a counter-based generator: each value is a pure hash of
//! (master seed, draw index, basis index), so any parallel schedule
//! reproduces the same patterns bit for bit.

use crate::error::{Error, Result};
use crate::tree::CoefficientTree;
use alloc::vec::Vec;

/// 64-bit finalizer (splitmix64); full avalanche, no state.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Pure hash of a (seed, stream, counter) triple.
pub fn counter_hash(seed: u64, stream: u64, counter: u64) -> u64 {
    let a = mix64(seed ^ stream.wrapping_mul(0x9E3779B97F4A7C15));
    mix64(a ^ counter.wrapping_mul(0xC2B2AE3D27D4EB4F))
}

/// Uniform draw in [0, 1) from the top 53 bits of a hash.
pub fn uniform01(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Fair sign from the top bit of a hash.
pub fn sign_of(h: u64) -> f64 {
    if h >> 63 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A ±1 assignment per basis index, reproducible from (seed, draw index).
#[derive(Debug, Clone, PartialEq)]
pub struct SignPattern {
    master_seed: u64,
    draw_index: u64,
    signs: Vec<f64>,
}

impl SignPattern {
    /// Draw the pattern for basis indices 1..=len.
    pub fn draw(master_seed: u64, draw_index: u64, len: u64) -> Self {
        let signs = (1..=len)
            .map(|m| sign_of(counter_hash(master_seed, draw_index, m)))
            .collect();
        SignPattern {
            master_seed,
            draw_index,
            signs,
        }
    }

    /// The identity pattern (all +1), useful as a baseline.
    pub fn all_plus(len: u64) -> Self {
        SignPattern {
            master_seed: 0,
            draw_index: 0,
            signs: alloc::vec![1.0; len as usize],
        }
    }

    pub fn len(&self) -> u64 {
        self.signs.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Sign for the 1-based basis index `m`.
    pub fn sign(&self, m: u64) -> f64 {
        self.signs[(m - 1) as usize]
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn draw_index(&self) -> u64 {
        self.draw_index
    }
}

/// Multiply every coefficient of the tree (heads included) by its sign.
///
/// Involutive: applying the same pattern twice returns the original tree
/// exactly, since ±1 multiplication is exact.
pub fn apply_signs(tree: &CoefficientTree, pattern: &SignPattern) -> Result<CoefficientTree> {
    if pattern.len() != tree.basis_len() {
        return Err(Error::SignCoverageMismatch);
    }
    Ok(tree.scaled_by(|m| pattern.sign(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::SchemeKind;
    use crate::C64;
    use alloc::vec;

    #[test]
    fn patterns_are_reproducible_and_pm_one() {
        let a = SignPattern::draw(42, 7, 100);
        let b = SignPattern::draw(42, 7, 100);
        assert_eq!(a, b);
        for m in 1..=100 {
            assert!(a.sign(m) == 1.0 || a.sign(m) == -1.0);
        }
        let c = SignPattern::draw(42, 8, 100);
        assert_ne!(a.signs, c.signs);
    }

    #[test]
    fn signs_are_roughly_balanced() {
        let p = SignPattern::draw(1234, 0, 4096);
        let plus = (1..=4096).filter(|&m| p.sign(m) > 0.0).count();
        assert!((plus as i64 - 2048).abs() < 300, "plus = {plus}");
    }

    fn small_tree() -> CoefficientTree {
        CoefficientTree::from_parts(
            SchemeKind::Case1,
            2,
            C64::new(0.5, -1.0),
            None,
            vec![
                C64::new(1.0, 0.0),
                C64::new(0.0, 2.0),
                C64::new(-0.5, 0.5),
                C64::new(0.25, 0.0),
                C64::new(0.0, 0.0),
                C64::new(3.0, -0.125),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_pattern_is_noop_and_signs_are_involutive() {
        let t = small_tree();
        let id = SignPattern::all_plus(t.basis_len());
        assert_eq!(apply_signs(&t, &id).unwrap(), t);
        let w = SignPattern::draw(9, 3, t.basis_len());
        let once = apply_signs(&t, &w).unwrap();
        let twice = apply_signs(&once, &w).unwrap();
        assert_eq!(twice, t);
        assert!((once.total_energy() - t.total_energy()).abs() < 1e-15);
    }

    #[test]
    fn coverage_mismatch_rejected() {
        let t = small_tree();
        let short = SignPattern::draw(9, 3, t.basis_len() - 1);
        assert!(matches!(
            apply_signs(&t, &short),
            Err(Error::SignCoverageMismatch)
        ));
    }
}
