//! Analysis coefficients organized by dyadic level.

use crate::basis::{scan_basis, BasisBank};
use crate::error::{Error, Result};
use crate::grid::BoundaryGrid;
use crate::scheme::{BasisPosition, DyadicIndex, PoleScheme, SchemeKind};
use crate::signal::{inner_product, BoundarySignal};
use crate::stats::kahan_sum;
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;

/// Relative level-energy threshold below which a truncated analysis is
/// reported as converged.
pub const TAIL_CERTIFICATE_TOL: f64 = 1e-6;

/// Head coefficients plus the complete dyadic coefficient range through
/// `j_max` levels.
///
/// Coefficients are stored densely in enumeration order (level-major), so
/// position arithmetic replaces a map. The second head is present exactly
/// when the scheme keeps two head functions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTree {
    kind: SchemeKind,
    j_max: u32,
    head1: C64,
    head2: Option<C64>,
    coeffs: Vec<C64>,
}

impl CoefficientTree {
    /// Assemble a tree from raw parts, validating the structure.
    pub fn from_parts(
        kind: SchemeKind,
        j_max: u32,
        head1: C64,
        head2: Option<C64>,
        coeffs: Vec<C64>,
    ) -> Result<Self> {
        let scheme = PoleScheme::new(kind, j_max)?;
        match kind {
            SchemeKind::PowerBasis => return Err(Error::UnsupportedScheme),
            SchemeKind::Case1 => {
                if head2.is_some() {
                    return Err(Error::DomainError);
                }
            }
            SchemeKind::Case2 => {
                if head2.is_none() {
                    return Err(Error::DomainError);
                }
            }
        }
        let expected = scheme.capacity().expect("dyadic scheme") - kind.head_count() as u64;
        if coeffs.len() as u64 != expected {
            return Err(Error::IndexOutOfRange);
        }
        Ok(CoefficientTree {
            kind,
            j_max,
            head1,
            head2,
            coeffs,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn scheme(&self) -> PoleScheme {
        PoleScheme::new(self.kind, self.j_max).expect("validated at construction")
    }

    pub fn head1(&self) -> C64 {
        self.head1
    }

    pub fn head2(&self) -> Option<C64> {
        self.head2
    }

    /// Total number of basis indices covered (heads + dyadic coefficients).
    pub fn basis_len(&self) -> u64 {
        self.kind.head_count() as u64 + self.coeffs.len() as u64
    }

    /// Coefficient at a dyadic index.
    pub fn coeff(&self, idx: DyadicIndex) -> Result<C64> {
        Ok(self.coeffs[self.offset(idx)?])
    }

    fn offset(&self, idx: DyadicIndex) -> Result<usize> {
        let scheme = self.scheme();
        let m = scheme.dyadic_to_linear(idx)?;
        Ok((m - 1 - self.kind.head_count() as u64) as usize)
    }

    /// Dyadic coefficients of one level, in translate order.
    pub fn level(&self, j: u32) -> Result<&[C64]> {
        let width = self.kind.level_width(j)? as usize;
        if j > self.j_max {
            return Err(Error::IndexOutOfRange);
        }
        let start = self.offset(DyadicIndex::new(j, 0))?;
        Ok(&self.coeffs[start..start + width])
    }

    /// All dyadic coefficients in enumeration order.
    pub fn dyadic_coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient attached to a 1-based linear index (heads included).
    pub fn linear_coeff(&self, m: u64) -> Result<C64> {
        match self.scheme().linear_to_dyadic(m)? {
            BasisPosition::Head(1) => Ok(self.head1),
            BasisPosition::Head(_) => Ok(self.head2.ok_or(Error::IndexOutOfRange)?),
            BasisPosition::Dyadic(idx) => self.coeff(idx),
        }
    }

    /// Head energy plus coefficient energy.
    pub fn total_energy(&self) -> f64 {
        let heads = self.head1.norm_sqr() + self.head2.map_or(0.0, |h| h.norm_sqr());
        heads + kahan_sum(self.coeffs.iter().map(|c| c.norm_sqr()))
    }

    /// Energy of one level's coefficients.
    pub fn level_energy(&self, j: u32) -> Result<f64> {
        Ok(kahan_sum(self.level(j)?.iter().map(|c| c.norm_sqr())))
    }

    /// Fraction of total energy sitting at the deepest analyzed level.
    ///
    /// Zero trees report 0 (nothing was truncated).
    pub fn tail_fraction(&self) -> f64 {
        let total = self.total_energy();
        if total == 0.0 {
            return 0.0;
        }
        self.level_energy(self.j_max).expect("j_max valid") / total
    }

    /// Whether the truncation passes the energy-tail certificate.
    pub fn tail_certificate_ok(&self) -> bool {
        self.tail_fraction() <= TAIL_CERTIFICATE_TOL
    }

    /// Multiply every coefficient (heads included) by unit-modulus factors
    /// supplied per linear index; used by the sign operators.
    pub(crate) fn scaled_by<S: Fn(u64) -> f64>(&self, sign: S) -> Self {
        let head_count = self.kind.head_count() as u64;
        let head1 = self.head1 * sign(1);
        let head2 = self.head2.map(|h| h * sign(2));
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * sign(head_count + 1 + i as u64))
            .collect();
        CoefficientTree {
            kind: self.kind,
            j_max: self.j_max,
            head1,
            head2,
            coeffs,
        }
    }
}

fn check_analysis_inputs(
    f: &BoundarySignal,
    kind: SchemeKind,
    j_max: u32,
) -> Result<PoleScheme> {
    if kind == SchemeKind::PowerBasis {
        return Err(Error::UnsupportedScheme);
    }
    if !f.is_analytic() {
        return Err(Error::NotAnalytic);
    }
    if !f.grid().resolves_level(j_max) {
        return Err(Error::Resolution);
    }
    PoleScheme::new(kind, j_max)
}

/// Project a boundary signal on the basis through `j_max` complete levels.
///
/// Streams the basis over the grid (one running Möbius product), so memory
/// stays O(N) regardless of depth. Deterministic: coefficients come out in
/// enumeration order from one fixed summation path.
pub fn analyze(f: &BoundarySignal, kind: SchemeKind, j_max: u32) -> Result<CoefficientTree> {
    let scheme = check_analysis_inputs(f, kind, j_max)?;
    let m_max = scheme.capacity().expect("dyadic scheme");
    let mut raw = Vec::with_capacity(m_max as usize);
    let grid = *f.grid();
    scan_basis(&scheme, m_max, &grid, |_, row| {
        let g = BoundarySignal::from_analytic_samples(grid, row.to_vec());
        raw.push(inner_product(f, &g).expect("same grid"));
    })?;
    assemble(kind, j_max, raw)
}

/// Like [`analyze`] but reusing a prebuilt bank of basis rows.
pub fn analyze_with_bank(f: &BoundarySignal, bank: &BasisBank) -> Result<CoefficientTree> {
    let scheme = bank.scheme();
    let j_max = scheme.j_max();
    check_analysis_inputs(f, scheme.kind(), j_max)?;
    if bank.grid() != f.grid() {
        return Err(Error::GridMismatch);
    }
    let m_max = scheme.capacity().expect("dyadic scheme");
    if bank.len() < m_max {
        return Err(Error::IndexOutOfRange);
    }
    let grid = *f.grid();
    let mut raw = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let g = BoundarySignal::from_analytic_samples(grid, bank.row(m)?.to_vec());
        raw.push(inner_product(f, &g)?);
    }
    assemble(scheme.kind(), j_max, raw)
}

fn assemble(kind: SchemeKind, j_max: u32, mut raw: Vec<C64>) -> Result<CoefficientTree> {
    let heads = kind.head_count() as usize;
    let coeffs = raw.split_off(heads);
    let head1 = raw[0];
    let head2 = if heads == 2 { Some(raw[1]) } else { None };
    CoefficientTree::from_parts(kind, j_max, head1, head2, coeffs)
}

/// Sample the finite expansion `sum_m c_m B_m` on a grid.
pub fn synthesize(tree: &CoefficientTree, grid: &BoundaryGrid) -> Result<BoundarySignal> {
    let scheme = tree.scheme();
    let m_max = scheme.capacity().expect("dyadic scheme");
    let mut acc = vec![C64::new(0.0, 0.0); grid.size()];
    scan_basis(&scheme, m_max, grid, |m, row| {
        let c = tree.linear_coeff(m).expect("m within capacity");
        for (a, &b) in acc.iter_mut().zip(row) {
            *a += c * b;
        }
    })?;
    Ok(BoundarySignal::from_analytic_samples(*grid, acc))
}

/// Like [`synthesize`] but reusing a prebuilt bank. Accumulation runs in
/// the same enumeration order, so results match the streaming path bitwise.
pub fn synthesize_with_bank(tree: &CoefficientTree, bank: &BasisBank) -> Result<BoundarySignal> {
    let scheme = bank.scheme();
    if scheme.kind() != tree.kind() || scheme.j_max() < tree.j_max() {
        return Err(Error::IndexOutOfRange);
    }
    let m_max = tree.scheme().capacity().expect("dyadic scheme");
    if bank.len() < m_max {
        return Err(Error::IndexOutOfRange);
    }
    let grid = *bank.grid();
    let mut acc = vec![C64::new(0.0, 0.0); grid.size()];
    for m in 1..=m_max {
        let c = tree.linear_coeff(m)?;
        for (a, &b) in acc.iter_mut().zip(bank.row(m)?) {
            *a += c * b;
        }
    }
    Ok(BoundarySignal::from_analytic_samples(grid, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::lp_norm;
    use proptest::prelude::*;

    fn grid(j: u32) -> BoundaryGrid {
        BoundaryGrid::new(j).unwrap()
    }

    fn constant(g: BoundaryGrid, c: C64) -> BoundarySignal {
        BoundarySignal::from_taylor(g, &[c]).unwrap()
    }

    #[test]
    fn constant_analyzes_to_head() {
        let g = grid(10);
        let f = constant(g, C64::new(1.0, 0.0));
        let t = analyze(&f, SchemeKind::Case1, 4).unwrap();
        assert!((t.head1() - C64::new(1.0, 0.0)).norm() < 1e-12);
        for c in t.dyadic_coeffs() {
            assert!(c.norm() < 1e-10);
        }
    }

    #[test]
    fn identity_analyzes_to_second_head_in_case2() {
        let g = grid(10);
        let f = BoundarySignal::from_taylor(g, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let t = analyze(&f, SchemeKind::Case2, 4).unwrap();
        assert!(t.head1().norm() < 1e-12);
        assert!((t.head2().unwrap() - C64::new(1.0, 0.0)).norm() < 1e-12);
        for c in t.dyadic_coeffs() {
            assert!(c.norm() < 1e-10);
        }
    }

    #[test]
    fn basis_function_analyzes_to_unit_coefficient() {
        let g = grid(10);
        let scheme = PoleScheme::new(SchemeKind::Case1, 4).unwrap();
        let rows = BasisBank::build(scheme, 2, g).unwrap();
        let f = BoundarySignal::from_samples(g, rows.row(2).unwrap().to_vec()).unwrap();
        let t = analyze(&f, SchemeKind::Case1, 4).unwrap();
        let c = t.coeff(DyadicIndex::new(1, 0)).unwrap();
        assert!((c - C64::new(1.0, 0.0)).norm() < 1e-8);
        assert!(t.head1().norm() < 1e-8);
        let others: f64 = t
            .dyadic_coeffs()
            .iter()
            .skip(1)
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!(others < 1e-8);
    }

    #[test]
    fn analyze_requires_analytic_and_resolution() {
        let g = grid(10);
        let conj_mode: Vec<C64> = g
            .unit_circle_nodes()
            .iter()
            .map(|z| z.conj())
            .collect();
        let f = BoundarySignal::from_samples(g, conj_mode).unwrap();
        assert!(matches!(
            analyze(&f, SchemeKind::Case1, 3),
            Err(Error::NotAnalytic)
        ));
        let ok = constant(g, C64::new(1.0, 0.0));
        assert!(matches!(
            analyze(&ok, SchemeKind::Case1, 5),
            Err(Error::Resolution)
        ));
        assert!(matches!(
            analyze(&ok, SchemeKind::PowerBasis, 3),
            Err(Error::UnsupportedScheme)
        ));
    }

    #[test]
    fn head_only_tree_synthesizes_constant() {
        let g = grid(8);
        let t = CoefficientTree::from_parts(
            SchemeKind::Case1,
            2,
            C64::new(0.5, -0.25),
            None,
            vec![C64::new(0.0, 0.0); 6],
        )
        .unwrap();
        let f = synthesize(&t, &g).unwrap();
        for v in f.values() {
            assert!((v - C64::new(0.5, -0.25)).norm() < 1e-15);
        }
    }

    #[test]
    fn bank_and_streaming_paths_agree() {
        let g = grid(9);
        let f = BoundarySignal::from_taylor(
            g,
            &[
                C64::new(0.2, 0.0),
                C64::new(1.0, -0.5),
                C64::new(0.0, 0.3),
                C64::new(-0.7, 0.1),
            ],
        )
        .unwrap();
        for kind in [SchemeKind::Case1, SchemeKind::Case2] {
            let bank = BasisBank::for_depth(kind, 3, g).unwrap();
            let t1 = analyze(&f, kind, 3).unwrap();
            let t2 = analyze_with_bank(&f, &bank).unwrap();
            assert_eq!(t1, t2);
            let s1 = synthesize(&t1, &g).unwrap();
            let s2 = synthesize_with_bank(&t1, &bank).unwrap();
            assert_eq!(s1.values(), s2.values());
        }
    }

    #[test]
    fn parseval_for_synthesized_tree() {
        let g = grid(11);
        let f = BoundarySignal::from_taylor(
            g,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.5, 0.5),
                C64::new(0.0, -1.0),
                C64::new(0.25, 0.0),
                C64::new(0.0, 0.1),
            ],
        )
        .unwrap();
        let t = analyze(&f, SchemeKind::Case1, 5).unwrap();
        let s = synthesize(&t, &g).unwrap();
        let n2 = lp_norm(&s, 2.0).unwrap();
        let mass = t.total_energy();
        assert!(((n2 * n2 - mass) / mass).abs() < 1e-10);
        // Bessel against the raw signal
        let f2 = lp_norm(&f, 2.0).unwrap();
        assert!(mass <= f2 * f2 + 1e-8);
    }

    fn arbitrary_coeff() -> impl Strategy<Value = C64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn analyze_synthesize_round_trip(
            head in arbitrary_coeff(),
            coeffs in prop::collection::vec(arbitrary_coeff(), 14),
        ) {
            let g = grid(10);
            let t = CoefficientTree::from_parts(SchemeKind::Case1, 3, head, None, coeffs).unwrap();
            let f = synthesize(&t, &g).unwrap();
            let back = analyze(&f, SchemeKind::Case1, 3).unwrap();
            prop_assert!((back.head1() - t.head1()).norm() < 1e-8);
            for (a, b) in back.dyadic_coeffs().iter().zip(t.dyadic_coeffs()) {
                prop_assert!((a - b).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn structure_validation() {
        assert!(CoefficientTree::from_parts(
            SchemeKind::Case1,
            2,
            C64::new(1.0, 0.0),
            Some(C64::new(1.0, 0.0)),
            vec![C64::new(0.0, 0.0); 6],
        )
        .is_err());
        assert!(CoefficientTree::from_parts(
            SchemeKind::Case2,
            2,
            C64::new(1.0, 0.0),
            None,
            vec![C64::new(0.0, 0.0); 3],
        )
        .is_err());
        assert!(CoefficientTree::from_parts(
            SchemeKind::Case1,
            2,
            C64::new(1.0, 0.0),
            None,
            vec![C64::new(0.0, 0.0); 5],
        )
        .is_err());
    }
}
