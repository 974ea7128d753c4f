//! Cross-module invariants at the scales the library promises.

use tmlab_core::basis::{blaschke_factor, boundary_modulus_sq, scan_basis, tm_basis_eval, BasisBank};
use tmlab_core::khintchine::{complex_gaussian, khintchine_ratio};
use tmlab_core::norms::{hp_square_norm, np_functional, square_stack};
use tmlab_core::signal::{inner_product, lp_norm, BoundarySignal};
use tmlab_core::signs::{counter_hash, uniform01};
use tmlab_core::stats::kahan_sum;
use tmlab_core::tree::analyze_with_bank;
use tmlab_core::zoo::{default_corpus, realize};
use tmlab_core::{BoundaryGrid, DyadicIndex, PoleScheme, SchemeKind, C64};

/// Möbius products of the first 200 poles stay unimodular at 64 random
/// boundary points, for every scheme.
#[test]
fn unimodularity_at_promised_scale() {
    for kind in [SchemeKind::PowerBasis, SchemeKind::Case1, SchemeKind::Case2] {
        let scheme = PoleScheme::new(kind, 8).unwrap();
        for i in 0..64u64 {
            let x = uniform01(counter_hash(2026, 1, i));
            let z = C64::from_polar(1.0, std::f64::consts::TAU * x);
            let mut prod = C64::new(1.0, 0.0);
            for l in 1..200u64 {
                prod *= blaschke_factor(&scheme.pole_of_linear(l).unwrap(), z);
            }
            assert!(
                (prod.norm() - 1.0).abs() < 1e-10,
                "{kind:?} drifted at x = {x}: {}",
                prod.norm()
            );
        }
    }
}

/// Closed-form boundary modulus matches |B|^2 from the running product to
/// 1e-10 relative, for all levels through 8 at 16 points per cell.
#[test]
fn boundary_modulus_consistency_through_level_8() {
    for kind in [SchemeKind::Case1, SchemeKind::Case2] {
        let scheme = PoleScheme::new(kind, 8).unwrap();
        for idx in scheme.indices_through(8).unwrap() {
            let m = scheme.dyadic_to_linear(idx).unwrap();
            for t in 0..16 {
                let x = idx.cell_start() + idx.cell_width() * t as f64 / 16.0;
                let z = C64::from_polar(1.0, std::f64::consts::TAU * x);
                let direct = tm_basis_eval(&scheme, m, z).unwrap().norm_sqr();
                let closed = boundary_modulus_sq(&scheme, idx, x).unwrap();
                let rel = ((direct - closed) / closed).abs();
                assert!(rel < 1e-10, "j={} k={} t={t}: rel {rel:.2e}", idx.j, idx.k);
            }
        }
    }
}

/// No singularities on the closed disk: evaluation stays finite right on
/// top of the deepest pole angles.
#[test]
fn evaluation_finite_on_closed_disk() {
    let scheme = PoleScheme::new(SchemeKind::Case1, 12).unwrap();
    let m = scheme.capacity().unwrap();
    for k in [0u32, 1, (1 << 12) - 1] {
        let idx = DyadicIndex::new(12, k);
        let z = C64::from_polar(1.0, std::f64::consts::TAU * idx.cell_start());
        let v = tm_basis_eval(&scheme, m, z).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
        let interior = tm_basis_eval(&scheme, m, z * 0.999999).unwrap();
        assert!(interior.re.is_finite() && interior.im.is_finite());
    }
}

/// Grid-refinement stability: coefficient-scale inner products computed at
/// N and 2N agree to 1e-8 relative once the resolution policy N >= 2^(j+6)
/// holds.
#[test]
fn quadrature_doubling_gate() {
    let coarse_log2 = 12u32;
    let j = coarse_log2 - 6;
    let coarse = BoundaryGrid::new(coarse_log2).unwrap();
    let fine = BoundaryGrid::new(coarse_log2 + 1).unwrap();
    let scheme = PoleScheme::new(SchemeKind::Case1, j).unwrap();
    let f_spec = &default_corpus()[7];
    for k in [0u32, 3, (1 << j) - 1] {
        let m = scheme.dyadic_to_linear(DyadicIndex::new(j, k)).unwrap();
        let mut pair = Vec::new();
        for grid in [coarse, fine] {
            let f = realize(f_spec, &grid).unwrap();
            let mut value = C64::new(0.0, 0.0);
            scan_basis(&scheme, m, &grid, |mm, row| {
                if mm == m {
                    let b = BoundarySignal::from_samples(grid, row.to_vec()).unwrap();
                    value = inner_product(&f, &b).unwrap();
                }
            })
            .unwrap();
            pair.push(value);
        }
        let rel = (pair[0] - pair[1]).norm() / pair[1].norm().max(1e-12);
        assert!(rel < 1e-8, "k={k}: doubling moved the coefficient by {rel:.2e}");
    }
}

/// Plancherel at scale: grid 2-norms square to spectral energy.
#[test]
fn plancherel_on_corpus() {
    let grid = BoundaryGrid::new(12).unwrap();
    for spec in default_corpus() {
        let f = realize(&spec, &grid).unwrap();
        let n2 = lp_norm(&f, 2.0).unwrap();
        let energy = f.fourier_coefficients().total_energy();
        assert!(
            ((n2 * n2 - energy) / energy).abs() < 1e-12,
            "{}",
            spec.label()
        );
    }
}

/// Level-growth band: gap sums over complete levels stay inside
/// [0.5 J, 0.586 J + 1] for every J through 16.
#[test]
fn gap_sum_band() {
    let scheme = PoleScheme::new(SchemeKind::Case1, 16).unwrap();
    for j in 1..=16u32 {
        let count = scheme.count_through_level(j).unwrap();
        let v = tmlab_core::basis::nonseparability_partial_sum(&scheme, count).unwrap();
        assert!(
            v >= 0.5 * j as f64 && v <= 0.586 * j as f64 + 1.0,
            "J={j}: {v}"
        );
    }
}

/// Moment-equivalence stability: constants fitted on one batch of random
/// sequences bound a disjoint batch.
#[test]
fn khintchine_band_stability() {
    for p in [1.33, 3.0, 4.0] {
        let ratio_of = |stream: u64, idx: u64| {
            let len = 2 + (counter_hash(55, stream, idx) % 15) as usize;
            let alpha: Vec<C64> = (0..len)
                .map(|i| complex_gaussian(55, stream * 4000 + idx, i as u64))
                .collect();
            khintchine_ratio(&alpha, p, 0, 0).unwrap().mean_ratio
        };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for idx in 0..60 {
            let r = ratio_of(1, idx);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        // modest slack around the fitted band; fresh draws must respect it
        let (lo, hi) = (lo * 0.98, hi * 1.02);
        for idx in 0..60 {
            let r = ratio_of(2, idx);
            assert!(r >= lo && r <= hi, "p={p}: ratio {r} escaped [{lo}, {hi}]");
        }
    }
}

/// Square-function domination chain: the stack norm is controlled by the
/// kernel-weighted functional, which is controlled by the boundary norm,
/// with constants fitted on half the corpus and respected by the rest.
#[test]
fn domination_chain_constants_are_stable() {
    let grid = BoundaryGrid::new(12).unwrap();
    let bank = BasisBank::for_depth(SchemeKind::Case1, 6, grid).unwrap();
    let corpus = default_corpus();
    for p in [1.33, 2.0, 4.0] {
        let ratios: Vec<(f64, f64)> = corpus
            .iter()
            .map(|spec| {
                let f = realize(spec, &grid).unwrap();
                let t = analyze_with_bank(&f, &bank).unwrap();
                let stack = square_stack(&t, &grid).unwrap();
                let sf = stack.square_norm(p).unwrap();
                let np = np_functional(&t, p, &grid).unwrap();
                let lp = lp_norm(&f, p).unwrap();
                (sf / np, np / lp)
            })
            .collect();
        let fit = |sel: &dyn Fn(usize) -> bool, pick: &dyn Fn(&(f64, f64)) -> f64| {
            ratios
                .iter()
                .enumerate()
                .filter(|(i, _)| sel(*i))
                .map(|(_, r)| pick(r))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let c1 = fit(&|i| i % 2 == 0, &|r| r.0);
        let c2 = fit(&|i| i % 2 == 0, &|r| r.1);
        let v1 = fit(&|i| i % 2 == 1, &|r| r.0);
        let v2 = fit(&|i| i % 2 == 1, &|r| r.1);
        assert!(v1 <= 1.5 * c1, "p={p}: stack/np constant unstable: {v1} vs {c1}");
        assert!(v2 <= 1.5 * c2, "p={p}: np/lp constant unstable: {v2} vs {c2}");
        assert!(c1.max(v1) < 10.0 && c2.max(v2) < 10.0, "constants blow up");
    }
}

/// The stack's square function integrates to the dyadic square norm.
#[test]
fn stack_norm_matches_square_norm_on_corpus() {
    let grid = BoundaryGrid::new(12).unwrap();
    let bank = BasisBank::for_depth(SchemeKind::Case2, 6, grid).unwrap();
    for spec in default_corpus().iter().step_by(4) {
        let f = realize(spec, &grid).unwrap();
        let t = analyze_with_bank(&f, &bank).unwrap();
        let stack = square_stack(&t, &grid).unwrap();
        for p in [1.33, 3.0] {
            let a = stack.square_norm(p).unwrap();
            let b = hp_square_norm(&t, p).unwrap();
            assert!((a - b).abs() < 1e-10 * b.max(1.0), "{} p={p}", spec.label());
        }
    }
}

/// Corpus coverage: at least two members differ in their square/boundary
/// ratio by more than a factor 2 at p = 4.
#[test]
fn corpus_ratio_coverage() {
    let grid = BoundaryGrid::new(13).unwrap();
    let bank = BasisBank::for_depth(SchemeKind::Case1, 7, grid).unwrap();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for spec in default_corpus() {
        let f = realize(&spec, &grid).unwrap();
        let t = analyze_with_bank(&f, &bank).unwrap();
        let ratio = hp_square_norm(&t, 4.0).unwrap() / lp_norm(&f, 4.0).unwrap();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    assert!(hi / lo > 2.0, "corpus ratio spread {:.3} too narrow", hi / lo);
}

/// One-sidedness of spectra. Signals realized from Taylor coefficients
/// meet the strict flag threshold; synthesized expansions are analytic by
/// construction but their deepest-level factors carry ~1e-14 of energy
/// beyond the Nyquist frequency at the resolution-policy boundary, which
/// folds into nominally negative bins — bounded here with margin.
#[test]
fn spectra_are_numerically_one_sided() {
    let grid = BoundaryGrid::new(12).unwrap();
    for spec in default_corpus() {
        let f = realize(&spec, &grid).unwrap();
        let sp = f.fourier_coefficients();
        assert!(
            sp.negative_energy() <= tmlab_core::signal::ANALYTIC_ENERGY_TOL * sp.total_energy(),
            "{}",
            spec.label()
        );
    }
    for kind in [SchemeKind::Case1, SchemeKind::Case2] {
        let bank = BasisBank::for_depth(kind, 6, grid).unwrap();
        let f = realize(&default_corpus()[11], &grid).unwrap();
        let t = analyze_with_bank(&f, &bank).unwrap();
        let s = tmlab_core::tree::synthesize_with_bank(&t, &bank).unwrap();
        assert!(s.is_analytic());
        let sp = s.fourier_coefficients();
        let ratio = sp.negative_energy() / sp.total_energy();
        assert!(ratio <= 1e-13, "{kind:?}: folded energy fraction {ratio:.3e}");
    }
}

/// Bessel at scale: analysis mass never exceeds the boundary 2-norm.
#[test]
fn bessel_on_corpus() {
    let grid = BoundaryGrid::new(12).unwrap();
    let energy_sum = |vals: &[C64]| kahan_sum(vals.iter().map(|v| v.norm_sqr()));
    for kind in [SchemeKind::Case1, SchemeKind::Case2] {
        let bank = BasisBank::for_depth(kind, 6, grid).unwrap();
        for spec in default_corpus().iter().step_by(3) {
            let f = realize(spec, &grid).unwrap();
            let t = analyze_with_bank(&f, &bank).unwrap();
            let mass = t.total_energy();
            let direct = energy_sum(f.values()) / f.len() as f64;
            assert!(mass <= direct + 1e-8, "{} ({kind:?})", spec.label());
        }
    }
}
