//! Fast invariant suite behind `--self-check`; the CI entry point.
//!
//! Each check prints one PASS/FAIL line; the whole suite stays well under
//! a minute.

use tmlab_core::basis::{blaschke_factor, boundary_modulus_sq, tm_basis_eval};
use tmlab_core::khintchine::khintchine_ratio;
use tmlab_core::maximal::{maximal_values, maximal_values_reference};
use tmlab_core::signal::lp_norm;
use tmlab_core::signs::{apply_signs, counter_hash, uniform01, SignPattern};
use tmlab_core::tree::{analyze, synthesize};
use tmlab_core::zoo::{default_corpus, realize};
use tmlab_core::{BoundaryGrid, DyadicIndex, PoleScheme, SchemeKind, C64};

struct Check {
    name: &'static str,
    ok: bool,
}

fn run_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, ok: bool| checks.push(Check { name, ok });

    // index maps round-trip
    let mut ok = true;
    for kind in [SchemeKind::Case1, SchemeKind::Case2] {
        let s = PoleScheme::new(kind, 8).unwrap();
        for idx in s.indices_through(8).unwrap() {
            let m = s.dyadic_to_linear(idx).unwrap();
            match s.linear_to_dyadic(m).unwrap() {
                tmlab_core::BasisPosition::Dyadic(back) => ok &= back == idx,
                _ => ok = false,
            }
        }
    }
    push("index maps round-trip through level 8", ok);

    // boundary products stay unimodular
    let mut ok = true;
    for kind in [SchemeKind::Case1, SchemeKind::Case2] {
        let s = PoleScheme::new(kind, 8).unwrap();
        for i in 0..16 {
            let x = uniform01(counter_hash(11, 0, i));
            let z = C64::from_polar(1.0, std::f64::consts::TAU * x);
            let mut prod = C64::new(1.0, 0.0);
            for l in 1..=200u64 {
                prod *= blaschke_factor(&s.pole_of_linear(l).unwrap(), z);
            }
            ok &= (prod.norm() - 1.0).abs() < 1e-10;
        }
    }
    push("Möbius products unimodular on the boundary (m = 200)", ok);

    // closed-form boundary modulus consistent with the product definition
    let mut ok = true;
    for kind in [SchemeKind::Case1, SchemeKind::Case2] {
        let s = PoleScheme::new(kind, 6).unwrap();
        for idx in s.indices_through(6).unwrap() {
            let m = s.dyadic_to_linear(idx).unwrap();
            for t in 0..4 {
                let x = idx.cell_start() + idx.cell_width() * (t as f64 + 0.5) / 4.0;
                let z = C64::from_polar(1.0, std::f64::consts::TAU * x);
                let direct = tm_basis_eval(&s, m, z).unwrap().norm_sqr();
                let closed = boundary_modulus_sq(&s, idx, x).unwrap();
                ok &= ((direct - closed) / closed).abs() < 1e-10;
            }
        }
    }
    push("closed-form boundary modulus matches products (j <= 6)", ok);

    // Plancherel on a corpus member
    let grid = BoundaryGrid::new(10).unwrap();
    let f = realize(&default_corpus()[7], &grid).unwrap();
    let n2 = lp_norm(&f, 2.0).unwrap();
    let energy = f.fourier_coefficients().total_energy();
    push(
        "Plancherel on a kernel member",
        ((n2 * n2 - energy) / energy).abs() < 1e-12,
    );

    // maximal operator: fast path equals brute force
    let g: Vec<f64> = (0..256)
        .map(|i| uniform01(counter_hash(5, 1, i)) * 3.0)
        .collect();
    push(
        "maximal fast path equals brute force (N = 256)",
        maximal_values(&g) == maximal_values_reference(&g),
    );

    // analysis round-trip at shallow depth
    let mut ok = true;
    let grid = BoundaryGrid::new(11).unwrap();
    for kind in [SchemeKind::Case1, SchemeKind::Case2] {
        let f = realize(&default_corpus()[6], &grid).unwrap();
        let t = analyze(&f, kind, 5).unwrap();
        let s = synthesize(&t, &grid).unwrap();
        let back = analyze(&s, kind, 5).unwrap();
        ok &= (back.head1() - t.head1()).norm() < 1e-8;
        for (a, b) in back.dyadic_coeffs().iter().zip(t.dyadic_coeffs()) {
            ok &= (a - b).norm() < 1e-8;
        }
    }
    push("analyze/synthesize round-trip (depth 5)", ok);

    // Parseval for a synthesized tree
    let f = realize(&default_corpus()[12], &grid).unwrap();
    let t = analyze(&f, SchemeKind::Case1, 5).unwrap();
    let s = synthesize(&t, &grid).unwrap();
    let n2 = lp_norm(&s, 2.0).unwrap();
    let mass = t.total_energy();
    push(
        "Parseval for a synthesized tree",
        ((n2 * n2 - mass) / mass).abs() < 1e-8,
    );

    // sign patterns reproduce and invert
    let pattern = SignPattern::draw(3, 9, t.basis_len());
    let flipped = apply_signs(&t, &pattern).unwrap();
    let back = apply_signs(&flipped, &pattern).unwrap();
    push("sign operator is involutive", back == t);

    // single-term moment ratio is exactly one
    let r = khintchine_ratio(&[C64::new(0.3, -1.1)], 3.0, 0, 0).unwrap();
    push("single-term moment ratio equals 1 exactly", r.mean_ratio == 1.0);

    // boundary modulus lower bound positive at depth 10
    let scan = tmlab_core::experiments::boundary_bound_scan(SchemeKind::Case1, 10, 16).unwrap();
    push(
        "boundary bounds positive and finite to level 10",
        scan.lower_est > 0.0 && scan.upper_est.is_finite(),
    );

    // dyadic cell arithmetic
    let idx = DyadicIndex::new(3, 5);
    push(
        "dyadic cell arithmetic",
        idx.cell_start() == 0.625 && idx.cell_width() == 0.125,
    );

    checks
}

/// Run the suite, print one line per check, return `true` when all pass.
pub fn self_check() -> bool {
    let checks = run_checks();
    let mut all_ok = true;
    for c in &checks {
        println!("{} {}", if c.ok { "PASS" } else { "FAIL" }, c.name);
        all_ok &= c.ok;
    }
    println!(
        "self-check: {}/{} checks passed",
        checks.iter().filter(|c| c.ok).count(),
        checks.len()
    );
    all_ok
}
