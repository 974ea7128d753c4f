//! Discrete Hardy–Littlewood maximal operator on the circle, plus the
//! vector-valued norms built from it.
//!
//! The discrete maximal function takes, at every node, the largest average
//! of |f| over any set of W consecutive nodes (wrapping around the circle)
//! that contains the node, for 1 <= W <= N. Single-node windows are
//! admitted so that Mf >= |f| holds pointwise, the discrete analogue of
//! shrinking intervals.
//!
//! Two implementations are provided and must agree bitwise:
//!
//! * [`hl_maximal_reference`]: an O(N^2) sweep, obviously correct;
//! * [`hl_maximal`]: a divide-and-conquer over prefix-sum convex hulls,
//!   O(N log^2 N).
//!
//! Both enumerate windows as linear intervals `[l, r)` of the doubled
//! sample array with `r - l <= N`, and compute every candidate average as
//! `(P[r] - P[l]) / (r - l)` from one shared prefix array, so the candidate
//! value multisets coincide exactly.

use crate::error::{Error, Result};
use crate::signal::{check_exponent, BoundarySignal};
use crate::stats::kahan_sum;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent f64 methods cover this under std/test builds
use num_traits::Float;

/// Production maximal function.
pub fn hl_maximal(f: &BoundarySignal) -> BoundarySignal {
    let out = maximal_values(&moduli(f));
    BoundarySignal::from_real_samples(*f.grid(), out).expect("same grid")
}

/// Brute-force O(N^2) reference for the maximal function.
pub fn hl_maximal_reference(f: &BoundarySignal) -> BoundarySignal {
    let out = maximal_values_reference(&moduli(f));
    BoundarySignal::from_real_samples(*f.grid(), out).expect("same grid")
}

fn moduli(f: &BoundarySignal) -> Vec<f64> {
    f.values().iter().map(|v| v.norm()).collect()
}

fn prefix_of_doubled(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let mut p = Vec::with_capacity(2 * n + 1);
    p.push(0.0);
    let mut acc = 0.0;
    for i in 0..2 * n {
        acc += g[i % n];
        p.push(acc);
    }
    p
}

#[inline]
fn window_avg(p: &[f64], l: usize, r: usize) -> f64 {
    (p[r] - p[l]) / ((r - l) as f64)
}

/// O(N^2): for every start l of the doubled array, suffix-maximize the
/// averages of windows [l, l+w) and hand each covered node its best value.
pub fn maximal_values_reference(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let p = prefix_of_doubled(g);
    let mut out = vec![f64::NEG_INFINITY; n];
    let mut suffix = vec![0.0f64; n];
    for l in 0..2 * n {
        let w_max = n.min(2 * n - l);
        if w_max == 0 {
            continue;
        }
        // suffix[t] = max over w in (t..=w_max) of avg(l, w)
        let mut best = f64::NEG_INFINITY;
        for w in (1..=w_max).rev() {
            best = best.max(window_avg(&p, l, l + w));
            suffix[w - 1] = best;
        }
        for (t, &best_from_here) in suffix.iter().enumerate().take(w_max) {
            let node = (l + t) % n;
            if best_from_here > out[node] {
                out[node] = best_from_here;
            }
        }
    }
    clamp_to_samples(&mut out, g);
    out
}

/// Fold the exact sample values in as single-node candidates.
///
/// Prefix differences reproduce g[i] only up to rounding of the running
/// sum, which would let Mf dip below |f| by a few ulps; taking the exact
/// sample as a candidate restores pointwise domination. Both
/// implementations apply the same pass, keeping them bitwise equal.
fn clamp_to_samples(out: &mut [f64], g: &[f64]) {
    for (o, &v) in out.iter_mut().zip(g) {
        if v > *o {
            *o = v;
        }
    }
}

/// Divide and conquer over [0, 2N) with convex-hull tangent queries.
pub fn maximal_values(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let p = prefix_of_doubled(g);
    let mut out = vec![f64::NEG_INFINITY; n];
    solve(&p, n, 0, 2 * n, &mut out);
    clamp_to_samples(&mut out, g);
    out
}

fn solve(p: &[f64], n: usize, lo: usize, hi: usize, out: &mut [f64]) {
    if hi - lo == 1 {
        let v = window_avg(p, lo, lo + 1);
        let node = lo % n;
        if v > out[node] {
            out[node] = v;
        }
        return;
    }
    let mid = (lo + hi) / 2;
    solve(p, n, lo, mid, out);
    solve(p, n, mid, hi, out);

    // Crossing windows [l, r): l in [lo, mid), r in [mid+1, hi], r - l <= N.
    // Positions in the left half see the best window over l <= pos; sweep
    // pos ascending while folding in tangents from each new l.
    let right_hull = upper_hull(p, mid + 1, hi);
    if !right_hull.is_empty() {
        let mut best = f64::NEG_INFINITY;
        for l in lo..mid {
            let r_cap = l + n;
            if let Some(v) = max_slope_to_prefix(p, l, &right_hull, r_cap) {
                if v > best {
                    best = v;
                }
            }
            let node = l % n;
            if best > out[node] {
                out[node] = best;
            }
        }
    }

    // Positions in the right half: windows with r >= pos+1, l in [lo, mid).
    // Sweeping pos downward adds one candidate right endpoint per step.
    let left_hull = lower_hull(p, lo, mid);
    if !left_hull.is_empty() {
        let mut best = f64::NEG_INFINITY;
        for pos in (mid..hi).rev() {
            let r = pos + 1;
            let l_cap = r.saturating_sub(n);
            if let Some(v) = max_slope_from_suffix(p, r, &left_hull, l_cap) {
                if v > best {
                    best = v;
                }
            }
            let node = pos % n;
            if best > out[node] {
                out[node] = best;
            }
        }
    }
}

#[inline]
fn cross(p: &[f64], o: usize, a: usize, b: usize) -> f64 {
    (a as f64 - o as f64) * (p[b] - p[o]) - (p[a] - p[o]) * (b as f64 - o as f64)
}

/// Upper hull of (i, P[i]) for i in [from, to], indices ascending.
fn upper_hull(p: &[f64], from: usize, to: usize) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(to + 1 - from);
    for i in from..=to {
        while hull.len() >= 2 && cross(p, hull[hull.len() - 2], hull[hull.len() - 1], i) >= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    hull
}

/// Lower hull of (i, P[i]) for i in [from, to), indices ascending.
fn lower_hull(p: &[f64], from: usize, to: usize) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(to - from);
    for i in from..to {
        while hull.len() >= 2 && cross(p, hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    hull
}

/// Max of slope(query -> hull[i]) over hull vertices with index <= cap.
/// The slope along a convex hull seen from an outside query point is
/// unimodal, so the peak is found by binary search on adjacent pairs.
fn max_slope_to_prefix(p: &[f64], query: usize, hull: &[usize], cap: usize) -> Option<f64> {
    // last hull vertex with index <= cap
    let upto = hull.partition_point(|&v| v <= cap);
    if upto == 0 {
        return None;
    }
    let peak = unimodal_peak(p, query, hull);
    let pick = peak.min(upto - 1);
    Some(window_avg(p, query, hull[pick]))
}

/// Max of slope(hull[i] -> query) over hull vertices with index >= cap.
fn max_slope_from_suffix(p: &[f64], query: usize, hull: &[usize], cap: usize) -> Option<f64> {
    let start = hull.partition_point(|&v| v < cap);
    if start == hull.len() {
        return None;
    }
    let peak = unimodal_peak_left(p, query, hull);
    let pick = peak.max(start);
    Some(window_avg(p, hull[pick], query))
}

/// First index i where slope(query -> hull[i]) >= slope(query -> hull[i+1]).
fn unimodal_peak(p: &[f64], query: usize, hull: &[usize]) -> usize {
    let mut lo = 0;
    let mut hi = hull.len() - 1;
    while lo < hi {
        let m = (lo + hi) / 2;
        if window_avg(p, query, hull[m]) >= window_avg(p, query, hull[m + 1]) {
            hi = m;
        } else {
            lo = m + 1;
        }
    }
    lo
}

/// Same, for slopes from hull vertices up to a right-hand query point.
fn unimodal_peak_left(p: &[f64], query: usize, hull: &[usize]) -> usize {
    let mut lo = 0;
    let mut hi = hull.len() - 1;
    while lo < hi {
        let m = (lo + hi) / 2;
        if window_avg(p, hull[m], query) >= window_avg(p, hull[m + 1], query) {
            hi = m;
        } else {
            lo = m + 1;
        }
    }
    lo
}

/// Mixed norm || (sum_k g_k^q)^(1/q) ||_{L^p} with g_k = |f_k| or M f_k.
///
/// Empty families yield 0.
pub fn fs_vector_norm(signals: &[BoundarySignal], p: f64, q: f64, maximal: bool) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(q)?;
    let Some(first) = signals.first() else {
        return Ok(0.0);
    };
    let grid = first.grid();
    for s in signals {
        if s.grid() != grid {
            return Err(Error::GridMismatch);
        }
    }
    let n = grid.size();
    let mut stack_q = vec![0.0f64; n];
    for s in signals {
        let g = if maximal {
            maximal_values(&moduli(s))
        } else {
            moduli(s)
        };
        for (acc, v) in stack_q.iter_mut().zip(&g) {
            *acc += v.powf(q);
        }
    }
    let sum = kahan_sum(stack_q.iter().map(|&s| s.powf(p / q)));
    Ok((sum / n as f64).powf(1.0 / p))
}

/// Convenience: maximal function values as plain reals.
pub fn maximal_moduli(f: &BoundarySignal) -> Vec<f64> {
    maximal_values(&moduli(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryGrid;
    use proptest::prelude::*;

    fn real_signal(log2: u32, vals: Vec<f64>) -> BoundarySignal {
        BoundarySignal::from_real_samples(BoundaryGrid::new(log2).unwrap(), vals).unwrap()
    }

    #[test]
    fn constant_is_fixed_point() {
        let f = real_signal(5, vec![1.0; 32]);
        let m = hl_maximal(&f);
        for v in m.values() {
            assert_eq!(v.re, 1.0);
        }
    }

    #[test]
    fn half_indicator_values() {
        // f = indicator of [0, 1/2) on N = 64
        let n = 64;
        let vals: Vec<f64> = (0..n).map(|i| if i < n / 2 { 1.0 } else { 0.0 }).collect();
        let f = real_signal(6, vals);
        let m = hl_maximal(&f);
        // inside the support the best window sits inside the support
        assert_eq!(m.values()[16].re, 1.0); // x = 1/4
        // at x = 3/4 the best window wraps: 32 ones + 16 zeros -> 2/3
        assert!((m.values()[48].re - 2.0 / 3.0).abs() < 1.0 / 64.0);
    }

    #[test]
    fn dominates_pointwise_and_scales() {
        let n = 128;
        let vals: Vec<f64> = (0..n).map(|i| ((i * i) % 23) as f64 / 7.0 - 1.2).collect();
        let f = real_signal(7, vals.clone());
        let m = hl_maximal(&f);
        for (mv, v) in m.values().iter().zip(&vals) {
            assert!(mv.re >= v.abs() - 1e-15);
        }
        // M(c f) = |c| M f
        let scaled = real_signal(7, vals.iter().map(|v| v * -3.0).collect());
        let ms = hl_maximal(&scaled);
        for (a, b) in ms.values().iter().zip(m.values()) {
            assert!((a.re - 3.0 * b.re).abs() < 1e-12 * a.re.abs().max(1.0));
        }
    }

    #[test]
    fn fast_agrees_with_reference_structured() {
        for n_log in [4u32, 5, 6] {
            let n = 1usize << n_log;
            let mut cases: Vec<Vec<f64>> = vec![
                vec![1.0; n],
                (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
                (0..n).map(|i| if i < n / 2 { 1.0 } else { 0.0 }).collect(),
                (0..n).map(|i| (i % 3) as f64).collect(),
            ];
            cases.push((0..n).map(|i| ((i * 7 + 3) % 11) as f64).collect());
            for g in cases {
                assert_eq!(maximal_values(&g), maximal_values_reference(&g));
            }
        }
    }

    #[test]
    fn fast_agrees_with_reference_at_scale() {
        use crate::signs::{counter_hash, uniform01};
        for (n, seed) in [(512usize, 1u64), (1024, 2), (1024, 3)] {
            let g: Vec<f64> = (0..n)
                .map(|i| uniform01(counter_hash(seed, 0, i as u64)) * 7.0)
                .collect();
            assert_eq!(maximal_values(&g), maximal_values_reference(&g), "n={n} seed={seed}");
            // spiky variant: mostly zeros with a few spikes, lots of ties
            let spiky: Vec<f64> = (0..n)
                .map(|i| if counter_hash(seed, 1, i as u64) % 13 == 0 { 2.0 } else { 0.0 })
                .collect();
            assert_eq!(maximal_values(&spiky), maximal_values_reference(&spiky));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn fast_agrees_with_reference_random(vals in prop::collection::vec(-10.0f64..10.0, 64)) {
            let g: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
            prop_assert_eq!(maximal_values(&g), maximal_values_reference(&g));
        }

        #[test]
        fn sublinear(a in prop::collection::vec(0.0f64..5.0, 32),
                     b in prop::collection::vec(0.0f64..5.0, 32)) {
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let ma = maximal_values(&a);
            let mb = maximal_values(&b);
            let ms = maximal_values(&sum);
            for i in 0..32 {
                prop_assert!(ms[i] <= ma[i] + mb[i] + 1e-12);
            }
        }
    }

    #[test]
    fn vector_norm_basics() {
        let g = BoundaryGrid::new(6).unwrap();
        let one = BoundarySignal::from_real_samples(g, vec![1.0; 64]).unwrap();
        for p in [1.5, 2.0, 3.0] {
            let plain = fs_vector_norm(core::slice::from_ref(&one), p, 2.0, false).unwrap();
            assert!((plain - 1.0).abs() < 1e-13);
            let maxed = fs_vector_norm(core::slice::from_ref(&one), p, 2.0, true).unwrap();
            assert!((maxed - 1.0).abs() < 1e-13);
        }
        let pair = [one.clone(), one];
        let two = fs_vector_norm(&pair, 2.0, 2.0, false).unwrap();
        assert!((two - 2.0f64.sqrt()).abs() < 1e-13);
        assert_eq!(fs_vector_norm(&[], 2.0, 2.0, false).unwrap(), 0.0);
    }
}
