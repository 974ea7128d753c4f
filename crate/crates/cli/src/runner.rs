//! Subcommand drivers and output writing.
//!
//! Every driver is a pure function from configuration to result tables;
//! the binary and the acceptance suite share them. Trials fan out over the
//! current thread pool and are collected in trial order, so output bytes
//! do not depend on the thread count.

use crate::config::{CliError, ExperimentConfig};
use crate::formats::{
    fmt_f64, write_signal, write_tree, CorpusManifest, CsvTable, RunManifest,
};
use rayon::prelude::*;
use serde_json::json;
use std::path::PathBuf;
use tmlab_core::basis::{nonseparability_partial_sum, tm_basis_eval, BasisBank};
use tmlab_core::experiments::{boundary_bound_scan, BoundScan, CounterexampleContext};
use tmlab_core::khintchine::{complex_gaussian, khintchine_ratio};
use tmlab_core::maximal::fs_vector_norm;
use tmlab_core::norms::{hp_square_norm, np_from_profile, np_profile};
use tmlab_core::report::SamplingMethod;
use tmlab_core::signal::{lp_norm, raw_inner_product, BoundarySignal};
use tmlab_core::signs::{apply_signs, counter_hash, SignPattern};
use tmlab_core::stats::{log_log_slope, mean};
use tmlab_core::tree::{analyze, analyze_with_bank, synthesize, synthesize_with_bank};
use tmlab_core::zoo::{realize, ZooSpec};
use tmlab_core::{BoundaryGrid, PoleScheme, SchemeKind, C64};

/// Tolerance on the dyadic-scheme sign-invariance of the 2-norm.
pub const P2_NEUTRALITY_TOL: f64 = 1e-6;
/// Default orthonormality gate for `gram`.
pub const DEFAULT_GRAM_GATE: f64 = 1e-6;

fn grid_of(cfg: &ExperimentConfig) -> Result<BoundaryGrid, CliError> {
    BoundaryGrid::new(cfg.grid_log2_size).map_err(|e| CliError::from_core(e, "grid"))
}

fn corpus_of(cfg: &ExperimentConfig) -> Result<CorpusManifest, CliError> {
    match &cfg.corpus_manifest {
        Some(path) => CorpusManifest::load(path),
        None => Ok(CorpusManifest::default_corpus()),
    }
}

// ---------------------------------------------------------------- basis-eval

pub struct BasisEvalResult {
    pub csv: String,
}

pub fn basis_eval_table(
    kind: SchemeKind,
    j_max: u32,
    count: u32,
    points: u32,
) -> Result<BasisEvalResult, CliError> {
    let scheme = PoleScheme::new(kind, j_max).map_err(|e| CliError::from_core(e, "scheme"))?;
    let mut csv = CsvTable::new(&["m", "x", "re", "im", "modulus"]);
    for m in 1..=count as u64 {
        for t in 0..points {
            let x = t as f64 / points as f64;
            let z = C64::from_polar(1.0, std::f64::consts::TAU * x);
            let v = tm_basis_eval(&scheme, m, z).map_err(|e| CliError::from_core(e, "basis"))?;
            csv.row(&[
                m.to_string(),
                fmt_f64(x),
                fmt_f64(v.re),
                fmt_f64(v.im),
                fmt_f64(v.norm()),
            ]);
        }
    }
    Ok(BasisEvalResult { csv: csv.finish() })
}

// ---------------------------------------------------------------------- gram

pub struct GramResult {
    pub csv: String,
    pub max_deviation: f64,
}

/// Gram matrix of the first `count` basis functions under the grid pairing.
pub fn gram_table(kind: SchemeKind, count: u64, grid: BoundaryGrid) -> Result<GramResult, CliError> {
    let scheme = PoleScheme::new(kind, 30.min(BoundaryGrid::MAX_LOG2))
        .map_err(|e| CliError::from_core(e, "scheme"))?;
    if let Some(cap) = scheme.capacity() {
        if count > cap {
            return Err(CliError::resolution("basis_count exceeds scheme capacity"));
        }
    }
    let bank =
        BasisBank::build(scheme, count, grid).map_err(|e| CliError::from_core(e, "basis bank"))?;
    let mut csv = CsvTable::new(&["row", "col", "re", "im"]);
    let mut max_dev = 0.0f64;
    for i in 1..=count {
        let ri = bank.row(i).map_err(|e| CliError::from_core(e, "bank row"))?;
        for j in 1..=count {
            let rj = bank.row(j).map_err(|e| CliError::from_core(e, "bank row"))?;
            let g = raw_inner_product(ri, rj);
            let target = if i == j { 1.0 } else { 0.0 };
            max_dev = max_dev.max((g - C64::new(target, 0.0)).norm());
            csv.row(&[i.to_string(), j.to_string(), fmt_f64(g.re), fmt_f64(g.im)]);
        }
    }
    Ok(GramResult {
        csv: csv.finish(),
        max_deviation: max_dev,
    })
}

// --------------------------------------------------------------------- norms

pub struct NormsRow {
    pub member: usize,
    pub label: String,
    pub p: f64,
    pub lp_raw: f64,
    pub lp_projected: f64,
    pub hp_square: f64,
    pub np_weighted: f64,
    pub tail_fraction: f64,
    pub converged: bool,
}

pub struct NormsResult {
    pub rows: Vec<NormsRow>,
    /// Pooled log-log regression of hp/lp(projection) against degree over
    /// the polynomial sub-family and all exponents.
    pub pooled_poly_slope: Option<f64>,
    /// The same regression split per exponent.
    pub per_p_poly_slopes: Vec<(f64, f64)>,
    /// Optional dumped artifacts (member index, signal text, tree text).
    pub artifacts: Vec<(usize, String, String)>,
}

pub fn norms_table(
    corpus: &[ZooSpec],
    kind: SchemeKind,
    j_max: u32,
    grid: BoundaryGrid,
    ps: &[f64],
    dump_artifacts: bool,
) -> Result<NormsResult, CliError> {
    let mut rows = Vec::new();
    let mut artifacts = Vec::new();
    let mut poly: Vec<(f64, f64, f64)> = Vec::new(); // (degree, p, ratio_proj)
    for (mi, spec) in corpus.iter().enumerate() {
        let f = realize(spec, &grid).map_err(|e| CliError::from_core(e, "realize"))?;
        let tree = analyze(&f, kind, j_max).map_err(|e| CliError::from_core(e, "analyze"))?;
        let proj = synthesize(&tree, &grid).map_err(|e| CliError::from_core(e, "synthesize"))?;
        let profile = np_profile(&tree, &grid).map_err(|e| CliError::from_core(e, "np"))?;
        let tail = tree.tail_fraction();
        let converged = tree.tail_certificate_ok();
        if dump_artifacts {
            artifacts.push((mi, write_signal(&f), write_tree(&tree)));
        }
        for &p in ps {
            let lp_raw = lp_norm(&f, p).map_err(|e| CliError::from_core(e, "lp"))?;
            let lp_proj = lp_norm(&proj, p).map_err(|e| CliError::from_core(e, "lp"))?;
            let hp = hp_square_norm(&tree, p).map_err(|e| CliError::from_core(e, "hp"))?;
            let np = np_from_profile(&tree, &profile, p).map_err(|e| CliError::from_core(e, "np"))?;
            if let ZooSpec::RandomPolynomial { degree, .. } = spec {
                poly.push((*degree as f64, p, hp / lp_proj));
            }
            rows.push(NormsRow {
                member: mi,
                label: spec.label(),
                p,
                lp_raw,
                lp_projected: lp_proj,
                hp_square: hp,
                np_weighted: np,
                tail_fraction: tail,
                converged,
            });
        }
    }
    let mut pooled = None;
    let mut per_p = Vec::new();
    if poly.iter().map(|r| r.0 as u64).collect::<std::collections::BTreeSet<_>>().len() >= 2 {
        let xs: Vec<f64> = poly.iter().map(|r| r.0).collect();
        let ys: Vec<f64> = poly.iter().map(|r| r.2).collect();
        pooled = Some(log_log_slope(&xs, &ys));
        for &p in ps {
            let xs: Vec<f64> = poly.iter().filter(|r| r.1 == p).map(|r| r.0).collect();
            let ys: Vec<f64> = poly.iter().filter(|r| r.1 == p).map(|r| r.2).collect();
            per_p.push((p, log_log_slope(&xs, &ys)));
        }
    }
    Ok(NormsResult {
        rows,
        pooled_poly_slope: pooled,
        per_p_poly_slopes: per_p,
        artifacts,
    })
}

pub fn render_norms_csv(result: &NormsResult) -> String {
    let mut csv = CsvTable::new(&[
        "member",
        "label",
        "p",
        "lp_raw",
        "lp_projected",
        "hp_square",
        "np_weighted",
        "ratio_hp_lp_raw",
        "ratio_hp_lp_projected",
        "tail_fraction",
        "converged",
    ]);
    for r in &result.rows {
        csv.row(&[
            r.member.to_string(),
            r.label.clone(),
            fmt_f64(r.p),
            fmt_f64(r.lp_raw),
            fmt_f64(r.lp_projected),
            fmt_f64(r.hp_square),
            fmt_f64(r.np_weighted),
            fmt_f64(r.hp_square / r.lp_raw),
            fmt_f64(r.hp_square / r.lp_projected),
            fmt_f64(r.tail_fraction),
            r.converged.to_string(),
        ]);
    }
    csv.finish()
}

// ------------------------------------------------------------------ scramble

pub struct ScrambleMemberReport {
    pub member: usize,
    pub label: String,
    pub p: f64,
    pub baseline: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

pub struct ScrambleResult {
    pub csv: String,
    pub reports: Vec<ScrambleMemberReport>,
    /// Worst |ratio/baseline - 1| observed at p = 2, if 2 was requested.
    pub worst_p2_deviation: Option<f64>,
}

/// Sign-flip experiment over a corpus.
///
/// One analysis per member; each trial synthesizes the flipped expansion
/// once and evaluates every requested exponent on it. Patterns are keyed
/// by (seed, trial, basis index) only, so results are independent of the
/// trial schedule.
pub fn scramble_table(
    corpus: &[ZooSpec],
    kind: SchemeKind,
    j_max: u32,
    grid: BoundaryGrid,
    ps: &[f64],
    n_trials: u32,
    seed: u64,
) -> Result<ScrambleResult, CliError> {
    let bank = BasisBank::for_depth(kind, j_max, grid)
        .map_err(|e| CliError::from_core(e, "basis bank"))?;
    let mut csv = CsvTable::new(&["member", "label", "p", "trial", "ratio", "ratio_over_baseline"]);
    let mut reports = Vec::new();
    let mut worst_p2 = None::<f64>;
    for (mi, spec) in corpus.iter().enumerate() {
        let f = realize(spec, &grid).map_err(|e| CliError::from_core(e, "realize"))?;
        let tree = analyze_with_bank(&f, &bank).map_err(|e| CliError::from_core(e, "analyze"))?;
        let ident =
            synthesize_with_bank(&tree, &bank).map_err(|e| CliError::from_core(e, "synthesize"))?;
        let mut raw = Vec::with_capacity(ps.len());
        let mut baseline = Vec::with_capacity(ps.len());
        for &p in ps {
            let r = lp_norm(&f, p).map_err(|e| CliError::from_core(e, "lp"))?;
            let b = lp_norm(&ident, p).map_err(|e| CliError::from_core(e, "lp"))?;
            raw.push(r);
            baseline.push(b / r);
        }
        // per-trial ratios for every exponent, in trial order
        let trials: Vec<Vec<f64>> = (0..n_trials)
            .into_par_iter()
            .map(|t| {
                let pattern = SignPattern::draw(seed, t as u64, tree.basis_len());
                let flipped = apply_signs(&tree, &pattern).expect("pattern covers tree");
                let g = synthesize_with_bank(&flipped, &bank).expect("bank covers tree");
                ps.iter()
                    .enumerate()
                    .map(|(pi, &p)| lp_norm(&g, p).expect("p validated") / raw[pi])
                    .collect()
            })
            .collect();
        for (pi, &p) in ps.iter().enumerate() {
            let ratios: Vec<f64> = trials.iter().map(|t| t[pi]).collect();
            for (t, &ratio) in ratios.iter().enumerate() {
                let over = ratio / baseline[pi];
                if p == 2.0 {
                    let dev = (over - 1.0).abs();
                    worst_p2 = Some(worst_p2.map_or(dev, |w: f64| w.max(dev)));
                }
                csv.row(&[
                    mi.to_string(),
                    spec.label(),
                    fmt_f64(p),
                    t.to_string(),
                    fmt_f64(ratio),
                    fmt_f64(over),
                ]);
            }
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &r in &ratios {
                lo = lo.min(r);
                hi = hi.max(r);
            }
            reports.push(ScrambleMemberReport {
                member: mi,
                label: spec.label(),
                p,
                baseline: baseline[pi],
                min_ratio: lo,
                max_ratio: hi,
                mean_ratio: mean(&ratios),
            });
        }
    }
    Ok(ScrambleResult {
        csv: csv.finish(),
        reports,
        worst_p2_deviation: worst_p2,
    })
}

// ------------------------------------------------------------ counterexample

pub struct CounterexampleResult {
    pub csv: String,
    /// (p, fitted log-log slope of mean ratio vs degree).
    pub slopes: Vec<(f64, f64)>,
    /// (p, degree, base norm, mean scrambled norm, ratio) rows.
    pub rows: Vec<(f64, u32, f64, f64, f64)>,
}

/// Power-basis sign scrambles of the Dirichlet-type degree ladder.
pub fn counterexample_table(
    ps: &[f64],
    degrees: &[u32],
    n_trials: u32,
    seed: u64,
    grid: BoundaryGrid,
) -> Result<CounterexampleResult, CliError> {
    if degrees.is_empty() {
        return Err(CliError::config("degrees must not be empty"));
    }
    let mut csv = CsvTable::new(&["p", "degree", "lp_norm", "mean_scrambled_norm", "ratio"]);
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    // trial signals are p-independent; evaluate all exponents per synthesis
    let contexts: Vec<CounterexampleContext> = ps
        .iter()
        .map(|&p| CounterexampleContext::new(grid, p, seed))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::from_core(e, "counterexample"))?;
    let mut per_p_ratio: Vec<Vec<f64>> = vec![Vec::new(); ps.len()];
    for &degree in degrees {
        let norms: Vec<Vec<f64>> = (0..n_trials)
            .into_par_iter()
            .map(|t| {
                contexts
                    .iter()
                    .map(|ctx| ctx.trial_norm(degree, t).expect("degree fits grid"))
                    .collect()
            })
            .collect();
        for (pi, ctx) in contexts.iter().enumerate() {
            let trial_norms: Vec<f64> = norms.iter().map(|n| n[pi]).collect();
            let row = ctx
                .row(degree, &trial_norms)
                .map_err(|e| CliError::from_core(e, "counterexample row"))?;
            csv.row(&[
                fmt_f64(ps[pi]),
                degree.to_string(),
                fmt_f64(row.lp_norm),
                fmt_f64(row.mean_scrambled_norm),
                fmt_f64(row.ratio),
            ]);
            per_p_ratio[pi].push(row.ratio);
            rows.push((ps[pi], degree, row.lp_norm, row.mean_scrambled_norm, row.ratio));
        }
    }
    let xs: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    for (pi, &p) in ps.iter().enumerate() {
        if xs.len() >= 2 {
            slopes.push((p, log_log_slope(&xs, &per_p_ratio[pi])));
        }
    }
    Ok(CounterexampleResult {
        csv: csv.finish(),
        slopes,
        rows,
    })
}

// -------------------------------------------------------------- lemma-bounds

pub fn render_bound_scan_csv(scan: &BoundScan) -> String {
    let mut csv = CsvTable::new(&["j", "lower_normalized", "upper_normalized"]);
    for l in &scan.levels {
        csv.row(&[l.j.to_string(), fmt_f64(l.lower), fmt_f64(l.upper)]);
    }
    csv.finish()
}

// ---------------------------------------------------------------- khintchine

pub struct KhintchineRow {
    pub p: f64,
    pub alpha_index: u32,
    pub len: usize,
    pub exhaustive: bool,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub ratio: f64,
    pub std_error: Option<f64>,
}

/// Moment-equivalence ratios for seeded random coefficient sequences.
///
/// Lengths are drawn in 1..=max_len; sequences short enough are enumerated
/// exhaustively, longer ones fall back to `n_trials` Monte-Carlo draws.
pub fn khintchine_table(
    ps: &[f64],
    n_alpha: u32,
    max_len: u32,
    n_trials: u32,
    seed: u64,
) -> Result<Vec<KhintchineRow>, CliError> {
    if max_len == 0 {
        return Err(CliError::config("alpha_max_len must be positive"));
    }
    let mut rows = Vec::new();
    for &p in ps {
        for idx in 0..n_alpha {
            let len = 1 + (counter_hash(seed, 7001, idx as u64) % max_len as u64) as usize;
            let alpha: Vec<C64> = (0..len)
                .map(|i| complex_gaussian(seed, 1000 + idx as u64, i as u64))
                .collect();
            let rep = khintchine_ratio(&alpha, p, n_trials, seed ^ idx as u64)
                .map_err(|e| CliError::from_core(e, "khintchine"))?;
            rows.push(KhintchineRow {
                p,
                alpha_index: idx,
                len,
                exhaustive: rep.method == SamplingMethod::Exhaustive,
                min_ratio: rep.min_ratio,
                max_ratio: rep.max_ratio,
                ratio: rep.mean_ratio,
                std_error: rep.std_error,
            });
        }
    }
    Ok(rows)
}

pub fn render_khintchine_csv(rows: &[KhintchineRow]) -> String {
    let mut csv = CsvTable::new(&[
        "p",
        "alpha_index",
        "n_indices",
        "mode",
        "min_ratio",
        "max_ratio",
        "ratio",
        "std_error",
    ]);
    for r in rows {
        csv.row(&[
            fmt_f64(r.p),
            r.alpha_index.to_string(),
            r.len.to_string(),
            if r.exhaustive { "exhaustive" } else { "monte_carlo" }.to_string(),
            fmt_f64(r.min_ratio),
            fmt_f64(r.max_ratio),
            fmt_f64(r.ratio),
            r.std_error.map(fmt_f64).unwrap_or_default(),
        ]);
    }
    csv.finish()
}

// -------------------------------------------------------------------- nonsep

pub struct NonsepResult {
    pub csv: String,
    /// (level, contribution, cumulative including heads).
    pub rows: Vec<(u32, f64, f64)>,
}

/// Boundary-gap partial sums over complete levels.
pub fn nonsep_table(kind: SchemeKind, levels: u32) -> Result<NonsepResult, CliError> {
    let scheme = PoleScheme::new(kind, levels).map_err(|e| CliError::from_core(e, "scheme"))?;
    let mut csv = CsvTable::new(&["level", "level_contribution", "partial_sum"]);
    let mut rows = Vec::new();
    for j in 1..=levels {
        let through = scheme
            .count_through_level(j)
            .map_err(|e| CliError::from_core(e, "level count"))?;
        let cumulative = nonseparability_partial_sum(&scheme, through)
            .map_err(|e| CliError::from_core(e, "gap sum"))?;
        let prev = if j == 1 {
            nonseparability_partial_sum(&scheme, scheme.kind().head_count() as u64)
                .map_err(|e| CliError::from_core(e, "gap sum"))?
        } else {
            rows.last().map(|r: &(u32, f64, f64)| r.2).unwrap()
        };
        let contribution = cumulative - prev;
        csv.row(&[j.to_string(), fmt_f64(contribution), fmt_f64(cumulative)]);
        rows.push((j, contribution, cumulative));
    }
    Ok(NonsepResult {
        csv: csv.finish(),
        rows,
    })
}

// ------------------------------------------------- vector-maximal stability

pub struct FsRow {
    pub p: f64,
    pub q: f64,
    pub family_size: usize,
    pub fitted_constant: f64,
}

/// Fitted vector-maximal constants over seeded smooth families.
///
/// For each (p, q) and family size, draws `families` random families of
/// band-limited signals and fits C = max over families of the ratio of the
/// maximal mixed norm to the plain one.
pub fn fs_stability(
    grid: BoundaryGrid,
    pq: &[(f64, f64)],
    sizes: &[usize],
    families: u32,
    bandwidth: usize,
    seed: u64,
) -> Result<Vec<FsRow>, CliError> {
    let mut rows = Vec::new();
    for &(p, q) in pq {
        for &size in sizes {
            let mut fitted = 0.0f64;
            for fam in 0..families as u64 {
                let signals: Vec<BoundarySignal> = (0..size)
                    .map(|k| {
                        let coeffs: Vec<C64> = (0..bandwidth)
                            .map(|i| complex_gaussian(seed, fam * 1000 + k as u64, i as u64))
                            .collect();
                        BoundarySignal::from_taylor(grid, &coeffs)
                    })
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::from_core(e, "fs family"))?;
                let plain = fs_vector_norm(&signals, p, q, false)
                    .map_err(|e| CliError::from_core(e, "fs norm"))?;
                let maxed = fs_vector_norm(&signals, p, q, true)
                    .map_err(|e| CliError::from_core(e, "fs norm"))?;
                fitted = fitted.max(maxed / plain);
            }
            rows.push(FsRow {
                p,
                q,
                family_size: size,
                fitted_constant: fitted,
            });
        }
    }
    Ok(rows)
}

// ------------------------------------------------------------------ dispatch

pub struct RunArtifacts {
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    /// Set when a numerical gate failed; the caller exits 4.
    pub gate_failure: Option<String>,
}

pub const SUBCOMMANDS: &[&str] = &[
    "basis-eval",
    "gram",
    "norms",
    "scramble",
    "counterexample",
    "lemma-bounds",
    "khintchine",
    "nonsep",
];

/// Run one subcommand end to end: compute, write CSV + run manifest,
/// report any gate failure.
pub fn run_subcommand(name: &str, cfg: &ExperimentConfig) -> Result<RunArtifacts, CliError> {
    cfg.validate()?;
    let kind = cfg.scheme.kind();
    let grid = grid_of(cfg)?;
    let mut gate_failure = None;
    let mut corpus_manifest = None;

    let (csv, summary) = match name {
        "basis-eval" => {
            let count = cfg.basis_count.unwrap_or(8);
            let points = cfg.eval_points.unwrap_or(256);
            let r = basis_eval_table(kind, cfg.j_max, count, points)?;
            (
                r.csv,
                json!({ "basis_count": count, "eval_points": points }),
            )
        }
        "gram" => {
            let count = cfg.basis_count.unwrap_or(16) as u64;
            let gate = cfg.gram_gate.unwrap_or(DEFAULT_GRAM_GATE);
            let r = gram_table(kind, count, grid)?;
            if r.max_deviation > gate {
                gate_failure = Some(format!(
                    "orthonormality gate failed: max |G - I| = {:.3e} > {:.3e}",
                    r.max_deviation, gate
                ));
            }
            (
                r.csv,
                json!({ "max_deviation": r.max_deviation, "gate": gate }),
            )
        }
        "norms" => {
            let manifest = corpus_of(cfg)?;
            let corpus = manifest.specs();
            corpus_manifest = Some(manifest);
            let dump = cfg.dump_artifacts.unwrap_or(false);
            let r = norms_table(&corpus, kind, cfg.j_max, grid, &cfg.p_values, dump)?;
            if dump {
                let dir = cfg.output_dir.join("artifacts");
                std::fs::create_dir_all(&dir)
                    .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
                for (mi, signal_text, tree_text) in &r.artifacts {
                    std::fs::write(dir.join(format!("member_{mi:02}.signal")), signal_text)
                        .map_err(|e| CliError::config(format!("write artifact: {e}")))?;
                    std::fs::write(dir.join(format!("member_{mi:02}.tree")), tree_text)
                        .map_err(|e| CliError::config(format!("write artifact: {e}")))?;
                }
            }
            let csv = render_norms_csv(&r);
            let per_p: Vec<serde_json::Value> = r
                .per_p_poly_slopes
                .iter()
                .map(|(p, s)| json!({ "p": p, "slope": s }))
                .collect();
            (
                csv,
                json!({
                    "pooled_polynomial_slope": r.pooled_poly_slope,
                    "per_p_polynomial_slopes": per_p,
                }),
            )
        }
        "scramble" => {
            let manifest = corpus_of(cfg)?;
            let corpus = manifest.specs();
            corpus_manifest = Some(manifest);
            let r = scramble_table(
                &corpus,
                kind,
                cfg.j_max,
                grid,
                &cfg.p_values,
                cfg.n_trials,
                cfg.master_seed,
            )?;
            if let Some(dev) = r.worst_p2_deviation {
                if dev > P2_NEUTRALITY_TOL {
                    gate_failure = Some(format!(
                        "sign-invariance gate failed at p = 2: deviation {dev:.3e}"
                    ));
                }
            }
            let reports: Vec<serde_json::Value> = r
                .reports
                .iter()
                .map(|rep| {
                    json!({
                        "member": rep.member,
                        "label": rep.label,
                        "p": rep.p,
                        "baseline": rep.baseline,
                        "min": rep.min_ratio,
                        "max": rep.max_ratio,
                        "mean": rep.mean_ratio,
                    })
                })
                .collect();
            (
                r.csv,
                json!({
                    "worst_p2_deviation": r.worst_p2_deviation,
                    "per_member": reports,
                }),
            )
        }
        "counterexample" => {
            let degrees = cfg
                .degrees
                .clone()
                .ok_or_else(|| CliError::config("counterexample requires degrees"))?;
            let r = counterexample_table(&cfg.p_values, &degrees, cfg.n_trials, cfg.master_seed, grid)?;
            let slopes: Vec<serde_json::Value> = r
                .slopes
                .iter()
                .map(|(p, s)| json!({ "p": p, "slope": s }))
                .collect();
            (r.csv, json!({ "slopes": slopes }))
        }
        "lemma-bounds" => {
            let spc = cfg.samples_per_cell.unwrap_or(64);
            let scan = boundary_bound_scan(kind, cfg.j_max, spc)
                .map_err(|e| CliError::from_core(e, "bound scan"))?;
            (
                render_bound_scan_csv(&scan),
                json!({ "lower_est": scan.lower_est, "upper_est": scan.upper_est }),
            )
        }
        "khintchine" => {
            let n_alpha = cfg.n_alpha.unwrap_or(100);
            let max_len = cfg.alpha_max_len.unwrap_or(12);
            let rows = khintchine_table(
                &cfg.p_values,
                n_alpha,
                max_len,
                cfg.n_trials,
                cfg.master_seed,
            )?;
            (
                render_khintchine_csv(&rows),
                json!({ "n_alpha": n_alpha, "alpha_max_len": max_len }),
            )
        }
        "nonsep" => {
            let levels = cfg.levels.unwrap_or(16);
            let r = nonsep_table(kind, levels)?;
            let final_sum = r.rows.last().map(|r| r.2);
            for &(j, c, _) in &r.rows {
                if !(c > 0.5 && c <= 0.5857864376269049 + 1e-12) {
                    gate_failure = Some(format!(
                        "level contribution gate failed at level {j}: {c}"
                    ));
                }
            }
            (r.csv, json!({ "levels": levels, "final_partial_sum": final_sum }))
        }
        other => return Err(CliError::config(format!("unknown subcommand {other:?}"))),
    };

    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| {
        CliError::config(format!("cannot create {}: {e}", cfg.output_dir.display()))
    })?;
    let csv_path = cfg.output_dir.join(format!("{name}.csv"));
    std::fs::write(&csv_path, &csv)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", csv_path.display())))?;
    let manifest = RunManifest::new(name, cfg, corpus_manifest.as_ref(), summary);
    let manifest_path = cfg.output_dir.join(format!("{name}_manifest.json"));
    std::fs::write(&manifest_path, manifest.to_json())
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", manifest_path.display())))?;
    Ok(RunArtifacts {
        csv_path,
        manifest_path,
        gate_failure,
    })
}
