//! End-to-end checks of the binary: exit codes, reproducible outputs, and
//! the file formats written by runs.

use std::path::Path;
use std::process::Command;
use tmlab::config::{exit_code, ExperimentConfig, SchemeChoice};
use tmlab::formats::{read_signal, read_tree, CorpusManifest, RunManifest};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tmlab"))
}

fn base_config(out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        scheme: SchemeChoice::Case1,
        j_max: 4,
        grid_log2_size: 10,
        p_values: vec![1.33, 2.0],
        n_trials: 10,
        master_seed: 42,
        corpus_manifest: None,
        output_dir: out.to_path_buf(),
        basis_count: None,
        eval_points: None,
        degrees: None,
        samples_per_cell: None,
        alpha_max_len: None,
        n_alpha: None,
        levels: None,
        gram_gate: None,
        dump_artifacts: None,
    }
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path
}

fn small_corpus(dir: &Path) -> std::path::PathBuf {
    let manifest = CorpusManifest {
        version: 1,
        members: vec![
            tmlab::formats::CorpusMember::Monomial { degree: 2 },
            tmlab::formats::CorpusMember::Szego {
                radius: 0.6,
                turn: 0.25,
            },
            tmlab::formats::CorpusMember::RandomPolynomial { degree: 5, seed: 9 },
        ],
    };
    let path = dir.join("corpus.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    path
}

#[test]
fn gram_run_succeeds_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(&dir.path().join("out"));
    cfg.basis_count = Some(16);
    cfg.grid_log2_size = 12;
    cfg.j_max = 6;
    let cfg_path = write_config(dir.path(), &cfg);
    let status = bin().args(["gram", "--config"]).arg(&cfg_path).status().unwrap();
    assert_eq!(status.code(), Some(exit_code::OK));
    let csv = std::fs::read_to_string(cfg.output_dir.join("gram.csv")).unwrap();
    assert!(csv.starts_with("row,col,re,im\n"));
    assert_eq!(csv.lines().count(), 1 + 16 * 16);
    let manifest: RunManifest = serde_json::from_str(
        &std::fs::read_to_string(cfg.output_dir.join("gram_manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest.subcommand, "gram");
    assert_eq!(manifest.config, cfg);
    assert_eq!(manifest.resolved_seed, 42);
    let max_dev = manifest.summary["max_deviation"].as_f64().unwrap();
    assert!(max_dev < 1e-8, "off-diagonal too large: {max_dev}");
}

#[test]
fn gate_failure_exits_4_but_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(&dir.path().join("out"));
    cfg.basis_count = Some(8);
    cfg.gram_gate = Some(1e-30); // unreachable gate
    let cfg_path = write_config(dir.path(), &cfg);
    let output = bin().args(["gram", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(exit_code::GATE));
    assert!(String::from_utf8_lossy(&output.stderr).contains("gate"));
    assert!(cfg.output_dir.join("gram.csv").exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // unreadable config
    let output = bin()
        .args(["gram", "--config"])
        .arg(dir.path().join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(exit_code::CONFIG));
    // unknown subcommand (clap uses exit code 2 as well)
    let output = bin().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(exit_code::CONFIG));
    // malformed json
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    let output = bin().args(["gram", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(output.status.code(), Some(exit_code::CONFIG));
}

#[test]
fn resolution_violation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(&dir.path().join("out"));
    cfg.j_max = 6; // grid 2^10 < 2^(6+6)
    let cfg_path = write_config(dir.path(), &cfg);
    let output = bin().args(["norms", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(exit_code::RESOLUTION));
    assert!(String::from_utf8_lossy(&output.stderr).contains("coarse"));
}

#[test]
fn scramble_reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = small_corpus(dir.path());
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2", "4"].iter().enumerate() {
        let mut cfg = base_config(&dir.path().join(format!("out{i}")));
        cfg.corpus_manifest = Some(corpus.clone());
        let cfg_path = dir.path().join(format!("cfg{i}.json"));
        std::fs::write(&cfg_path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
        let status = bin()
            .args(["scramble", "--config"])
            .arg(&cfg_path)
            .env("TMLAB_THREADS", threads)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(exit_code::OK));
        outputs.push(std::fs::read(cfg.output_dir.join("scramble.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn norms_dump_artifacts_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = small_corpus(dir.path());
    let mut cfg = base_config(&dir.path().join("out"));
    cfg.corpus_manifest = Some(corpus);
    cfg.dump_artifacts = Some(true);
    let cfg_path = write_config(dir.path(), &cfg);
    let status = bin().args(["norms", "--config"]).arg(&cfg_path).status().unwrap();
    assert_eq!(status.code(), Some(exit_code::OK));
    // dumped files parse and regenerate bit-exactly
    let grid = tmlab_core::BoundaryGrid::new(cfg.grid_log2_size).unwrap();
    let manifest = CorpusManifest::load(&cfg.corpus_manifest.clone().unwrap()).unwrap();
    for (mi, member) in manifest.members.iter().enumerate() {
        let sig_text =
            std::fs::read_to_string(cfg.output_dir.join(format!("artifacts/member_{mi:02}.signal")))
                .unwrap();
        let from_file = read_signal(&sig_text).unwrap();
        let regenerated = tmlab_core::zoo::realize(&member.to_spec(), &grid).unwrap();
        assert_eq!(from_file.values(), regenerated.values());
        let tree_text =
            std::fs::read_to_string(cfg.output_dir.join(format!("artifacts/member_{mi:02}.tree")))
                .unwrap();
        let tree = read_tree(&tree_text).unwrap();
        let expected = tmlab_core::tree::analyze(&regenerated, cfg.scheme.kind(), cfg.j_max).unwrap();
        assert_eq!(tree, expected);
    }
}

#[test]
fn counterexample_requires_degrees_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(&dir.path().join("out"));
    cfg.scheme = SchemeChoice::Power;
    cfg.n_trials = 8;
    let cfg_path = write_config(dir.path(), &cfg);
    // missing degrees is a config error
    let output = bin().args(["counterexample", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(exit_code::CONFIG));
    // with a ladder it runs and emits one row per (p, degree)
    cfg.degrees = Some(vec![4, 8, 16]);
    let cfg_path = write_config(dir.path(), &cfg);
    let status = bin().args(["counterexample", "--config"]).arg(&cfg_path).status().unwrap();
    assert_eq!(status.code(), Some(exit_code::OK));
    let csv = std::fs::read_to_string(cfg.output_dir.join("counterexample.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
    assert!(csv.starts_with("p,degree,lp_norm,mean_scrambled_norm,ratio\n"));
}

#[test]
fn nonsep_csv_contract() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(&dir.path().join("out"));
    cfg.levels = Some(16);
    let cfg_path = write_config(dir.path(), &cfg);
    let status = bin().args(["nonsep", "--config"]).arg(&cfg_path).status().unwrap();
    assert_eq!(status.code(), Some(exit_code::OK));
    let csv = std::fs::read_to_string(cfg.output_dir.join("nonsep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("level,level_contribution,partial_sum"));
    let mut prev = 0.0;
    let mut last = 0.0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let sum: f64 = fields[2].parse().unwrap();
        assert!(sum > prev, "partial sums must increase");
        prev = sum;
        last = sum;
    }
    assert!((8.0..=10.4).contains(&last));
}

#[test]
fn khintchine_and_self_check_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(&dir.path().join("out"));
    cfg.n_alpha = Some(10);
    cfg.alpha_max_len = Some(6);
    let cfg_path = write_config(dir.path(), &cfg);
    let status = bin().args(["khintchine", "--config"]).arg(&cfg_path).status().unwrap();
    assert_eq!(status.code(), Some(exit_code::OK));
    let csv = std::fs::read_to_string(cfg.output_dir.join("khintchine.csv")).unwrap();
    assert!(csv.contains("exhaustive"));

    let output = bin().arg("--self-check").output().unwrap();
    assert_eq!(output.status.code(), Some(exit_code::OK));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn basis_eval_and_lemma_bounds_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config(&dir.path().join("out"));
    cfg.basis_count = Some(6);
    cfg.eval_points = Some(32);
    let cfg_path = write_config(dir.path(), &cfg);
    let status = bin().args(["basis-eval", "--config"]).arg(&cfg_path).status().unwrap();
    assert_eq!(status.code(), Some(exit_code::OK));
    let csv = std::fs::read_to_string(cfg.output_dir.join("basis-eval.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6 * 32);

    let mut cfg = base_config(&dir.path().join("out2"));
    cfg.samples_per_cell = Some(16);
    cfg.j_max = 4;
    let cfg_path = dir.path().join("cfg2.json");
    std::fs::write(&cfg_path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    let status = bin().args(["lemma-bounds", "--config"]).arg(&cfg_path).status().unwrap();
    assert_eq!(status.code(), Some(exit_code::OK));
    let manifest: RunManifest = serde_json::from_str(
        &std::fs::read_to_string(cfg.output_dir.join("lemma-bounds_manifest.json")).unwrap(),
    )
    .unwrap();
    assert!(manifest.summary["lower_est"].as_f64().unwrap() > 0.0);
}
