//! File formats: boundary signals, coefficient trees, corpus manifests,
//! and the CSV/run-manifest writers.
//!
//! The signal and tree formats are versioned line-oriented text; floats are
//! written with 17 significant digits so every value round-trips bit for
//! bit.

use crate::config::{CliError, ExperimentConfig, SchemeChoice};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;
use tmlab_core::{BoundaryGrid, BoundarySignal, CoefficientTree, SchemeKind, C64};

const SIGNAL_MAGIC: &str = "tmlab-signal v1";
const TREE_MAGIC: &str = "tmlab-tree v1";

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.17e}")
}

fn parse_f64(s: &str) -> Result<f64, CliError> {
    s.parse()
        .map_err(|e| CliError::config(format!("bad float {s:?}: {e}")))
}

fn scheme_name(kind: SchemeKind) -> &'static str {
    match kind {
        SchemeKind::PowerBasis => "power",
        SchemeKind::Case1 => "case1",
        SchemeKind::Case2 => "case2",
    }
}

fn scheme_from_name(name: &str) -> Result<SchemeKind, CliError> {
    match name {
        "power" => Ok(SchemeKind::PowerBasis),
        "case1" => Ok(SchemeKind::Case1),
        "case2" => Ok(SchemeKind::Case2),
        other => Err(CliError::config(format!("unknown scheme {other:?}"))),
    }
}

/// Serialize a boundary signal: header, grid size, one `re im` line per node.
pub fn write_signal(f: &BoundarySignal) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SIGNAL_MAGIC}");
    let _ = writeln!(out, "log2_size {}", f.grid().log2_size());
    for v in f.values() {
        let _ = writeln!(out, "{} {}", fmt_f64(v.re), fmt_f64(v.im));
    }
    out
}

pub fn read_signal(text: &str) -> Result<BoundarySignal, CliError> {
    let mut lines = text.lines();
    let magic = lines.next().unwrap_or_default();
    if magic != SIGNAL_MAGIC {
        return Err(CliError::config(format!("bad signal header {magic:?}")));
    }
    let header = lines.next().unwrap_or_default();
    let log2 = header
        .strip_prefix("log2_size ")
        .ok_or_else(|| CliError::config("missing log2_size line"))?
        .parse::<u32>()
        .map_err(|e| CliError::config(format!("bad log2_size: {e}")))?;
    let grid = BoundaryGrid::new(log2).map_err(|e| CliError::from_core(e, "signal grid"))?;
    let mut values = Vec::with_capacity(grid.size());
    for line in lines {
        let mut parts = line.split_whitespace();
        let re = parse_f64(parts.next().ok_or_else(|| CliError::config("short sample line"))?)?;
        let im = parse_f64(parts.next().ok_or_else(|| CliError::config("short sample line"))?)?;
        values.push(C64::new(re, im));
    }
    if values.len() != grid.size() {
        return Err(CliError::config(format!(
            "expected {} samples, found {}",
            grid.size(),
            values.len()
        )));
    }
    BoundarySignal::from_samples(grid, values).map_err(|e| CliError::from_core(e, "signal"))
}

/// Serialize a coefficient tree: scheme, depth, heads, one record per (j, k).
pub fn write_tree(t: &CoefficientTree) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TREE_MAGIC}");
    let _ = writeln!(out, "scheme {}", scheme_name(t.kind()));
    let _ = writeln!(out, "j_max {}", t.j_max());
    let h1 = t.head1();
    let _ = writeln!(out, "head1 {} {}", fmt_f64(h1.re), fmt_f64(h1.im));
    if let Some(h2) = t.head2() {
        let _ = writeln!(out, "head2 {} {}", fmt_f64(h2.re), fmt_f64(h2.im));
    }
    for j in 1..=t.j_max() {
        for (k, c) in t.level(j).expect("complete tree").iter().enumerate() {
            let _ = writeln!(out, "c {j} {k} {} {}", fmt_f64(c.re), fmt_f64(c.im));
        }
    }
    out
}

pub fn read_tree(text: &str) -> Result<CoefficientTree, CliError> {
    let mut lines = text.lines();
    if lines.next().unwrap_or_default() != TREE_MAGIC {
        return Err(CliError::config("bad tree header"));
    }
    let mut kind: Option<SchemeKind> = None;
    let mut j_max: Option<u32> = None;
    let mut head1: Option<C64> = None;
    let mut head2: Option<C64> = None;
    let mut coeffs: Vec<C64> = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("scheme") => {
                kind = Some(scheme_from_name(
                    parts.next().ok_or_else(|| CliError::config("missing scheme"))?,
                )?);
            }
            Some("j_max") => {
                j_max = Some(
                    parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| CliError::config("bad j_max"))?,
                );
            }
            Some("head1") | Some("head2") | Some("c") => {
                let tag = line.split_whitespace().next().unwrap();
                if tag == "c" {
                    // skip the (j, k) labels; records arrive in enumeration order
                    parts.next();
                    parts.next();
                }
                let re = parse_f64(parts.next().ok_or_else(|| CliError::config("short record"))?)?;
                let im = parse_f64(parts.next().ok_or_else(|| CliError::config("short record"))?)?;
                let v = C64::new(re, im);
                match tag {
                    "head1" => head1 = Some(v),
                    "head2" => head2 = Some(v),
                    _ => coeffs.push(v),
                }
            }
            Some(other) => return Err(CliError::config(format!("unknown record {other:?}"))),
            None => {}
        }
    }
    let kind = kind.ok_or_else(|| CliError::config("missing scheme"))?;
    let j_max = j_max.ok_or_else(|| CliError::config("missing j_max"))?;
    let head1 = head1.ok_or_else(|| CliError::config("missing head1"))?;
    CoefficientTree::from_parts(kind, j_max, head1, head2, coeffs)
        .map_err(|e| CliError::from_core(e, "tree"))
}

/// Corpus manifest: the zoo members an experiment runs over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CorpusMember {
    Monomial { degree: u32 },
    DirichletKernel { terms: u32 },
    Szego { radius: f64, turn: f64 },
    RandomPolynomial { degree: u32, seed: u64 },
    Lacunary { levels: u32, seed: u64 },
    NearBoundaryPower { exponent: f64, damping: f64 },
}

impl CorpusMember {
    pub fn to_spec(&self) -> tmlab_core::zoo::ZooSpec {
        use tmlab_core::zoo::ZooSpec as Z;
        match *self {
            CorpusMember::Monomial { degree } => Z::Monomial { degree },
            CorpusMember::DirichletKernel { terms } => Z::DirichletKernel { terms },
            CorpusMember::Szego { radius, turn } => Z::Szego { radius, turn },
            CorpusMember::RandomPolynomial { degree, seed } => Z::RandomPolynomial { degree, seed },
            CorpusMember::Lacunary { levels, seed } => Z::Lacunary { levels, seed },
            CorpusMember::NearBoundaryPower { exponent, damping } => {
                Z::NearBoundaryPower { exponent, damping }
            }
        }
    }

    pub fn from_spec(spec: &tmlab_core::zoo::ZooSpec) -> Self {
        use tmlab_core::zoo::ZooSpec as Z;
        match *spec {
            Z::Monomial { degree } => CorpusMember::Monomial { degree },
            Z::DirichletKernel { terms } => CorpusMember::DirichletKernel { terms },
            Z::Szego { radius, turn } => CorpusMember::Szego { radius, turn },
            Z::RandomPolynomial { degree, seed } => CorpusMember::RandomPolynomial { degree, seed },
            Z::Lacunary { levels, seed } => CorpusMember::Lacunary { levels, seed },
            Z::NearBoundaryPower { exponent, damping } => {
                CorpusMember::NearBoundaryPower { exponent, damping }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub version: u32,
    pub members: Vec<CorpusMember>,
}

impl CorpusManifest {
    pub fn default_corpus() -> Self {
        CorpusManifest {
            version: 1,
            members: tmlab_core::zoo::default_corpus()
                .iter()
                .map(CorpusMember::from_spec)
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read corpus manifest {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("cannot parse corpus manifest: {e}")))
    }

    pub fn specs(&self) -> Vec<tmlab_core::zoo::ZooSpec> {
        self.members.iter().map(|m| m.to_spec()).collect()
    }
}

/// Simple CSV assembly with a fixed header contract.
pub struct CsvTable {
    text: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            text: format!("{}\n", header.join(",")),
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "CSV row width mismatch");
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// JSON run manifest: everything needed to re-execute the run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub manifest_version: u32,
    pub subcommand: String,
    pub library_version: String,
    pub resolved_seed: u64,
    pub config: ExperimentConfig,
    pub corpus: Option<CorpusManifest>,
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        config: &ExperimentConfig,
        corpus: Option<&CorpusManifest>,
        summary: serde_json::Value,
    ) -> Self {
        RunManifest {
            manifest_version: 1,
            subcommand: subcommand.to_string(),
            library_version: crate::LIBRARY_VERSION.to_string(),
            resolved_seed: config.master_seed,
            config: config.clone(),
            corpus: corpus.cloned(),
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

/// Scheme label used in CSV rows.
pub fn scheme_label(choice: SchemeChoice) -> &'static str {
    scheme_name(choice.kind())
}
