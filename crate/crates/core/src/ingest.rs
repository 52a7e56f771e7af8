//! Edge-list ingestion for two common public-dataset dialects, plus the
//! canonical weighted export.
//!
//! The `snap` dialect uses `#` comment lines and whitespace-separated
//! integer pairs `u w`, optionally extended by a third floating-point
//! weight column (which is what the canonical export writes). The
//! `konect` dialect uses `%` comment lines, 1-based node ids (shifted to
//! 0-based on ingestion), and optional weight and timestamp columns.
//!
//! Within one file every data line must have the same number of columns.
//! Weights must be positive and finite. Directed inputs are read as
//! undirected: both orientations of a pair merge into one canonical edge.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph_weighted, BuiltGraph, Graph};
use crate::weighting::{derive_weights, WeightScheme, WeightingConfig, WeightingMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Snap,
    Konect,
}

impl std::fmt::Display for InputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InputFormat::Snap => "snap",
            InputFormat::Konect => "konect",
        })
    }
}

impl std::str::FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snap" => Ok(InputFormat::Snap),
            "konect" => Ok(InputFormat::Konect),
            other => Err(Error::Config(format!(
                "unknown input format '{other}' (expected snap|konect)"
            ))),
        }
    }
}

/// Raw parse output, before graph construction: edge rows in file order
/// with their (default 1) weights, plus preserved comment lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEdgeList {
    pub rows: Vec<(u64, u64, f64)>,
    pub comments: Vec<String>,
    pub has_weight_column: bool,
    /// Per-row timestamps when the input had a fourth column.
    pub timestamps: Option<Vec<i64>>,
}

/// One loaded network snapshot: the parsed graph, the weighting scheme
/// derived from it, and enough metadata to reproduce the run.
#[derive(Debug, Clone)]
pub struct Snapshot {
    /// The parsed graph before any augmentation, with merge bookkeeping.
    pub built: BuiltGraph,
    /// The working graph the weights live on. Identical to `built.graph`
    /// except in augmented mode, which inserts virtual edges.
    pub graph: Graph,
    pub weights: WeightScheme,
    /// Virtual-edge tags for the augmented mode, indexed like `graph` edges.
    pub is_virtual: Option<Vec<bool>>,
    pub label: String,
    /// Position of this snapshot in its series (0 for standalone use).
    pub time_index: u32,
    pub format: InputFormat,
    /// Comment lines from the source file, in order.
    pub source_meta: Vec<String>,
    /// Per-canonical-edge sums of the input weight column, if there was one.
    pub raw_weights: Option<Vec<f64>>,
    pub weighting: WeightingConfig,
    /// Non-positive raw values floored during weight normalization.
    pub floored_raws: usize,
}

impl Snapshot {
    pub fn with_time_index(mut self, time_index: u32) -> Self {
        self.time_index = time_index;
        self
    }

    /// Canonical weighted edge-list export of the working graph; parses
    /// back under the snap dialect.
    pub fn export<W: std::io::Write>(&self, out: W) -> std::io::Result<()> {
        export_edge_list(&self.graph, &self.weights, &self.label, self.weighting.mode, out)
    }
}

/// Picks the dialect from the first non-blank line: `%` means konect,
/// anything else is read as snap.
pub fn detect_format(content: &str) -> InputFormat {
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('%') {
            return InputFormat::Konect;
        }
        return InputFormat::Snap;
    }
    InputFormat::Snap
}

fn parse_id(token: &str, line_no: usize) -> Result<u64> {
    token
        .parse::<u64>()
        .map_err(|_| Error::parse(line_no, format!("invalid node id '{token}'")))
}

fn parse_weight(token: &str, line_no: usize) -> Result<f64> {
    let w: f64 = token
        .parse()
        .map_err(|_| Error::parse(line_no, format!("invalid weight '{token}'")))?;
    if !w.is_finite() || w <= 0.0 {
        return Err(Error::parse(
            line_no,
            format!("weight must be positive and finite, got '{token}'"),
        ));
    }
    Ok(w)
}

fn parse_rows(content: &str, format: InputFormat) -> Result<ParsedEdgeList> {
    let (comment, min_cols, max_cols) = match format {
        InputFormat::Snap => ('#', 2, 3),
        InputFormat::Konect => ('%', 2, 4),
    };
    let mut rows: Vec<(u64, u64, f64)> = Vec::new();
    let mut comments: Vec<String> = Vec::new();
    let mut timestamps: Vec<i64> = Vec::new();
    let mut has_weight_column = false;
    let mut has_timestamp_column = false;
    let mut arity: Option<usize> = None;
    for (idx, raw_line) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with(comment) {
            comments.push(line.to_string());
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < min_cols || tokens.len() > max_cols {
            return Err(Error::parse(
                line_no,
                format!(
                    "expected {min_cols} to {max_cols} columns, got {}",
                    tokens.len()
                ),
            ));
        }
        match arity {
            None => arity = Some(tokens.len()),
            Some(a) if a != tokens.len() => {
                return Err(Error::parse(
                    line_no,
                    format!("inconsistent column count: {} after {a}", tokens.len()),
                ));
            }
            Some(_) => {}
        }
        let mut u = parse_id(tokens[0], line_no)?;
        let mut w = parse_id(tokens[1], line_no)?;
        if format == InputFormat::Konect {
            // 1-based ids, shifted to 0-based
            if u < 1 || w < 1 {
                return Err(Error::parse(line_no, "node ids in this dialect start at 1"));
            }
            u -= 1;
            w -= 1;
        }
        let weight = if tokens.len() >= 3 {
            has_weight_column = true;
            parse_weight(tokens[2], line_no)?
        } else {
            1.0
        };
        if tokens.len() >= 4 {
            has_timestamp_column = true;
            let ts: i64 = tokens[3]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid timestamp '{}'", tokens[3])))?;
            timestamps.push(ts);
        }
        rows.push((u, w, weight));
    }
    Ok(ParsedEdgeList {
        rows,
        comments,
        has_weight_column,
        timestamps: has_timestamp_column.then_some(timestamps),
    })
}

/// Parses the snap dialect: `#` comments, `u w` integer pairs, optional
/// third weight column. Returns rows in file order; self-loops and
/// duplicates survive until graph construction.
pub fn parse_snap_edgelist(content: &str) -> Result<ParsedEdgeList> {
    parse_rows(content, InputFormat::Snap)
}

/// Parses the konect dialect: `%` comments, 1-based `src dst` ids shifted
/// to 0-based, optional weight and timestamp columns.
pub fn parse_konect(content: &str) -> Result<ParsedEdgeList> {
    parse_rows(content, InputFormat::Konect)
}

fn snapshot_from_parsed(
    parsed: ParsedEdgeList,
    format: InputFormat,
    label: &str,
    weighting: &WeightingConfig,
) -> Result<Snapshot> {
    let built = build_graph_weighted(&parsed.rows);
    if built.graph.edge_count() == 0 {
        return Err(Error::EmptyGraph(format!(
            "{label}: input contains no usable edges"
        )));
    }
    let derived = derive_weights(&built.graph, &built.weight_sum, weighting)?;
    let raw_weights = parsed.has_weight_column.then(|| built.weight_sum.clone());
    Ok(Snapshot {
        built,
        graph: derived.graph,
        weights: derived.scheme,
        is_virtual: derived.is_virtual,
        label: label.to_string(),
        time_index: 0,
        format,
        source_meta: parsed.comments,
        raw_weights,
        weighting: *weighting,
        floored_raws: derived.floored_raws,
    })
}

/// Parses one snapshot from in-memory text and derives its weighting.
/// Line numbers in errors are 1-based positions in `content`.
pub fn parse_snapshot(
    content: &str,
    format: InputFormat,
    label: &str,
    weighting: &WeightingConfig,
) -> Result<Snapshot> {
    let parsed = parse_rows(content, format)?;
    snapshot_from_parsed(parsed, format, label, weighting)
}

/// Loads a snapshot from disk, auto-detecting the dialect unless one is
/// forced. The label is the file stem. Deterministic: the same file and
/// config always produce bit-equal weights.
pub fn load_snapshot(
    path: impl AsRef<Path>,
    format: Option<InputFormat>,
    weighting: &WeightingConfig,
) -> Result<Snapshot> {
    let path = path.as_ref();
    let content = fs::read_to_string(path)?;
    let format = format.unwrap_or_else(|| detect_format(&content));
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "snapshot".to_string());
    parse_snapshot(&content, format, &label, weighting)
}

/// Builds a snapshot directly from raw edge pairs, bypassing the parsers.
pub fn snapshot_from_edges(
    label: &str,
    edges: &[(u64, u64)],
    weighting: &WeightingConfig,
) -> Result<Snapshot> {
    let rows: Vec<(u64, u64, f64)> = edges.iter().map(|&(u, w)| (u, w, 1.0)).collect();
    let parsed = ParsedEdgeList {
        rows,
        comments: Vec::new(),
        has_weight_column: false,
        timestamps: None,
    };
    snapshot_from_parsed(parsed, InputFormat::Snap, label, weighting)
}

/// Writes the canonical weighted edge list: a one-line `#` header naming
/// the dataset and weighting mode, then one `u w gamma` row per edge in
/// canonical order, using compact node ids. The output parses back under
/// the snap dialect, and re-deriving weights in multiplicity mode
/// reproduces `scheme` bitwise (the weight column is already normalized).
pub fn export_edge_list<W: std::io::Write>(
    g: &Graph,
    scheme: &WeightScheme,
    label: &str,
    mode: WeightingMode,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(
        out,
        "# {label} weighting={mode} nodes={} edges={}",
        g.node_count(),
        g.edge_count()
    )?;
    for (k, &(u, w)) in g.edges().iter().enumerate() {
        writeln!(out, "{u} {w} {}", scheme.edge_weights()[k])?;
    }
    Ok(())
}
