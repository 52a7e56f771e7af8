//! Subcommand bodies. Each one loads its inputs, computes inside the
//! requested thread pool, writes artifacts through [`OutDir`], and ends
//! with the provenance record plus a one-line summary on stdout.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use netcurv::export::{
    write_dense_matrix_csv, write_edge_values_csv, write_histogram_csv, write_node_values_csv,
    write_pgm_p5,
};
use netcurv::{
    aligned_pair_raw, curvature_map_dense, degree_values, detect, detect_format, evolve_pair,
    export_edge_list, forman_ricci_all, generate, histogram, parse_snapshot, run_flow, summary,
    with_threads, write_edge_list, ChangeReport, Error, GenModel, InputFormat, Result, Snapshot,
    WeightingConfig,
};
use serde_json::json;

use crate::provenance::{InputDigest, OutDir};
use crate::{CommonArgs, CurvatureArgs, DiffArgs, FlowCmdArgs, GenArgs, StatsArgs};

struct LoadedInput {
    snapshot: Snapshot,
    digest: InputDigest,
    format: InputFormat,
}

/// Reads, hashes, and parses one snapshot file. The label is the file stem.
fn load(
    path: &Path,
    forced: Option<InputFormat>,
    weighting: &WeightingConfig,
    time_index: u32,
) -> Result<LoadedInput> {
    let bytes = fs::read(path)?;
    let digest = InputDigest::of(path, &bytes);
    let content = String::from_utf8(bytes)
        .map_err(|_| Error::parse(1, format!("{} is not valid UTF-8", path.display())))?;
    let format = forced.unwrap_or_else(|| detect_format(&content));
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "snapshot".to_string());
    let snapshot = parse_snapshot(&content, format, &label, weighting)?.with_time_index(time_index);
    Ok(LoadedInput {
        snapshot,
        digest,
        format,
    })
}

fn common_config_json(common: &CommonArgs, format: InputFormat) -> serde_json::Value {
    json!({
        "format": format.to_string(),
        "weighting": common.weighting.to_string(),
        "cap": common.cap,
        "epsilon": common.epsilon,
        "augment_budget": common.augment_budget,
        "threads": common.threads,
    })
}

/// Maps compact node ids back to the input's original ids, one CSV row per
/// node, so the other artifacts stay joinable with the source data.
fn write_node_map(out: &mut OutDir, snapshot: &Snapshot) -> Result<()> {
    let mut file = BufWriter::new(out.file("nodes.csv")?);
    writeln!(file, "v,original_id")?;
    for (v, id) in snapshot.built.original_ids.iter().enumerate() {
        writeln!(file, "{v},{id}")?;
    }
    Ok(())
}

pub fn stats(args: &StatsArgs) -> Result<()> {
    let common = &args.common;
    let weighting = common.weighting_config();
    let loaded = load(&args.input, common.format, &weighting, 0)?;
    let snapshot = &loaded.snapshot;
    let field = with_threads(common.threads, || {
        forman_ricci_all(&snapshot.graph, &snapshot.weights)
    })??;

    let mut out = OutDir::create(&common.out_dir)?;
    let degrees = degree_values(&snapshot.graph, None);
    write_histogram_csv(
        BufWriter::new(out.file("degree_histogram.csv")?),
        &histogram(&degrees, args.bins),
    )?;
    write_histogram_csv(
        BufWriter::new(out.file("curvature_histogram.csv")?),
        &histogram(field.edge_ric(), args.bins),
    )?;

    let ric_summary = summary(field.edge_ric()).expect("parsed snapshots have edges");
    let negative = field.edge_ric().iter().filter(|&&r| r < 0.0).count();
    let negative_fraction = negative as f64 / snapshot.graph.edge_count() as f64;
    let report = json!({
        "label": snapshot.label,
        "nodes": snapshot.graph.node_count(),
        "edges": snapshot.graph.edge_count(),
        "weighting": snapshot.weighting.mode.to_string(),
        "curvature": {
            "mean": ric_summary.mean,
            "median": ric_summary.median,
            "min": ric_summary.min,
            "max": ric_summary.max,
        },
        "negative_edge_fraction": negative_fraction,
    });
    let mut file = out.file("summary.json")?;
    serde_json::to_writer_pretty(&mut file, &report)
        .map_err(|e| Error::Config(format!("summary serialization failed: {e}")))?;
    writeln!(file)?;

    let mut config = common_config_json(common, loaded.format);
    config["bins"] = json!(args.bins);
    config["input"] = json!(loaded.digest.path);
    out.finish("stats", config, &[loaded.digest])?;
    println!(
        "stats: {}: {} nodes, {} edges, mean curvature {}, negative fraction {} -> {}",
        snapshot.label,
        snapshot.graph.node_count(),
        snapshot.graph.edge_count(),
        ric_summary.mean,
        negative_fraction,
        common.out_dir.display()
    );
    Ok(())
}

/// Dense curvature map as an 8-bit grayscale image: finite entries are
/// scaled linearly from [min, max] onto [0, 255]; non-edges render black.
/// A flat field paints every edge white so the structure stays visible.
fn curvature_pixels(cells: &[f64]) -> Vec<u8> {
    let finite: Vec<f64> = cells.iter().copied().filter(|v| v.is_finite()).collect();
    let min = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let max = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    cells
        .iter()
        .map(|&v| {
            if !v.is_finite() {
                0
            } else if span > 0.0 {
                (255.0 * (v - min) / span).round() as u8
            } else {
                255
            }
        })
        .collect()
}

pub fn curvature(args: &CurvatureArgs) -> Result<()> {
    let common = &args.common;
    let weighting = common.weighting_config();
    let loaded = load(&args.input, common.format, &weighting, 0)?;
    let snapshot = &loaded.snapshot;
    let field = with_threads(common.threads, || {
        forman_ricci_all(&snapshot.graph, &snapshot.weights)
    })??;

    let mut out = OutDir::create(&common.out_dir)?;
    write_edge_values_csv(
        BufWriter::new(out.file("edge_curvature.csv")?),
        &snapshot.graph,
        field.edge_ric(),
        "ric",
    )?;
    write_node_values_csv(
        BufWriter::new(out.file("node_scalar.csv")?),
        field.node_scal(),
        "scal",
    )?;
    write_node_map(&mut out, snapshot)?;

    if args.dense {
        let cells = curvature_map_dense(&snapshot.graph, &field, args.max_dense_nodes)?;
        let n = snapshot.graph.node_count();
        write_dense_matrix_csv(BufWriter::new(out.file("curvature_map.csv")?), n, &cells)?;
        write_pgm_p5(
            BufWriter::new(out.file("curvature_map.pgm")?),
            n,
            n,
            &curvature_pixels(&cells),
        )?;
    }

    let mut config = common_config_json(common, loaded.format);
    config["dense"] = json!(args.dense);
    config["max_dense_nodes"] = json!(args.max_dense_nodes);
    config["input"] = json!(loaded.digest.path);
    out.finish("curvature", config, &[loaded.digest])?;
    println!(
        "curvature: {}: {} edges evaluated{} -> {}",
        snapshot.label,
        snapshot.graph.edge_count(),
        if args.dense { ", dense map written" } else { "" },
        common.out_dir.display()
    );
    Ok(())
}

pub fn flow(args: &FlowCmdArgs) -> Result<()> {
    let common = &args.common;
    let weighting = common.weighting_config();
    let flow_config = args.flow.flow_config(common.epsilon);
    let loaded = load(&args.input, common.format, &weighting, 0)?;
    let snapshot = &loaded.snapshot;
    let trace = with_threads(common.threads, || {
        run_flow(&snapshot.graph, &snapshot.weights, &flow_config)
    })??;

    let mut out = OutDir::create(&common.out_dir)?;
    trace.write_csv(BufWriter::new(out.file("flow_trace.csv")?))?;
    let mut file = out.file("flow_summary.json")?;
    serde_json::to_writer_pretty(&mut file, &trace.summary_json())
        .map_err(|e| Error::Config(format!("flow summary serialization failed: {e}")))?;
    writeln!(file)?;
    export_edge_list(
        &snapshot.graph,
        &trace.final_scheme,
        &snapshot.label,
        snapshot.weighting.mode,
        BufWriter::new(out.file("final_weights.txt")?),
    )?;
    write_node_map(&mut out, snapshot)?;

    let mut config = common_config_json(common, loaded.format);
    config["flow"] = serde_json::to_value(flow_config)
        .map_err(|e| Error::Config(format!("flow config serialization failed: {e}")))?;
    config["input"] = json!(loaded.digest.path);
    out.finish("flow", config, &[loaded.digest])?;
    println!(
        "flow: {}: {} steps, dt {}, {} floor and {} saturation events -> {}",
        snapshot.label,
        flow_config.steps,
        flow_config.dt,
        trace.floor_events_total,
        trace.saturation_events_total,
        common.out_dir.display()
    );
    Ok(())
}

pub fn diff(args: &DiffArgs) -> Result<()> {
    let common = &args.common;
    let weighting = common.weighting_config();
    let flow_config = args.flow.flow_config(common.epsilon);
    let a = load(&args.input_a, common.format, &weighting, 0)?;
    let b = load(&args.input_b, common.format, &weighting, 1)?;

    let report: ChangeReport = with_threads(common.threads, || -> Result<ChangeReport> {
        let pair = if args.no_flow {
            aligned_pair_raw(&a.snapshot, &b.snapshot)?
        } else {
            evolve_pair(&a.snapshot, &b.snapshot, &flow_config)?
        };
        Ok(detect(&pair, args.threshold))
    })??;

    let mut out = OutDir::create(&common.out_dir)?;
    let mut file = out.file("report.json")?;
    serde_json::to_writer_pretty(&mut file, &report.report_json())
        .map_err(|e| Error::Config(format!("report serialization failed: {e}")))?;
    writeln!(file)?;

    let mut scores = BufWriter::new(out.file("node_scores.csv")?);
    writeln!(scores, "node,score")?;
    for (v, score) in report.node_similarity.iter().enumerate() {
        writeln!(scores, "{},{score}", report.union_ids[v])?;
    }
    drop(scores);
    let mut flagged = BufWriter::new(out.file("flagged_nodes.csv")?);
    writeln!(flagged, "node,score")?;
    for &v in &report.flagged_nodes {
        writeln!(
            flagged,
            "{},{}",
            report.union_ids[v as usize], report.node_similarity[v as usize]
        )?;
    }
    drop(flagged);
    report.export_heatmap_csv(BufWriter::new(out.file("heatmap.csv")?))?;
    let union_nodes = report.union_ids.len();
    let heatmap_image = union_nodes <= args.max_heatmap_nodes;
    if heatmap_image {
        report.export_heatmap_pgm(true, args.max_heatmap_nodes, out.file("heatmap.pgm")?)?;
    }

    let mut config = common_config_json(common, a.format);
    config["threshold"] = json!(args.threshold);
    config["no_flow"] = json!(args.no_flow);
    config["max_heatmap_nodes"] = json!(args.max_heatmap_nodes);
    if !args.no_flow {
        config["flow"] = serde_json::to_value(flow_config)
            .map_err(|e| Error::Config(format!("flow config serialization failed: {e}")))?;
    }
    config["input_a"] = json!(a.digest.path);
    config["input_b"] = json!(b.digest.path);
    out.finish("diff", config, &[a.digest, b.digest])?;
    println!(
        "diff: {} vs {}: {} of {} nodes flagged at t={}{} -> {}",
        report.label_a,
        report.label_b,
        report.flagged_nodes.len(),
        union_nodes,
        args.threshold,
        if heatmap_image {
            ""
        } else {
            " (union too large for the PGM heatmap; see heatmap.csv)"
        },
        common.out_dir.display()
    );
    Ok(())
}

fn build_model(args: &GenArgs) -> Result<GenModel> {
    let model = match args.model.as_str() {
        "preferential-attachment" => GenModel::PreferentialAttachment {
            n: args.nodes,
            m: args.attach,
        },
        "ring-lattice-rewire" => GenModel::RingLatticeRewire {
            n: args.nodes,
            k: args.neighbors,
            p: args.prob,
        },
        "erdos-renyi" => GenModel::ErdosRenyi {
            n: args.nodes,
            p: args.prob,
        },
        other => {
            return Err(Error::Config(format!(
                "unknown model '{other}' (expected preferential-attachment|ring-lattice-rewire|erdos-renyi)"
            )))
        }
    };
    model.validate()?;
    Ok(model)
}

fn default_gen_name(model: &GenModel, seed: u64) -> String {
    match *model {
        GenModel::PreferentialAttachment { n, m } => format!("pa-n{n}-m{m}-seed{seed}.txt"),
        GenModel::RingLatticeRewire { n, k, p } => format!("ring-n{n}-k{k}-p{p}-seed{seed}.txt"),
        GenModel::ErdosRenyi { n, p } => format!("er-n{n}-p{p}-seed{seed}.txt"),
    }
}

pub fn gen(args: &GenArgs) -> Result<()> {
    let model = build_model(args)?;
    let edges = generate(&model, args.seed)?;
    let name = args
        .output
        .clone()
        .unwrap_or_else(|| default_gen_name(&model, args.seed));

    let mut out = OutDir::create(&args.out_dir)?;
    write_edge_list(BufWriter::new(out.file(&name)?), &model, args.seed, &edges)?;
    let config = json!({
        "model": model,
        "seed": args.seed,
        "output": name,
    });
    out.finish("gen", config, &[])?;
    println!(
        "gen: {model} seed {}: {} edges -> {}",
        args.seed,
        edges.len(),
        args.out_dir.join(&name).display()
    );
    Ok(())
}
