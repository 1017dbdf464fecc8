//! Implementations behind the four subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use td13_core::embedder::{draw, DrawError, DrawOptions, PlaneGraphInput};
use td13_core::encoding::{covering_label, qr_encode, type_of, Corner, SConvention};
use td13_core::symbolic::psi_polynomial;
use td13_core::truncation::nodes_to_depth;
use td13_core::validator::{
    check_distinct_vertices, check_vertex_edge_separation, count_length_classes, CheckFailure,
    Tolerances, ValidationReport,
};

use crate::formats::{
    drawing_to_file, failure_entry, file_to_drawing, report_to_file, DrawingFile, FailureEntry,
    GraphFile,
};
use crate::render::drawing_svg;
use crate::selftest::{run_all, SelftestConfig};
use crate::workers::run3;
use crate::CmdError;

/// Depth cap keeping full enumerations around a million nodes.
pub const DEPTH_CAP: usize = 12;

pub struct DrawConfig {
    pub input: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub scale: f64,
    pub convention: SConvention,
    pub base_edge: Option<(usize, usize)>,
    pub keep_augmented: bool,
    pub retry_budget: u32,
    pub tolerances: Tolerances,
}

pub fn cmd_draw(cfg: &DrawConfig) -> Result<(), CmdError> {
    let text = fs::read_to_string(&cfg.input)
        .map_err(|e| CmdError::Input(format!("{}: {e}", cfg.input.display())))?;
    let file: GraphFile = serde_json::from_str(&text)
        .map_err(|e| CmdError::Input(format!("{}: {e}", cfg.input.display())))?;
    let graph = PlaneGraphInput::new(file.n, file.outer_order, &file.edges)
        .map_err(|e| CmdError::Input(format!("{e}")))?;
    let opts = DrawOptions {
        seed: cfg.seed,
        scale: cfg.scale,
        convention: cfg.convention,
        base_edge: cfg.base_edge,
        keep_augmented: cfg.keep_augmented,
        retry_budget: cfg.retry_budget,
        tolerances: cfg.tolerances,
    };
    let drawing = draw(&graph, &opts).map_err(|e| match e {
        DrawError::RetryBudgetExhausted { .. } => CmdError::RetryExhausted(format!("{e}")),
        other => CmdError::Input(format!("{other}")),
    })?;

    let stem = cfg.out.clone().unwrap_or_else(|| default_stem(&cfg.input));
    let json_path = with_suffix(&stem, "json");
    let svg_path = with_suffix(&stem, "svg");
    let file = drawing_to_file(&drawing);
    write_file(&json_path, &pretty_json(&file)?)?;
    write_file(&svg_path, &drawing_svg(&drawing))?;
    println!(
        "drew {} vertices, {} edges, {} length classes in {} attempt(s); wrote {} and {}",
        drawing.coords.len(),
        drawing.edges.len(),
        drawing.classes.len(),
        drawing.attempts,
        json_path.display(),
        svg_path.display()
    );
    Ok(())
}

fn default_stem(input: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "drawing".to_string());
    input.with_file_name(format!("{stem}.drawing"))
}

fn with_suffix(stem: &Path, ext: &str) -> PathBuf {
    PathBuf::from(format!("{}.{ext}", stem.display()))
}

fn pretty_json<T: serde::Serialize>(value: &T) -> Result<String, CmdError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CmdError::Input(format!("serialization failed: {e}")))
}

fn write_file(path: &Path, content: &str) -> Result<(), CmdError> {
    fs::write(path, content).map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))
}

pub struct EnumerateConfig {
    pub depth: usize,
    pub convention: SConvention,
    pub out: Option<PathBuf>,
}

/// Streams one row per rhombus-tree node: path, code, properness, type, the
/// four corner labels, and the base vertex polynomial.
pub fn cmd_enumerate(cfg: &EnumerateConfig) -> Result<(), CmdError> {
    if cfg.depth == 0 || cfg.depth > DEPTH_CAP {
        return Err(CmdError::Input(format!(
            "depth must lie in 1..={DEPTH_CAP}, got {}",
            cfg.depth
        )));
    }
    let mut rows = String::new();
    rows.push_str("path\tqr\tproper\ttype\tpi_v0\tpi_v1\tpi_v2\tpi_v3\tpsi_v0\n");
    let sink: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(
            fs::File::create(path)
                .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    let mut sink = std::io::BufWriter::new(sink);
    sink.write_all(rows.as_bytes())
        .map_err(|e| CmdError::Input(format!("write failed: {e}")))?;
    for node in nodes_to_depth(cfg.depth) {
        let code = qr_encode(&node);
        let corners = Corner::ALL.map(|c| covering_label(&node, c));
        let psi = psi_polynomial(&corners[0], cfg.convention);
        let row = format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            node,
            code,
            if code.is_proper() { "yes" } else { "no" },
            type_of(&node, cfg.convention),
            corners[0],
            corners[1],
            corners[2],
            corners[3],
            psi
        );
        sink.write_all(row.as_bytes())
            .map_err(|e| CmdError::Input(format!("write failed: {e}")))?;
    }
    sink.flush()
        .map_err(|e| CmdError::Input(format!("write failed: {e}")))?;
    Ok(())
}

pub struct VerifyConfig {
    pub input: PathBuf,
    pub tolerances: Tolerances,
    /// Allowed deviation between stored coordinates and the vertex
    /// polynomials re-evaluated at the stored torus point.
    pub tol_coord: f64,
}

/// Re-runs every check on a stored drawing and prints the report.
pub fn cmd_verify(cfg: &VerifyConfig) -> Result<(), CmdError> {
    let text = fs::read_to_string(&cfg.input)
        .map_err(|e| CmdError::Input(format!("{}: {e}", cfg.input.display())))?;
    let file: DrawingFile = serde_json::from_str(&text)
        .map_err(|e| CmdError::Input(format!("{}: {e}", cfg.input.display())))?;
    let drawing = file_to_drawing(&file).map_err(CmdError::Input)?;

    // coordinates must match the polynomials they claim to come from
    let mut coord_failures: Vec<FailureEntry> = Vec::new();
    for (&v, label) in &drawing.labels {
        let expect = psi_polynomial(label, drawing.convention).eval(&drawing.torus) * drawing.scale;
        let delta = (drawing.coords[&v] - expect).norm();
        if delta > cfg.tol_coord {
            coord_failures.push(failure_entry(&CheckFailure::CoordMismatch { v, delta }));
        }
    }

    let tols = cfg.tolerances;
    let d = &drawing;
    let ((min_gap, f1), (min_edge_gap, f2), (n_classes, class_values, f3)) = run3(
        move || check_distinct_vertices(d, tols.vertex_gap),
        move || check_vertex_edge_separation(d, tols.vertex_edge_gap),
        move || count_length_classes(d, tols.class_radius),
    );
    let mut report = ValidationReport {
        min_vertex_gap: min_gap,
        min_vertex_edge_gap: min_edge_gap,
        n_length_classes: n_classes,
        class_values,
        failures: f1,
    };
    report.failures.extend(f2);
    report.failures.extend(f3);

    let out = report_to_file(&report, coord_failures);
    println!("{}", pretty_json(&out)?.trim_end());
    if out.failures.is_empty() {
        Ok(())
    } else {
        Err(CmdError::VerifyFailed(format!(
            "{} check(s) failed",
            out.failures.len()
        )))
    }
}

pub struct SelftestCliConfig {
    pub depth: usize,
    pub seeds: Vec<u64>,
    pub convention: SConvention,
}

pub fn cmd_selftest(cfg: &SelftestCliConfig) -> Result<(), CmdError> {
    if cfg.depth > DEPTH_CAP {
        return Err(CmdError::Input(format!(
            "depth must lie in 0..={DEPTH_CAP}, got {}",
            cfg.depth
        )));
    }
    let config = SelftestConfig {
        depth: cfg.depth,
        seeds: if cfg.seeds.is_empty() {
            vec![1]
        } else {
            cfg.seeds.clone()
        },
        convention: cfg.convention,
        certificate_depth: cfg.depth.min(5),
        ..SelftestConfig::default()
    };
    let results = run_all(&config);
    let mut failed = 0;
    for r in &results {
        println!(
            "{} {:<24} {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        if !r.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CmdError::SelftestFailed(format!(
            "{failed} of {} suites failed",
            results.len()
        )))
    }
}
