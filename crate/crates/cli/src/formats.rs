//! JSON schemas for graphs, drawings and validation reports.
//!
//! Field order is fixed by struct declaration and maps are sorted, so
//! serializing the same drawing twice yields identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use td13_core::embedder::{DrawnEdge, Drawing, LengthClass};
use td13_core::encoding::{EdgeClass, SConvention, TypeIndex, VertexLabel};
use td13_core::torus::TorusPoint;
use td13_core::validator::{CheckFailure, ValidationReport};
use td13_core::Complex64;

/// Input schema: `{"n": .., "outer_order": [..], "edges": [[u, v], ..]}`.
#[derive(Serialize, Deserialize, Debug)]
pub struct GraphFile {
    pub n: usize,
    pub outer_order: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct EdgeEntry {
    pub u: usize,
    pub v: usize,
    pub class: usize,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct ClassEntry {
    pub id: usize,
    pub kind: String,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_index: Option<String>,
    pub length: f64,
}

/// Output schema of `draw`, consumed by `verify`.
#[derive(Serialize, Deserialize, Debug)]
pub struct DrawingFile {
    pub n: usize,
    pub scale: f64,
    pub seed: u64,
    pub s_convention: String,
    pub attempts: u32,
    /// Twelve torus angles keyed `"q,r,s"`.
    pub x: BTreeMap<String, f64>,
    pub labels: BTreeMap<usize, String>,
    /// Coordinates as `[re, im]` pairs.
    pub coords: BTreeMap<usize, [f64; 2]>,
    pub edges: Vec<EdgeEntry>,
    pub classes: Vec<ClassEntry>,
}

/// Output schema of `verify`.
#[derive(Serialize, Deserialize, Debug)]
pub struct ReportFile {
    pub min_vertex_gap: f64,
    pub min_vertex_edge_gap: f64,
    pub n_length_classes: usize,
    pub class_values: Vec<f64>,
    pub failures: Vec<FailureEntry>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct FailureEntry {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
    pub value: f64,
}

pub fn convention_name(c: SConvention) -> &'static str {
    match c {
        SConvention::Figure => "figure",
        SConvention::Literal => "literal",
    }
}

pub fn parse_convention(s: &str) -> Result<SConvention, String> {
    match s {
        "figure" => Ok(SConvention::Figure),
        "literal" => Ok(SConvention::Literal),
        other => Err(format!("unknown s-convention {other:?}")),
    }
}

pub fn drawing_to_file(d: &Drawing) -> DrawingFile {
    DrawingFile {
        n: d.coords.len(),
        scale: d.scale,
        seed: d.torus.seed(),
        s_convention: convention_name(d.convention).to_string(),
        attempts: d.attempts,
        x: TypeIndex::all()
            .map(|i| (i.to_string(), d.torus.angle(i)))
            .collect(),
        labels: d.labels.iter().map(|(&v, l)| (v, l.to_string())).collect(),
        coords: d
            .coords
            .iter()
            .map(|(&v, z)| (v, [z.re, z.im]))
            .collect(),
        edges: d
            .edges
            .iter()
            .map(|e| EdgeEntry {
                u: e.u,
                v: e.v,
                class: e.class,
            })
            .collect(),
        classes: d
            .classes
            .iter()
            .enumerate()
            .map(|(id, c)| ClassEntry {
                id,
                kind: match c.kind {
                    EdgeClass::Unit => "unit".to_string(),
                    EdgeClass::Diagonal(_) => "diagonal".to_string(),
                },
                type_index: match c.kind {
                    EdgeClass::Unit => None,
                    EdgeClass::Diagonal(t) => Some(t.to_string()),
                },
                length: c.length,
            })
            .collect(),
    }
}

fn parse_type_index(s: &str) -> Result<TypeIndex, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("type index {s:?} is not of the form q,r,s"));
    }
    let nums: Vec<u8> = parts
        .iter()
        .map(|p| p.trim().parse::<u8>().map_err(|e| format!("{e}")))
        .collect::<Result<_, _>>()?;
    TypeIndex::new(nums[0], nums[1], nums[2]).ok_or_else(|| format!("type index {s:?} out of range"))
}

/// Rebuilds a drawing from its file form, validating the cross-references.
pub fn file_to_drawing(f: &DrawingFile) -> Result<Drawing, String> {
    let convention = parse_convention(&f.s_convention)?;
    let mut thetas = [0.0; TypeIndex::COUNT];
    let mut seen = 0;
    for (key, &angle) in &f.x {
        let t = parse_type_index(key)?;
        thetas[t.dense()] = angle;
        seen += 1;
    }
    if seen != TypeIndex::COUNT {
        return Err(format!("expected 12 torus angles, found {seen}"));
    }
    let torus = TorusPoint::from_angles(thetas, f.seed);
    let mut labels = BTreeMap::new();
    for (&v, l) in &f.labels {
        labels.insert(v, VertexLabel::parse(l).map_err(|e| format!("vertex {v}: {e}"))?);
    }
    let coords: BTreeMap<usize, Complex64> = f
        .coords
        .iter()
        .map(|(&v, &[re, im])| (v, Complex64::new(re, im)))
        .collect();
    if coords.len() != f.n || labels.len() != f.n {
        return Err(format!(
            "file lists n = {} but carries {} coordinates and {} labels",
            f.n,
            coords.len(),
            labels.len()
        ));
    }
    let classes: Vec<LengthClass> = f
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.id != i {
                return Err(format!("class table ids must be dense, found {} at {i}", c.id));
            }
            let kind = match (c.kind.as_str(), &c.type_index) {
                ("unit", None) => EdgeClass::Unit,
                ("diagonal", Some(t)) => EdgeClass::Diagonal(parse_type_index(t)?),
                _ => return Err(format!("class {i} has inconsistent kind")),
            };
            Ok(LengthClass {
                kind,
                length: c.length,
            })
        })
        .collect::<Result<_, _>>()?;
    let edges: Vec<DrawnEdge> = f
        .edges
        .iter()
        .map(|e| {
            if !coords.contains_key(&e.u) || !coords.contains_key(&e.v) {
                return Err(format!("edge ({}, {}) references unknown vertices", e.u, e.v));
            }
            if e.class >= classes.len() {
                return Err(format!("edge ({}, {}) references class {}", e.u, e.v, e.class));
            }
            Ok(DrawnEdge {
                u: e.u,
                v: e.v,
                class: e.class,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Drawing {
        scale: f.scale,
        convention,
        torus,
        labels,
        coords,
        edges,
        classes,
        attempts: f.attempts,
    })
}

pub fn report_to_file(r: &ValidationReport, extra: Vec<FailureEntry>) -> ReportFile {
    let mut failures = extra;
    failures.extend(r.failures.iter().map(failure_entry));
    ReportFile {
        min_vertex_gap: r.min_vertex_gap,
        min_vertex_edge_gap: r.min_vertex_edge_gap,
        n_length_classes: r.n_length_classes,
        class_values: r.class_values.clone(),
        failures,
    }
}

pub fn failure_entry(f: &CheckFailure) -> FailureEntry {
    let empty = FailureEntry {
        kind: String::new(),
        a: None,
        b: None,
        v: None,
        u: None,
        w: None,
        value: 0.0,
    };
    match *f {
        CheckFailure::VertexGap { a, b, gap } => FailureEntry {
            kind: "vertex_gap".into(),
            a: Some(a),
            b: Some(b),
            value: gap,
            ..empty
        },
        CheckFailure::VertexEdge { v, u, w, dist } => FailureEntry {
            kind: "vertex_edge".into(),
            v: Some(v),
            u: Some(u),
            w: Some(w),
            value: dist,
            ..empty
        },
        CheckFailure::TooManyClasses { count } => FailureEntry {
            kind: "too_many_classes".into(),
            value: count as f64,
            ..empty
        },
        CheckFailure::UnexpectedLength { length } => FailureEntry {
            kind: "unexpected_length".into(),
            value: length,
            ..empty
        },
        CheckFailure::CoordMismatch { v, delta } => FailureEntry {
            kind: "coord_mismatch".into(),
            v: Some(v),
            value: delta,
            ..empty
        },
    }
}
