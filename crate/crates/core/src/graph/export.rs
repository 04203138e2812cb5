use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ConstellationGraph, EdgeRule, Layout, LayoutMethod};
use crate::error::{Error, Result};
use crate::modulo::{Branch, ResidueEntry};
use crate::quaternion::HurwitzInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
    Csv,
    Svg,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            "svg" => Ok(ExportFormat::Svg),
            other => Err(Error::InvalidArgument(format!(
                "unknown graph format {other:?}"
            ))),
        }
    }
}

pub fn export(
    g: &ConstellationGraph,
    layout: Option<&Layout>,
    format: ExportFormat,
) -> Result<String> {
    match format {
        ExportFormat::Dot => to_dot(g, layout),
        ExportFormat::Json => to_json(g, layout),
        ExportFormat::Csv => to_csv(g, layout),
        ExportFormat::Svg => match layout {
            Some(l) => to_svg(g, l),
            None => Err(Error::SvgNeedsLayout2d),
        },
    }
}

fn check_layout(g: &ConstellationGraph, layout: Option<&Layout>) -> Result<()> {
    match layout {
        Some(l) if l.coords.len() != g.len() => Err(Error::LayoutMismatch {
            layout: l.coords.len(),
            graph: g.len(),
        }),
        _ => Ok(()),
    }
}

pub fn to_dot(g: &ConstellationGraph, layout: Option<&Layout>) -> Result<String> {
    check_layout(g, layout)?;
    let mut s = String::new();
    let _ = writeln!(s, "graph constellation {{");
    let _ = writeln!(s, "  label=\"alpha = {}, edges: {}\";", g.alpha(), g.rule());
    for (i, v) in g.vertices().iter().enumerate() {
        let _ = write!(
            s,
            "  {i} [label=\"z={}\\n{}\", branch={}",
            v.z,
            v.residue,
            v.branch.number()
        );
        if let Some(l) = layout {
            let c = &l.coords[i];
            let _ = write!(s, ", pos=\"{:.6},{:.6}!\"", c[0], c[1]);
        }
        let _ = writeln!(s, "];");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    z: i64,
    branch: Branch,
    residue: HurwitzInt,
    norm1: u64,
    norm2: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    alpha: HurwitzInt,
    edge_rule: EdgeRule,
    vertices: Vec<VertexDoc>,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    method: Option<LayoutMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
}

pub fn to_json(g: &ConstellationGraph, layout: Option<&Layout>) -> Result<String> {
    check_layout(g, layout)?;
    let doc = GraphDoc {
        alpha: g.alpha(),
        edge_rule: g.rule(),
        vertices: g
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| VertexDoc {
                z: v.z,
                branch: v.branch,
                residue: v.residue,
                norm1: v.norm1,
                norm2: v.norm2,
                coords: layout.map(|l| l.coords[i].clone()),
            })
            .collect(),
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        method: layout.map(|l| l.method),
        seed: layout.map(|l| l.seed),
        dims: layout.map(|l| l.dims),
        residual: layout.map(|l| l.residual),
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Format {
        format: "JSON",
        reason: e.to_string(),
    })?;
    s.push('\n');
    Ok(s)
}

/// Reads a document written by [`to_json`].
pub fn from_json(s: &str) -> Result<(ConstellationGraph, Option<Layout>)> {
    let bad = |reason: String| Error::Format {
        format: "JSON",
        reason,
    };
    let doc: GraphDoc = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
    let with_coords = doc.vertices.iter().filter(|v| v.coords.is_some()).count();
    let layout = match (with_coords, doc.method) {
        (0, None) => None,
        (n, Some(method)) if n == doc.vertices.len() => {
            let coords: Vec<Vec<f64>> = doc
                .vertices
                .iter()
                .filter_map(|v| v.coords.clone())
                .collect();
            let dims = doc.dims.unwrap_or(coords[0].len());
            if coords.iter().any(|c| c.len() != dims) {
                return Err(bad("coordinate lengths disagree with dims".into()));
            }
            Some(Layout {
                dims,
                coords,
                method,
                seed: doc.seed.unwrap_or(0),
                residual: doc.residual.unwrap_or(0.0),
            })
        }
        _ => {
            return Err(bad(
                "coordinates must be given for all vertices or none, with a method".into(),
            ))
        }
    };
    let vertices = doc
        .vertices
        .into_iter()
        .map(|v| ResidueEntry {
            z: v.z,
            branch: v.branch,
            residue: v.residue,
            norm1: v.norm1,
            norm2: v.norm2,
        })
        .collect();
    let g = ConstellationGraph::new(
        doc.alpha,
        vertices,
        doc.edges.into_iter().map(|[u, v]| (u, v)),
        doc.edge_rule,
    )?;
    Ok((g, layout))
}

/// One row per vertex: `index,z,branch,residue,degree` plus `x,y[,w]` when
/// a layout is given.
pub fn to_csv(g: &ConstellationGraph, layout: Option<&Layout>) -> Result<String> {
    check_layout(g, layout)?;
    let mut degree = vec![0usize; g.len()];
    for &(u, v) in g.edges() {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index", "z", "branch", "residue", "degree"];
    if let Some(l) = layout {
        header.extend(["x", "y", "w"].iter().take(l.dims));
    }
    let csv_err = |e: csv::Error| Error::Format {
        format: "CSV",
        reason: e.to_string(),
    };
    w.write_record(&header).map_err(csv_err)?;
    for (i, v) in g.vertices().iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            v.z.to_string(),
            v.branch.number().to_string(),
            v.residue.to_string(),
            degree[i].to_string(),
        ];
        if let Some(l) = layout {
            row.extend(l.coords[i].iter().map(|x| x.to_string()));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format {
        format: "CSV",
        reason: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

const VIEW: f64 = 1000.0;
const MARGIN: f64 = 50.0;

/// Points and edges scaled uniformly into a 1000x1000 view box.
pub fn to_svg(g: &ConstellationGraph, layout: &Layout) -> Result<String> {
    if layout.dims != 2 {
        return Err(Error::SvgNeedsLayout2d);
    }
    check_layout(g, Some(layout))?;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for c in &layout.coords {
        for k in 0..2 {
            lo[k] = lo[k].min(c[k]);
            hi[k] = hi[k].max(c[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = if span > 0.0 {
        (VIEW - 2.0 * MARGIN) / span
    } else {
        1.0
    };
    let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    // SVG y grows downward
    let px = |c: &[f64]| {
        (
            VIEW / 2.0 + (c[0] - mid[0]) * scale,
            VIEW / 2.0 - (c[1] - mid[1]) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="1000" height="1000" viewBox="0 0 1000 1000">"#
    );
    let _ = writeln!(s, r#"  <rect width="1000" height="1000" fill="white"/>"#);
    let _ = writeln!(s, r##"  <g stroke="#888888" stroke-width="1.5">"##);
    for &(u, v) in g.edges() {
        let (x1, y1) = px(&layout.coords[u]);
        let (x2, y2) = px(&layout.coords[v]);
        let _ = writeln!(
            s,
            r#"    <line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#
        );
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(
        s,
        r##"  <g fill="#1f4e9c" font-family="sans-serif" font-size="14">"##
    );
    for (i, v) in g.vertices().iter().enumerate() {
        let (x, y) = px(&layout.coords[i]);
        let _ = writeln!(
            s,
            r#"    <circle cx="{x:.3}" cy="{y:.3}" r="6"><title>z={} {}</title></circle>"#,
            v.z, v.residue
        );
        let _ = writeln!(
            s,
            r#"    <text x="{:.3}" y="{:.3}">{}</text>"#,
            x + 8.0,
            y - 8.0,
            v.z
        );
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    Ok(s)
}
