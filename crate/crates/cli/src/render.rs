//! Text, SVG, and DOT renderings of the report types.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::CliError;
use crate::report::{
    dims_label, AnalyzeReport, EigenvalueDto, PartitionReport, ScanReport, SpectrumReport,
    SuggestReport,
};

fn coords_label(coords: &[usize]) -> String {
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn nodes_line(nodes: &[Vec<usize>]) -> String {
    let parts: Vec<String> = nodes.iter().map(|n| coords_label(n)).collect();
    parts.join(" ")
}

fn angles_label(e: &EigenvalueDto) -> String {
    let parts: Vec<String> = e.angles.iter().map(|a| format!("{}/{}", a.num, a.den)).collect();
    format!("({})", parts.join(", "))
}

fn usize_set(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Human word for an axis: axis 1 runs top-down (rows), axis 2 left-right.
fn axis_word(axis: usize, ndim: usize) -> &'static str {
    match (ndim, axis) {
        (2.., 1) => "rows",
        (2.., 2) => "columns",
        _ => "coordinates",
    }
}

pub fn analyze_text(report: &AnalyzeReport) -> String {
    let mut out = String::new();
    let simple = if report.simple { "simple" } else { "non-simple" };
    let _ = writeln!(
        out,
        "grid {}: {} spectrum, max multiplicity {}, minimal control set size {}",
        dims_label(&report.dims),
        simple,
        report.max_multiplicity,
        report.min_control_set_size
    );
    let _ = writeln!(out, "mode: {}", report.mode);
    let _ = writeln!(out, "nodes: {}", nodes_line(&report.nodes));
    let _ = writeln!(out, "verdict: {}", report.verdict);
    if let Some(reason) = &report.reason {
        let _ = writeln!(out, "reason: {reason}");
    }
    if !report.common_tuples.is_empty() {
        let tuples: Vec<String> = report
            .common_tuples
            .iter()
            .map(|t| {
                let parts: Vec<String> = t.iter().map(|q| q.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let _ = writeln!(out, "common symbol tuples: {}", tuples.join(" "));
    }
    if !report.uncontrollable.is_empty() {
        let _ = writeln!(out, "uncontrollable eigenvalues ({}):", report.uncontrollable.len());
        for mode in &report.uncontrollable {
            let _ = writeln!(
                out,
                "  {:<22} angles {}  multiplicity {}",
                mode.eigenvalue.decimal,
                angles_label(&mode.eigenvalue),
                mode.multiplicity
            );
            if let Some(witness) = &mode.witness {
                let zeros: Vec<String> =
                    witness.claimed_zeros.iter().map(|n| coords_label(n)).collect();
                let _ = writeln!(
                    out,
                    "    witness: residual {:.2e}, zeros {}",
                    witness.residual,
                    zeros.join(" ")
                );
            }
        }
    }
    if let Some(oracle) = &report.oracle {
        let status = if oracle.agreement { "agreement" } else { "DISAGREEMENT" };
        let _ = writeln!(
            out,
            "oracle: {status} ({} uncontrollable eigenvalue(s) found numerically)",
            oracle.uncontrollable.len()
        );
    }
    out
}

pub fn partition_text(report: &PartitionReport) -> String {
    let ndim = report.dims.len();
    let mut out = String::new();
    let _ = writeln!(out, "{} partition of {}", report.mode, dims_label(&report.dims));
    if report.alphabet.is_empty() {
        let _ = writeln!(out, "no axis symbols: every single node controls the simple part");
    }
    for sym in &report.alphabet {
        let _ = writeln!(
            out,
            "axis {} (n={}): q={} marks {} {}",
            sym.axis,
            report.dims[sym.axis - 1],
            sym.q,
            axis_word(sym.axis, ndim),
            usize_set(&sym.coords)
        );
    }
    let marked = report.nodes.iter().filter(|n| !n.markers.is_empty()).count();
    let _ = writeln!(out, "nodes marked by at least one symbol: {marked} of {}", report.nodes.len());
    if report.multiple.is_empty() {
        let _ = writeln!(out, "multiple eigenvalues: none");
    }
    for entry in &report.multiple {
        let inherited = entry
            .inherited_from
            .as_ref()
            .map(|b| format!(", inherited from {}", dims_label(b)))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "multiple eigenvalue {} (multiplicity {}, carrying brick {}{}):",
            entry.eigenvalue.decimal,
            entry.multiplicity,
            dims_label(&entry.carrying_brick),
            inherited
        );
        for class in &entry.classes {
            let _ = writeln!(out, "  class {}: {}", class.symbol, nodes_line(&class.nodes));
        }
    }
    out
}

pub fn spectrum_text(report: &SpectrumReport) -> String {
    let mut out = String::new();
    let simple = if report.simple { "simple" } else { "non-simple" };
    let _ = writeln!(
        out,
        "spectrum of {}: {} nodes, {} distinct eigenvalues, {}, max multiplicity {}, \
         minimal control set size {}",
        dims_label(&report.dims),
        report.node_count,
        report.distinct_eigenvalues,
        simple,
        report.max_multiplicity,
        report.min_control_set_size
    );
    for group in &report.groups {
        let members: Vec<String> = group
            .tuples
            .iter()
            .zip(&group.classes)
            .map(|(t, c)| {
                let idx: Vec<String> = t.iter().map(|k| k.to_string()).collect();
                format!("({}) {}", idx.join(","), c)
            })
            .collect();
        let _ = writeln!(
            out,
            "  {:<22} mult {}  {}",
            group.eigenvalue.decimal,
            group.multiplicity,
            members.join("; ")
        );
    }
    if report.multiple.is_empty() {
        let _ = writeln!(out, "multiple eigenvalues: none");
    } else {
        let _ = writeln!(out, "multiple eigenvalues ({}):", report.multiple.len());
        for entry in &report.multiple {
            let rule = entry.rule.map(|r| format!("  rule {r}")).unwrap_or_default();
            let inherited = entry
                .inherited_from
                .as_ref()
                .map(|b| format!("  inherited from {}", dims_label(b)))
                .unwrap_or_default();
            let violation = if entry.violation { "  VIOLATION: no proper brick" } else { "" };
            let _ = writeln!(
                out,
                "  {:<22} mult {}  carrying brick {}  classes {}{}{}{}",
                entry.eigenvalue.decimal,
                entry.multiplicity,
                dims_label(&entry.carrying_brick),
                entry.brick_classes.join(" "),
                rule,
                inherited,
                violation
            );
        }
    }
    out
}

pub fn suggest_text(report: &SuggestReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "suggested {} set for {}: {}",
        report.mode,
        dims_label(&report.dims),
        nodes_line(&report.nodes)
    );
    let _ = writeln!(out, "size: {}", report.size);
    let _ = writeln!(out, "justification: {}", report.justification);
    out
}

pub fn scan_text(report: &ScanReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scan up to {}: {} grids, {} multiple eigenvalues, {} violations",
        dims_label(&report.max_dims),
        report.grids_scanned,
        report.multiple_eigenvalues,
        report.violations
    );
    for entry in &report.entries {
        let inherited = entry
            .inherited_from
            .as_ref()
            .map(|b| format!(", inherited from {}", dims_label(b)))
            .unwrap_or_default();
        let violation = if entry.violation { "  VIOLATION" } else { "" };
        let _ = writeln!(
            out,
            "  {}: {} (mult {}) carried by brick {}{}{}",
            dims_label(&entry.dims),
            entry.eigenvalue.decimal,
            entry.multiplicity,
            dims_label(&entry.carrying_brick),
            inherited,
            violation
        );
    }
    out
}

const CELL: f64 = 48.0;
const MARGIN: f64 = 48.0;
const LEGEND_LINE: f64 = 18.0;
const AXIS_COLORS: [&str; 2] = ["#cc3344", "#3366cc"];
const CLASS_COLORS: [&str; 5] = ["#e69f00", "#009e73", "#aa4499", "#56b4e9", "#999933"];

fn regular_polygon(cx: f64, cy: f64, r: f64, sides: usize, start_deg: f64) -> String {
    let mut pts = Vec::with_capacity(sides);
    for i in 0..sides {
        let a = (start_deg + 360.0 * i as f64 / sides as f64).to_radians();
        pts.push(format!("{:.2},{:.2}", cx + r * a.cos(), cy + r * a.sin()));
    }
    pts.join(" ")
}

/// Outline glyph for the `index`-th alphabet symbol, centered at (cx, cy).
fn glyph(index: usize, cx: f64, cy: f64, r: f64, color: &str) -> String {
    let stroke = format!("fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"");
    match index % 6 {
        0 => format!(
            "<path d=\"M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}\" {stroke}/>",
            cx - r, cy - r, cx + r, cy + r, cx - r, cy + r, cx + r, cy - r
        ),
        1 => format!("<polygon points=\"{}\" {stroke}/>", regular_polygon(cx, cy, r, 3, -90.0)),
        2 => format!("<polygon points=\"{}\" {stroke}/>", regular_polygon(cx, cy, r, 5, -90.0)),
        3 => format!("<polygon points=\"{}\" {stroke}/>", regular_polygon(cx, cy, r, 4, 45.0)),
        4 => format!("<polygon points=\"{}\" {stroke}/>", regular_polygon(cx, cy, r, 4, 0.0)),
        _ => format!("<polygon points=\"{}\" {stroke}/>", regular_polygon(cx, cy, r, 6, 0.0)),
    }
}

/// SVG grid drawing: axis 1 runs vertically top-down, axis 2 horizontally;
/// fixed cell size with an embedded legend.
pub fn partition_svg(report: &PartitionReport) -> Result<String, CliError> {
    let ndim = report.dims.len();
    if ndim > 2 {
        return Err(CliError::Usage("svg output supports 1- and 2-dimensional grids".into()));
    }
    let rows = report.dims[0];
    let cols = if ndim == 2 { report.dims[1] } else { 1 };
    let grid_w = (cols - 1) as f64 * CELL;
    let grid_h = (rows - 1) as f64 * CELL;
    let legend_lines = report.alphabet.len() + report.multiple.len();
    let width = (2.0 * MARGIN + grid_w).max(560.0);
    let height = 2.0 * MARGIN + grid_h + 24.0 + legend_lines as f64 * LEGEND_LINE;

    let center = |coords: &[usize]| -> (f64, f64) {
        let row = coords[0];
        let col = if ndim == 2 { coords[1] } else { 1 };
        (MARGIN + (col - 1) as f64 * CELL, MARGIN + (row - 1) as f64 * CELL)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.0} {height:.0}\" \
         width=\"{width:.0}\" height=\"{height:.0}\" \
         font-family=\"Helvetica, Arial, sans-serif\">"
    );
    let _ = writeln!(s, "<title>{} partition of {}</title>", report.mode, dims_label(&report.dims));
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>");

    // Grid edges.
    for r in 1..=rows {
        if cols > 1 {
            let (x1, y) = center(&[r, 1]);
            let (x2, _) = center(&[r, cols]);
            let _ = writeln!(
                s,
                "<line x1=\"{x1:.1}\" y1=\"{y:.1}\" x2=\"{x2:.1}\" y2=\"{y:.1}\" \
                 stroke=\"#cccccc\"/>"
            );
        }
    }
    if rows > 1 {
        for c in 1..=cols {
            let (x, y1) = center(&[1, c]);
            let (_, y2) = center(&[rows, c]);
            let _ = writeln!(
                s,
                "<line x1=\"{x:.1}\" y1=\"{y1:.1}\" x2=\"{x:.1}\" y2=\"{y2:.1}\" \
                 stroke=\"#cccccc\"/>"
            );
        }
    }

    // Nodes with their markers.
    let symbol_index: HashMap<(usize, u64), usize> = report
        .alphabet
        .iter()
        .enumerate()
        .map(|(i, sym)| ((sym.axis, sym.q), i))
        .collect();
    for node in &report.nodes {
        let (x, y) = center(&node.node);
        let _ = writeln!(s, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"#222222\"/>");
        for marker in &node.markers {
            let index = symbol_index[&(marker.axis, marker.q)];
            let color = AXIS_COLORS[(marker.axis - 1) % AXIS_COLORS.len()];
            let _ = writeln!(s, "{}", glyph(index, x, y, 10.0, color));
        }
    }

    // Class digits for every multiple eigenvalue.
    for (j, entry) in report.multiple.iter().enumerate() {
        let color = CLASS_COLORS[j % CLASS_COLORS.len()];
        for class in &entry.classes {
            for coords in &class.nodes {
                let (x, y) = center(coords);
                let _ = writeln!(
                    s,
                    "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" fill=\"{color}\">{}</text>",
                    x + 8.0 + 12.0 * j as f64,
                    y - 8.0,
                    class.symbol
                );
            }
        }
    }

    // Legend.
    let mut ly = MARGIN + grid_h + 36.0;
    for (i, sym) in report.alphabet.iter().enumerate() {
        let color = AXIS_COLORS[(sym.axis - 1) % AXIS_COLORS.len()];
        let _ = writeln!(s, "{}", glyph(i, MARGIN, ly, 7.0, color));
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">axis {}, q={}: {} {}</text>",
            MARGIN + 16.0,
            ly + 4.0,
            sym.axis,
            sym.q,
            axis_word(sym.axis, ndim),
            usize_set(&sym.coords)
        );
        ly += LEGEND_LINE;
    }
    for (j, entry) in report.multiple.iter().enumerate() {
        let color = CLASS_COLORS[j % CLASS_COLORS.len()];
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{color}\">eigenvalue {} \
             (multiplicity {}), brick {}: digits mark proportional classes</text>",
            MARGIN,
            ly + 4.0,
            entry.eigenvalue.decimal,
            entry.multiplicity,
            dims_label(&entry.carrying_brick)
        );
        ly += LEGEND_LINE;
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

/// DOT graph with node labels carrying the partition symbols.
pub fn partition_dot(report: &PartitionReport) -> String {
    let dims = &report.dims;
    let id = |coords: &[usize]| {
        let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        format!("\"{}\"", parts.join(","))
    };

    let mut class_of: Vec<HashMap<&[usize], usize>> = Vec::new();
    for entry in &report.multiple {
        let mut map = HashMap::new();
        for class in &entry.classes {
            for node in &class.nodes {
                map.insert(node.as_slice(), class.symbol);
            }
        }
        class_of.push(map);
    }

    let mut out = String::new();
    let _ = writeln!(out, "graph \"grid_{}\" {{", dims_label(dims));
    let _ = writeln!(out, "  node [shape=plaintext];");
    for node in &report.nodes {
        let mut label = coords_label(&node.node);
        for marker in &node.markers {
            let _ = write!(label, "\\nq{}@axis{}", marker.q, marker.axis);
        }
        for (j, entry) in report.multiple.iter().enumerate() {
            if let Some(symbol) = class_of[j].get(node.node.as_slice()) {
                let _ = write!(label, "\\n{}: class {}", entry.eigenvalue.approx, symbol);
            }
        }
        let _ = writeln!(out, "  {} [label=\"{}\"];", id(&node.node), label);
    }
    for node in &report.nodes {
        for axis in 0..dims.len() {
            if node.node[axis] < dims[axis] {
                let mut next = node.node.clone();
                next[axis] += 1;
                let _ = writeln!(out, "  {} -- {};", id(&node.node), id(&next));
            }
        }
    }
    let _ = writeln!(out, "}}");
    out
}
