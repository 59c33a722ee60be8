//! File-format emission: the CSV, vector and SVG outputs every analysis
//! declares. All CSV output is RFC-4180 quoted UTF-8 with a header row;
//! numbers are written with Rust's shortest round-trip formatting, so a
//! given build emits byte-identical files for identical inputs.

use std::io::Write;

use crate::chronogeo::{GeoGrid, Timeline};
use crate::classify::{EvalReport, ScreenHit};
use crate::cooc::{AssociationScore, SecondOrderMatrix};
use crate::dsm::{SemanticField, VectorSpace};
use crate::error::{Error, Result};
use crate::factor::{CAResult, Clustering, Merge};
use crate::index::ContingencyTable;
use crate::richness::RichnessRow;

fn csv_writer(buffer: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().from_writer(buffer)
}

fn finish(writer: csv::Writer<&mut Vec<u8>>) -> Result<()> {
    writer
        .into_inner()
        .map(|_| ())
        .map_err(|e| Error::InvalidInput(format!("csv flush: {e}")))
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

pub fn richness_csv(rows: &[RichnessRow], replicates: u32, seed: u64) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["corpus", "package", "V_mean", "V_min", "V_max", "R", "seed"])
        .map_err(csv_err)?;
    for row in rows {
        w.write_record([
            row.corpus.as_str(),
            &row.package.to_string(),
            &row.v_mean.map(fmt).unwrap_or_default(),
            &row.v_min.map(|v| v.to_string()).unwrap_or_default(),
            &row.v_max.map(|v| v.to_string()).unwrap_or_default(),
            &replicates.to_string(),
            &seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv write: {e}"))
}

pub fn timeline_csv(timeline: &Timeline) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["slice", "count", "tokens", "per_million", "cumulative"])
        .map_err(csv_err)?;
    for i in 0..timeline.slices.len() {
        w.write_record([
            timeline.slices[i].as_str(),
            &timeline.counts[i].to_string(),
            &timeline.tokens[i].to_string(),
            &fmt(timeline.per_million[i]),
            &timeline.cumulative[i].to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn association_timeline_csv(
    line: &[(String, Option<AssociationScore>)],
) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["slice_label", "value_or_empty"]).map_err(csv_err)?;
    for (label, score) in line {
        w.write_record([
            label.as_str(),
            &score.as_ref().map(|s| fmt(s.value)).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn rankings_csv(rankings: &[AssociationScore]) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["pivot", "target", "measure", "value", "f_xy", "f_x", "f_y"])
        .map_err(csv_err)?;
    for s in rankings {
        w.write_record([
            s.pivot.as_str(),
            s.target.as_str(),
            &s.measure.to_string(),
            &fmt(s.value),
            &s.f_xy.to_string(),
            &s.f_x.to_string(),
            &s.f_y.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn neighbors_csv(pivot: &str, neighbors: &[(String, f64)]) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["pivot", "neighbor", "cosine", "rank"]).map_err(csv_err)?;
    for (rank, (term, cosine)) in neighbors.iter().enumerate() {
        w.write_record([
            pivot,
            term.as_str(),
            &fmt(*cosine),
            &(rank + 1).to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

/// One line per term: the term then its d components, space-separated.
pub fn vectors_text(space: &VectorSpace) -> Vec<u8> {
    let mut out = Vec::new();
    for (term, vector) in space.terms.iter().zip(&space.vectors) {
        let mut line = String::with_capacity(vector.len() * 12 + term.len());
        line.push_str(term);
        for v in vector {
            line.push(' ');
            line.push_str(&fmt(*v));
        }
        line.push('\n');
        out.extend_from_slice(line.as_bytes());
    }
    out
}

/// CA coordinates for one side of the map: entity, axis1..axisd, mass,
/// ctr1..ctrd.
pub fn ca_side_csv(
    labels: &[String],
    coords: &[Vec<f64>],
    masses: &[f64],
    contributions: impl Fn(usize, usize) -> f64,
    dims: usize,
) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    let mut header = vec!["entity".to_string()];
    for k in 0..dims {
        header.push(format!("axis{}", k + 1));
    }
    header.push("mass".into());
    for k in 0..dims {
        header.push(format!("ctr{}", k + 1));
    }
    w.write_record(&header).map_err(csv_err)?;
    for (i, label) in labels.iter().enumerate() {
        let mut record = vec![label.clone()];
        for k in 0..dims {
            record.push(fmt(coords[i][k]));
        }
        record.push(fmt(masses[i]));
        for k in 0..dims {
            record.push(fmt(contributions(i, k)));
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn ca_rows_csv(ca: &CAResult) -> Result<Vec<u8>> {
    ca_side_csv(
        &ca.row_labels,
        &ca.row_coords,
        &ca.row_masses,
        |i, k| ca.row_contribution(i, k),
        ca.dims(),
    )
}

pub fn ca_cols_csv(ca: &CAResult) -> Result<Vec<u8>> {
    ca_side_csv(
        &ca.col_labels,
        &ca.col_coords,
        &ca.col_masses,
        |j, k| ca.col_contribution(j, k),
        ca.dims(),
    )
}

/// Axis summary: singular value, inertia, share per kept axis.
pub fn ca_axes_csv(ca: &CAResult) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["axis", "singular_value", "inertia", "share"])
        .map_err(csv_err)?;
    let shares = ca.axis_shares();
    for k in 0..ca.dims() {
        w.write_record([
            &(k + 1).to_string(),
            &fmt(ca.singular_values[k]),
            &fmt(ca.axis_inertia[k]),
            &fmt(shares[k]),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

/// lon, lat, value triples, zero cells skipped; loadable by any GIS.
pub fn grid_csv(grid: &GeoGrid) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["lon", "lat", "value"]).map_err(csv_err)?;
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            let v = grid.get(col, row);
            if v == 0.0 {
                continue;
            }
            let (lon, lat) = grid.cell_center(col, row);
            w.write_record([&fmt(lon), &fmt(lat), &fmt(v)]).map_err(csv_err)?;
        }
    }
    finish(w)?;
    Ok(buffer)
}

pub fn screening_csv(hits: &[ScreenHit]) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["charter_id", "p_target", "predicted_label"])
        .map_err(csv_err)?;
    for hit in hits {
        w.write_record([
            hit.charter_id.as_str(),
            &fmt(hit.p_target),
            hit.predicted.as_str(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn unknown_report_csv(report: &[(String, u64)]) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["form", "frequency"]).map_err(csv_err)?;
    for (form, freq) in report {
        w.write_record([form.as_str(), &freq.to_string()]).map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

/// Contingency table as CSV: first column the row label, then one column
/// per column label.
pub fn table_csv(table: &ContingencyTable) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    let mut header = vec!["row".to_string()];
    header.extend(table.col_labels.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for r in 0..table.rows() {
        let mut record = vec![table.row_labels[r].clone()];
        for c in 0..table.cols() {
            record.push(table.get(r, c).to_string());
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

/// Parse a contingency table written by [`table_csv`].
pub fn table_from_csv(data: &[u8]) -> Result<ContingencyTable> {
    let mut reader = csv::ReaderBuilder::new().from_reader(data);
    let headers = reader
        .headers()
        .map_err(|e| Error::InvalidInput(format!("table csv: {e}")))?
        .clone();
    if headers.len() < 2 {
        return Err(Error::InvalidInput("table csv needs at least 2 columns".into()));
    }
    let col_labels: Vec<String> = headers.iter().skip(1).map(|s| s.to_string()).collect();
    let mut row_labels = Vec::new();
    let mut counts = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::InvalidInput(format!("table csv: {e}")))?;
        row_labels.push(record.get(0).unwrap_or_default().to_string());
        for field in record.iter().skip(1) {
            let v: u64 = field
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad count {field:?}")))?;
            counts.push(v);
        }
    }
    if row_labels.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(ContingencyTable::from_counts(row_labels, col_labels, counts))
}

pub fn second_order_csv(matrix: &SecondOrderMatrix) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    let mut header = vec!["term".to_string()];
    header.extend(matrix.terms.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for (i, term) in matrix.terms.iter().enumerate() {
        let mut record = vec![term.clone()];
        for j in 0..matrix.terms.len() {
            record.push(fmt(matrix.get(i, j)));
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn assignments_csv(labels: &[String], clustering: &Clustering) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["entity", "cluster"]).map_err(csv_err)?;
    for (label, &cluster) in labels.iter().zip(&clustering.assignments) {
        w.write_record([label.as_str(), &cluster.to_string()]).map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn dendrogram_csv(merges: &[Merge]) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["step", "left", "right", "height", "size"]).map_err(csv_err)?;
    for (step, m) in merges.iter().enumerate() {
        w.write_record([
            &step.to_string(),
            &m.left.to_string(),
            &m.right.to_string(),
            &fmt(m.height),
            &m.size.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn confusion_csv(report: &EvalReport) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    let mut header = vec!["actual\\predicted".to_string()];
    header.extend(report.classes.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for (i, class) in report.classes.iter().enumerate() {
        let mut record = vec![class.clone()];
        for j in 0..report.classes.len() {
            record.push(report.confusion[i][j].to_string());
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

pub fn field_csv(field: &SemanticField) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    let mut w = csv_writer(&mut buffer);
    w.write_record(["pivot", "term", "cosine", "group", "x", "y"])
        .map_err(csv_err)?;
    for m in &field.members {
        w.write_record([
            field.pivot.as_str(),
            m.term.as_str(),
            &fmt(m.cosine),
            &m.group.to_string(),
            &fmt(m.x),
            &fmt(m.y),
        ])
        .map_err(csv_err)?;
    }
    finish(w)?;
    Ok(buffer)
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

const SVG_W: f64 = 900.0;
const SVG_H: f64 = 540.0;
const MARGIN: f64 = 60.0;

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\">\n\
         <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        SVG_W / 2.0,
        xml_escape(title)
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart over labeled x positions; `None` values break the line.
pub fn line_chart_svg(title: &str, labels: &[String], values: &[Option<f64>]) -> String {
    let mut svg = svg_header(title);
    let n = labels.len().max(1);
    let finite: Vec<f64> = values.iter().flatten().copied().collect();
    let (min, max) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let (min, max) = if finite.is_empty() {
        (0.0, 1.0)
    } else if (max - min).abs() < 1e-12 {
        (min - 1.0, max + 1.0)
    } else {
        (min.min(0.0), max)
    };
    let x_of = |i: usize| {
        MARGIN + (SVG_W - 2.0 * MARGIN) * if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 }
    };
    let y_of = |v: f64| SVG_H - MARGIN - (SVG_H - 2.0 * MARGIN) * (v - min) / (max - min);

    svg.push_str(&format!(
        "<line x1=\"{MARGIN}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
        SVG_H - MARGIN,
        SVG_W - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN}\" y1=\"{MARGIN}\" x2=\"{MARGIN}\" y2=\"{}\" stroke=\"black\"/>\n",
        SVG_H - MARGIN
    ));
    // Axis extremes as tick labels.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" \
         text-anchor=\"end\">{:.4}</text>\n",
        MARGIN - 4.0,
        y_of(max) + 4.0,
        max
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" \
         text-anchor=\"end\">{:.4}</text>\n",
        MARGIN - 4.0,
        y_of(min) + 4.0,
        min
    ));

    let mut segment: Vec<String> = Vec::new();
    let mut segments: Vec<Vec<String>> = Vec::new();
    for (i, value) in values.iter().enumerate() {
        match value {
            Some(v) => segment.push(format!("{:.2},{:.2}", x_of(i), y_of(*v))),
            None => {
                if segment.len() > 1 {
                    segments.push(std::mem::take(&mut segment));
                } else {
                    segment.clear();
                }
            }
        }
    }
    if segment.len() > 1 {
        segments.push(segment);
    }
    for points in segments {
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n",
            points.join(" ")
        ));
    }
    for (i, value) in values.iter().enumerate() {
        if let Some(v) = value {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>\n",
                x_of(i),
                y_of(*v)
            ));
        }
        if n <= 24 || i % (n / 24 + 1) == 0 {
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" \
                 text-anchor=\"middle\">{}</text>\n",
                x_of(i),
                SVG_H - MARGIN + 16.0,
                xml_escape(&labels[i])
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

const GROUP_COLORS: [&str; 8] = [
    "steelblue",
    "firebrick",
    "seagreen",
    "darkorange",
    "purple",
    "teal",
    "saddlebrown",
    "deeppink",
];

/// Labeled scatter plot for maps with at most 5,000 points.
pub fn scatter_svg(
    title: &str,
    points: &[(f64, f64, String, usize)],
) -> Result<String> {
    if points.len() > 5_000 {
        return Err(Error::InvalidInput(format!(
            "scatter plots are limited to 5000 points, got {}",
            points.len()
        )));
    }
    let mut svg = svg_header(title);
    let (mut x_min, mut x_max, mut y_min, mut y_max) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y, _, _) in points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if points.is_empty() || (x_max - x_min).abs() < 1e-12 {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if points.is_empty() || (y_max - y_min).abs() < 1e-12 {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let x_of = |x: f64| MARGIN + (SVG_W - 2.0 * MARGIN) * (x - x_min) / (x_max - x_min);
    let y_of = |y: f64| SVG_H - MARGIN - (SVG_H - 2.0 * MARGIN) * (y - y_min) / (y_max - y_min);
    // Axis cross at the origin when it is in range.
    if x_min < 0.0 && x_max > 0.0 {
        svg.push_str(&format!(
            "<line x1=\"{0:.2}\" y1=\"{MARGIN}\" x2=\"{0:.2}\" y2=\"{1}\" stroke=\"#cccccc\"/>\n",
            x_of(0.0),
            SVG_H - MARGIN
        ));
    }
    if y_min < 0.0 && y_max > 0.0 {
        svg.push_str(&format!(
            "<line x1=\"{MARGIN}\" y1=\"{0:.2}\" x2=\"{1}\" y2=\"{0:.2}\" stroke=\"#cccccc\"/>\n",
            y_of(0.0),
            SVG_W - MARGIN
        ));
    }
    let show_labels = points.len() <= 250;
    for (x, y, label, group) in points {
        let color = GROUP_COLORS[group % GROUP_COLORS.len()];
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.75\"/>\n",
            x_of(*x),
            y_of(*y),
            color
        ));
        if show_labels {
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"9\" \
                 fill=\"{}\">{}</text>\n",
                x_of(*x) + 4.0,
                y_of(*y) - 3.0,
                color,
                xml_escape(label)
            ));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Write bytes to a file, creating parent directories.
pub fn write_output(path: &std::path::Path, data: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent.display().to_string(), e))?;
    }
    let mut file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    file.write_all(data).map_err(|e| Error::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timeline_csv_shape() {
        let tl = Timeline {
            slices: vec!["900–949".into(), "950–999".into()],
            counts: vec![3, 5],
            tokens: vec![1000, 2000],
            per_million: vec![3000.0, 2500.0],
            cumulative: vec![3, 8],
            absent_lemmas: vec![],
        };
        let csv = String::from_utf8(timeline_csv(&tl).unwrap()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "slice,count,tokens,per_million,cumulative");
        assert_eq!(lines[1], "900–949,3,1000,3000,3");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn association_timeline_null_is_empty_field() {
        let line = vec![
            ("P1".to_string(), None),
            (
                "P2".to_string(),
                Some(AssociationScore {
                    pivot: "a".into(),
                    target: "b".into(),
                    measure: crate::cooc::Measure::Dice,
                    value: 0.25,
                    f_xy: 1,
                    f_x: 4,
                    f_y: 4,
                }),
            ),
        ];
        let csv = String::from_utf8(association_timeline_csv(&line).unwrap()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "P1,");
        assert_eq!(lines[2], "P2,0.25");
    }

    #[test]
    fn table_csv_round_trips() {
        let t = ContingencyTable::from_counts(
            vec!["r1".into(), "r2".into()],
            vec!["a".into(), "b".into(), "c".into()],
            vec![1, 2, 3, 4, 5, 6],
        );
        let bytes = table_csv(&t).unwrap();
        let back = table_from_csv(&bytes).unwrap();
        assert_eq!(back.row_labels, t.row_labels);
        assert_eq!(back.col_labels, t.col_labels);
        assert_eq!(back.counts, t.counts);
        assert!(back.is_consistent());
    }

    #[test]
    fn vectors_text_format() {
        let space = VectorSpace {
            terms: vec!["terra".into(), "aqua".into()],
            dim: 2,
            vectors: vec![vec![1.5, -0.25], vec![0.0, 2.0]],
            singular_values: vec![2.0, 1.0],
        };
        let text = String::from_utf8(vectors_text(&space)).unwrap();
        assert_eq!(text, "terra 1.5 -0.25\naqua 0 2\n");
    }

    #[test]
    fn quoting_is_rfc4180() {
        let t = ContingencyTable::from_counts(
            vec!["a,b".into()],
            vec!["c\"d".into(), "plain".into()],
            vec![1, 2],
        );
        let csv = String::from_utf8(table_csv(&t).unwrap()).unwrap();
        assert!(csv.contains("\"a,b\""));
        assert!(csv.contains("\"c\"\"d\""));
    }

    #[test]
    fn scatter_rejects_oversized_input() {
        let points: Vec<(f64, f64, String, usize)> = (0..5001)
            .map(|i| (i as f64, 0.0, format!("p{i}"), 0))
            .collect();
        assert!(scatter_svg("too big", &points).is_err());
    }

    #[test]
    fn line_chart_handles_gaps() {
        let labels: Vec<String> = (0..5).map(|i| format!("P{i}")).collect();
        let values = vec![Some(1.0), None, Some(2.0), Some(3.0), None];
        let svg = line_chart_svg("test", &labels, &values);
        assert!(svg.contains("<polyline"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
