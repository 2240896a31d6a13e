//! SVG drawings: thick struts, thin cables, double-stroked bars, vertex
//! circles and isometry chains, optionally annotated with a stress or a motion.
//!
//! Placements in three or more dimensions are drawn by their first two coordinates.

use std::fmt::Write;

use nalgebra::DVector;

use crate::model::{edge_rows, Origin, RowKind, Tensegrity};

pub const VIEW: f64 = 1000.0;
const MARGIN: f64 = 60.0;
/// Length in view units of the longest motion arrow.
const ARROW: f64 = 90.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Annotation<'a> {
    None,
    /// Weights per operator row.
    Stress(&'a DVector<f64>),
    /// A vertex field, vertex-major.
    Motion(&'a DVector<f64>),
}

struct Frame {
    scale: f64,
    min: [f64; 2],
    offset: [f64; 2],
}

impl Frame {
    fn fit(points: &[[f64; 2]]) -> Frame {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if points.is_empty() {
            lo = [0.0; 2];
            hi = [0.0; 2];
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let inner = VIEW - 2.0 * MARGIN;
        let scale = if span > 0.0 { inner / span } else { 1.0 };
        let offset = [
            MARGIN + (inner - scale * (hi[0] - lo[0])) / 2.0,
            MARGIN + (inner - scale * (hi[1] - lo[1])) / 2.0,
        ];
        Frame { scale, min: lo, offset }
    }

    fn map(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.offset[0] + self.scale * (p[0] - self.min[0]),
            VIEW - (self.offset[1] + self.scale * (p[1] - self.min[1])),
        ]
    }
}

fn planar(t: &Tensegrity, v: usize) -> [f64; 2] {
    let p = t.position(v);
    [p[0], p.get(1).copied().unwrap_or(0.0)]
}

fn num(x: f64) -> String {
    let r = (x * 1000.0).round() / 1000.0;
    if r == 0.0 {
        "0".into()
    } else {
        r.to_string()
    }
}

/// Scale factor taking field vectors to view-unit arrows.
fn arrow_scale(t: &Tensegrity, field: &DVector<f64>, frame_scale: f64) -> f64 {
    let n = t.dim();
    let longest = (0..t.vertex_count())
        .map(|v| field.rows(v * n, n.min(2)).norm())
        .fold(0.0, f64::max);
    if longest > 0.0 {
        ARROW / (longest * frame_scale)
    } else {
        0.0
    }
}

pub fn render(t: &Tensegrity, annotation: &Annotation<'_>) -> String {
    let mut points: Vec<[f64; 2]> = (0..t.vertex_count()).map(|v| planar(t, v)).collect();
    let base = Frame::fit(&points);
    if let Annotation::Motion(field) = annotation {
        let k = arrow_scale(t, field, base.scale);
        let n = t.dim();
        for v in 0..t.vertex_count() {
            let p = planar(t, v);
            let d = [field[v * n], if n > 1 { field[v * n + 1] } else { 0.0 }];
            points.push([p[0] + k * d[0], p[1] + k * d[1]]);
        }
    }
    let frame = Frame::fit(&points);
    let at = |v: usize| frame.map(planar(t, v));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {v} {v}" width="{v}" height="{v}">"#,
        v = VIEW
    );
    s.push_str(concat!(
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">",
        "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>\n",
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
    ));

    for chain in t.chains() {
        let pts: Vec<String> = chain
            .iter()
            .map(|&v| {
                let p = at(v);
                format!("{},{}", num(p[0]), num(p[1]))
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline class="chain" fill="none" stroke="#9ab" stroke-width="1" stroke-dasharray="6 4" points="{}"/>"##,
            pts.join(" ")
        );
    }

    for &(a, b) in t.struts() {
        let (p, q) = (at(a), at(b));
        let _ = writeln!(
            s,
            r##"<line class="strut" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#222" stroke-width="7" stroke-linecap="round"/>"##,
            num(p[0]),
            num(p[1]),
            num(q[0]),
            num(q[1])
        );
    }
    for &(a, b) in t.cables() {
        let (p, q) = (at(a), at(b));
        let _ = writeln!(
            s,
            r##"<line class="cable" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#2c6fbb" stroke-width="1.5"/>"##,
            num(p[0]),
            num(p[1]),
            num(q[0]),
            num(q[1])
        );
    }
    for &(a, b) in t.bars() {
        let (p, q) = (at(a), at(b));
        let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt().max(1e-9);
        let off = [-(q[1] - p[1]) / len * 3.0, (q[0] - p[0]) / len * 3.0];
        let _ = write!(s, r#"<g class="bar">"#);
        for sign in [1.0, -1.0] {
            let _ = write!(
                s,
                r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#222" stroke-width="2"/>"##,
                num(p[0] + sign * off[0]),
                num(p[1] + sign * off[1]),
                num(q[0] + sign * off[0]),
                num(q[1] + sign * off[1])
            );
        }
        s.push_str("</g>\n");
    }

    match annotation {
        Annotation::None => {}
        Annotation::Stress(weights) => {
            let rows = edge_rows(t);
            for (r, row) in rows.iter().enumerate() {
                let (p, q) = (at(row.endpoints.0), at(row.endpoints.1));
                let shift = match (row.origin, row.kind) {
                    (Origin::BarExpansion, RowKind::Strut) => -9.0,
                    (Origin::BarExpansion, RowKind::Cable) => 9.0,
                    _ => 0.0,
                };
                let w = weights.get(r).copied().unwrap_or(f64::NAN);
                let _ = writeln!(
                    s,
                    r##"<text class="weight" data-row="{r}" x="{}" y="{}" font-size="18" text-anchor="middle" fill="#7a3e00">{}</text>"##,
                    num((p[0] + q[0]) / 2.0),
                    num((p[1] + q[1]) / 2.0 + shift),
                    format_weight(w)
                );
            }
        }
        Annotation::Motion(field) => {
            let k = arrow_scale(t, field, base.scale);
            let n = t.dim();
            for v in 0..t.vertex_count() {
                let p = planar(t, v);
                let d = [field[v * n], if n > 1 { field[v * n + 1] } else { 0.0 }];
                let (from, to) = (frame.map(p), frame.map([p[0] + k * d[0], p[1] + k * d[1]]));
                let _ = writeln!(
                    s,
                    r##"<line class="arrow" data-vertex="{}" data-dx="{}" data-dy="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c0392b" stroke-width="2" marker-end="url(#head)"/>"##,
                    t.id(v),
                    d[0],
                    d[1],
                    num(from[0]),
                    num(from[1]),
                    num(to[0]),
                    num(to[1])
                );
            }
        }
    }

    for v in 0..t.vertex_count() {
        let p = at(v);
        let _ = writeln!(
            s,
            r##"<circle class="vertex" data-id="{}" cx="{}" cy="{}" r="6" fill="white" stroke="#222" stroke-width="2"/>"##,
            t.id(v),
            num(p[0]),
            num(p[1])
        );
    }
    s.push_str("</svg>\n");
    s
}

fn format_weight(w: f64) -> String {
    if w.abs() >= 1e-3 || w == 0.0 {
        format!("{:.3}", w).trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{w:.1e}")
    }
}
