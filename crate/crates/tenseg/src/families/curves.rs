//! Closed planar vertex curves built from lines and circular arcs, and the
//! tensegrities with antipodal struts and fixed-skip cables on them.

use std::f64::consts::PI;

use super::assemble;
use crate::error::{Error, Result};
use crate::model::Tensegrity;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Piece {
    Line { from: [f64; 2], to: [f64; 2] },
    Arc { center: [f64; 2], radius: f64, start: f64, end: f64 },
}

impl Piece {
    fn length(&self) -> f64 {
        match *self {
            Piece::Line { from, to } => (to[0] - from[0]).hypot(to[1] - from[1]),
            Piece::Arc { radius, start, end, .. } => radius * (end - start).abs(),
        }
    }

    fn at(&self, s: f64) -> [f64; 2] {
        match *self {
            Piece::Line { from, to } => {
                let f = s / self.length();
                [from[0] + f * (to[0] - from[0]), from[1] + f * (to[1] - from[1])]
            }
            Piece::Arc { center, radius, start, end } => {
                let a = start + (end - start).signum() * s / radius;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
        }
    }
}

/// A path of lines and arcs, drawn pen-style from a starting point.
#[derive(Clone, Debug, PartialEq)]
pub struct PathCurve {
    pieces: Vec<Piece>,
    cursor: [f64; 2],
}

impl PathCurve {
    pub fn start(at: [f64; 2]) -> PathCurve {
        PathCurve {
            pieces: Vec::new(),
            cursor: at,
        }
    }

    pub fn line_to(mut self, to: [f64; 2]) -> PathCurve {
        self.pieces.push(Piece::Line { from: self.cursor, to });
        self.cursor = to;
        self
    }

    /// An arc of the given radius from polar angle `start` to `end` (degrees)
    /// about a centre placed so that the arc begins at the current point.
    pub fn arc(mut self, start: f64, end: f64, radius: f64) -> PathCurve {
        let (s, e) = (start.to_radians(), end.to_radians());
        let center = [self.cursor[0] - radius * s.cos(), self.cursor[1] - radius * s.sin()];
        let piece = Piece::Arc {
            center,
            radius,
            start: s,
            end: e,
        };
        self.cursor = piece.at(piece.length());
        self.pieces.push(piece);
        self
    }

    /// Appends copies of the path so far, each rotated by a further `degrees` about the origin.
    pub fn repeat_rotated(mut self, copies: usize, degrees: f64) -> PathCurve {
        let base = self.pieces.clone();
        for c in 1..=copies {
            let a = (degrees * c as f64).to_radians();
            let rot = |p: [f64; 2]| [a.cos() * p[0] - a.sin() * p[1], a.sin() * p[0] + a.cos() * p[1]];
            for piece in &base {
                self.pieces.push(match *piece {
                    Piece::Line { from, to } => Piece::Line {
                        from: rot(from),
                        to: rot(to),
                    },
                    Piece::Arc { center, radius, start, end } => Piece::Arc {
                        center: rot(center),
                        radius,
                        start: start + a,
                        end: end + a,
                    },
                });
            }
        }
        if let Some(last) = self.pieces.last() {
            self.cursor = last.at(last.length());
        }
        self
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    /// The point at arclength `s` from the start, wrapping around.
    pub fn point(&self, s: f64) -> [f64; 2] {
        let total = self.length();
        let mut s = s.rem_euclid(total);
        for piece in &self.pieces {
            let l = piece.length();
            if s <= l {
                return piece.at(s);
            }
            s -= l;
        }
        let last = self.pieces.last().expect("nonempty path");
        last.at(last.length())
    }

    /// `n` points equally spaced in arclength, starting at the start point.
    pub fn sample(&self, n: usize) -> Vec<[f64; 2]> {
        let total = self.length();
        (0..n).map(|i| self.point(total * i as f64 / n as f64)).collect()
    }

    /// Distance between the end and the start of the path.
    pub fn closure_gap(&self) -> f64 {
        let first = self.pieces.first().map(|p| p.at(0.0)).unwrap_or(self.cursor);
        (self.cursor[0] - first[0]).hypot(self.cursor[1] - first[1])
    }
}

/// A non-convex curve with four-fold symmetry, of length 12π.
pub fn star_curve() -> PathCurve {
    PathCurve::start([-4.0, 2.0])
        .arc(180.0, 90.0, 2.0)
        .arc(90.0, 0.0, 1.0)
        .arc(-180.0, 0.0, 1.0)
        .arc(180.0, 90.0, 1.0)
        .repeat_rotated(3, -90.0)
}

/// A six-pointed star of twelve unit-slope segments, of length 24.
pub fn hexagram_curve() -> PathCurve {
    let h = 3f64.sqrt();
    PathCurve::start([-1.0, h])
        .line_to([0.0, 2.0 * h])
        .line_to([1.0, h])
        .repeat_rotated(5, -60.0)
}

/// A curve of length 10π + 4 on which the antipodal strut from (0,0) to
/// (−8,0) cannot be balanced by cables with any skip below half the length.
pub fn cant_curve() -> PathCurve {
    PathCurve::start([1.0, -1.0])
        .arc(0.0, 180.0, 1.0)
        .arc(0.0, -180.0, 1.0)
        .line_to([-3.0, 1.0])
        .arc(0.0, 180.0, 3.0)
        .arc(180.0, 360.0, 1.0)
        .arc(180.0, 0.0, 1.0)
        .line_to([-5.0, -1.0])
        .arc(180.0, 360.0, 3.0)
}

/// `n` equally spaced points on the curve with struts to the antipodal point
/// (half the length along), cables to the point `skip` places ahead, and the
/// curve itself as a closed isometry chain.
pub fn curve_tensegrity(curve: &PathCurve, n: usize, skip: usize) -> Result<Tensegrity> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("need an even vertex count of at least 4, got {n}")));
    }
    if skip == 0 || 2 * skip >= n {
        return Err(Error::InvalidParameter(format!("skip must lie in 1..{}, got {skip}", n / 2)));
    }
    let points: Vec<Vec<f64>> = curve.sample(n).iter().map(|p| snap(*p)).collect();
    let struts: Vec<_> = (0..n / 2).map(|i| (i, i + n / 2)).collect();
    let cables: Vec<_> = (0..n).map(|i| (i, (i + skip) % n)).collect();
    let mut t = assemble(2, &points, &struts, &cables, &[])?;
    t.add_chain((0..=n).map(|i| i % n).collect())?;
    Ok(t)
}

fn snap(p: [f64; 2]) -> Vec<f64> {
    p.iter()
        .map(|&x| {
            let r = (x * 1e9).round() / 1e9;
            if (x - r).abs() < 1e-12 {
                r
            } else {
                x
            }
        })
        .collect()
}

/// Vertices of a [`curve_tensegrity`] whose strut does not point strictly
/// inside the cone spanned by its two cables.
pub fn unbalanced_vertices(t: &Tensegrity, skip: usize) -> Vec<usize> {
    let n = t.vertex_count();
    let p = |i: usize| {
        let q = t.position(i % n);
        [q[0], q[1]]
    };
    (0..n)
        .filter(|&i| {
            let o = p(i);
            let rel = |q: [f64; 2]| [q[0] - o[0], q[1] - o[1]];
            let (d, a, b) = (rel(p(i + n / 2)), rel(p(i + skip)), rel(p(i + n - skip)));
            let det = a[0] * b[1] - a[1] * b[0];
            let scale = (a[0].hypot(a[1]) * b[0].hypot(b[1])).max(f64::MIN_POSITIVE);
            if det.abs() <= 1e-12 * scale {
                return true;
            }
            let alpha = (d[0] * b[1] - d[1] * b[0]) / det;
            let beta = (a[0] * d[1] - a[1] * d[0]) / det;
            !(alpha > 0.0 && beta > 0.0)
        })
        .collect()
}

/// Geometry only: a central segment from (0,0) to (0,2) sampled at n+1
/// points, and the stadium curve at distance 2 around it. Each outer point
/// has a strut to its nearest segment point and a cable to the segment point
/// nearest the outer point `n` places further around.
pub fn stadium(n: usize) -> Result<Tensegrity> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 segment pieces, got {n}")));
    }
    let ys: Vec<f64> = (0..=n).map(|j| 2.0 * j as f64 / n as f64).collect();
    let mut outer: Vec<([f64; 2], usize)> = Vec::new();
    for (j, &y) in ys.iter().enumerate() {
        outer.push(([2.0, y], j));
    }
    for i in 1..n {
        let a = PI * i as f64 / n as f64;
        outer.push(([2.0 * a.cos(), 2.0 + 2.0 * a.sin()], n));
    }
    for (j, &y) in ys.iter().enumerate().rev() {
        outer.push(([-2.0, y], j));
    }
    for i in 1..n {
        let a = PI + PI * i as f64 / n as f64;
        outer.push(([2.0 * a.cos(), 2.0 * a.sin()], 0));
    }
    let mut points: Vec<Vec<f64>> = ys.iter().map(|&y| vec![0.0, y]).collect();
    let base = points.len();
    points.extend(outer.iter().map(|(p, _)| snap(*p)));
    let struts: Vec<_> = outer.iter().enumerate().map(|(i, &(_, foot))| (base + i, foot)).collect();
    let count = outer.len();
    let cables: Vec<_> = (0..count)
        .filter_map(|i| {
            let foot = outer[(i + n) % count].1;
            (foot != outer[i].1).then_some((base + i, foot))
        })
        .collect();
    let mut t = assemble(2, &points, &struts, &cables, &[])?;
    t.add_chain((0..=n).collect())?;
    t.add_chain((0..=count).map(|i| base + i % count).collect())?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: [f64; 2], b: [f64; 2]) -> bool {
        (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12
    }

    #[test]
    fn curve_lengths_and_closure() {
        assert!((star_curve().length() - 12.0 * PI).abs() < 1e-12);
        assert!((hexagram_curve().length() - 24.0).abs() < 1e-12);
        assert!((cant_curve().length() - (10.0 * PI + 4.0)).abs() < 1e-12);
        for c in [star_curve(), hexagram_curve(), cant_curve()] {
            assert!(c.closure_gap() < 1e-12);
        }
    }

    #[test]
    fn star_curve_waypoints() {
        let c = star_curve();
        assert!(close(c.point(0.0), [-4.0, 2.0]));
        assert!(close(c.point(PI), [-2.0, 4.0]));
        assert!(close(c.point(3.0 * PI), [2.0, 4.0]));
    }

    #[test]
    fn cant_strut_is_antipodal() {
        let c = cant_curve();
        let s = PI / 2.0;
        assert!(close(c.point(s), [0.0, 0.0]));
        assert!(close(c.point(s + c.length() / 2.0), [-8.0, 0.0]));
    }

    #[test]
    fn symmetric_curves_balance_every_strut() {
        let t = curve_tensegrity(&star_curve(), 48, 12).unwrap();
        assert!(unbalanced_vertices(&t, 12).is_empty());
        let t = curve_tensegrity(&hexagram_curve(), 48, 8).unwrap();
        assert!(unbalanced_vertices(&t, 8).is_empty());
    }

    #[test]
    fn stadium_is_well_formed() {
        let t = stadium(6).unwrap();
        assert_eq!(t.vertex_count(), 7 + 2 * 7 + 2 * 5);
        assert_eq!(t.struts().len(), 24);
        assert_eq!(t.chains().len(), 2);
    }
}
