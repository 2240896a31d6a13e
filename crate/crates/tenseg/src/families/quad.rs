//! Closed-form stresses of a convex crossed quadrilateral.

use nalgebra::DVector;

use super::assemble;
use crate::error::{Error, Result};
use crate::model::Tensegrity;
use crate::stress::StressVector;

type P = [f64; 2];

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: P) -> f64 {
    a[0].hypot(a[1])
}

fn unit(from: P, to: P) -> P {
    let d = sub(to, from);
    let n = norm(d);
    [d[0] / n, d[1] / n]
}

fn dot(a: P, b: P) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: P, b: P) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Sine of the angle at `at` between the rays towards `a` and `b`.
fn sine(at: P, a: P, b: P) -> f64 {
    cross(unit(at, a), unit(at, b)).abs()
}

/// Vertices 1..4 in cyclic order, with struts 1-3, 2-4 and cables 1-2,
/// 2-3, 3-4, 1-4, in that row order.
pub fn crossed_quad(p: &[P; 4]) -> Result<Tensegrity> {
    let points: Vec<Vec<f64>> = p.iter().map(|q| q.to_vec()).collect();
    assemble(2, &points, &[(0, 2), (1, 3)], &[(0, 1), (1, 2), (2, 3), (0, 3)], &[])
}

/// Force magnitudes (unit-direction weights) of the stress of a crossed quadrilateral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadWeights {
    pub w12: f64,
    pub w23: f64,
    pub w34: f64,
    pub w14: f64,
    pub w13: f64,
    /// The second diagonal's weight from equilibrium at vertex 2.
    pub w24: f64,
    /// The same weight from equilibrium at vertex 4.
    pub w24_from_4: f64,
}

pub fn is_strictly_convex(p: &[P; 4]) -> bool {
    let scale = (0..4).map(|i| norm(sub(p[(i + 1) % 4], p[i]))).fold(0.0, f64::max);
    let turns: Vec<f64> = (0..4)
        .map(|i| cross(sub(p[(i + 1) % 4], p[i]), sub(p[(i + 2) % 4], p[(i + 1) % 4])))
        .collect();
    let eps = 1e-12 * scale * scale;
    turns.iter().all(|&t| t > eps) || turns.iter().all(|&t| t < -eps)
}

pub fn quad_weights(p: &[P; 4], w13: f64) -> Result<QuadWeights> {
    if !is_strictly_convex(p) {
        return Err(Error::NotConvex);
    }
    if !(w13 > 0.0 && w13.is_finite()) {
        return Err(Error::InvalidParameter(format!("strut weight must be positive, got {w13}")));
    }
    let [p1, p2, p3, p4] = *p;
    let w12 = sine(p1, p3, p4) / sine(p1, p2, p4) * w13;
    let w14 = sine(p1, p2, p3) / sine(p1, p2, p4) * w13;
    let w23 = sine(p3, p1, p4) / sine(p3, p2, p4) * w13;
    let w34 = sine(p3, p1, p2) / sine(p3, p2, p4) * w13;
    let (e21, e23, e24) = (unit(p2, p1), unit(p2, p3), unit(p2, p4));
    let w24 = w23 * dot(e23, e24) + w12 * dot(e21, e24);
    let (e41, e43, e42) = (unit(p4, p1), unit(p4, p3), unit(p4, p2));
    let w24_from_4 = w14 * dot(e41, e42) + w34 * dot(e43, e42);
    Ok(QuadWeights {
        w12,
        w23,
        w34,
        w14,
        w13,
        w24,
        w24_from_4,
    })
}

/// The stress of [`crossed_quad`] with strut 1-3 carrying force `w13`, as
/// row coefficients (force over length).
pub fn quad_stress(p: &[P; 4], w13: f64) -> Result<StressVector> {
    let w = quad_weights(p, w13)?;
    let len = |a: usize, b: usize| norm(sub(p[a], p[b]));
    let raw = DVector::from_vec(vec![
        w.w13 / len(0, 2),
        w.w24 / len(1, 3),
        w.w12 / len(0, 1),
        w.w23 / len(1, 2),
        w.w34 / len(2, 3),
        w.w14 / len(0, 3),
    ]);
    StressVector::new(raw, 1e-7)
}
