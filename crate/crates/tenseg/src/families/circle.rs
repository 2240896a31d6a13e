//! Circles, squares and cylinders of struts, and the closed-form variations on them.

use std::f64::consts::PI;

use nalgebra::DVector;

use super::assemble;
use crate::error::{Error, Result};
use crate::model::Tensegrity;
use crate::rigidity::{build_operator, load};
use crate::stress::MotionVector;
use crate::Tol;

fn circle_points(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            vec![a.cos(), a.sin()]
        })
        .collect()
}

fn closed_chain(n: usize, offset: usize) -> Vec<usize> {
    (0..=n).map(|i| offset + i % n).collect()
}

fn even_at_least(n: usize, min: usize) -> Result<()> {
    if n < min || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("need an even vertex count of at least {min}, got {n}")));
    }
    Ok(())
}

/// N points on the unit circle, each joined by a strut to its antipode, with
/// the circle as one closed isometry chain. The strut from vertex i
/// (i < N/2) is row i.
pub fn circle_of_struts(n: usize) -> Result<Tensegrity> {
    even_at_least(n, 4)?;
    let struts: Vec<_> = (0..n / 2).map(|i| (i, i + n / 2)).collect();
    let mut t = assemble(2, &circle_points(n), &struts, &[], &[])?;
    t.add_chain(closed_chain(n, 0))?;
    Ok(t)
}

/// The circle of N points with struts only at angles in [ε, π/2 − ε].
pub fn almost_half_circle(n: usize, eps: f64) -> Result<Tensegrity> {
    even_at_least(n, 4)?;
    if !(eps > 0.0 && eps < PI / 4.0) {
        return Err(Error::InvalidParameter(format!("gap angle must lie in (0, π/4), got {eps}")));
    }
    let slack = 1e-9;
    let struts: Vec<_> = (0..n / 2)
        .filter(|&i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            a >= eps - slack && a <= PI / 2.0 - eps + slack
        })
        .map(|i| (i, i + n / 2))
        .collect();
    if struts.is_empty() {
        return Err(Error::InvalidParameter("no sample angle falls inside the strut range".into()));
    }
    let mut t = assemble(2, &circle_points(n), &struts, &[], &[])?;
    t.add_chain(closed_chain(n, 0))?;
    Ok(t)
}

/// N points on the unit circle with antipodal struts and cables from every
/// point to the points `skip` places away on either side.
pub fn on_a_circle(n: usize, skip: usize) -> Result<Tensegrity> {
    even_at_least(n, 4)?;
    if skip == 0 || 2 * skip >= n {
        return Err(Error::InvalidParameter(format!("skip must lie in 1..{}, got {skip}", n / 2)));
    }
    let struts: Vec<_> = (0..n / 2).map(|i| (i, i + n / 2)).collect();
    let cables: Vec<_> = (0..n).map(|i| (i, (i + skip) % n)).collect();
    let mut t = assemble(2, &circle_points(n), &struts, &cables, &[])?;
    t.add_chain(closed_chain(n, 0))?;
    Ok(t)
}

/// Cable force per unit strut weight balancing [`on_a_circle`] when the
/// cables subtend the angle `h`: 1/cos((π − h)/2).
pub fn on_circle_alpha(h: f64) -> Result<f64> {
    if !(h > 0.0 && h < PI) {
        return Err(Error::InvalidParameter(format!("skip angle must lie in (0, π), got {h}")));
    }
    Ok(1.0 / ((PI - h) / 2.0).cos())
}

/// The variation V(θ) = m/(2(k²−1))·((k+1)sin((k−1)θ) + (k−1)sin((k+1)θ),
/// (k+1)cos((k−1)θ) − (k−1)cos((k+1)θ)) on the unit circle. Its derivative
/// is m·cos(kθ)·(cos θ, sin θ), so it keeps arclength to first order.
pub fn building_block_point(k: f64, m: f64, theta: f64) -> [f64; 2] {
    let c = m / (2.0 * (k * k - 1.0));
    [
        c * ((k + 1.0) * ((k - 1.0) * theta).sin() + (k - 1.0) * ((k + 1.0) * theta).sin()),
        c * ((k + 1.0) * ((k - 1.0) * theta).cos() - (k - 1.0) * ((k + 1.0) * theta).cos()),
    ]
}

pub fn building_block_variation(k: f64, m: f64, thetas: &[f64]) -> Result<Vec<[f64; 2]>> {
    if !(k > 1.0) {
        return Err(Error::InvalidParameter(format!("k must exceed 1, got {k}")));
    }
    Ok(thetas.iter().map(|&th| building_block_point(k, m, th)).collect())
}

/// V_g(θ) = (sin θ/2 + sin 3θ/6, cos θ/2 − cos 3θ/6).
pub fn vg_point(theta: f64) -> [f64; 2] {
    [
        theta.sin() / 2.0 + (3.0 * theta).sin() / 6.0,
        theta.cos() / 2.0 - (3.0 * theta).cos() / 6.0,
    ]
}

/// The load of V_g on the diameter strut at angle θ: (8/3)·sin 2θ.
pub fn vg_load(theta: f64) -> f64 {
    8.0 / 3.0 * (2.0 * theta).sin()
}

/// V_g sampled at each vertex of a planar tensegrity, by polar angle.
pub fn vg_field(t: &Tensegrity) -> DVector<f64> {
    let mut v = DVector::zeros(2 * t.vertex_count());
    for i in 0..t.vertex_count() {
        let p = t.position(i);
        let g = vg_point(p[1].atan2(p[0]));
        v[2 * i] = g[0];
        v[2 * i + 1] = g[1];
    }
    v
}

/// The almost-half-circle with its V_g motion.
pub fn good_motion_vg(n: usize, eps: f64, tol: &Tol) -> Result<(Tensegrity, MotionVector)> {
    let t = almost_half_circle(n, eps)?;
    let y = build_operator(&t);
    let field = vg_field(&t);
    load(&y, &field)?;
    let motion = MotionVector::new(&y, field, tol.support);
    Ok((t, motion))
}

/// `rings` stacked circles of `n` points at heights 0, 1, …, each with
/// antipodal struts. Each ring is a closed chain and each vertical line of
/// points an open chain. Ring r occupies vertices r·n .. (r+1)·n.
pub fn cylinder_of_struts(n: usize, rings: usize) -> Result<Tensegrity> {
    even_at_least(n, 4)?;
    if rings == 0 {
        return Err(Error::InvalidParameter("need at least one ring".into()));
    }
    let mut points = Vec::new();
    let mut struts = Vec::new();
    for r in 0..rings {
        for p in circle_points(n) {
            points.push(vec![p[0], p[1], r as f64]);
        }
        struts.extend((0..n / 2).map(|i| (r * n + i, r * n + i + n / 2)));
    }
    let mut t = assemble(3, &points, &struts, &[], &[])?;
    for r in 0..rings {
        t.add_chain(closed_chain(n, r * n))?;
    }
    if rings > 1 {
        for j in 0..n {
            t.add_chain((0..rings).map(|r| r * n + j).collect())?;
        }
    }
    Ok(t)
}

/// The boundary of [0,2]² with `m` points per side, counter-clockwise from
/// the origin, antipodal struts and one closed chain. Vertex k·m is a corner.
pub fn square_of_struts(m: usize) -> Result<Tensegrity> {
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one point per side".into()));
    }
    let n = 4 * m;
    let points: Vec<Vec<f64>> = (0..n).map(|i| square_point(m, i).to_vec()).collect();
    let struts: Vec<_> = (0..2 * m).map(|i| (i, i + 2 * m)).collect();
    let mut t = assemble(2, &points, &struts, &[], &[])?;
    t.add_chain(closed_chain(n, 0))?;
    Ok(t)
}

const CORNERS: [[f64; 2]; 4] = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
const DIRECTIONS: [[f64; 2]; 4] = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
const NORMALS: [[f64; 2]; 4] = [[0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]];

fn square_point(m: usize, i: usize) -> [f64; 2] {
    let (side, s) = (i / m, 2.0 * (i % m) as f64 / m as f64);
    let (c, d) = (CORNERS[side], DIRECTIONS[side]);
    [c[0] + s * d[0], c[1] + s * d[1]]
}

/// Moves each side of [`square_of_struts`] along its outward normal by a
/// tent profile vanishing at the corners and peaking mid-side. It keeps
/// every chord of the boundary chain and lengthens every strut off the diagonals.
pub fn square_tent_field(m: usize) -> DVector<f64> {
    let n = 4 * m;
    let mut v = DVector::zeros(2 * n);
    for i in 0..n {
        let (side, s) = (i / m, 2.0 * (i % m) as f64 / m as f64);
        let h = s.min(2.0 - s);
        v[2 * i] = h * NORMALS[side][0];
        v[2 * i + 1] = h * NORMALS[side][1];
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::{chain_constraints, variation_space, Mode};

    #[test]
    fn alpha_values() {
        assert!((on_circle_alpha(PI / 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((on_circle_alpha(PI / 3.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((on_circle_alpha(PI - 1e-9).unwrap() - 1.0).abs() < 1e-15);
        assert!(on_circle_alpha(PI).is_err() && on_circle_alpha(0.0).is_err());
    }

    #[test]
    fn building_block_start_and_patch_lengths() {
        let v = building_block_point(3.0, 1.0, 0.0);
        assert!(v[0].abs() < 1e-15 && (v[1] - 0.125).abs() < 1e-15);
        for (k, m) in [(4.0, -2.0), (4.0 / 3.0, 14.0 / 135.0)] {
            let v = building_block_point(k, m, 0.0);
            assert!(((v[0] * v[0] + v[1] * v[1]).sqrt() - 2.0 / 15.0).abs() < 1e-15);
        }
        assert!(building_block_variation(1.0, 1.0, &[0.0]).is_err());
    }

    #[test]
    fn building_block_radial_part() {
        let (k, m) = (3.0, 1.0);
        for i in 1..20 {
            let th = PI / k * i as f64 / 20.0;
            let v = building_block_point(k, m, th);
            let radial = v[0] * th.cos() + v[1] * th.sin();
            let expected = m * k / (k * k - 1.0) * (k * th).sin();
            assert!((radial - expected).abs() < 1e-14);
            assert!(radial > 0.0);
        }
    }

    #[test]
    fn vg_loads_match_formula() {
        let (t, _) = good_motion_vg(72, 5f64.to_radians(), &Tol::default()).unwrap();
        assert_eq!(t.struts().len(), 17);
        let loads = build_operator(&t).matrix * vg_field(&t);
        for (r, &(a, _)) in t.struts().iter().enumerate() {
            let p = t.position(a);
            assert!((loads[r] - vg_load(p[1].atan2(p[0]))).abs() < 1e-12);
        }
        assert!((vg_load(PI / 4.0) - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn regular_polygon_chain_rank() {
        for n in [6, 8, 12] {
            let t = circle_of_struts(n).unwrap();
            let x = variation_space(&t, Mode::CurveIsometry, 1e-10).unwrap();
            assert_eq!(x.dim(), n);
            assert_eq!(chain_constraints(&t).nrows(), n);
        }
    }

    #[test]
    fn tent_field_is_admissible() {
        let m = 6;
        let t = square_of_struts(m).unwrap();
        let v = square_tent_field(m);
        assert!((chain_constraints(&t) * &v).amax() < 1e-12);
        let loads = build_operator(&t).matrix * &v;
        for (r, &(a, _)) in t.struts().iter().enumerate() {
            if a % m == 0 {
                assert_eq!(loads[r], 0.0);
            } else {
                assert!(loads[r] > 0.0);
            }
        }
    }

    #[test]
    fn cylinder_layout() {
        let t = cylinder_of_struts(24, 8).unwrap();
        assert_eq!((t.vertex_count(), t.struts().len(), t.chains().len()), (192, 96, 32));
        assert!(cylinder_of_struts(5, 2).is_err());
    }
}
