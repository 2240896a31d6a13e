//! The rectangle [0,2]×[0,1] with vertical struts and cables to the far corners.

use nalgebra::DVector;

use super::assemble;
use crate::error::{Error, Result};
use crate::model::Tensegrity;

/// Abscissae of the interior sample points: the midpoints (i + ½)·2/N.
pub fn rectangle_abscissae(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) * 2.0 / n as f64).collect()
}

/// Vertices: corners (0,0), (2,0), (2,1), (0,1), then the N bottom and the
/// N top interior points. Rows, in order:
/// - N vertical struts, then the bottom and top corner struts;
/// - per interior abscissa, cables bottom→(0,1), bottom→(2,1), top→(0,0), top→(2,0);
/// - the corner diagonals (0,0)-(2,1) and (2,0)-(0,1);
/// - bars (0,0)-(0,1) and (2,0)-(2,1), each as a strut row and a cable row.
pub fn rectangle(n: usize) -> Result<Tensegrity> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one interior strut".into()));
    }
    let xs = rectangle_abscissae(n);
    let mut points = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![2.0, 1.0], vec![0.0, 1.0]];
    points.extend(xs.iter().map(|&x| vec![x, 0.0]));
    points.extend(xs.iter().map(|&x| vec![x, 1.0]));
    let (bottom, top) = (|i: usize| 4 + i, |i: usize| 4 + n + i);
    let mut struts: Vec<_> = (0..n).map(|i| (bottom(i), top(i))).collect();
    struts.extend([(0, 1), (3, 2)]);
    let mut cables = Vec::new();
    for i in 0..n {
        cables.extend([(bottom(i), 3), (bottom(i), 2), (top(i), 0), (top(i), 1)]);
    }
    cables.extend([(0, 2), (1, 3)]);
    assemble(2, &points, &struts, &cables, &[(0, 3), (1, 2)])
}

/// A stress of [`rectangle`] in row coefficients. With m = 2/N, each vertical
/// strut carries m and the cables from (x,0) to (0,1) and (2,1) carry the forces
/// (2−x)·√(1+x²)/2·m and x·√(1+(2−x)²)/2·m (mirrored for the top points).
/// The corners are balanced with the corner diagonals at coefficient
/// `diagonal`; the stress is strictly positive when `diagonal > 0`.
pub fn rectangle_stress(n: usize, diagonal: f64) -> DVector<f64> {
    let xs = rectangle_abscissae(n);
    let m = 2.0 / n as f64;
    let horizontal: f64 = xs.iter().map(|x| x * (2.0 - x) / 2.0 * m).sum();
    let vertical: f64 = xs.iter().map(|x| (2.0 - x) / 2.0 * m).sum();
    let mut w = Vec::with_capacity(7 * n + 8);
    w.extend(std::iter::repeat_n(m, n));
    w.extend([horizontal / 2.0 + diagonal; 2]);
    for &x in &xs {
        let (near, far) = ((2.0 - x) / 2.0 * m, x / 2.0 * m);
        w.extend([near, far, near, far]);
    }
    w.extend([diagonal; 2]);
    for _ in 0..2 {
        w.extend([vertical + 2.0 * diagonal, diagonal]);
    }
    DVector::from_vec(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::build_operator;

    #[test]
    fn layout() {
        let t = rectangle(11).unwrap();
        assert_eq!(t.vertex_count(), 26);
        assert_eq!((t.struts().len(), t.cables().len(), t.bars().len()), (13, 46, 2));
    }

    #[test]
    fn closed_form_balances_every_vertex() {
        for n in [1, 4, 21] {
            let y = build_operator(&rectangle(n).unwrap());
            let w = rectangle_stress(n, 0.3);
            assert_eq!(w.len(), y.row_count());
            assert!((y.matrix.transpose() * &w).amax() < 1e-12, "n = {n}");
        }
    }
}
