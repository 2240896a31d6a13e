//! Infinitesimal Euclidean motions restricted to the vertices.

use nalgebra::DMatrix;

use crate::linalg;
use crate::model::Tensegrity;

/// Generator fields of the Euclidean motions, one per column: a field
/// `dR·p(v)` for each skew basis matrix `E_ij − E_ji` (i < j, lexicographic),
/// then the constant translations `e_1 .. e_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanBasis {
    pub generators: DMatrix<f64>,
    pub dim_expected: usize,
}

/// The skew matrix `E_ij − E_ji`.
pub fn skew(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m[(j, i)] = -1.0;
    m
}

pub fn euclidean_generators(t: &Tensegrity) -> EuclideanBasis {
    let n = t.dim();
    let count = n * (n + 1) / 2;
    let mut g = DMatrix::zeros(n * t.vertex_count(), count);
    let mut col = 0;
    for i in 0..n {
        for j in i + 1..n {
            for v in 0..t.vertex_count() {
                let p = t.position(v);
                g[(v * n + i, col)] = p[j];
                g[(v * n + j, col)] = -p[i];
            }
            col += 1;
        }
    }
    for i in 0..n {
        for v in 0..t.vertex_count() {
            g[(v * n + i, col)] = 1.0;
        }
        col += 1;
    }
    EuclideanBasis {
        generators: g,
        dim_expected: count,
    }
}

/// Columns scaled to unit length, so ranks do not depend on the placement's scale.
pub(crate) fn normalized(g: &DMatrix<f64>) -> DMatrix<f64> {
    let mut g = g.clone();
    for mut c in g.column_iter_mut() {
        let n = c.norm();
        if n > 0.0 {
            c /= n;
        }
    }
    g
}

/// Dimension of T(p): the numerical rank of the generator fields.
pub fn euclidean_rank(t: &Tensegrity, rtol: f64) -> usize {
    linalg::rank(&normalized(&euclidean_generators(t).generators), rtol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::model::parse;

    #[test]
    fn rotation_of_crossed_square() {
        let t = families::crossed_square();
        let g = euclidean_generators(&t).generators;
        assert_eq!(g.ncols(), 3);
        // Rotation field (y, -x): vertices (0,0),(1,0),(1,1),(0,1).
        let rot: Vec<f64> = g.column(0).iter().copied().collect();
        assert_eq!(rot, vec![0.0, 0.0, 0.0, -1.0, 1.0, -1.0, 1.0, 0.0]);
        assert_eq!(euclidean_rank(&t, 1e-10), 3);
    }

    #[test]
    fn skew_generators_are_skew() {
        for n in 2..5 {
            for i in 0..n {
                for j in i + 1..n {
                    let s = skew(n, i, j);
                    assert_eq!(s.transpose(), -s);
                }
            }
        }
    }

    #[test]
    fn degenerate_placements_lose_rank() {
        let line = parse("dim 3\nvertex a 0 0 0\nvertex b 1 1 1\nvertex c 2 2 2\n").unwrap();
        assert_eq!(euclidean_rank(&line, 1e-10), 5);
        let point = parse("dim 2\nvertex o 0 0\n").unwrap();
        assert_eq!(euclidean_rank(&point, 1e-10), 2);
        let octa = families::octahedron();
        assert_eq!(euclidean_rank(&octa, 1e-10), 6);
    }
}
