//! Affine images and higher-dimensional embeddings of a tensegrity.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::Tensegrity;

/// The tensegrity with every placement mapped by x ↦ Lx + translation.
pub fn affine_transform(t: &Tensegrity, l: &DMatrix<f64>, translation: &DVector<f64>) -> Result<Tensegrity> {
    let n = t.dim();
    if l.shape() != (n, n) || translation.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "affine map {:?} + {} on dimension {n}",
            l.shape(),
            translation.len()
        )));
    }
    let mut positions = Vec::with_capacity(t.positions().len());
    for v in 0..t.vertex_count() {
        let p = DVector::from_column_slice(t.position(v));
        positions.extend((l * p + translation).iter());
    }
    t.with_positions(&positions, n)
}

/// The same tensegrity in `dim` ≥ its dimension, padding coordinates with zeros.
pub fn lift(t: &Tensegrity, dim: usize) -> Result<Tensegrity> {
    if dim < t.dim() {
        return Err(Error::InvalidParameter(format!("cannot lift dimension {} to {dim}", t.dim())));
    }
    let mut positions = Vec::with_capacity(dim * t.vertex_count());
    for v in 0..t.vertex_count() {
        positions.extend_from_slice(t.position(v));
        positions.extend(std::iter::repeat_n(0.0, dim - t.dim()));
    }
    t.with_positions(&positions, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::crossed_square;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn gram_matrix_image_of_the_square() {
        let (a, b, c) = (2.0, 0.5, 1.5);
        let t = affine_transform(&crossed_square(), &dmatrix![a, b; b, c], &dvector![0.0, 0.0]).unwrap();
        assert_eq!(t.positions(), &[0.0, 0.0, a, b, a + b, b + c, b, c]);
    }

    #[test]
    fn identity_is_a_no_op() {
        let t = crossed_square();
        assert_eq!(affine_transform(&t, &DMatrix::identity(2, 2), &dvector![0.0, 0.0]).unwrap(), t);
    }

    #[test]
    fn collapsing_map_is_rejected() {
        let squash = dmatrix![1.0, 0.0; 0.0, 0.0];
        assert!(affine_transform(&crossed_square(), &squash, &dvector![0.0, 0.0]).is_err());
    }

    #[test]
    fn lift_pads_with_zeros() {
        let t = lift(&crossed_square(), 3).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.position(2), &[1.0, 1.0, 0.0]);
        assert!(lift(&t, 2).is_err());
    }
}
