//! The rigidity operator and the design-variation subspace.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{edge_rows, EdgeRow, RowKind, Tensegrity};

/// Signed edge-by-coordinate matrix. Row r applied to a vertex field V gives
/// `±(V(a) − V(b))·(p(a) − p(b))`, positive when a strut lengthens or a
/// cable shortens.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidityOperator {
    pub matrix: DMatrix<f64>,
    pub rows: Vec<EdgeRow>,
    pub dim: usize,
}

impl RigidityOperator {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn coords(&self) -> usize {
        self.matrix.ncols()
    }

    /// The operator restricted to the given rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> RigidityOperator {
        RigidityOperator {
            matrix: self.matrix.select_rows(rows),
            rows: rows.iter().map(|&r| self.rows[r]).collect(),
            dim: self.dim,
        }
    }

    pub fn norm(&self) -> f64 {
        linalg::spectral_norm(&self.matrix)
    }
}

pub fn build_operator(t: &Tensegrity) -> RigidityOperator {
    let n = t.dim();
    let rows = edge_rows(t);
    let mut matrix = DMatrix::zeros(rows.len(), n * t.vertex_count());
    for (r, row) in rows.iter().enumerate() {
        let (a, b) = row.endpoints;
        let sign = match row.kind {
            RowKind::Strut => 1.0,
            RowKind::Cable => -1.0,
        };
        for c in 0..n {
            let d = t.position(a)[c] - t.position(b)[c];
            matrix[(r, a * n + c)] = sign * d;
            matrix[(r, b * n + c)] = -sign * d;
        }
    }
    RigidityOperator { matrix, rows, dim: n }
}

/// The load `Y V` of a vertex field.
pub fn load(yop: &RigidityOperator, v: &DVector<f64>) -> Result<DVector<f64>> {
    if v.len() != yop.coords() {
        return Err(Error::DimensionMismatch(format!(
            "field has {} entries, operator expects {}",
            v.len(),
            yop.coords()
        )));
    }
    Ok(&yop.matrix * v)
}

/// Which design variations are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every vertex field.
    Full,
    /// Fields that keep every isometry-chain chord length to first order.
    CurveIsometry,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "full" => Ok(Mode::Full),
            "isometry" | "curve-isometry" => Ok(Mode::CurveIsometry),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Full,
    Constrained,
}

/// A subspace X of vertex fields, kept both as `ker constraints` and as an
/// orthonormal `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariationSpace {
    pub kind: SpaceKind,
    pub basis: DMatrix<f64>,
    pub constraints: DMatrix<f64>,
}

impl VariationSpace {
    pub fn full(coords: usize) -> VariationSpace {
        VariationSpace {
            kind: SpaceKind::Full,
            basis: DMatrix::identity(coords, coords),
            constraints: DMatrix::zeros(0, coords),
        }
    }

    /// X = ker C.
    pub fn from_constraints(constraints: DMatrix<f64>, rtol: f64) -> VariationSpace {
        VariationSpace {
            kind: SpaceKind::Constrained,
            basis: linalg::null_space(&constraints, rtol),
            constraints,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn coords(&self) -> usize {
        self.basis.nrows()
    }

    /// Euclidean distance from `v` to X.
    pub fn distance(&self, v: &DVector<f64>) -> f64 {
        if self.kind == SpaceKind::Full {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.transpose() * v);
        (v - proj).norm()
    }

    /// The image `L X` under the vertexwise linear map `V(v) ↦ L V(v)`.
    pub fn push_forward(&self, l: &DMatrix<f64>, rtol: f64) -> Result<VariationSpace> {
        let n = l.nrows();
        if l.ncols() != n || !self.coords().is_multiple_of(n) {
            return Err(Error::DimensionMismatch(format!(
                "map {:?} on fields with {} coordinates",
                l.shape(),
                self.coords()
            )));
        }
        if self.kind == SpaceKind::Full {
            return Ok(self.clone());
        }
        let inverse = l
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidParameter("linear part is singular".into()))?;
        let blocks = self.coords() / n;
        let expand = |m: &DMatrix<f64>| {
            let mut big = DMatrix::zeros(n * blocks, n * blocks);
            for b in 0..blocks {
                big.view_mut((b * n, b * n), (n, n)).copy_from(m);
            }
            big
        };
        Ok(VariationSpace {
            kind: SpaceKind::Constrained,
            basis: linalg::column_space(&(expand(l) * &self.basis), rtol),
            constraints: &self.constraints * expand(&inverse),
        })
    }
}

/// One first-order chord-length constraint per consecutive pair of each chain.
pub fn chain_constraints(t: &Tensegrity) -> DMatrix<f64> {
    let n = t.dim();
    let pairs: Vec<(usize, usize)> = t
        .chains()
        .iter()
        .flat_map(|c| c.windows(2).map(|w| (w[0], w[1])))
        .collect();
    let mut c = DMatrix::zeros(pairs.len(), n * t.vertex_count());
    for (r, &(a, b)) in pairs.iter().enumerate() {
        for k in 0..n {
            let d = t.position(b)[k] - t.position(a)[k];
            c[(r, b * n + k)] = d;
            c[(r, a * n + k)] = -d;
        }
    }
    c
}

pub fn variation_space(t: &Tensegrity, mode: Mode, rtol: f64) -> Result<VariationSpace> {
    let coords = t.dim() * t.vertex_count();
    match mode {
        Mode::Full => Ok(VariationSpace::full(coords)),
        Mode::CurveIsometry => {
            if t.chains().is_empty() {
                return Err(Error::NoChains);
            }
            Ok(VariationSpace::from_constraints(chain_constraints(t), rtol))
        }
    }
}
