//! Stresses and motions, decided through paired feasibility problems.
//!
//! With Q an orthonormal basis of the design variations X:
//!
//! | question                  | system                                   |
//! |---------------------------|------------------------------------------|
//! | strictly positive stress  | `Qᵀ Yᵀ μ = 0`, `μ ≥ 1`                   |
//! | semipositive stress       | `Qᵀ Yᵀ μ = 0`, `μ ≥ 0`, `Σ μ = 1`        |
//! | strictly positive motion  | `Y Q c ≥ 1`                              |
//! | semipositive motion       | `Y Q c ≥ 0`, `Σ (Y Q c) ≥ 1`             |
//!
//! Stiemke's theorem pairs the first with the fourth and Gordan's pairs the
//! second with the third: in each pair exactly one system is solvable.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, Constraints, Feasibility, Optimum};
use crate::rigidity::{RigidityOperator, SpaceKind, VariationSpace};
use crate::Tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Zero,
    Semipositive,
    StrictlyPositive,
}

fn positivity(v: &DVector<f64>, support_tol: f64) -> Positivity {
    if v.iter().all(|&x| x >= support_tol) {
        Positivity::StrictlyPositive
    } else if v.iter().any(|&x| x > support_tol) {
        Positivity::Semipositive
    } else {
        Positivity::Zero
    }
}

/// Nonnegative weights on the operator rows, scaled to sup-norm 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StressVector {
    pub weights: DVector<f64>,
    pub positivity: Positivity,
    pub support: Vec<usize>,
}

impl StressVector {
    /// Normalizes `raw` and classifies it; entries within the support
    /// tolerance of zero from below are clamped to zero.
    pub fn new(raw: DVector<f64>, support_tol: f64) -> Result<StressVector> {
        let scale = raw.amax();
        let mut weights = if scale > 0.0 { raw / scale } else { raw };
        if let Some(&bad) = weights.iter().find(|&&w| w < -support_tol) {
            return Err(Error::InvalidParameter(format!("stress weight {bad:e} is negative")));
        }
        weights.iter_mut().for_each(|w| *w = w.max(0.0));
        let support = (0..weights.len()).filter(|&i| weights[i] > support_tol).collect();
        Ok(StressVector {
            positivity: positivity(&weights, support_tol),
            weights,
            support,
        })
    }
}

/// A variation in X together with its load.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionVector {
    pub field: DVector<f64>,
    pub load: DVector<f64>,
    pub positivity: Positivity,
}

impl MotionVector {
    /// Scales the field so the largest load is 1 and classifies the load.
    pub fn new(yop: &RigidityOperator, field: DVector<f64>, support_tol: f64) -> MotionVector {
        let load = &yop.matrix * &field;
        let scale = load.max();
        let (field, load) = if scale > 0.0 {
            (field / scale, load / scale)
        } else {
            (field, load)
        };
        MotionVector {
            positivity: positivity(&load, support_tol),
            field,
            load,
        }
    }
}

/// `Qᵀ Yᵀ`: its kernel is the space of stresses.
fn stress_map(yop: &RigidityOperator, x: &VariationSpace) -> DMatrix<f64> {
    match x.kind {
        SpaceKind::Full => yop.matrix.transpose(),
        SpaceKind::Constrained => x.basis.transpose() * yop.matrix.transpose(),
    }
}

/// `Y Q`: the loads of X in coordinates of its basis.
fn load_map(yop: &RigidityOperator, x: &VariationSpace) -> DMatrix<f64> {
    match x.kind {
        SpaceKind::Full => yop.matrix.clone(),
        SpaceKind::Constrained => &yop.matrix * &x.basis,
    }
}

/// Zeroes entries below `tol.rank · ‖Y‖`. A row whose load vanishes on X
/// otherwise keeps round-off entries that a solver can scale up into a
/// spurious unit load.
fn cleaned(mut m: DMatrix<f64>, yop: &RigidityOperator, tol: &Tol) -> DMatrix<f64> {
    let floor = tol.rank * yop.norm();
    m.iter_mut().filter(|v| v.abs() <= floor).for_each(|v| *v = 0.0);
    m
}

fn check_dims(yop: &RigidityOperator, x: &VariationSpace) -> Result<()> {
    if yop.coords() != x.coords() {
        return Err(Error::DimensionMismatch(format!(
            "operator acts on {} coordinates, variation space lives in {}",
            yop.coords(),
            x.coords()
        )));
    }
    Ok(())
}

/// Orthonormal basis of all (not necessarily positive) stresses.
pub fn stress_space(yop: &RigidityOperator, x: &VariationSpace, tol: &Tol) -> Result<DMatrix<f64>> {
    check_dims(yop, x)?;
    Ok(linalg::null_space(&stress_map(yop, x), tol.rank))
}

/// `‖Qᵀ Yᵀ μ‖ / (‖Y‖ ‖μ‖)`, zero for the zero vector.
pub fn stress_residual(yop: &RigidityOperator, x: &VariationSpace, mu: &DVector<f64>) -> f64 {
    let scale = yop.norm() * mu.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (stress_map(yop, x) * mu).norm() / scale
}

fn certify_stress(yop: &RigidityOperator, x: &VariationSpace, s: &StressVector, tol: &Tol) -> Result<()> {
    let residual = stress_residual(yop, x, &s.weights);
    if residual > tol.certificate {
        return Err(Error::Inaccurate { residual });
    }
    Ok(())
}

fn certify_motion(x: &VariationSpace, m: &MotionVector, tol: &Tol) -> Result<()> {
    let worst = m.load.iter().cloned().fold(0.0, f64::min);
    let off = x.distance(&m.field) / m.field.norm().max(f64::MIN_POSITIVE);
    if -worst > tol.certificate || off > tol.certificate {
        return Err(Error::Inaccurate {
            residual: (-worst).max(off),
        });
    }
    Ok(())
}

fn stress_lp(
    yop: &RigidityOperator,
    x: &VariationSpace,
    tol: &Tol,
    strict: bool,
) -> Result<Option<StressVector>> {
    check_dims(yop, x)?;
    let r = yop.row_count();
    let mut a_eq = cleaned(stress_map(yop, x), yop, tol);
    let mut b_eq = DVector::zeros(a_eq.nrows());
    let (a_ge, b_ge) = if strict {
        (DMatrix::identity(r, r), DVector::from_element(r, 1.0))
    } else {
        let at = a_eq.nrows();
        a_eq = a_eq.insert_row(at, 1.0);
        b_eq = b_eq.push(1.0);
        (DMatrix::identity(r, r), DVector::zeros(r))
    };
    match linalg::feasible(&a_eq, &b_eq, &a_ge, &b_ge, tol.solver)? {
        Feasibility::Infeasible => Ok(None),
        Feasibility::Feasible { witness, .. } => {
            let s = StressVector::new(witness, tol.support)?;
            certify_stress(yop, x, &s, tol)?;
            Ok(Some(s))
        }
    }
}

fn motion_lp(
    yop: &RigidityOperator,
    x: &VariationSpace,
    tol: &Tol,
    strict: bool,
) -> Result<Option<MotionVector>> {
    check_dims(yop, x)?;
    let r = yop.row_count();
    if r == 0 {
        return Ok(None);
    }
    let loads = cleaned(load_map(yop, x), yop, tol);
    let (a_ge, b_ge) = if strict {
        (loads.clone(), DVector::from_element(r, 1.0))
    } else {
        let total = loads.row_sum();
        let mut a = loads.clone().insert_row(r, 0.0);
        a.set_row(r, &total);
        let mut b = DVector::zeros(r + 1);
        b[r] = 1.0;
        (a, b)
    };
    let k = loads.ncols();
    let (a_eq, b_eq) = (DMatrix::zeros(0, k), DVector::zeros(0));
    match linalg::feasible(&a_eq, &b_eq, &a_ge, &b_ge, tol.solver)? {
        Feasibility::Infeasible => Ok(None),
        Feasibility::Feasible { witness, .. } => {
            let field = match x.kind {
                SpaceKind::Full => witness,
                SpaceKind::Constrained => &x.basis * witness,
            };
            let m = MotionVector::new(yop, field, tol.support);
            certify_motion(x, &m, tol)?;
            Ok(Some(m))
        }
    }
}

pub fn find_strictly_positive_stress(
    yop: &RigidityOperator,
    x: &VariationSpace,
    tol: &Tol,
) -> Result<Option<StressVector>> {
    stress_lp(yop, x, tol, true)
}

pub fn find_semipositive_stress(
    yop: &RigidityOperator,
    x: &VariationSpace,
    tol: &Tol,
) -> Result<Option<StressVector>> {
    stress_lp(yop, x, tol, false)
}

/// A variation whose load is positive on every row. With no rows there is
/// nothing to load and the answer is `None` by convention.
pub fn find_strictly_positive_motion(
    yop: &RigidityOperator,
    x: &VariationSpace,
    tol: &Tol,
) -> Result<Option<MotionVector>> {
    motion_lp(yop, x, tol, true)
}

pub fn find_semipositive_motion(
    yop: &RigidityOperator,
    x: &VariationSpace,
    tol: &Tol,
) -> Result<Option<MotionVector>> {
    motion_lp(yop, x, tol, false)
}

/// The solvable side of a theorem-of-the-alternative pair.
#[derive(Clone, Debug, PartialEq)]
pub enum Alternative {
    Stress(StressVector),
    Motion(MotionVector),
}

fn exactly_one(
    pair: &'static str,
    stress: Option<StressVector>,
    motion: Option<MotionVector>,
) -> Result<Alternative> {
    match (stress, motion) {
        (Some(s), None) => Ok(Alternative::Stress(s)),
        (None, Some(m)) => Ok(Alternative::Motion(m)),
        (s, m) => Err(Error::AlternativeViolation {
            pair,
            detail: format!(
                "stress {:?}, motion {:?}",
                s.map(|s| s.weights.as_slice().to_vec()),
                m.map(|m| m.load.as_slice().to_vec())
            ),
        }),
    }
}

/// Either a strictly positive stress or a semipositive motion, never both.
pub fn stiemke(yop: &RigidityOperator, x: &VariationSpace, tol: &Tol) -> Result<Alternative> {
    let stress = find_strictly_positive_stress(yop, x, tol)?;
    let motion = find_semipositive_motion(yop, x, tol)?;
    exactly_one("Stiemke", stress, motion)
}

/// Either a semipositive stress or a strictly positive motion, never both.
/// An operator without rows has neither and is reported as `None`.
pub fn gordan(yop: &RigidityOperator, x: &VariationSpace, tol: &Tol) -> Result<Option<Alternative>> {
    let stress = find_semipositive_stress(yop, x, tol)?;
    let motion = find_strictly_positive_motion(yop, x, tol)?;
    if yop.row_count() == 0 {
        return Ok(None);
    }
    exactly_one("Gordan", stress, motion).map(Some)
}

/// How close the loads of X come to the nonnegative orthant: the least `t`
/// such that some load with a unit entry has no entry below `−t`. Positive
/// exactly when no semipositive motion exists, and never below −1, which
/// it reaches exactly when a strictly positive motion exists.
pub fn orthant_gap(yop: &RigidityOperator, x: &VariationSpace, tol: &Tol) -> Result<f64> {
    check_dims(yop, x)?;
    let loads = cleaned(load_map(yop, x), yop, tol);
    let (r, k) = loads.shape();
    let mut a_ge = DMatrix::zeros(r, k + 1);
    a_ge.view_mut((0, 0), (r, k)).copy_from(&loads);
    a_ge.column_mut(k).fill(1.0);
    let b_ge = DVector::zeros(r);
    let mut c = DVector::zeros(k + 1);
    c[k] = 1.0;
    let mut best = f64::INFINITY;
    for j in 0..r {
        let mut a_eq = DMatrix::zeros(1, k + 1);
        a_eq.view_mut((0, 0), (1, k)).copy_from(&loads.row(j));
        let b_eq = DVector::from_element(1, 1.0);
        let cons = Constraints { a_eq: &a_eq, b_eq: &b_eq, a_ge: &a_ge, b_ge: &b_ge };
        match linalg::minimize(&c, &cons, tol.solver)? {
            Optimum::Optimal { value, .. } => best = best.min(value),
            Optimum::Unbounded => return Ok(f64::NEG_INFINITY),
            Optimum::Infeasible => {}
        }
    }
    Ok(best)
}
