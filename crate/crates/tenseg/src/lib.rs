//! Rigidity analysis of finite tensegrity frameworks.
//!
//! A tensegrity is a placement of vertices in R^n joined by struts, cables
//! and bars. This crate builds the rigidity operator, answers the four
//! positivity questions about stresses and motions through paired linear
//! feasibility problems, and classifies frameworks as bar-equivalent,
//! partially bar-equivalent or infinitesimally rigid.
//!
//! ```
//! use tenseg::{classify, families, Mode, Tol};
//!
//! let square = families::crossed_square();
//! let verdict = classify::classify(&square, Mode::Full, &Tol::default()).unwrap();
//! assert!(verdict.bar_equivalent && verdict.infinitesimally_rigid);
//! ```

pub mod classify;
pub mod corpus;
pub mod error;
pub mod euclidean;
pub mod families;
pub mod linalg;
pub mod model;
pub mod report;
pub mod rigidity;
pub mod stress;
pub mod svg;

pub use error::{Error, Result};
pub use model::{EdgeRef, EdgeRow, RowKind, Tensegrity};
pub use rigidity::{Mode, RigidityOperator, VariationSpace};

/// Numerical tolerances shared by the solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol {
    /// Relative singular-value cutoff, multiplied by `max(rows, cols) * sigma_max`.
    pub rank: f64,
    /// Feasibility tolerance of the simplex solver.
    pub solver: f64,
    /// Weights below this (after sup-normalization) are outside the support.
    pub support: f64,
    /// Relative residual allowed when re-checking certificates.
    pub certificate: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            rank: 1e-10,
            solver: 1e-9,
            support: 1e-7,
            certificate: 1e-8,
        }
    }
}

impl Tol {
    /// Default tolerances with the solver tolerance taken from `TENSEG_TOL` when set.
    pub fn from_env() -> Result<Tol> {
        let mut tol = Tol::default();
        if let Ok(raw) = std::env::var("TENSEG_TOL") {
            let value: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("TENSEG_TOL={raw} is not a number")))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!("TENSEG_TOL={raw} must be positive")));
            }
            tol.solver = value;
        }
        Ok(tol)
    }
}
