//! Verdicts: bar equivalence, partial bar equivalence, infinitesimal
//! rigidity, minimal bar-equivalent subsets and covering stresses.

use std::collections::{BTreeSet, HashMap};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::euclidean::{euclidean_generators, normalized};
use crate::linalg;
use crate::model::{EdgeRef, Tensegrity};
use crate::rigidity::{build_operator, variation_space, Mode, RigidityOperator, SpaceKind, VariationSpace};
use crate::stress::{self, Alternative, MotionVector, Positivity, StressVector};
use crate::Tol;

/// The witness behind a verdict: a strictly positive stress for a
/// bar-equivalent framework, otherwise a semipositive or strictly positive motion.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Stress(StressVector),
    Motion(MotionVector),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub bar_equivalent: bool,
    pub partially_bar_equivalent: bool,
    pub infinitesimally_rigid: bool,
    pub dim_stress_space: usize,
    /// Dimension of the Euclidean motions at this placement.
    pub dim_t: usize,
    /// Flexes of the bar framework inside X beyond the Euclidean ones in X.
    pub dim_motions_modulo_t: usize,
    pub certificate: Certificate,
}

impl Classification {
    pub fn verdict(&self) -> &'static str {
        if self.bar_equivalent {
            "bar-equivalent"
        } else if self.partially_bar_equivalent {
            "partially bar-equivalent"
        } else {
            "not bar-equivalent"
        }
    }
}

pub fn classify(t: &Tensegrity, mode: Mode, tol: &Tol) -> Result<Classification> {
    let x = variation_space(t, mode, tol.rank)?;
    classify_in(t, &x, tol)
}

/// Classification against an explicit variation space.
pub fn classify_in(t: &Tensegrity, x: &VariationSpace, tol: &Tol) -> Result<Classification> {
    let yop = build_operator(t);
    let dim_stress_space = stress::stress_space(&yop, x, tol)?.ncols();

    let (bar_equivalent, partially, certificate) = match stress::stiemke(&yop, x, tol)? {
        Alternative::Stress(s) => (true, false, Certificate::Stress(s)),
        Alternative::Motion(semi) => match stress::gordan(&yop, x, tol)? {
            Some(Alternative::Stress(_)) => (false, true, Certificate::Motion(semi)),
            Some(Alternative::Motion(strict)) => (false, false, Certificate::Motion(strict)),
            None => unreachable!("a semipositive motion needs at least one row"),
        },
    };

    let g = normalized(&euclidean_generators(t).generators);
    let dim_t = linalg::rank(&g, tol.rank);
    let dim_x = x.dim();
    let loads = match x.kind {
        SpaceKind::Full => yop.matrix.clone(),
        SpaceKind::Constrained => &yop.matrix * &x.basis,
    };
    let flexes = dim_x - linalg::rank(&loads, tol.rank);
    let trivial = match x.kind {
        SpaceKind::Full => dim_t,
        SpaceKind::Constrained => {
            let both = DMatrix::from_columns(
                &g.column_iter().chain(x.basis.column_iter()).map(|c| c.into_owned()).collect::<Vec<_>>(),
            );
            dim_t + dim_x - linalg::rank(&both, tol.rank)
        }
    };
    let dim_motions_modulo_t = flexes.saturating_sub(trivial);

    Ok(Classification {
        bar_equivalent,
        partially_bar_equivalent: partially,
        infinitesimally_rigid: bar_equivalent && dim_motions_modulo_t == 0,
        dim_stress_space,
        dim_t,
        dim_motions_modulo_t,
        certificate,
    })
}

/// Bar equivalence of an operator, cross-checked through Stiemke's pairing.
pub fn is_bar_equivalent(yop: &RigidityOperator, x: &VariationSpace, tol: &Tol) -> Result<bool> {
    Ok(matches!(stress::stiemke(yop, x, tol)?, Alternative::Stress(_)))
}

/// What counts as one removable piece in the minimality search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Granularity {
    /// Declared edges; a bar's two rows are removed together.
    Edge,
    /// Individual operator rows; a bar's strut row and cable row are separate.
    Row,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Search {
    /// Exhaustive up to [`EXHAUSTIVE_ROWS`] rows, greedy beyond.
    Auto,
    Exhaustive,
    /// One subset from which no single unit can be dropped; it need not be
    /// inclusion-minimal.
    Greedy,
}

/// Largest row count searched exhaustively.
pub const EXHAUSTIVE_ROWS: usize = 20;

/// A bar-equivalent set of rows. Exhaustive search reports the
/// inclusion-minimal ones; greedy search reports sets from which no single
/// unit can be dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalSubset {
    pub rows: Vec<usize>,
    pub edges: Vec<EdgeRef>,
}

/// Minimal bar-equivalent subsets with operator rows as units, so a bar may
/// contribute only its strut row or only its cable row.
pub fn minimal_analysis(t: &Tensegrity, mode: Mode, tol: &Tol) -> Result<Vec<MinimalSubset>> {
    let x = variation_space(t, mode, tol.rank)?;
    minimal_analysis_with(t, &x, Granularity::Row, Search::Auto, tol)
}

pub fn minimal_analysis_with(
    t: &Tensegrity,
    x: &VariationSpace,
    granularity: Granularity,
    search: Search,
    tol: &Tol,
) -> Result<Vec<MinimalSubset>> {
    let yop = build_operator(t);
    let units: Vec<Vec<usize>> = match granularity {
        Granularity::Row => (0..yop.row_count()).map(|r| vec![r]).collect(),
        Granularity::Edge => {
            let mut by_edge: Vec<(EdgeRef, Vec<usize>)> = Vec::new();
            for (r, row) in yop.rows.iter().enumerate() {
                match by_edge.last_mut() {
                    Some((e, rows)) if *e == row.edge => rows.push(r),
                    _ => by_edge.push((row.edge, vec![r])),
                }
            }
            by_edge.into_iter().map(|(_, rows)| rows).collect()
        }
    };
    let exhaustive = match search {
        Search::Exhaustive if yop.row_count() > EXHAUSTIVE_ROWS => {
            return Err(Error::TooManyUnits {
                units: yop.row_count(),
                limit: EXHAUSTIVE_ROWS,
            })
        }
        Search::Exhaustive => true,
        Search::Greedy => false,
        Search::Auto => yop.row_count() <= EXHAUSTIVE_ROWS,
    };

    let mut memo: HashMap<u64, bool> = HashMap::new();
    let mut be = |mask: u64| -> Result<bool> {
        if let Some(&v) = memo.get(&mask) {
            return Ok(v);
        }
        let rows: Vec<usize> = (0..units.len())
            .filter(|&u| mask >> u & 1 == 1)
            .flat_map(|u| units[u].iter().copied())
            .collect();
        let v = mask != 0 && is_bar_equivalent(&yop.select(&rows), x, tol)?;
        memo.insert(mask, v);
        Ok(v)
    };
    let mut found: Vec<u64> = Vec::new();
    if exhaustive {
        let mut masks: Vec<u64> = (1..(1u64 << units.len())).collect();
        masks.sort_by_key(|m| m.count_ones());
        for mask in masks {
            if !found.iter().any(|&f| f & mask == f) && be(mask)? {
                found.push(mask);
            }
        }
        found.sort_unstable();
    } else {
        if units.len() > 64 {
            return greedy_large(&yop, x, &units, tol).map(|s| s.into_iter().map(|rows| subset(&yop, rows)).collect());
        }
        let mut mask = (1u64 << units.len()) - 1;
        if be(mask)? {
            'shrink: loop {
                for u in 0..units.len() {
                    let smaller = mask & !(1 << u);
                    if mask >> u & 1 == 1 && be(smaller)? {
                        mask = smaller;
                        continue 'shrink;
                    }
                }
                break;
            }
            found.push(mask);
        }
    }
    Ok(found
        .into_iter()
        .map(|mask| {
            let rows = (0..units.len())
                .filter(|&u| mask >> u & 1 == 1)
                .flat_map(|u| units[u].iter().copied())
                .collect();
            subset(&yop, rows)
        })
        .collect())
}

fn subset(yop: &RigidityOperator, rows: Vec<usize>) -> MinimalSubset {
    let edges: BTreeSet<EdgeRef> = rows.iter().map(|&r| yop.rows[r].edge).collect();
    MinimalSubset {
        rows,
        edges: edges.into_iter().collect(),
    }
}

/// Greedy shrinking for more units than fit in a bit mask.
fn greedy_large(
    yop: &RigidityOperator,
    x: &VariationSpace,
    units: &[Vec<usize>],
    tol: &Tol,
) -> Result<Option<Vec<usize>>> {
    let mut keep: Vec<bool> = vec![true; units.len()];
    let rows_of = |keep: &[bool]| -> Vec<usize> {
        (0..units.len())
            .filter(|&u| keep[u])
            .flat_map(|u| units[u].iter().copied())
            .collect()
    };
    if !is_bar_equivalent(&yop.select(&rows_of(&keep)), x, tol)? {
        return Ok(None);
    }
    let mut changed = true;
    while changed {
        changed = false;
        for u in 0..units.len() {
            if !keep[u] {
                continue;
            }
            keep[u] = false;
            let rows = rows_of(&keep);
            if !rows.is_empty() && is_bar_equivalent(&yop.select(&rows), x, tol)? {
                changed = true;
            } else {
                keep[u] = true;
            }
        }
    }
    Ok(Some(rows_of(&keep)))
}

/// Combines stresses that each cover part of the rows into one stress
/// positive on every row: the n-th stress (from 1) is sup-normalized and
/// weighted by 2⁻ⁿ. Each stress is given on all rows, zero off its subset.
pub fn compose_covering_stress(
    yop: &RigidityOperator,
    x: &VariationSpace,
    parts: &[(Vec<usize>, StressVector)],
    tol: &Tol,
) -> Result<StressVector> {
    let r = yop.row_count();
    let mut covered = vec![false; r];
    let mut total = DVector::zeros(r);
    let mut weight = 1.0;
    for (rows, s) in parts {
        if s.weights.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "stress on {} rows for an operator with {r}",
                s.weights.len()
            )));
        }
        let scale = s.weights.amax();
        if let Some(&row) = rows.iter().find(|&&row| row >= r || s.weights[row] <= tol.support * scale) {
            return Err(Error::InvalidParameter(format!("stress is not positive on its row {row}")));
        }
        rows.iter().for_each(|&row| covered[row] = true);
        weight /= 2.0;
        total += &s.weights * (weight / scale);
    }
    let gaps: Vec<usize> = (0..r).filter(|&i| !covered[i]).collect();
    if !gaps.is_empty() {
        return Err(Error::CoverGap { rows: gaps });
    }
    let composite = StressVector::new(total, tol.support)?;
    let residual = stress::stress_residual(yop, x, &composite.weights);
    if residual > tol.certificate {
        return Err(Error::Inaccurate { residual });
    }
    debug_assert!(r == 0 || composite.weights.min() > 0.0 || composite.positivity != Positivity::StrictlyPositive);
    Ok(composite)
}
