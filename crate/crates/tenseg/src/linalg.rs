//! Dense kernels: numerical rank, null spaces and a two-phase simplex for
//! linear feasibility with free variables.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Singular values and the full right singular basis (rows of `v_t`).
fn svd_full(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let (m, n) = a.shape();
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.rows_mut(0, m).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut sigma = DVector::zeros(n);
    for (i, s) in svd.singular_values.iter().enumerate().take(n) {
        sigma[i] = *s;
    }
    (sigma, v_t)
}

fn threshold(a: &DMatrix<f64>, sigma: &DVector<f64>, rtol: f64) -> f64 {
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    rtol * a.nrows().max(a.ncols()) as f64 * smax
}

/// Numerical rank: singular values above `rtol * max(rows, cols) * sigma_max`.
pub fn rank(a: &DMatrix<f64>, rtol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let (sigma, _) = svd_full(a);
    let cut = threshold(a, &sigma, rtol);
    sigma.iter().filter(|&&s| s > cut && s > 0.0).count()
}

/// Orthonormal basis of ker A, one column per basis vector.
pub fn null_space(a: &DMatrix<f64>, rtol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let (sigma, v_t) = svd_full(a);
    let cut = threshold(a, &sigma, rtol);
    let kernel: Vec<usize> = (0..n).filter(|&i| !(sigma[i] > cut && sigma[i] > 0.0)).collect();
    let mut basis = DMatrix::zeros(n, kernel.len());
    for (c, &i) in kernel.iter().enumerate() {
        basis.set_column(c, &v_t.row(i).transpose());
    }
    basis
}

/// Orthonormal basis of the column space of A.
pub fn column_space(a: &DMatrix<f64>, rtol: f64) -> DMatrix<f64> {
    let m = a.nrows();
    if a.ncols() == 0 || m == 0 {
        return DMatrix::zeros(m, 0);
    }
    // Columns of A span the orthogonal complement of ker Aᵀ.
    let (sigma, v_t) = svd_full(&a.transpose());
    let cut = threshold(a, &sigma, rtol);
    let range: Vec<usize> = (0..m).filter(|&i| sigma[i] > cut && sigma[i] > 0.0).collect();
    let mut basis = DMatrix::zeros(m, range.len());
    for (c, &i) in range.iter().enumerate() {
        basis.set_column(c, &v_t.row(i).transpose());
    }
    basis
}

/// Minimum-norm least-squares solution of A x ≈ b.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>, rtol: f64) -> DVector<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return DVector::zeros(a.ncols());
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = rtol * a.nrows().max(a.ncols()) as f64 * smax;
    svd.solve(b, eps).expect("both singular bases computed")
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// Answer of a feasibility problem.
#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    /// `residual` is the largest constraint violation relative to the
    /// magnitude of the terms in that constraint.
    Feasible { witness: DVector<f64>, residual: f64 },
    Infeasible,
}

impl Feasibility {
    pub fn witness(&self) -> Option<&DVector<f64>> {
        match self {
            Feasibility::Feasible { witness, .. } => Some(witness),
            Feasibility::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Answer of a linear program.
#[derive(Clone, Debug, PartialEq)]
pub enum Optimum {
    Optimal { x: DVector<f64>, value: f64, residual: f64 },
    Infeasible,
    Unbounded,
}

/// Linear constraints `A_eq x = b_eq`, `A_ge x ≥ b_ge` on free variables x.
#[derive(Clone, Debug)]
pub struct Constraints<'a> {
    pub a_eq: &'a DMatrix<f64>,
    pub b_eq: &'a DVector<f64>,
    pub a_ge: &'a DMatrix<f64>,
    pub b_ge: &'a DVector<f64>,
}

impl Constraints<'_> {
    fn vars(&self) -> usize {
        self.a_eq.ncols()
    }

    fn check(&self) -> Result<()> {
        if self.a_eq.nrows() != self.b_eq.len()
            || self.a_ge.nrows() != self.b_ge.len()
            || self.a_eq.ncols() != self.a_ge.ncols()
        {
            return Err(Error::DimensionMismatch(format!(
                "A_eq {:?} with b_eq {}, A_ge {:?} with b_ge {}",
                self.a_eq.shape(),
                self.b_eq.len(),
                self.a_ge.shape(),
                self.b_ge.len()
            )));
        }
        Ok(())
    }

    /// Largest violation relative to `|b_i| + max(Σ_j |a_ij x_j|, max |A| · max_j |x_j|)`,
    /// where `max |A|` is the largest entry of either matrix.
    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        let floor = self.a_eq.amax().max(self.a_ge.amax()) * x.amax();
        let mut scan = |a: &DMatrix<f64>, b: &DVector<f64>, eq: bool| {
            for i in 0..a.nrows() {
                let row = a.row(i);
                let ax = row.dot(&x.transpose());
                let terms = row.iter().zip(x.iter()).map(|(p, q)| (p * q).abs()).sum::<f64>();
                let scale = b[i].abs() + terms.max(floor);
                let viol = if eq { (ax - b[i]).abs() } else { (b[i] - ax).max(0.0) };
                if viol > 0.0 {
                    worst = worst.max(if scale > 0.0 { viol / scale } else { f64::INFINITY });
                }
            }
        };
        scan(self.a_eq, self.b_eq, true);
        scan(self.a_ge, self.b_ge, false);
        worst
    }
}

/// Decides whether `A_eq x = b_eq, A_ge x ≥ b_ge` has a solution.
pub fn feasible(
    a_eq: &DMatrix<f64>,
    b_eq: &DVector<f64>,
    a_ge: &DMatrix<f64>,
    b_ge: &DVector<f64>,
    tol: f64,
) -> Result<Feasibility> {
    let cons = Constraints { a_eq, b_eq, a_ge, b_ge };
    Ok(match solve(&cons, None, tol)? {
        Optimum::Optimal { x, residual, .. } => Feasibility::Feasible { witness: x, residual },
        Optimum::Infeasible => Feasibility::Infeasible,
        Optimum::Unbounded => unreachable!("no objective in a feasibility problem"),
    })
}

/// Minimizes `c·x` subject to the constraints.
pub fn minimize(c: &DVector<f64>, cons: &Constraints<'_>, tol: f64) -> Result<Optimum> {
    if c.len() != cons.vars() {
        return Err(Error::DimensionMismatch(format!(
            "objective has {} entries for {} variables",
            c.len(),
            cons.vars()
        )));
    }
    solve(cons, Some(c), tol)
}

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-10;
/// Pivots between rebuilds of the tableau from the original rows.
const REFRESH_EVERY: usize = 25;

/// A dense simplex tableau `B⁻¹ [A | I | b]` with its reduced-cost row.
/// It is periodically rebuilt from `origin` through an LU factorization of
/// the basis, so round-off does not accumulate across pivots.
struct Tableau {
    m: usize,
    width: usize,
    t: Vec<f64>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    origin: DMatrix<f64>,
    cost: Vec<f64>,
    iterations: usize,
    since_refresh: usize,
    limit: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn new(rows: &[(Vec<f64>, f64)], n0: usize) -> Tableau {
        let m = rows.len();
        let width = n0 + m + 1;
        let mut origin = DMatrix::zeros(m, width);
        for (i, (row, b)) in rows.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                origin[(i, j)] = a;
            }
            origin[(i, n0 + i)] = 1.0;
            origin[(i, width - 1)] = *b;
        }
        let mut t = vec![0.0; m * width];
        for i in 0..m {
            for j in 0..width {
                t[i * width + j] = origin[(i, j)];
            }
        }
        let mut cost = vec![0.0; width - 1];
        cost[n0..].iter_mut().for_each(|c| *c = 1.0);
        let mut tab = Tableau {
            m,
            width,
            t,
            obj: vec![0.0; width],
            basis: (n0..n0 + m).collect(),
            origin,
            cost: Vec::new(),
            iterations: 0,
            since_refresh: 0,
            limit: 50 * (m + n0).max(1),
        };
        tab.set_cost(cost);
        tab
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn value(&self) -> f64 {
        -self.obj[self.width - 1]
    }

    /// Replaces the cost vector and prices out the current basis.
    fn set_cost(&mut self, cost: Vec<f64>) {
        self.cost = cost;
        let w = self.width;
        for j in 0..w {
            let own = if j < w - 1 { self.cost[j] } else { 0.0 };
            let z: f64 = (0..self.m).map(|i| self.cost[self.basis[i]] * self.at(i, j)).sum();
            self.obj[j] = own - z;
        }
    }

    /// Recomputes the tableau from the original rows. Returns false when
    /// the basis matrix is numerically singular, leaving the tableau as is.
    fn refresh(&mut self) -> bool {
        self.since_refresh = 0;
        if self.m == 0 {
            return true;
        }
        let b = self.origin.select_columns(self.basis.iter());
        let Some(solved) = b.lu().solve(&self.origin) else {
            return false;
        };
        if solved.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let w = self.width;
        for i in 0..self.m {
            for j in 0..w {
                self.t[i * w + j] = solved[(i, j)];
            }
            for (c, &col) in self.basis.iter().enumerate() {
                self.t[i * w + col] = if c == i { 1.0 } else { 0.0 };
            }
            let r = &mut self.t[i * w + w - 1];
            if *r < 0.0 && *r > -1e-9 {
                *r = 0.0;
            }
        }
        let cost = std::mem::take(&mut self.cost);
        self.set_cost(cost);
        true
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let w = self.width;
        let p = self.t[r * w + col];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[col];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[col] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (x, y) in self.obj.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            self.obj[col] = 0.0;
        }
        self.basis[r] = col;
        self.since_refresh += 1;
    }

    /// Bland's rule over the first `allowed` columns: the lowest-index
    /// improving column enters. Ratio ties prefer the largest pivot element
    /// until `m` degenerate pivots occur in a row; from then on they go to the
    /// lowest-index basic variable, which rules out cycling. A verdict is only
    /// returned from a freshly rebuilt tableau.
    fn run(&mut self, allowed: usize) -> Result<Step> {
        let mut fresh = false;
        let mut degenerate = 0;
        loop {
            if self.since_refresh >= REFRESH_EVERY {
                fresh = self.refresh();
            }
            let verdict = match (0..allowed).find(|&j| self.obj[j] < -COST_EPS) {
                None => Some(Step::Optimal),
                Some(col) => match self.leaving(col, degenerate > self.m) {
                    None => Some(Step::Unbounded),
                    Some(r) => {
                        if self.rhs(r) <= 0.0 {
                            degenerate += 1;
                        } else {
                            degenerate = 0;
                        }
                        if self.iterations >= self.limit {
                            return Err(Error::IterationLimit { limit: self.limit });
                        }
                        self.iterations += 1;
                        self.pivot(r, col);
                        fresh = false;
                        None
                    }
                },
            };
            if let Some(step) = verdict {
                if fresh || !self.refresh() {
                    return Ok(step);
                }
                fresh = true;
            }
        }
    }

    /// Minimum-ratio row for entering column `col`. Ties go to the largest
    /// pivot element, or to the lowest-index basic variable once `strict`.
    fn leaving(&self, col: usize, strict: bool) -> Option<usize> {
        let mut best: Option<(usize, f64, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, col);
            if a <= PIVOT_EPS {
                continue;
            }
            let ratio = self.rhs(i).max(0.0) / a;
            let better = match best {
                None => true,
                Some((bi, br, ba)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                    if !tie {
                        ratio < br
                    } else if strict {
                        self.basis[i] < self.basis[bi]
                    } else {
                        a > ba
                    }
                }
            };
            if better {
                best = Some((i, ratio, a));
            }
        }
        best.map(|(r, _, _)| r)
    }
}

fn solve(cons: &Constraints<'_>, objective: Option<&DVector<f64>>, tol: f64) -> Result<Optimum> {
    cons.check()?;
    let k = cons.vars();
    let m_eq = cons.a_eq.nrows();
    let m_ge = cons.a_ge.nrows();
    let global = cons.a_eq.amax().max(cons.a_ge.amax());

    // Equilibrated rows of [A_x | -A_x | -S] x' = b with b ≥ 0.
    let n0 = 2 * k + m_ge;
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..m_eq + m_ge {
        let (a, b, slack) = if i < m_eq {
            (cons.a_eq.row(i), cons.b_eq[i], None)
        } else {
            (cons.a_ge.row(i - m_eq), cons.b_ge[i - m_eq], Some(i - m_eq))
        };
        let amax = a.amax();
        if amax <= 1e-12 * global || amax == 0.0 {
            let violated = match slack {
                None => b != 0.0,
                Some(_) => b > 0.0,
            };
            if violated {
                return Ok(Optimum::Infeasible);
            }
            continue;
        }
        let mut row = vec![0.0; n0];
        for j in 0..k {
            row[j] = a[j] / amax;
            row[k + j] = -a[j] / amax;
        }
        if let Some(s) = slack {
            row[2 * k + s] = -1.0 / amax;
        }
        let mut b = b / amax;
        if b < 0.0 {
            row.iter_mut().for_each(|x| *x = -*x);
            b = -b;
        }
        rows.push((row, b));
    }

    let m = rows.len();
    let mut tab = Tableau::new(&rows, n0);
    tab.run(n0 + m)?;
    let bmax = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    if tab.value() > tol * (1.0 + bmax) {
        return Ok(Optimum::Infeasible);
    }

    // Drive zero-level artificials out of the basis where possible.
    for i in 0..m {
        if tab.basis[i] >= n0 {
            if let Some(j) = (0..n0).find(|&j| tab.at(i, j).abs() > PIVOT_EPS) {
                tab.pivot(i, j);
            }
        }
    }

    let mut unbounded = false;
    if let Some(c) = objective {
        let mut cost = vec![0.0; n0 + m];
        for j in 0..k {
            cost[j] = c[j];
            cost[k + j] = -c[j];
        }
        tab.refresh();
        tab.set_cost(cost);
        unbounded = matches!(tab.run(n0)?, Step::Unbounded);
    } else {
        tab.refresh();
    }

    let mut x_std = vec![0.0; n0];
    for (i, &col) in tab.basis.iter().enumerate() {
        if col < n0 {
            x_std[col] = tab.rhs(i);
        }
    }
    let mut x = DVector::zeros(k);
    for j in 0..k {
        x[j] = x_std[j] - x_std[k + j];
    }
    if unbounded {
        return Ok(Optimum::Unbounded);
    }
    let residual = cons.residual(&x);
    if residual > tol {
        return Err(Error::Inaccurate { residual });
    }
    let value = objective.map_or(0.0, |c| c.dot(&x));
    Ok(Optimum::Optimal { x, value, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use nalgebra::dvector;

    fn none(k: usize) -> (DMatrix<f64>, DVector<f64>) {
        (DMatrix::zeros(0, k), DVector::zeros(0))
    }

    #[test]
    fn null_space_of_difference_row() {
        let a = dmatrix![1.0, -1.0];
        let n = null_space(&a, 1e-10);
        assert_eq!(n.shape(), (2, 1));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((n[(0, 0)].abs() - s).abs() < 1e-14);
        assert!((n[(0, 0)] - n[(1, 0)]).abs() < 1e-14);
    }

    #[test]
    fn null_space_of_empty_matrix_is_identity() {
        let n = null_space(&DMatrix::zeros(0, 3), 1e-10);
        assert_eq!(n, DMatrix::identity(3, 3));
    }

    #[test]
    fn wide_and_tall_ranks() {
        let wide = dmatrix![1.0, 2.0, 3.0; 2.0, 4.0, 6.0];
        assert_eq!(rank(&wide, 1e-10), 1);
        assert_eq!(null_space(&wide, 1e-10).ncols(), 2);
        assert_eq!(rank(&wide.transpose(), 1e-10), 1);
        assert_eq!(column_space(&wide, 1e-10).ncols(), 1);
        assert_eq!(rank(&DMatrix::zeros(3, 2), 1e-10), 0);
    }

    #[test]
    fn equality_against_bound_is_infeasible() {
        let r = feasible(&dmatrix![1.0], &dvector![1.0], &dmatrix![1.0], &dvector![2.0], 1e-9).unwrap();
        assert_eq!(r, Feasibility::Infeasible);
    }

    #[test]
    fn two_sided_bound_pins_the_variable() {
        let (ae, be) = none(1);
        let r = feasible(&ae, &be, &dmatrix![1.0; -1.0], &dvector![1.0, -1.0], 1e-9).unwrap();
        let x = r.witness().unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_solutions_need_free_variables() {
        let (ae, be) = none(2);
        let r = feasible(&ae, &be, &dmatrix![-1.0, 0.0; 1.0, 1.0], &dvector![3.0, -10.0], 1e-9).unwrap();
        let x = r.witness().unwrap();
        assert!(x[0] <= -3.0 + 1e-12 && x[0] + x[1] >= -10.0 - 1e-12);
    }

    #[test]
    fn zero_rows_are_decided_directly() {
        let z = DMatrix::zeros(1, 2);
        assert_eq!(feasible(&z, &dvector![1.0], &DMatrix::zeros(0, 2), &DVector::zeros(0), 1e-9).unwrap(), Feasibility::Infeasible);
        assert!(feasible(&z, &dvector![0.0], &z, &dvector![-1.0], 1e-9).unwrap().is_feasible());
    }

    #[test]
    fn minimize_finds_vertex_and_detects_unbounded() {
        // min -x - y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0.
        let a = dmatrix![-1.0, -2.0; -3.0, -1.0; 1.0, 0.0; 0.0, 1.0];
        let b = dvector![-4.0, -6.0, 0.0, 0.0];
        let (ae, be) = none(2);
        let cons = Constraints { a_eq: &ae, b_eq: &be, a_ge: &a, b_ge: &b };
        match minimize(&dvector![-1.0, -1.0], &cons, 1e-9).unwrap() {
            Optimum::Optimal { x, value, .. } => {
                assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
                assert!((value + 2.8).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let cons = Constraints { a_eq: &ae, b_eq: &be, a_ge: &a.rows(2, 2).into_owned(), b_ge: &b.rows(2, 2).into_owned() };
        assert_eq!(minimize(&dvector![-1.0, 0.0], &cons, 1e-9).unwrap(), Optimum::Unbounded);
    }

    #[test]
    fn mismatched_dimensions_are_errors() {
        let err = feasible(&dmatrix![1.0, 2.0], &dvector![1.0], &dmatrix![1.0], &dvector![0.0], 1e-9);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Highly degenerate: many redundant constraints through the origin.
        let n = 6;
        let mut a = DMatrix::zeros(2 * n, n);
        for i in 0..n {
            a[(i, i)] = 1.0;
            a[(n + i, i)] = -1.0;
            a[(n + i, (i + 1) % n)] = 1.0;
        }
        let b = DVector::zeros(2 * n);
        let (ae, be) = none(n);
        let r = feasible(&ae, &be, &a, &b, 1e-9).unwrap();
        assert!(r.is_feasible());
    }
}
