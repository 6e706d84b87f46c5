//! Problem data and the per-cell / per-column feasible sets.
//!
//! Row `i` of the system reads
//! `max_j max{φ(a⁺_ij, x_j), φ(a⁻_ij, 1 − x_j)} = b_i`.
//! For every cell `(i, j)` the analysis computes
//!
//! * `I_ij`, the values of `x_j` that keep the cell at or below `b_i`,
//! * `S_ij ⊆ I_ij`, the values where the cell reaches `b_i` exactly,
//!
//! then the column bounds `I_j = ⋂_i I_ij = [L_j, U_j]` and the restricted
//! sets `S′_ij = S_ij ∩ I_j`. A point is feasible iff every `x_j ∈ I_j` and
//! every row has some column with `x_j ∈ S′_ij`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{IntervalUnion, EPS};
use crate::tnorm::TNorm;

#[derive(Clone, Debug, PartialEq)]
pub struct BipolarSystem {
    a_plus: Vec<Vec<f64>>,
    a_minus: Vec<Vec<f64>>,
    b: Vec<f64>,
    tnorm: TNorm,
}

fn check_matrix(name: &'static str, a: &[Vec<f64>], m: usize, n: usize) -> Result<()> {
    if a.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: a.len() });
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        for (j, &v) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidEntry { matrix: name, row: i, col: j, value: v });
            }
        }
    }
    Ok(())
}

impl BipolarSystem {
    pub fn new(
        a_plus: Vec<Vec<f64>>,
        a_minus: Vec<Vec<f64>>,
        b: Vec<f64>,
        tnorm: TNorm,
    ) -> Result<Self> {
        let m = b.len();
        let n = a_plus.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(Error::EmptySystem);
        }
        check_matrix("a_plus", &a_plus, m, n)?;
        check_matrix("a_minus", &a_minus, m, n)?;
        for (i, &v) in b.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidEntry { matrix: "b", row: i, col: 0, value: v });
            }
        }
        Ok(BipolarSystem { a_plus, a_minus, b, tnorm })
    }

    /// Embeds the classic equation `A φ x = b` as `A⁺ = A`, `A⁻ = 0`.
    pub fn from_fre(a: Vec<Vec<f64>>, b: Vec<f64>, tnorm: TNorm) -> Result<Self> {
        let zeros = a.iter().map(|row| vec![0.0; row.len()]).collect();
        BipolarSystem::new(a, zeros, b, tnorm)
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn cols(&self) -> usize {
        self.a_plus[0].len()
    }

    pub fn a_plus(&self) -> &[Vec<f64>] {
        &self.a_plus
    }

    pub fn a_minus(&self) -> &[Vec<f64>] {
        &self.a_minus
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn tnorm(&self) -> TNorm {
        self.tnorm
    }

    /// Value of the left-hand side of row `i` at `x`.
    pub fn row_value(&self, x: &[f64], i: usize) -> Result<f64> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch { expected: self.cols(), found: x.len() });
        }
        let mut lhs = 0.0_f64;
        for (j, &xj) in x.iter().enumerate() {
            let pos = self.tnorm.eval(self.a_plus[i][j], xj)?;
            let neg = self.tnorm.eval(self.a_minus[i][j], 1.0 - xj)?;
            lhs = lhs.max(pos).max(neg);
        }
        Ok(lhs)
    }

    /// `|LHS_i(x) − b_i|`.
    pub fn residual(&self, x: &[f64], i: usize) -> Result<f64> {
        Ok((self.row_value(x, i)? - self.b[i]).abs())
    }

    /// Largest residual over all rows.
    pub fn max_residual(&self, x: &[f64]) -> Result<f64> {
        (0..self.rows()).try_fold(0.0_f64, |acc, i| Ok(acc.max(self.residual(x, i)?)))
    }

    pub fn analyze(&self) -> Analysis {
        Analysis::new(self)
    }
}

/// Scalar-equation data and the two derived sets of one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSets {
    /// `(l⁺, u⁺)` when `a⁺_ij ≥ b_i`.
    pub plus: Option<(f64, f64)>,
    /// `(l⁻, u⁻)` of `φ(a⁻_ij, y) = b_i` in `y = 1 − x`, when `a⁻_ij ≥ b_i`.
    pub minus: Option<(f64, f64)>,
    /// `I_ij`
    pub relaxed: IntervalUnion,
    /// `S_ij`
    pub solution: IntervalUnion,
}

impl CellSets {
    /// `I⁺_ij`
    pub fn relaxed_plus(&self) -> IntervalUnion {
        match self.plus {
            Some((_, u)) => IntervalUnion::interval(0.0, u),
            None => IntervalUnion::full(),
        }
    }

    /// `I⁻_ij`, reflected into `x`.
    pub fn relaxed_minus(&self) -> IntervalUnion {
        match self.minus {
            Some((_, u)) => IntervalUnion::interval(1.0 - u, 1.0),
            None => IntervalUnion::full(),
        }
    }

    /// `S⁺_ij`
    pub fn solution_plus(&self) -> IntervalUnion {
        match self.plus {
            Some((l, u)) => IntervalUnion::interval(l, u),
            None => IntervalUnion::empty(),
        }
    }

    /// `S⁻_ij`, reflected into `x`.
    pub fn solution_minus(&self) -> IntervalUnion {
        match self.minus {
            Some((l, u)) => IntervalUnion::interval(1.0 - u, 1.0 - l),
            None => IntervalUnion::empty(),
        }
    }
}

/// Builds `I_ij` and `S_ij` for one cell from the four-way case split on
/// `a⁺_ij ≥ b_i` and `a⁻_ij ≥ b_i`.
pub fn cell_sets(sys: &BipolarSystem, i: usize, j: usize) -> CellSets {
    cell_sets_eps(sys, i, j, EPS)
}

pub fn cell_sets_eps(sys: &BipolarSystem, i: usize, j: usize, eps: f64) -> CellSets {
    let t = sys.tnorm;
    let b = sys.b[i];
    let roots = |a: f64| {
        let s = t.solve_unchecked(a, b);
        s.l.zip(s.u)
    };
    let plus = roots(sys.a_plus[i][j]);
    let minus = roots(sys.a_minus[i][j]);
    let iv = |lo: f64, hi: f64| IntervalUnion::from_pieces_eps([(lo, hi)], eps);
    let (relaxed, solution) = match (plus, minus) {
        (None, None) => (IntervalUnion::full(), IntervalUnion::empty()),
        (Some((lp, up)), None) => (iv(0.0, up), iv(lp, up)),
        (None, Some((lm, um))) => (iv(1.0 - um, 1.0), iv(1.0 - um, 1.0 - lm)),
        (Some((lp, up)), Some((lm, um))) => {
            let relaxed = iv(1.0 - um, up);
            let solution = if lp > 1.0 - lm {
                IntervalUnion::from_pieces_eps([(1.0 - um, 1.0 - lm), (lp, up)], eps)
            } else {
                iv(1.0 - um, up)
            };
            (relaxed, solution)
        }
    };
    CellSets { plus, minus, relaxed, solution }
}

/// Necessary-condition verdicts, plus the resolution-only outcome where the
/// necessary conditions pass but no admissible function exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "index", rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    EmptyColumn(usize),
    EmptyRow(usize),
    NoAdmissibleFunction,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

/// Cached per-cell and per-column sets of a system.
#[derive(Clone, Debug)]
pub struct Analysis {
    system: BipolarSystem,
    eps: f64,
    cells: Vec<CellSets>,
    bounds: Vec<(f64, f64)>,
    columns: Vec<IntervalUnion>,
    restricted: Vec<IntervalUnion>,
    cols_of_row: Vec<Vec<usize>>,
    rows_of_col: Vec<Vec<usize>>,
}

impl Analysis {
    pub fn new(sys: &BipolarSystem) -> Self {
        Analysis::with_eps(sys, EPS)
    }

    pub fn with_eps(sys: &BipolarSystem, eps: f64) -> Self {
        let (m, n) = (sys.rows(), sys.cols());
        let cells: Vec<CellSets> = (0..m * n)
            .into_par_iter()
            .map(|k| cell_sets_eps(sys, k / n, k % n, eps))
            .collect();
        let bounds = column_bounds(&cells, m, n);
        let columns: Vec<IntervalUnion> = bounds
            .iter()
            .map(|&(lo, hi)| IntervalUnion::from_pieces_eps([(lo, hi)], eps))
            .collect();
        let restricted = restricted_sets(&cells, &columns, n, eps);
        let mut cols_of_row = vec![Vec::new(); m];
        let mut rows_of_col = vec![Vec::new(); n];
        for i in 0..m {
            for j in 0..n {
                if !restricted[i * n + j].is_empty() {
                    cols_of_row[i].push(j);
                    rows_of_col[j].push(i);
                }
            }
        }
        Analysis {
            system: sys.clone(),
            eps,
            cells,
            bounds,
            columns,
            restricted,
            cols_of_row,
            rows_of_col,
        }
    }

    pub fn system(&self) -> &BipolarSystem {
        &self.system
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn rows(&self) -> usize {
        self.system.rows()
    }

    pub fn cols(&self) -> usize {
        self.system.cols()
    }

    pub fn cell(&self, i: usize, j: usize) -> &CellSets {
        &self.cells[i * self.cols() + j]
    }

    /// `I_ij`
    pub fn relaxed(&self, i: usize, j: usize) -> &IntervalUnion {
        &self.cell(i, j).relaxed
    }

    /// `S_ij`
    pub fn solution(&self, i: usize, j: usize) -> &IntervalUnion {
        &self.cell(i, j).solution
    }

    /// `I_j`
    pub fn column(&self, j: usize) -> &IntervalUnion {
        &self.columns[j]
    }

    /// `(L_j, U_j)` before the emptiness test.
    pub fn column_bounds(&self, j: usize) -> (f64, f64) {
        self.bounds[j]
    }

    /// `S′_ij`
    pub fn restricted(&self, i: usize, j: usize) -> &IntervalUnion {
        &self.restricted[i * self.cols() + j]
    }

    /// `𝒥_i`: columns with non-empty `S′_ij`.
    pub fn cols_of_row(&self, i: usize) -> &[usize] {
        &self.cols_of_row[i]
    }

    /// `ℐ_j`: rows with non-empty `S′_ij`.
    pub fn rows_of_col(&self, j: usize) -> &[usize] {
        &self.rows_of_col[j]
    }

    /// Empty column bounds first, then rows without any non-empty `S′_ij`.
    /// `Ok` is necessary for feasibility, not sufficient.
    pub fn necessary_feasibility(&self) -> Verdict {
        if let Some(j) = self.columns.iter().position(IntervalUnion::is_empty) {
            return Verdict::EmptyColumn(j);
        }
        if let Some(i) = self.cols_of_row.iter().position(Vec::is_empty) {
            return Verdict::EmptyRow(i);
        }
        Verdict::Ok
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch { expected: self.cols(), found: x.len() });
        }
        Ok(())
    }

    /// Exact feasibility test: `x_j ∈ I_j` for all `j`, and every row has a
    /// column with `x_j ∈ S′_ij`.
    pub fn is_feasible_point(&self, x: &[f64]) -> Result<bool> {
        self.check_len(x)?;
        let eps = self.eps;
        let bounded = x
            .iter()
            .enumerate()
            .all(|(j, &xj)| self.columns[j].contains_eps(xj, eps));
        Ok(bounded
            && (0..self.rows()).all(|i| {
                self.cols_of_row[i]
                    .iter()
                    .any(|&j| self.restricted(i, j).contains_eps(x[j], eps))
            }))
    }

    /// Whether `x` satisfies row `i` alone: `x_j ∈ I_ij` for every `j` and
    /// `x_j ∈ S_ij` for some `j`.
    pub fn satisfies_equation(&self, x: &[f64], i: usize) -> Result<bool> {
        self.check_len(x)?;
        let eps = self.eps;
        let bounded = x
            .iter()
            .enumerate()
            .all(|(j, &xj)| self.relaxed(i, j).contains_eps(xj, eps));
        Ok(bounded
            && x
                .iter()
                .enumerate()
                .any(|(j, &xj)| self.solution(i, j).contains_eps(xj, eps)))
    }
}

/// `L_j = max_{i ∈ I⁻(j)} (1 − u⁻_ij)` (0 if none) and
/// `U_j = min_{i ∈ I⁺(j)} u⁺_ij` (1 if none), for every column.
pub fn column_bounds(cells: &[CellSets], m: usize, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|j| {
            let mut lo = 0.0_f64;
            let mut hi = 1.0_f64;
            for i in 0..m {
                let c = &cells[i * n + j];
                if let Some((_, u)) = c.minus {
                    lo = lo.max(1.0 - u);
                }
                if let Some((_, u)) = c.plus {
                    hi = hi.min(u);
                }
            }
            (lo, hi)
        })
        .collect()
}

/// `S′_ij = S_ij ∩ I_j` for the whole grid (row-major).
pub fn restricted_sets(
    cells: &[CellSets],
    columns: &[IntervalUnion],
    n: usize,
    eps: f64,
) -> Vec<IntervalUnion> {
    cells
        .iter()
        .enumerate()
        .map(|(k, c)| c.solution.intersect_eps(&columns[k % n], eps))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tnorm::TNormKind;

    fn one_cell(ap: f64, am: f64, b: f64, t: TNorm) -> BipolarSystem {
        BipolarSystem::new(vec![vec![ap]], vec![vec![am]], vec![b], t).unwrap()
    }

    #[test]
    fn both_below_rhs() {
        let sys = one_cell(0.2, 0.3, 0.5, TNorm::product());
        let c = cell_sets(&sys, 0, 0);
        assert_eq!(c.relaxed, IntervalUnion::full());
        assert!(c.solution.is_empty());
    }

    #[test]
    fn two_piece_cell() {
        // max{min(x, 1), min(1, 1 − x)} = 0.8 at x ∈ {0.2, 0.8}
        let sys = one_cell(1.0, 1.0, 0.8, TNorm::minimum());
        let c = cell_sets(&sys, 0, 0);
        assert!(c.relaxed.approx_eq(&IntervalUnion::interval(0.2, 0.8), 1e-12));
        let expect = IntervalUnion::from_pieces([(0.2, 0.2), (0.8, 0.8)]);
        assert!(c.solution.approx_eq(&expect, 1e-12));
    }

    #[test]
    fn all_zero_rows_are_empty() {
        let sys = BipolarSystem::new(
            vec![vec![0.0; 3]; 2],
            vec![vec![0.0; 3]; 2],
            vec![1.0, 1.0],
            TNorm::product(),
        )
        .unwrap();
        assert_eq!(sys.analyze().necessary_feasibility(), Verdict::EmptyRow(0));
    }

    #[test]
    fn contradictory_column() {
        let sys = one_cell(1.0, 1.0, 0.0, TNorm::minimum());
        assert_eq!(sys.analyze().necessary_feasibility(), Verdict::EmptyColumn(0));
    }

    #[test]
    fn unconstrained_column_bounds() {
        let sys = BipolarSystem::new(
            vec![vec![0.1, 0.9]],
            vec![vec![0.2, 0.0]],
            vec![0.5],
            TNorm::product(),
        )
        .unwrap();
        let an = sys.analyze();
        assert_eq!(an.column(0), &IntervalUnion::full());
    }

    #[test]
    fn universal_single_variable() {
        // b = 0 with a⁺ = a⁻ = 0: every x solves it.
        let sys = one_cell(0.0, 0.0, 0.0, TNorm::product());
        let an = sys.analyze();
        assert_eq!(an.restricted(0, 0), &IntervalUnion::full());
        for x in [0.0, 0.3, 1.0] {
            assert!(an.is_feasible_point(&[x]).unwrap());
        }
    }

    #[test]
    fn fre_embedding() {
        let sys = BipolarSystem::from_fre(vec![vec![1.0]], vec![0.5], TNorm::product()).unwrap();
        let an = sys.analyze();
        assert!(an.is_feasible_point(&[0.5]).unwrap());
        assert!(!an.is_feasible_point(&[0.6]).unwrap());

        let sys = BipolarSystem::from_fre(vec![vec![0.3]], vec![0.9], TNorm::product()).unwrap();
        assert_eq!(sys.analyze().necessary_feasibility(), Verdict::EmptyRow(0));

        let sys = BipolarSystem::from_fre(
            vec![vec![0.4, 0.7], vec![0.2, 0.9]],
            vec![0.0, 0.0],
            TNorm::new(TNormKind::Yager, Some(2.0)).unwrap(),
        )
        .unwrap();
        assert!(sys.analyze().is_feasible_point(&[0.0, 0.0]).unwrap());
    }

    #[test]
    fn validation() {
        let t = TNorm::product();
        assert!(matches!(
            BipolarSystem::new(vec![vec![-0.1]], vec![vec![0.0]], vec![0.5], t),
            Err(Error::InvalidEntry { matrix: "a_plus", .. })
        ));
        assert!(matches!(
            BipolarSystem::new(vec![vec![0.1]], vec![vec![0.0, 0.2]], vec![0.5], t),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            BipolarSystem::new(vec![], vec![], vec![], t),
            Err(Error::EmptySystem)
        ));
        let sys = one_cell(0.5, 0.5, 0.5, t);
        assert!(sys.analyze().is_feasible_point(&[0.1, 0.2]).is_err());
    }
}
