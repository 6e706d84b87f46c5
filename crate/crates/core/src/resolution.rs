//! Admissible functions, their boxes, and the full resolution pipeline.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{IntervalUnion, EPS};
use crate::simplify::{simplify_to_fixpoint, ReductionState};
use crate::system::{Analysis, BipolarSystem, Verdict};

/// Default cap on the number of admissible functions.
pub const DEFAULT_MAX_ADMISSIBLE: u64 = 1_000_000;

/// An assignment of one responsible column to each active row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdmissibleFunction {
    /// Active rows, ascending.
    pub rows: Vec<usize>,
    /// `cols[k]` is the column assigned to `rows[k]`.
    pub cols: Vec<usize>,
}

impl AdmissibleFunction {
    /// Column assigned to row `i`, if `i` is one of the covered rows.
    pub fn column_of(&self, i: usize) -> Option<usize> {
        self.rows.iter().position(|&r| r == i).map(|k| self.cols[k])
    }

    /// Rows assigned to column `j`.
    pub fn rows_of(&self, j: usize) -> Vec<usize> {
        self.rows
            .iter()
            .zip(&self.cols)
            .filter(|&(_, &c)| c == j)
            .map(|(&r, _)| r)
            .collect()
    }
}

/// One box of the feasible region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibleBox {
    pub factors: Vec<IntervalUnion>,
    pub e: AdmissibleFunction,
    pub fixed: BTreeMap<usize, f64>,
}

impl FeasibleBox {
    pub fn contains(&self, x: &[f64], eps: f64) -> bool {
        x.len() == self.factors.len()
            && self.factors.iter().zip(x).all(|(f, &v)| f.contains_eps(v, eps))
    }
}

/// `∏ |𝒥_i|` over active rows, saturating at `u64::MAX`.
pub fn count_bound(analysis: &Analysis, state: &ReductionState) -> u64 {
    state.active_rows.iter().fold(1u64, |acc, &i| {
        acc.saturating_mul(state.active_cols_of_row(analysis, i).len() as u64)
    })
}

/// Depth-first enumeration of the admissible functions of the reduced
/// problem, in lexicographic order of the column vectors.
///
/// Fails with [`Error::ResourceLimit`] once more than `limit` functions have
/// been found.
pub fn enumerate_admissible(
    analysis: &Analysis,
    state: &ReductionState,
    limit: u64,
) -> Result<Vec<AdmissibleFunction>> {
    let rows: Vec<usize> = state.active_rows.iter().copied().collect();
    let choices: Vec<Vec<usize>> =
        rows.iter().map(|&i| state.active_cols_of_row(analysis, i)).collect();
    if rows.is_empty() {
        return Ok(vec![AdmissibleFunction { rows, cols: Vec::new() }]);
    }
    let found = AtomicU64::new(0);
    let dfs = Dfs { analysis, rows: &rows, choices: &choices, limit, found: &found };

    let branches: Vec<Result<Vec<Vec<usize>>>> = choices[0]
        .par_iter()
        .map(|&j| {
            let mut running: BTreeMap<usize, IntervalUnion> = BTreeMap::new();
            running.insert(j, analysis.restricted(rows[0], j).clone());
            let mut path = vec![j];
            let mut out = Vec::new();
            dfs.descend(1, &mut path, &mut running, &mut out)?;
            Ok(out)
        })
        .collect();

    let mut all = Vec::new();
    for branch in branches {
        all.extend(branch?.into_iter().map(|cols| AdmissibleFunction { rows: rows.clone(), cols }));
    }
    Ok(all)
}

struct Dfs<'a> {
    analysis: &'a Analysis,
    rows: &'a [usize],
    choices: &'a [Vec<usize>],
    limit: u64,
    found: &'a AtomicU64,
}

impl Dfs<'_> {
    fn descend(
        &self,
        depth: usize,
        path: &mut Vec<usize>,
        running: &mut BTreeMap<usize, IntervalUnion>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if depth == self.rows.len() {
            if self.found.fetch_add(1, Ordering::Relaxed) >= self.limit {
                return Err(Error::ResourceLimit { what: "admissible functions", limit: self.limit });
            }
            out.push(path.clone());
            return Ok(());
        }
        let eps = self.analysis.eps();
        let i = self.rows[depth];
        for &j in &self.choices[depth] {
            let cell = self.analysis.restricted(i, j);
            let previous = running.get(&j).cloned();
            let next = match &previous {
                Some(acc) => acc.intersect_eps(cell, eps),
                None => cell.clone(),
            };
            if next.is_empty() {
                continue;
            }
            running.insert(j, next);
            path.push(j);
            let r = self.descend(depth + 1, path, running, out);
            path.pop();
            match previous {
                Some(acc) => running.insert(j, acc),
                None => running.remove(&j),
            };
            r?;
        }
        Ok(())
    }
}

/// The box generated by `e`: the intersection of `S′_ij` over the rows
/// assigned to `j`, or `I_j` when no row is, with fixed variables as points.
pub fn solution_box(
    e: &AdmissibleFunction,
    analysis: &Analysis,
    state: &ReductionState,
) -> Result<FeasibleBox> {
    let eps = analysis.eps();
    let factors = (0..analysis.cols())
        .map(|j| {
            let factor = if let Some(&k) = state.fixed.get(&j) {
                IntervalUnion::singleton(k)
            } else {
                e.rows_of(j).iter().fold(analysis.column(j).clone(), |acc, &i| {
                    acc.intersect_eps(analysis.restricted(i, j), eps)
                })
            };
            if factor.is_empty() {
                Err(Error::Internal(format!("empty factor {j} in the box of {:?}", e.cols)))
            } else {
                Ok(factor)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeasibleBox { factors, e: e.clone(), fixed: state.fixed.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolveOptions {
    pub eps: f64,
    pub max_admissible: u64,
    pub simplify: bool,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { eps: EPS, max_admissible: DEFAULT_MAX_ADMISSIBLE, simplify: true }
    }
}

/// Outcome of the pipeline. `boxes` is empty exactly when `verdict` is not
/// [`Verdict::Ok`].
#[derive(Clone, Debug)]
pub struct Resolution {
    pub analysis: Analysis,
    pub state: ReductionState,
    pub verdict: Verdict,
    pub admissible: Vec<AdmissibleFunction>,
    pub boxes: Vec<FeasibleBox>,
}

impl Resolution {
    pub fn is_feasible(&self) -> bool {
        self.verdict.is_ok()
    }

    /// Membership in the union of the boxes.
    pub fn contains(&self, x: &[f64]) -> bool {
        let eps = self.analysis.eps();
        self.boxes.iter().any(|b| b.contains(x, eps))
    }
}

/// Runs analysis, the necessary checks, simplification, enumeration and box
/// assembly. Infeasibility is reported through the verdict, not as an error.
pub fn feasible_region(sys: &BipolarSystem, opts: ResolveOptions) -> Result<Resolution> {
    let analysis = Analysis::with_eps(sys, opts.eps);
    let initial = ReductionState::initial(analysis.rows(), analysis.cols());
    let infeasible = |analysis: Analysis, state, verdict| Resolution {
        analysis,
        state,
        verdict,
        admissible: Vec::new(),
        boxes: Vec::new(),
    };

    let verdict = analysis.necessary_feasibility();
    if !verdict.is_ok() {
        return Ok(infeasible(analysis, initial, verdict));
    }
    let state = if opts.simplify { simplify_to_fixpoint(&analysis) } else { initial };
    if let Some(i) = state.empty_active_row(&analysis) {
        return Ok(infeasible(analysis, state, Verdict::EmptyRow(i)));
    }
    let admissible = enumerate_admissible(&analysis, &state, opts.max_admissible)?;
    if admissible.is_empty() {
        return Ok(infeasible(analysis, state, Verdict::NoAdmissibleFunction));
    }
    let boxes = admissible
        .iter()
        .map(|e| solution_box(e, &analysis, &state))
        .collect::<Result<Vec<_>>>()?;
    Ok(Resolution { analysis, state, verdict: Verdict::Ok, admissible, boxes })
}
