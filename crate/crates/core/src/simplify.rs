//! Region-preserving reductions: deleting redundant rows and fixing
//! variables whose value is forced.
//!
//! The rules act on index sets over the original [`Analysis`]; nothing is
//! recomputed from a reduced matrix. The reduced problem described by a
//! [`ReductionState`] is
//!
//! ```text
//! x_j = fixed[j]                     for fixed j
//! x_j ∈ I_j                          for active j
//! ∃ active j with x_j ∈ S′_ij        for every active row i
//! ```
//!
//! and every rule keeps this set equal to the original feasible region.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::system::Analysis;

/// The five reduction rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// A row with `b_i = 0` is always satisfied.
    ZeroRhs,
    /// A column whose bound `I_j` is a single point is fixed.
    SingletonColumn,
    /// A row implied by another row is dropped.
    DominatedRow,
    /// A row with one usable column holding one point forces that point.
    ForcedCell,
    /// A row satisfied by the whole column bound of some column is dropped.
    CoveringCell,
}

impl Rule {
    pub fn number(self) -> u8 {
        match self {
            Rule::ZeroRhs => 1,
            Rule::SingletonColumn => 2,
            Rule::DominatedRow => 3,
            Rule::ForcedCell => 4,
            Rule::CoveringCell => 5,
        }
    }
}

/// One logged rule firing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionStep {
    pub rule: Rule,
    /// Rows removed by this firing, ascending.
    pub rows_deleted: Vec<usize>,
    /// Column removed (and fixed) by this firing.
    pub column: Option<usize>,
    pub fixed_value: Option<f64>,
    /// The row whose sets justify the firing (dominating row for
    /// [`Rule::DominatedRow`], forcing row for [`Rule::ForcedCell`]).
    pub witness_row: Option<usize>,
    /// The column whose sets justify a [`Rule::CoveringCell`] deletion.
    pub witness_col: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionState {
    pub active_rows: BTreeSet<usize>,
    pub active_cols: BTreeSet<usize>,
    pub fixed: BTreeMap<usize, f64>,
    pub log: Vec<ReductionStep>,
}

impl ReductionState {
    /// Nothing deleted, nothing fixed.
    pub fn initial(m: usize, n: usize) -> Self {
        ReductionState {
            active_rows: (0..m).collect(),
            active_cols: (0..n).collect(),
            fixed: BTreeMap::new(),
            log: Vec::new(),
        }
    }

    /// Rebuilds the state a log produces, starting from the unreduced problem.
    pub fn replay(m: usize, n: usize, log: &[ReductionStep]) -> Self {
        let mut state = ReductionState::initial(m, n);
        for step in log {
            state.record(step.clone());
        }
        state
    }

    fn record(&mut self, step: ReductionStep) {
        for i in &step.rows_deleted {
            self.active_rows.remove(i);
        }
        if let (Some(j), Some(k)) = (step.column, step.fixed_value) {
            self.active_cols.remove(&j);
            self.fixed.insert(j, k);
        }
        self.log.push(step);
    }

    /// `𝒥_i` restricted to the active columns.
    pub fn active_cols_of_row(&self, analysis: &Analysis, i: usize) -> Vec<usize> {
        analysis
            .cols_of_row(i)
            .iter()
            .copied()
            .filter(|j| self.active_cols.contains(j))
            .collect()
    }

    /// First active row left without a usable column, if any.
    pub fn empty_active_row(&self, analysis: &Analysis) -> Option<usize> {
        self.active_rows
            .iter()
            .copied()
            .find(|&i| self.active_cols_of_row(analysis, i).is_empty())
    }

    /// Fixes column `j` to `k` and drops every active row whose `S′_ij`
    /// contains `k`.
    fn fix_column(
        &mut self,
        analysis: &Analysis,
        rule: Rule,
        j: usize,
        k: f64,
        witness_row: Option<usize>,
    ) {
        let eps = analysis.eps();
        let rows_deleted = self
            .active_rows
            .iter()
            .copied()
            .filter(|&i| analysis.restricted(i, j).contains_eps(k, eps))
            .collect();
        self.record(ReductionStep {
            rule,
            rows_deleted,
            column: Some(j),
            fixed_value: Some(k),
            witness_row,
            witness_col: None,
        });
    }

    fn delete_row(&mut self, rule: Rule, i: usize, witness_row: Option<usize>, witness_col: Option<usize>) {
        self.record(ReductionStep {
            rule,
            rows_deleted: vec![i],
            column: None,
            fixed_value: None,
            witness_row,
            witness_col,
        });
    }
}

/// Deletes every active row with `b_i = 0`.
pub fn apply_rule1(state: &mut ReductionState, analysis: &Analysis) -> bool {
    let b = analysis.system().b();
    let zero_rows: Vec<usize> = state.active_rows.iter().copied().filter(|&i| b[i] == 0.0).collect();
    for &i in &zero_rows {
        state.delete_row(Rule::ZeroRhs, i, None, None);
    }
    !zero_rows.is_empty()
}

/// Fixes every active column whose `I_j` is a singleton `{k}`, deleting the
/// rows with `k ∈ S′_ij`.
pub fn apply_rule2(state: &mut ReductionState, analysis: &Analysis) -> bool {
    let eps = analysis.eps();
    let cols: Vec<usize> = state.active_cols.iter().copied().collect();
    let mut changed = false;
    for j in cols {
        if let Some(k) = analysis.column(j).as_singleton(eps) {
            state.fix_column(analysis, Rule::SingletonColumn, j, k, None);
            changed = true;
        }
    }
    changed
}

/// Deletes a row `i₀` when another active row `i` has `S′_ij ⊆ S′_i₀j` on
/// every active column. With containment both ways the larger index goes.
pub fn apply_rule3(state: &mut ReductionState, analysis: &Analysis) -> bool {
    let eps = analysis.eps();
    let cols: Vec<usize> = state.active_cols.iter().copied().collect();
    let contained = |i: usize, k: usize| {
        cols.iter()
            .all(|&j| analysis.restricted(i, j).is_subset_eps(analysis.restricted(k, j), eps))
    };
    let rows: Vec<usize> = state.active_rows.iter().copied().collect();
    let mut changed = false;
    for &target in &rows {
        let witness = state.active_rows.iter().copied().find(|&i| {
            i != target
                // A row with no usable column is unsatisfiable; it must not
                // be used to discard others.
                && !state.active_cols_of_row(analysis, i).is_empty()
                && contained(i, target)
                && !(target < i && contained(target, i))
        });
        if let Some(i) = witness {
            state.delete_row(Rule::DominatedRow, target, Some(i), None);
            changed = true;
        }
    }
    changed
}

/// For a row whose only usable active column `j₀` has `S′_i₀j₀ = {k}`:
/// fixes `x_j₀ = k` and deletes the column and every row with `k ∈ S′_ij₀`.
pub fn apply_rule4(state: &mut ReductionState, analysis: &Analysis) -> bool {
    let eps = analysis.eps();
    let rows: Vec<usize> = state.active_rows.iter().copied().collect();
    let mut changed = false;
    for i0 in rows {
        if !state.active_rows.contains(&i0) {
            continue;
        }
        if let [j0] = state.active_cols_of_row(analysis, i0)[..] {
            if let Some(k) = analysis.restricted(i0, j0).as_singleton(eps) {
                state.fix_column(analysis, Rule::ForcedCell, j0, k, Some(i0));
                changed = true;
            }
        }
    }
    changed
}

/// Deletes a row `i₀` when some active column has `S′_i₀j₀ = I_j₀ ≠ ∅`.
pub fn apply_rule5(state: &mut ReductionState, analysis: &Analysis) -> bool {
    let eps = analysis.eps();
    let rows: Vec<usize> = state.active_rows.iter().copied().collect();
    let mut changed = false;
    for i0 in rows {
        let covering = state.active_cols.iter().copied().find(|&j| {
            let col = analysis.column(j);
            !col.is_empty() && analysis.restricted(i0, j).approx_eq(col, eps)
        });
        if let Some(j0) = covering {
            state.delete_row(Rule::CoveringCell, i0, None, Some(j0));
            changed = true;
        }
    }
    changed
}

/// Cycles rules 1 → 5 until a whole cycle changes nothing. Stops early if a
/// row loses all its usable columns (the system is then infeasible).
pub fn simplify_to_fixpoint(analysis: &Analysis) -> ReductionState {
    let mut state = ReductionState::initial(analysis.rows(), analysis.cols());
    loop {
        let mut changed = false;
        for rule in [apply_rule1, apply_rule2, apply_rule3, apply_rule4, apply_rule5] {
            changed |= rule(&mut state, analysis);
            if state.empty_active_row(analysis).is_some() {
                return state;
            }
        }
        if !changed {
            return state;
        }
    }
}
