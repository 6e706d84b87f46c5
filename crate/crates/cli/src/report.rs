//! Runs the pipeline for each subcommand and shapes the JSON reports.

use std::collections::{BTreeMap, BTreeSet};

use bipolar_fre::oracle::{self, GridMinimum, GridOptions, MembershipReport};
use bipolar_fre::resolution::{count_bound, DEFAULT_MAX_ADMISSIBLE};
use bipolar_fre::{
    feasible_region, global_optimum, Analysis, Candidate, FeasibleBox, IntervalUnion, ReductionState,
    ReductionStep, Resolution, ResolveOptions, TNorm, Verdict, EPS,
};
use serde::Serialize;

use crate::problem::{Problem, TNormSpec};
use crate::CliError;

/// How a command finished; maps onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Infeasible,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Infeasible => 2,
        }
    }
}

/// A finished command: the rendered report and its status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: String,
    pub status: Status,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, feasible: bool) -> Self {
        Outcome {
            report: render(report),
            status: if feasible { Status::Success } else { Status::Infeasible },
        }
    }
}

fn render<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports always serialize");
    text.push('\n');
    text
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineOptions {
    pub tol: f64,
    pub max_e: u64,
    pub simplify: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { tol: EPS, max_e: DEFAULT_MAX_ADMISSIBLE, simplify: true }
    }
}

impl PipelineOptions {
    fn resolve(&self) -> Result<ResolveOptions, CliError> {
        if !(self.tol.is_finite() && self.tol >= 0.0 && self.tol < 0.5) {
            return Err(CliError::Usage(format!("--tol must lie in [0, 0.5), got {}", self.tol)));
        }
        Ok(ResolveOptions { eps: self.tol, max_admissible: self.max_e, simplify: self.simplify })
    }
}

#[derive(Serialize)]
struct Reduction<'a> {
    active_rows: &'a BTreeSet<usize>,
    active_cols: &'a BTreeSet<usize>,
    fixed: &'a BTreeMap<usize, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    log: Option<&'a [ReductionStep]>,
}

impl<'a> Reduction<'a> {
    fn of(state: &'a ReductionState, with_log: bool) -> Self {
        Reduction {
            active_rows: &state.active_rows,
            active_cols: &state.active_cols,
            fixed: &state.fixed,
            log: with_log.then_some(state.log.as_slice()),
        }
    }
}

#[derive(Serialize)]
struct Region<'a> {
    #[serde(flatten)]
    verdict: Verdict,
    m: usize,
    n: usize,
    tnorm: TNormSpec,
    simplified: bool,
    column_bounds: Vec<&'a IntervalUnion>,
    reduction: Reduction<'a>,
    count_bound: u64,
    box_count: usize,
    boxes: &'a [FeasibleBox],
}

fn region(res: &Resolution, simplified: bool) -> Region<'_> {
    let an = &res.analysis;
    let tnorm = an.system().tnorm();
    Region {
        verdict: res.verdict,
        m: an.rows(),
        n: an.cols(),
        tnorm: TNormSpec { name: tnorm.kind().name().to_string(), param: tnorm.param() },
        simplified,
        column_bounds: (0..an.cols()).map(|j| an.column(j)).collect(),
        reduction: Reduction::of(&res.state, false),
        count_bound: if res.is_feasible() { count_bound(an, &res.state) } else { 0 },
        box_count: res.boxes.len(),
        boxes: &res.boxes,
    }
}

/// `feasible`: the region as boxes, or the verdict explaining why it is empty.
pub fn feasible(problem: &Problem, opts: PipelineOptions) -> Result<Outcome, CliError> {
    let res = feasible_region(&problem.system, opts.resolve()?)?;
    Ok(Outcome::new(&region(&res, opts.simplify), res.is_feasible()))
}

#[derive(Serialize)]
struct SimplifyReport<'a> {
    #[serde(flatten)]
    verdict: Verdict,
    #[serde(flatten)]
    reduction: Reduction<'a>,
    count_bound: u64,
}

/// `simplify`: the reduced problem, with the rule log when `explain` is set.
/// Enumeration is not run, so only the necessary conditions and empty rows
/// can make the verdict negative.
pub fn simplify(problem: &Problem, opts: PipelineOptions, explain: bool) -> Result<Outcome, CliError> {
    let eps = opts.resolve()?.eps;
    let analysis = Analysis::with_eps(&problem.system, eps);
    let mut verdict = analysis.necessary_feasibility();
    let state = if verdict.is_ok() {
        bipolar_fre::simplify_to_fixpoint(&analysis)
    } else {
        ReductionState::initial(analysis.rows(), analysis.cols())
    };
    if let (true, Some(i)) = (verdict.is_ok(), state.empty_active_row(&analysis)) {
        verdict = Verdict::EmptyRow(i);
    }
    let report = SimplifyReport {
        verdict,
        reduction: Reduction::of(&state, explain),
        count_bound: if verdict.is_ok() { count_bound(&analysis, &state) } else { 0 },
    };
    Ok(Outcome::new(&report, verdict.is_ok()))
}

#[derive(Serialize)]
struct ObjectiveInfo<'a> {
    name: &'a str,
    j_plus: &'a BTreeSet<usize>,
    j_minus: &'a BTreeSet<usize>,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    #[serde(flatten)]
    region: Region<'a>,
    objective: ObjectiveInfo<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best: Option<Candidate>,
    candidates: Vec<Candidate>,
}

fn objective_of(problem: &Problem) -> Result<&bipolar_fre::MonotoneObjective, CliError> {
    problem
        .objective
        .as_ref()
        .ok_or_else(|| CliError::Usage("the problem file has no `objective`".into()))
}

/// `solve`: the region plus every box candidate and the global minimizer.
pub fn solve(problem: &Problem, opts: PipelineOptions) -> Result<Outcome, CliError> {
    let obj = objective_of(problem)?;
    let res = feasible_region(&problem.system, opts.resolve()?)?;
    let (best, candidates) = if res.is_feasible() {
        let (best, all) = global_optimum(&res.boxes, obj)?;
        (Some(best), all)
    } else {
        (None, Vec::new())
    };
    let report = SolveReport {
        region: region(&res, opts.simplify),
        objective: ObjectiveInfo { name: obj.name(), j_plus: obj.j_plus(), j_minus: obj.j_minus() },
        best,
        candidates,
    };
    Ok(Outcome::new(&report, res.is_feasible()))
}

#[derive(Serialize)]
struct Optimum {
    solver_value: Option<f64>,
    grid: Option<GridMinimum>,
    /// `grid value − solver value`; never negative when both agree.
    gap: Option<f64>,
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(flatten)]
    verdict: Verdict,
    step: f64,
    seed: u64,
    box_count: usize,
    membership: MembershipReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimum: Option<Optimum>,
    consistent: bool,
}

/// `verify`: checks the computed region (and optimum, if an objective is
/// given) against brute force over the breakpoint grid. A disagreement is
/// reported as an error after the report is built.
pub fn verify(problem: &Problem, opts: PipelineOptions, step: f64, seed: u64) -> Result<(Outcome, bool), CliError> {
    let res = feasible_region(&problem.system, opts.resolve()?)?;
    let grid = oracle::breakpoint_grid(&res.analysis, step)?;
    let grid_opts = GridOptions { seed, ..GridOptions::default() };
    let membership = oracle::grid_membership_check(&res.analysis, &res.boxes, &grid, grid_opts)?;
    let mut consistent = membership.mismatch_count == 0;

    let optimum = match &problem.objective {
        None => None,
        Some(obj) => {
            let solver_value = if res.is_feasible() { Some(global_optimum(&res.boxes, obj)?.0.value) } else { None };
            let grid_min = oracle::brute_force_min(&res.analysis, obj, &grid, grid_opts)?;
            let gap = solver_value.zip(grid_min.as_ref()).map(|(s, g)| g.value - s);
            // The solver minimizes over the whole region, so it can only be
            // at least as good as any grid point.
            let tol = 1e-9 * (1.0 + solver_value.unwrap_or(0.0).abs());
            consistent &= gap.is_none_or(|g| g >= -tol);
            consistent &= solver_value.is_some() || grid_min.is_none();
            Some(Optimum { solver_value, grid: grid_min, gap })
        }
    };

    let report = VerifyReport {
        verdict: res.verdict,
        step,
        seed,
        box_count: res.boxes.len(),
        membership,
        optimum,
        consistent,
    };
    Ok((Outcome::new(&report, res.is_feasible()), consistent))
}

#[derive(Serialize)]
struct TNormEvalReport {
    tnorm: TNormSpec,
    x: f64,
    y: f64,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    solve: Option<ScalarReport>,
}

/// Solution of `φ(a, x) = b` with `a = x`, `b = y` of the query.
#[derive(Serialize)]
struct ScalarReport {
    solution_set: IntervalUnion,
    relaxed_set: IntervalUnion,
    l: Option<f64>,
    u: Option<f64>,
}

/// `tnorm-eval`: `φ(x, y)`, and optionally the scalar equation `φ(x, t) = y`.
pub fn tnorm_eval(name: &str, param: Option<f64>, x: f64, y: f64, with_solve: bool) -> Result<Outcome, CliError> {
    let t = TNorm::from_name(name, param)?;
    let value = t.eval(x, y)?;
    let solve = if with_solve {
        let s = t.solve(x, y)?;
        Some(ScalarReport { solution_set: s.solution_set, relaxed_set: s.relaxed_set, l: s.l, u: s.u })
    } else {
        None
    };
    let report = TNormEvalReport {
        tnorm: TNormSpec { name: t.kind().name().to_string(), param: t.param() },
        x,
        y,
        value,
        solve,
    };
    Ok(Outcome::new(&report, true))
}
