//! Brute-force checks over finite grids.
//!
//! The only code shared with the resolution pipeline is the pointwise test
//! [`Analysis::is_feasible_point`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::MonotoneObjective;
use crate::resolution::FeasibleBox;
use crate::system::Analysis;

/// Default cap on the number of grid points visited.
pub const DEFAULT_GRID_CAP: u64 = 2_000_000;

/// Mismatches kept verbatim in a report; the rest are only counted.
const MISMATCH_KEEP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridOptions {
    /// Beyond this many points the grid is sampled instead of swept.
    pub cap: u64,
    pub seed: u64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { cap: DEFAULT_GRID_CAP, seed: 0 }
    }
}

/// Per-column values: every endpoint of `I_ij`, `S_ij`, `S′_ij` and `I_j`,
/// plus the multiples of `step` in `[0, 1]`. Sorted and deduplicated.
pub fn breakpoint_grid(analysis: &Analysis, step: f64) -> Result<Vec<Vec<f64>>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameter {
            kind: "grid".into(),
            reason: format!("step must lie in (0, 1], got {step}"),
        });
    }
    let multiples = step_multiples(step);
    Ok((0..analysis.cols())
        .map(|j| {
            let mut v = multiples.clone();
            v.extend(analysis.column(j).endpoints());
            for i in 0..analysis.rows() {
                v.extend(analysis.relaxed(i, j).endpoints());
                v.extend(analysis.solution(i, j).endpoints());
                v.extend(analysis.restricted(i, j).endpoints());
            }
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect())
}

fn step_multiples(step: f64) -> Vec<f64> {
    let inv = 1.0 / step;
    let count = inv.round();
    if (count * step - 1.0).abs() < 1e-9 {
        // Divide instead of multiply so that 0.05 · 3 comes out as 0.15.
        let count = count as usize;
        (0..=count).map(|k| k as f64 / count as f64).collect()
    } else {
        let count = (inv + 1e-9).floor() as usize;
        (0..=count).map(|k| (k as f64 * step).min(1.0)).collect()
    }
}

/// Enumerates grid points by index, or draws seeded random grid points once
/// the full product exceeds the cap.
struct GridWalk<'a> {
    grid: &'a [Vec<f64>],
    total: u64,
    exhaustive: bool,
    seed: u64,
}

impl<'a> GridWalk<'a> {
    fn new(grid: &'a [Vec<f64>], opts: GridOptions) -> Result<Self> {
        if grid.iter().any(Vec::is_empty) {
            return Err(Error::EmptySet);
        }
        let full = grid.iter().fold(1u64, |acc, g| acc.saturating_mul(g.len() as u64));
        let exhaustive = full <= opts.cap;
        Ok(GridWalk { grid, total: full.min(opts.cap), exhaustive, seed: opts.seed })
    }

    fn point(&self, k: u64) -> Vec<f64> {
        if self.exhaustive {
            let mut rest = k;
            let mut x = vec![0.0; self.grid.len()];
            for (j, g) in self.grid.iter().enumerate().rev() {
                let len = g.len() as u64;
                x[j] = g[(rest % len) as usize];
                rest /= len;
            }
            x
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(k);
            self.grid.iter().map(|g| g[rng.gen_range(0..g.len())]).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub point: Vec<f64>,
    pub pointwise: bool,
    pub in_boxes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub points_checked: u64,
    pub exhaustive: bool,
    pub feasible_points: u64,
    pub mismatch_count: u64,
    /// The first mismatches in grid order.
    pub mismatches: Vec<Mismatch>,
}

/// Compares the pointwise feasibility test with membership in the union of
/// `boxes` at every grid point.
pub fn grid_membership_check(
    analysis: &Analysis,
    boxes: &[FeasibleBox],
    grid: &[Vec<f64>],
    opts: GridOptions,
) -> Result<MembershipReport> {
    if grid.len() != analysis.cols() {
        return Err(Error::DimensionMismatch { expected: analysis.cols(), found: grid.len() });
    }
    let walk = GridWalk::new(grid, opts)?;
    let eps = analysis.eps();
    let outcomes: Vec<(bool, Option<Mismatch>)> = (0..walk.total)
        .into_par_iter()
        .map(|k| {
            let x = walk.point(k);
            let pointwise = analysis.is_feasible_point(&x).expect("grid has n columns");
            let in_boxes = boxes.iter().any(|b| b.contains(&x, eps));
            let mismatch = (pointwise != in_boxes).then_some(Mismatch { point: x, pointwise, in_boxes });
            (pointwise, mismatch)
        })
        .collect();
    let feasible_points = outcomes.iter().filter(|(f, _)| *f).count() as u64;
    let all: Vec<Mismatch> = outcomes.into_iter().filter_map(|(_, m)| m).collect();
    Ok(MembershipReport {
        points_checked: walk.total,
        exhaustive: walk.exhaustive,
        feasible_points,
        mismatch_count: all.len() as u64,
        mismatches: all.into_iter().take(MISMATCH_KEEP).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridMinimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub points_checked: u64,
    pub exhaustive: bool,
}

/// Minimum of the objective over the feasible grid points; `None` when no
/// grid point is feasible. Ties go to the earliest point in grid order.
pub fn brute_force_min(
    analysis: &Analysis,
    obj: &MonotoneObjective,
    grid: &[Vec<f64>],
    opts: GridOptions,
) -> Result<Option<GridMinimum>> {
    if grid.len() != analysis.cols() || obj.dim() != analysis.cols() {
        return Err(Error::DimensionMismatch { expected: analysis.cols(), found: grid.len().min(obj.dim()) });
    }
    let walk = GridWalk::new(grid, opts)?;
    let best = (0..walk.total)
        .into_par_iter()
        .filter_map(|k| {
            let x = walk.point(k);
            analysis
                .is_feasible_point(&x)
                .expect("grid has n columns")
                .then(|| (obj.evaluate(&x), k, x))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(best.map(|(value, _, point)| GridMinimum {
        point,
        value,
        points_checked: walk.total,
        exhaustive: walk.exhaustive,
    }))
}
