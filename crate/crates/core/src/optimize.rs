//! Minimizing coordinate-monotone objectives over the feasible region.
//!
//! On a box the minimum of an objective that is non-decreasing in the
//! coordinates `𝒥⁺` and non-increasing in `𝒥⁻` sits at the point taking the
//! smallest factor value on `𝒥⁺` and the largest on `𝒥⁻`. The global minimum
//! is the best of these per-box candidates.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::max_eigenvalue;
use crate::error::{Error, Result};
use crate::resolution::{AdmissibleFunction, FeasibleBox};

pub type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// An objective with declared monotonicity directions.
#[derive(Clone)]
pub struct MonotoneObjective {
    name: String,
    n: usize,
    j_plus: BTreeSet<usize>,
    j_minus: BTreeSet<usize>,
    eval: Evaluator,
}

impl fmt::Debug for MonotoneObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneObjective")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("j_plus", &self.j_plus)
            .field("j_minus", &self.j_minus)
            .finish_non_exhaustive()
    }
}

impl MonotoneObjective {
    /// `j_plus` and `j_minus` must partition `0..n`.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        j_plus: BTreeSet<usize>,
        j_minus: BTreeSet<usize>,
        eval: Evaluator,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidParameter { kind: name.clone(), reason };
        if let Some(j) = j_plus.iter().chain(&j_minus).find(|&&j| j >= n) {
            return Err(invalid(format!("direction index {j} out of range for n = {n}")));
        }
        if let Some(j) = j_plus.intersection(&j_minus).next() {
            return Err(invalid(format!("column {j} declared both non-decreasing and non-increasing")));
        }
        if j_plus.len() + j_minus.len() != n {
            return Err(invalid("every column needs a monotonicity direction".into()));
        }
        Ok(MonotoneObjective { name, n, j_plus, j_minus, eval })
    }

    /// Same evaluator, different declared directions.
    pub fn with_directions(self, j_plus: BTreeSet<usize>, j_minus: BTreeSet<usize>) -> Result<Self> {
        MonotoneObjective::new(self.name, self.n, j_plus, j_minus, self.eval)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn j_plus(&self) -> &BTreeSet<usize> {
        &self.j_plus
    }

    pub fn j_minus(&self) -> &BTreeSet<usize> {
        &self.j_minus
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }
}

/// Parameters accepted by [`objective_catalog`]. Each objective reads only
/// the fields it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
}

/// Names understood by [`objective_catalog`].
pub const CATALOG: [&str; 11] = [
    "linear",
    "support_simplex",
    "perspective",
    "max",
    "geometric_mean",
    "log_sum_exp",
    "p_norm",
    "frobenius",
    "sum_largest",
    "max_eigenvalue",
    "sum_log",
];

/// Builds a named objective on `n` variables.
///
/// | name | value | directions |
/// |---|---|---|
/// | `linear` | `Σ c_j x_j` | `𝒥⁺ = {c_j ≥ 0}` |
/// | `support_simplex` | `max{0, max_j x_j}` | all `𝒥⁺` |
/// | `perspective` | `Σ_{j<n} x_j^p / x_n^{p−1}` | last column `𝒥⁻` |
/// | `max` | `max_j x_j` | all `𝒥⁺` |
/// | `geometric_mean` | `(∏ x_j)^{1/n}` | all `𝒥⁺` |
/// | `log_sum_exp` | `ln Σ e^{x_j}` | all `𝒥⁺` |
/// | `p_norm` | `(Σ x_j^p)^{1/p}` | all `𝒥⁺` |
/// | `frobenius` | Frobenius norm of `x` read as 3×3 | all `𝒥⁺` |
/// | `sum_largest` | sum of the `r` largest entries | all `𝒥⁺` |
/// | `max_eigenvalue` | `λ_max [[x₅,x₀,x₁],[x₀,x₇,x₂],[x₁,x₂,x₈]]` | all `𝒥⁺` |
/// | `sum_log` | `Σ ln(α_j + x_j)` | all `𝒥⁺` |
///
/// The perspective is `+∞` when the last coordinate is 0 and `p > 1`.
pub fn objective_catalog(name: &str, params: &ObjectiveParams, n: usize) -> Result<MonotoneObjective> {
    let invalid = |reason: &str| Error::InvalidParameter { kind: name.to_string(), reason: reason.to_string() };
    if n == 0 {
        return Err(invalid("needs at least one variable"));
    }
    let all: BTreeSet<usize> = (0..n).collect();
    let increasing = |eval: Evaluator| MonotoneObjective::new(name, n, all.clone(), BTreeSet::new(), eval);
    let exponent = || {
        let p = params.p.ok_or_else(|| invalid("missing p"))?;
        if p.is_finite() && p >= 1.0 {
            Ok(p)
        } else {
            Err(invalid("requires p >= 1"))
        }
    };
    let nine = || if n == 9 { Ok(()) } else { Err(invalid("reads x as a 3x3 matrix, needs n = 9")) };

    match name {
        "linear" => {
            let c = params.c.clone().ok_or_else(|| invalid("missing c"))?;
            if c.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.len() });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(invalid("coefficients must be finite"));
            }
            let j_plus = (0..n).filter(|&j| c[j] >= 0.0).collect();
            let j_minus = (0..n).filter(|&j| c[j] < 0.0).collect();
            let eval: Evaluator = Arc::new(move |x| c.iter().zip(x).map(|(a, b)| a * b).sum());
            MonotoneObjective::new(name, n, j_plus, j_minus, eval)
        }
        "support_simplex" => increasing(Arc::new(|x| x.iter().copied().fold(0.0, f64::max))),
        "perspective" => {
            let p = exponent()?;
            if n < 2 {
                return Err(invalid("needs n >= 2"));
            }
            let eval: Evaluator = Arc::new(move |x| {
                let (last, head) = x.split_last().expect("n >= 2");
                let num: f64 = head.iter().map(|v| v.powf(p)).sum();
                if p == 1.0 {
                    num
                } else if *last == 0.0 {
                    f64::INFINITY
                } else {
                    num / last.powf(p - 1.0)
                }
            });
            MonotoneObjective::new(name, n, (0..n - 1).collect(), BTreeSet::from([n - 1]), eval)
        }
        "max" => increasing(Arc::new(|x| x.iter().copied().fold(f64::NEG_INFINITY, f64::max))),
        "geometric_mean" => {
            increasing(Arc::new(|x| x.iter().product::<f64>().powf(1.0 / x.len() as f64)))
        }
        "log_sum_exp" => increasing(Arc::new(|x| {
            let top = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            top + x.iter().map(|v| (v - top).exp()).sum::<f64>().ln()
        })),
        "p_norm" => {
            let p = exponent()?;
            increasing(Arc::new(move |x| x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)))
        }
        "frobenius" => {
            nine()?;
            increasing(Arc::new(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt()))
        }
        "sum_largest" => {
            let r = params.r.ok_or_else(|| invalid("missing r"))?;
            if r == 0 || r > n {
                return Err(invalid("requires 1 <= r <= n"));
            }
            increasing(Arc::new(move |x| {
                let mut v = x.to_vec();
                v.sort_by(|a, b| b.total_cmp(a));
                v[..r].iter().sum()
            }))
        }
        "max_eigenvalue" => {
            nine()?;
            increasing(Arc::new(|x| {
                let m = [[x[5], x[0], x[1]], [x[0], x[7], x[2]], [x[1], x[2], x[8]]];
                max_eigenvalue(m, 1e-12)
            }))
        }
        "sum_log" => {
            let alpha = params.alpha.clone().ok_or_else(|| invalid("missing alpha"))?;
            let alpha = match alpha.len() {
                1 => vec![alpha[0]; n],
                len if len == n => alpha,
                len => return Err(Error::DimensionMismatch { expected: n, found: len }),
            };
            if alpha.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
                return Err(invalid("requires every alpha > 0"));
            }
            increasing(Arc::new(move |x| alpha.iter().zip(x).map(|(a, v)| (a + v).ln()).sum()))
        }
        other => Err(Error::UnknownObjective(other.to_string())),
    }
}

/// The minimizer of an objective over one box, with its value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub e: AdmissibleFunction,
    pub point: Vec<f64>,
    pub value: f64,
}

/// Smallest factor value on `𝒥⁺` coordinates, largest on `𝒥⁻`.
pub fn local_candidate(bx: &FeasibleBox, obj: &MonotoneObjective) -> Result<Candidate> {
    if bx.factors.len() != obj.dim() {
        return Err(Error::DimensionMismatch { expected: obj.dim(), found: bx.factors.len() });
    }
    let point = bx
        .factors
        .iter()
        .enumerate()
        .map(|(j, f)| if obj.j_minus.contains(&j) { f.max_elem() } else { f.min_elem() })
        .collect::<Result<Vec<_>>>()?;
    let value = obj.evaluate(&point);
    Ok(Candidate { e: bx.e.clone(), point, value })
}

/// Best candidate over all boxes (ties go to the lexicographically smallest
/// assignment), together with every candidate in box order.
pub fn global_optimum(boxes: &[FeasibleBox], obj: &MonotoneObjective) -> Result<(Candidate, Vec<Candidate>)> {
    if boxes.is_empty() {
        return Err(Error::Infeasible);
    }
    let all = boxes
        .par_iter()
        .map(|b| local_candidate(b, obj))
        .collect::<Result<Vec<_>>>()?;
    let best = all
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then_with(|| a.e.cols.cmp(&b.e.cols)))
        .cloned()
        .expect("at least one box");
    Ok((best, all))
}

/// A sampled pair of points contradicting a declared direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotoneViolation {
    pub coord: usize,
    pub point: Vec<f64>,
    pub step: f64,
    pub before: f64,
    pub after: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub trials: usize,
    pub violations: Vec<MonotoneViolation>,
}

/// Probes the declared directions at random points with random positive
/// steps. Finding nothing is evidence, not proof.
pub fn check_monotone(obj: &MonotoneObjective, trials: usize, seed: u64) -> MonotoneReport {
    const SLACK: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..trials {
        let x: Vec<f64> = (0..obj.n).map(|_| rng.gen::<f64>()).collect();
        let j = rng.gen_range(0..obj.n);
        let step = rng.gen::<f64>() * (1.0 - x[j]);
        let mut y = x.clone();
        y[j] += step;
        let (before, after) = (obj.evaluate(&x), obj.evaluate(&y));
        let broken = if obj.j_minus.contains(&j) {
            after > before + SLACK * before.abs().max(1.0)
        } else {
            after < before - SLACK * before.abs().max(1.0)
        };
        if broken {
            violations.push(MonotoneViolation { coord: j, point: x, step, before, after });
        }
    }
    MonotoneReport { trials, violations }
}
