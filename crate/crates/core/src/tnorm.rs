//! Continuous t-norms and the scalar equation `φ(a, x) = b`.
//!
//! Every family here is continuous, so for fixed `a` the map `x ↦ φ(a, x)` is
//! continuous and non-decreasing on `[0, 1]`. When `a ≥ b` the solution set of
//! `φ(a, x) = b` is therefore a closed interval `[l, u]` and the relaxed set
//! `{x : φ(a, x) ≤ b}` is `[0, u]`; when `a < b` nothing solves it and every
//! `x` satisfies the relaxed inequality.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::interval::IntervalUnion;

/// Default bisection stopping width for [`TNorm::solve_numeric`].
pub const BISECTION_TOL: f64 = 1e-12;
/// Hard iteration cap for the bisection fallback.
pub const BISECTION_MAX_ITER: usize = 200;

/// The continuous t-norm families supported by the solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TNormKind {
    Minimum,
    Product,
    EinsteinProduct,
    Lukasiewicz,
    Frank,
    Yager,
    Hamacher,
    Dombi,
    SchweizerSklar,
    SugenoWeber,
    AczelAlsina,
    DuboisPrade,
    MayorTorrence,
}

impl TNormKind {
    pub const ALL: [TNormKind; 13] = [
        TNormKind::Minimum,
        TNormKind::Product,
        TNormKind::EinsteinProduct,
        TNormKind::Lukasiewicz,
        TNormKind::Frank,
        TNormKind::Yager,
        TNormKind::Hamacher,
        TNormKind::Dombi,
        TNormKind::SchweizerSklar,
        TNormKind::SugenoWeber,
        TNormKind::AczelAlsina,
        TNormKind::DuboisPrade,
        TNormKind::MayorTorrence,
    ];

    /// The lower_snake_case name used in problem files.
    pub fn name(self) -> &'static str {
        match self {
            TNormKind::Minimum => "minimum",
            TNormKind::Product => "product",
            TNormKind::EinsteinProduct => "einstein_product",
            TNormKind::Lukasiewicz => "lukasiewicz",
            TNormKind::Frank => "frank",
            TNormKind::Yager => "yager",
            TNormKind::Hamacher => "hamacher",
            TNormKind::Dombi => "dombi",
            TNormKind::SchweizerSklar => "schweizer_sklar",
            TNormKind::SugenoWeber => "sugeno_weber",
            TNormKind::AczelAlsina => "aczel_alsina",
            TNormKind::DuboisPrade => "dubois_prade",
            TNormKind::MayorTorrence => "mayor_torrence",
        }
    }

    pub fn takes_parameter(self) -> bool {
        !matches!(
            self,
            TNormKind::Minimum
                | TNormKind::Product
                | TNormKind::EinsteinProduct
                | TNormKind::Lukasiewicz
        )
    }

    fn check_parameter(self, p: f64) -> std::result::Result<(), &'static str> {
        if !p.is_finite() {
            return Err("parameter must be finite");
        }
        let ok = match self {
            TNormKind::Frank => p > 0.0 && p != 1.0,
            TNormKind::Yager | TNormKind::Dombi | TNormKind::AczelAlsina => p > 0.0,
            TNormKind::Hamacher => p >= 0.0,
            TNormKind::SchweizerSklar => p != 0.0,
            TNormKind::SugenoWeber => p > -1.0,
            TNormKind::DuboisPrade | TNormKind::MayorTorrence => (0.0..=1.0).contains(&p),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(match self {
                TNormKind::Frank => "requires s > 0 and s != 1",
                TNormKind::Yager => "requires p > 0",
                TNormKind::Dombi | TNormKind::AczelAlsina => "requires lambda > 0",
                TNormKind::Hamacher => "requires alpha >= 0",
                TNormKind::SchweizerSklar => "requires p != 0",
                TNormKind::SugenoWeber => "requires lambda > -1",
                TNormKind::DuboisPrade => "requires 0 <= gamma <= 1",
                _ => "requires 0 <= lambda <= 1",
            })
        }
    }
}

impl fmt::Display for TNormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TNormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TNormKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownTNorm(s.to_string()))
    }
}

/// A validated t-norm: a family plus its parameter, if the family has one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TNorm {
    kind: TNormKind,
    param: Option<f64>,
}

/// Solution of `φ(a, x) = b` for fixed scalars `a` and `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarEqSolution {
    /// `S = {x : φ(a, x) = b}`.
    pub solution_set: IntervalUnion,
    /// `I = {x : φ(a, x) ≤ b}`.
    pub relaxed_set: IntervalUnion,
    pub l: Option<f64>,
    pub u: Option<f64>,
}

impl ScalarEqSolution {
    fn unsolvable() -> Self {
        ScalarEqSolution {
            solution_set: IntervalUnion::empty(),
            relaxed_set: IntervalUnion::full(),
            l: None,
            u: None,
        }
    }

    fn bounded(l: f64, u: f64) -> Self {
        let u = u.clamp(0.0, 1.0);
        let l = l.clamp(0.0, u);
        ScalarEqSolution {
            solution_set: IntervalUnion::interval(l, u),
            relaxed_set: IntervalUnion::interval(0.0, u),
            l: Some(l),
            u: Some(u),
        }
    }
}

impl TNorm {
    pub fn new(kind: TNormKind, param: Option<f64>) -> Result<Self> {
        match (kind.takes_parameter(), param) {
            (false, None) => Ok(TNorm { kind, param: None }),
            (false, Some(_)) => Err(Error::InvalidParameter {
                kind: kind.name().into(),
                reason: "this t-norm takes no parameter".into(),
            }),
            (true, None) => Err(Error::InvalidParameter {
                kind: kind.name().into(),
                reason: "missing parameter".into(),
            }),
            (true, Some(p)) => {
                kind.check_parameter(p)
                    .map_err(|reason| Error::InvalidParameter {
                        kind: kind.name().into(),
                        reason: reason.into(),
                    })?;
                Ok(TNorm { kind, param: Some(p) })
            }
        }
    }

    /// Builds a t-norm from its problem-file name.
    pub fn from_name(name: &str, param: Option<f64>) -> Result<Self> {
        TNorm::new(name.parse()?, param)
    }

    pub fn minimum() -> Self {
        TNorm { kind: TNormKind::Minimum, param: None }
    }

    pub fn product() -> Self {
        TNorm { kind: TNormKind::Product, param: None }
    }

    pub fn lukasiewicz() -> Self {
        TNorm { kind: TNormKind::Lukasiewicz, param: None }
    }

    pub fn dubois_prade(gamma: f64) -> Result<Self> {
        TNorm::new(TNormKind::DuboisPrade, Some(gamma))
    }

    pub fn kind(&self) -> TNormKind {
        self.kind
    }

    pub fn param(&self) -> Option<f64> {
        self.param
    }

    /// A few parameterizations of every family, spanning the interesting
    /// regimes (nilpotent vs strict, parameter endpoints). Used by the
    /// property suites.
    pub fn catalog_samples() -> Vec<TNorm> {
        use TNormKind::*;
        let grid: &[(TNormKind, &[f64])] = &[
            (Frank, &[0.05, 0.5, 3.0, 50.0]),
            (Yager, &[0.7, 1.0, 2.0, 4.0]),
            (Hamacher, &[0.0, 0.5, 1.0, 3.0]),
            (Dombi, &[0.6, 1.0, 2.5]),
            (SchweizerSklar, &[-2.0, -0.5, 0.5, 2.0]),
            (SugenoWeber, &[-0.6, 0.0, 3.0]),
            (AczelAlsina, &[0.5, 1.0, 2.0]),
            (DuboisPrade, &[0.0, 0.3, 0.5, 1.0]),
            (MayorTorrence, &[0.0, 0.4, 1.0]),
        ];
        let mut out = vec![
            TNorm::minimum(),
            TNorm::product(),
            TNorm { kind: EinsteinProduct, param: None },
            TNorm::lukasiewicz(),
        ];
        for (kind, params) in grid {
            for &p in *params {
                out.push(TNorm::new(*kind, Some(p)).expect("catalog parameter in range"));
            }
        }
        out
    }

    /// Evaluates `φ(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_unit("x", x)?;
        check_unit("y", y)?;
        Ok(self.apply(x, y))
    }

    /// Evaluates `φ(x, y)` without range checks. Callers guarantee
    /// `x, y ∈ [0, 1]`.
    pub(crate) fn apply(&self, x: f64, y: f64) -> f64 {
        // Boundary laws hold exactly for every t-norm.
        if x == 0.0 || y == 0.0 {
            return 0.0;
        }
        if x == 1.0 {
            return y;
        }
        if y == 1.0 {
            return x;
        }
        let p = self.param.unwrap_or(0.0);
        let v = match self.kind {
            TNormKind::Minimum => x.min(y),
            TNormKind::Product => x * y,
            TNormKind::EinsteinProduct => x * y / (2.0 - (x + y - x * y)),
            TNormKind::Lukasiewicz => (x + y - 1.0).max(0.0),
            TNormKind::Frank => {
                let s = p;
                (1.0 + (s.powf(x) - 1.0) * (s.powf(y) - 1.0) / (s - 1.0)).ln() / s.ln()
            }
            TNormKind::Yager => {
                1.0 - ((1.0 - x).powf(p) + (1.0 - y).powf(p)).powf(1.0 / p)
            }
            TNormKind::Hamacher => x * y / (p + (1.0 - p) * (x + y - x * y)),
            TNormKind::Dombi => {
                let t = ((1.0 - x) / x).powf(p) + ((1.0 - y) / y).powf(p);
                1.0 / (1.0 + t.powf(1.0 / p))
            }
            TNormKind::SchweizerSklar => (x.powf(p) + y.powf(p) - 1.0).max(0.0).powf(1.0 / p),
            TNormKind::SugenoWeber => (x + y - 1.0 + p * x * y) / (1.0 + p),
            TNormKind::AczelAlsina => {
                (-((-x.ln()).powf(p) + (-y.ln()).powf(p)).powf(1.0 / p)).exp()
            }
            TNormKind::DuboisPrade => {
                // xy / max{x, y, γ}; the flat branches are returned exactly.
                if x >= y.max(p) {
                    y
                } else if y >= x.max(p) {
                    x
                } else {
                    x * y / p
                }
            }
            TNormKind::MayorTorrence => {
                if p > 0.0 && x <= p && y <= p {
                    (x + y - p).max(0.0)
                } else {
                    x.min(y)
                }
            }
        };
        v.clamp(0.0, 1.0)
    }

    /// Closed-form solution of `φ(a, x) = b`.
    pub fn solve(&self, a: f64, b: f64) -> Result<ScalarEqSolution> {
        check_unit("a", a)?;
        check_unit("b", b)?;
        Ok(self.solve_unchecked(a, b))
    }

    pub(crate) fn solve_unchecked(&self, a: f64, b: f64) -> ScalarEqSolution {
        if a < b {
            return ScalarEqSolution::unsolvable();
        }
        let l = if b == 0.0 { 0.0 } else { self.lower_root(a, b) };
        let u = if a == b { 1.0 } else { self.upper_root(a, b) };
        ScalarEqSolution::bounded(l, u)
    }

    /// `l` for `a ≥ b > 0`.
    fn lower_root(&self, a: f64, b: f64) -> f64 {
        let p = self.param.unwrap_or(0.0);
        match self.kind {
            TNormKind::DuboisPrade => {
                if a == b {
                    b.max(p)
                } else if a < p {
                    p * b / a
                } else {
                    b
                }
            }
            TNormKind::MayorTorrence => {
                if a == b {
                    if a <= p {
                        p
                    } else {
                        b
                    }
                } else if a <= p {
                    b + p - a
                } else {
                    b
                }
            }
            _ => self.shared_root(a, b),
        }
    }

    /// `u` for `a > b ≥ 0`.
    fn upper_root(&self, a: f64, b: f64) -> f64 {
        let p = self.param.unwrap_or(0.0);
        match self.kind {
            TNormKind::Dombi | TNormKind::AczelAlsina if b == 0.0 => 0.0,
            TNormKind::SchweizerSklar if b == 0.0 && p < 0.0 => 0.0,
            TNormKind::DuboisPrade => {
                if a < p {
                    p * b / a
                } else {
                    b
                }
            }
            TNormKind::MayorTorrence => {
                if a <= p {
                    b + p - a
                } else {
                    b
                }
            }
            _ => self.shared_root(a, b),
        }
    }

    /// Formula common to `l` and `u` for the families where both coincide.
    fn shared_root(&self, a: f64, b: f64) -> f64 {
        let p = self.param.unwrap_or(0.0);
        match self.kind {
            TNormKind::Minimum => b,
            TNormKind::Product => b / a,
            TNormKind::EinsteinProduct => (2.0 - a) * b / (a + b - a * b),
            TNormKind::Lukasiewicz => 1.0 + b - a,
            TNormKind::Frank => {
                let s = p;
                (1.0 + (s.powf(b) - 1.0) * (s - 1.0) / (s.powf(a) - 1.0)).ln() / s.ln()
            }
            TNormKind::Yager => 1.0 - ((1.0 - b).powf(p) - (1.0 - a).powf(p)).powf(1.0 / p),
            TNormKind::Hamacher => (p + (1.0 - p) * a) * b / (a - (1.0 - p) * (1.0 - a) * b),
            TNormKind::Dombi => {
                let t = ((1.0 - b) / b).powf(p) - ((1.0 - a) / a).powf(p);
                1.0 / (1.0 + t.max(0.0).powf(1.0 / p))
            }
            TNormKind::SchweizerSklar => (1.0 + b.powf(p) - a.powf(p)).powf(1.0 / p),
            TNormKind::SugenoWeber => ((1.0 + p) * b + 1.0 - a) / (1.0 + p * a),
            TNormKind::AczelAlsina => {
                let t = (-b.ln()).powf(p) - (-a.ln()).powf(p);
                (-t.max(0.0).powf(1.0 / p)).exp()
            }
            TNormKind::DuboisPrade | TNormKind::MayorTorrence => {
                unreachable!("piecewise families are solved by their own rows")
            }
        }
    }

    /// Solves `φ(a, x) = b` by bisection on the non-decreasing map
    /// `x ↦ φ(a, x)`. Requires `a ≥ b`; stops once the bracket is narrower
    /// than `tol` or after [`BISECTION_MAX_ITER`] halvings.
    pub fn solve_numeric(&self, a: f64, b: f64, tol: f64) -> Result<ScalarEqSolution> {
        check_unit("a", a)?;
        check_unit("b", b)?;
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidParameter {
                kind: "bisection".into(),
                reason: "tolerance must be positive".into(),
            });
        }
        if a < b {
            return Ok(ScalarEqSolution::unsolvable());
        }
        // l = inf {x : φ(a,x) ≥ b}, u = sup {x : φ(a,x) ≤ b}.
        let l = if b == 0.0 {
            0.0
        } else {
            bisect(tol, |x| self.apply(a, x) >= b).1
        };
        let u = if a == b {
            1.0
        } else {
            bisect(tol, |x| self.apply(a, x) > b).0
        };
        Ok(ScalarEqSolution::bounded(l, u))
    }
}

/// Brackets the switch point of a monotone predicate that is false at 0 and
/// true at 1. Returns `(lo, hi)` with `pred(lo) == false`, `pred(hi) == true`.
fn bisect(tol: f64, pred: impl Fn(f64) -> bool) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}({})", self.kind, p),
            None => write!(f, "{}", self.kind),
        }
    }
}
