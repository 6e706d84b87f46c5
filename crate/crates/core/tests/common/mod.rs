//! Fixtures and reference checks shared by the integration tests.
#![allow(dead_code)]

use bipolar_fre::{Analysis, BipolarSystem, IntervalUnion, ReductionState, TNorm, TNormKind};
use rand::Rng;

/// The 7×9 worked example, Dubois-Prade with γ = 0.5.
pub fn worked_7x9() -> BipolarSystem {
    let a_plus = vec![
        vec![0.54, 0.48, 0.80, 0.63, 0.70, 0.35, 0.56, 0.29, 0.69],
        vec![0.20, 0.06, 0.01, 0.03, 0.00, 0.04, 0.50, 0.00, 0.09],
        vec![0.72, 0.23, 0.75, 0.44, 0.38, 0.61, 0.51, 0.80, 0.67],
        vec![0.83, 1.00, 0.30, 0.90, 0.89, 0.79, 0.62, 0.41, 0.86],
        vec![0.13, 0.10, 0.00, 0.15, 0.11, 0.04, 0.00, 0.07, 0.19],
        vec![0.28, 0.43, 0.35, 0.28, 0.40, 0.22, 0.18, 0.50, 0.00],
        vec![0.33, 0.60, 0.54, 0.58, 0.14, 0.80, 0.49, 0.26, 0.39],
    ];
    let a_minus = vec![
        vec![0.65, 0.51, 0.70, 0.26, 0.90, 0.46, 0.68, 0.16, 0.29],
        vec![0.10, 0.20, 0.00, 0.06, 0.03, 0.00, 0.05, 0.00, 0.00],
        vec![0.13, 0.63, 0.74, 0.25, 0.66, 0.73, 0.39, 0.80, 0.90],
        vec![0.81, 0.80, 0.92, 0.90, 0.78, 0.88, 0.95, 0.57, 0.18],
        vec![0.17, 0.25, 0.09, 0.18, 0.40, 0.00, 0.19, 0.08, 0.00],
        vec![0.00, 0.29, 0.33, 0.47, 0.27, 0.34, 0.15, 0.04, 0.50],
        vec![0.27, 0.40, 0.41, 0.04, 0.38, 0.80, 0.11, 0.23, 0.55],
    ];
    let b = vec![0.7, 0.1, 0.8, 0.9, 0.2, 0.5, 0.6];
    BipolarSystem::new(a_plus, a_minus, b, TNorm::dubois_prade(0.5).unwrap()).unwrap()
}

/// Parses the compact set notation used in the tables below:
/// `E` is empty, pieces are `[lo,hi]` or `{k}`, joined by `u`.
pub fn set(text: &str) -> IntervalUnion {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if text == "E" {
        return IntervalUnion::empty();
    }
    let pieces = text.split('u').map(|p| {
        let inner = &p[1..p.len() - 1];
        let nums: Vec<f64> = inner.split(',').map(|v| v.parse().unwrap()).collect();
        match (p.as_bytes()[0], nums.as_slice()) {
            (b'[', [lo, hi]) => (*lo, *hi),
            (b'{', [k]) => (*k, *k),
            _ => panic!("bad set literal {p}"),
        }
    });
    IntervalUnion::from_pieces(pieces)
}

pub fn grid(rows: &[[&str; 9]]) -> Vec<Vec<IntervalUnion>> {
    rows.iter().map(|r| r.iter().map(|s| set(s)).collect()).collect()
}

/// `I_ij` of the worked example.
pub const RELAXED_SETS: [[&str; 9]; 7] = [
    ["[0,1]", "[0,1]", "[0,0.7]", "[0,1]", "[0.3,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]"],
    ["[0,0.25]", "[0.75,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,0.1]", "[0,1]", "[0,1]"],
    ["[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0.2,1]"],
    ["[0,1]", "[0,0.9]", "[0.1,1]", "[0,1]", "[0,1]", "[0,1]", "[0.1,1]", "[0,1]", "[0,1]"],
    ["[0,1]", "[0.6,1]", "[0,1]", "[0,1]", "[0.75,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]"],
    ["[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]"],
    ["[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0,1]", "[0.4,0.6]", "[0,1]", "[0,1]", "[0,1]"],
];

/// `S_ij` of the worked example.
pub const SOLUTION_SETS: [[&str; 9]; 7] = [
    ["E", "E", "[0,0.3]u{0.7}", "E", "{0.3}u[0.7,1]", "E", "E", "E", "E"],
    ["[0,0.25]", "{0.75}", "E", "E", "E", "E", "{0.1}", "E", "E"],
    ["E", "E", "E", "E", "E", "E", "E", "[0,0.2]u[0.8,1]", "{0.2}"],
    ["E", "{0.9}", "{0.1}", "[0,0.1]u[0.9,1]", "E", "E", "{0.1}", "E", "E"],
    ["E", "{0.6}", "E", "E", "{0.75}", "E", "E", "E", "E"],
    ["E", "E", "E", "E", "E", "E", "E", "[0.5,1]", "[0,0.5]"],
    ["E", "[0.6,1]", "E", "E", "E", "{0.4}u{0.6}", "E", "E", "E"],
];

/// `I_j` of the worked example.
pub const COLUMN_SETS: [&str; 9] =
    ["[0,0.25]", "[0.75,0.9]", "[0.1,0.7]", "[0,1]", "[0.75,1]", "[0.4,0.6]", "{0.1}", "[0,1]", "[0.2,1]"];

/// `S′_ij` of the worked example.
pub const RESTRICTED_SETS: [[&str; 9]; 7] = [
    ["E", "E", "[0.1,0.3]u{0.7}", "E", "[0.75,1]", "E", "E", "E", "E"],
    ["[0,0.25]", "{0.75}", "E", "E", "E", "E", "{0.1}", "E", "E"],
    ["E", "E", "E", "E", "E", "E", "E", "[0,0.2]u[0.8,1]", "{0.2}"],
    ["E", "{0.9}", "{0.1}", "[0,0.1]u[0.9,1]", "E", "E", "{0.1}", "E", "E"],
    ["E", "E", "E", "E", "{0.75}", "E", "E", "E", "E"],
    ["E", "E", "E", "E", "E", "E", "E", "[0.5,1]", "[0.2,0.5]"],
    ["E", "[0.75,0.9]", "E", "E", "E", "{0.4}u{0.6}", "E", "E", "E"],
];

/// A random parameter inside the valid range of `kind`.
pub fn random_tnorm<R: Rng>(rng: &mut R, kind: TNormKind) -> TNorm {
    let param = match kind {
        TNormKind::Frank => {
            let s: f64 = 10f64.powf(rng.gen_range(-1.5..1.5));
            Some(if (s - 1.0).abs() < 1e-3 { 2.0 } else { s })
        }
        TNormKind::Yager => Some(rng.gen_range(0.3..5.0)),
        TNormKind::Hamacher => Some(rng.gen_range(0.0..5.0)),
        TNormKind::Dombi | TNormKind::AczelAlsina => Some(rng.gen_range(0.3..5.0)),
        TNormKind::SchweizerSklar => {
            let p: f64 = rng.gen_range(-3.0..3.0);
            Some(if p.abs() < 0.05 { 1.0 } else { p })
        }
        TNormKind::SugenoWeber => Some(rng.gen_range(-0.9..5.0)),
        TNormKind::DuboisPrade | TNormKind::MayorTorrence => {
            Some((rng.gen_range(0.0..=1.0_f64) * 100.0).round() / 100.0)
        }
        _ => None,
    };
    TNorm::new(kind, param).unwrap()
}

fn two_decimals<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0..=100) as f64 / 100.0
}

fn coefficients<R: Rng>(rng: &mut R, m: usize, n: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| (0..n).map(|_| if rng.gen_bool(0.2) { 0.0 } else { two_decimals(rng) }).collect())
        .collect()
}

/// A small system with two-decimal coefficients. With probability
/// `planted` each right-hand side is the row value at a hidden two-decimal
/// point; otherwise it is a random two-decimal value. Returns the hidden
/// point too, which is feasible when `planted == 1.0`.
pub fn random_system<R: Rng>(
    rng: &mut R,
    m: usize,
    n: usize,
    tnorm: TNorm,
    planted: f64,
) -> (BipolarSystem, Vec<f64>) {
    let a_plus = coefficients(rng, m, n);
    let a_minus = coefficients(rng, m, n);
    let hidden: Vec<f64> = (0..n).map(|_| two_decimals(rng)).collect();
    let probe = BipolarSystem::new(a_plus.clone(), a_minus.clone(), vec![0.0; m], tnorm).unwrap();
    let b = (0..m)
        .map(|i| {
            if rng.gen_bool(planted) {
                probe.row_value(&hidden, i).unwrap()
            } else {
                two_decimals(rng)
            }
        })
        .collect();
    (BipolarSystem::new(a_plus, a_minus, b, tnorm).unwrap(), hidden)
}

/// Membership in the reduced problem a reduction state describes, written
/// directly from its definition.
pub fn in_reduced_region(analysis: &Analysis, state: &ReductionState, x: &[f64]) -> bool {
    let eps = analysis.eps();
    let fixed_ok = state.fixed.iter().all(|(&j, &k)| (x[j] - k).abs() <= eps);
    let bounds_ok = state.active_cols.iter().all(|&j| analysis.column(j).contains_eps(x[j], eps));
    let rows_ok = state.active_rows.iter().all(|&i| {
        state
            .active_cols
            .iter()
            .any(|&j| analysis.restricted(i, j).contains_eps(x[j], eps))
    });
    fixed_ok && bounds_ok && rows_ok
}

/// Every corner of a box: all combinations of piece endpoints, at most
/// `cap` of them (taken in mixed-radix order).
pub fn box_vertices(factors: &[IntervalUnion], cap: usize) -> Vec<Vec<f64>> {
    let choices: Vec<Vec<f64>> = factors.iter().map(IntervalUnion::endpoints).collect();
    let total = choices.iter().fold(1usize, |acc, c| acc.saturating_mul(c.len()));
    (0..total.min(cap))
        .map(|mut k| {
            let mut x = vec![0.0; choices.len()];
            for (j, c) in choices.iter().enumerate().rev() {
                x[j] = c[k % c.len()];
                k /= c.len();
            }
            x
        })
        .collect()
}

/// Largest root of the characteristic polynomial of a symmetric 3×3 matrix,
/// by the trigonometric formula.
pub fn cubic_max_eigenvalue(a: [[f64; 3]; 3]) -> f64 {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 == 0.0 {
        return a[0][0].max(a[1][1]).max(a[2][2]);
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut bm = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            bm[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = bm[0][0] * (bm[1][1] * bm[2][2] - bm[1][2] * bm[2][1])
        - bm[0][1] * (bm[1][0] * bm[2][2] - bm[1][2] * bm[2][0])
        + bm[0][2] * (bm[1][0] * bm[2][1] - bm[1][1] * bm[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * phi.cos()
}
