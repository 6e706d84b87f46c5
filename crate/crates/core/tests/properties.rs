mod common;

use std::collections::BTreeSet;

use bipolar_fre::eigen::max_eigenvalue;
use bipolar_fre::optimize::local_candidate;
use bipolar_fre::oracle::{breakpoint_grid, brute_force_min, grid_membership_check, GridOptions};
use bipolar_fre::resolution::{count_bound, enumerate_admissible};
use bipolar_fre::simplify::ReductionState;
use bipolar_fre::system::cell_sets;
use bipolar_fre::tnorm::BISECTION_TOL;
use bipolar_fre::{
    feasible_region, global_optimum, objective_catalog, simplify_to_fixpoint, BipolarSystem, IntervalUnion,
    ObjectiveParams, ResolveOptions, TNorm, TNormKind,
};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tnorm_strategy() -> impl Strategy<Value = TNorm> {
    (0..13usize, any::<u64>()).prop_map(|(k, seed)| {
        random_tnorm(&mut ChaCha8Rng::seed_from_u64(seed), TNormKind::ALL[k])
    })
}

/// A random small system (m, n ≤ 3), mostly with planted right-hand sides.
fn system_strategy(planted: f64) -> impl Strategy<Value = (BipolarSystem, Vec<f64>)> {
    (tnorm_strategy(), 1..=3usize, 1..=3usize, any::<u64>()).prop_map(move |(t, m, n, seed)| {
        random_system(&mut ChaCha8Rng::seed_from_u64(seed), m, n, t, planted)
    })
}

fn pieces_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..=1.0f64, 0.0..=0.4f64), 0..5)
        .prop_map(|v| v.into_iter().map(|(lo, w)| (lo, (lo + w).min(1.0))).collect())
}

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tnorm_axioms(t in tnorm_strategy(), x in unit(), y in unit(), z in unit(), s in 0.0..=1.0f64) {
        let f = |a: f64, b: f64| t.eval(a, b).unwrap();
        let x2 = x + (1.0 - x) * s;
        prop_assert!((f(x, y) - f(y, x)).abs() <= 1e-12);
        prop_assert!((f(x, f(y, z)) - f(f(x, y), z)).abs() <= 1e-12);
        prop_assert!(f(x, y) <= f(x2, y) + 1e-12);
        prop_assert_eq!(f(x, 1.0), x);
        prop_assert_eq!(f(x, 0.0), 0.0);
        prop_assert!((0.0..=1.0).contains(&f(x, y)));
    }

    #[test]
    fn scalar_solution_sets(t in tnorm_strategy(), a in unit(), b in unit(), x in unit()) {
        let sol = t.solve(a, b).unwrap();
        let value = t.eval(a, x).unwrap();
        if a < b {
            prop_assert!(sol.solution_set.is_empty());
            prop_assert_eq!(sol.relaxed_set, IntervalUnion::full());
        } else {
            let (l, u) = (sol.l.unwrap(), sol.u.unwrap());
            prop_assert!(l <= u);
            prop_assert!((t.eval(a, l).unwrap() - b).abs() <= 1e-9, "φ(a, l) = {}", t.eval(a, l).unwrap());
            prop_assert!((t.eval(a, u).unwrap() - b).abs() <= 1e-9, "φ(a, u) = {}", t.eval(a, u).unwrap());
            // Points clearly outside [l, u] do not solve the equation.
            if x < l - 1e-6 {
                prop_assert!(value < b + 1e-12);
            }
            if x > u + 1e-6 {
                prop_assert!(value > b - 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_matches_bisection(t in tnorm_strategy(), a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let closed = t.solve(a, b).unwrap();
        let numeric = t.solve_numeric(a, b, BISECTION_TOL).unwrap();
        match (closed.l.zip(closed.u), numeric.l.zip(numeric.u)) {
            (None, None) => {}
            (Some((l1, u1)), Some((l2, u2))) => {
                prop_assert!((l1 - l2).abs() <= 1e-8, "l: {} vs {}", l1, l2);
                prop_assert!((u1 - u2).abs() <= 1e-8, "u: {} vs {}", u1, u2);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn interval_canonical_form(p in pieces_strategy()) {
        let u = IntervalUnion::from_pieces(p.clone());
        for w in u.pieces().windows(2) {
            prop_assert!(w[0].hi + bipolar_fre::EPS < w[1].lo);
        }
        for piece in u.pieces() {
            prop_assert!(0.0 <= piece.lo && piece.lo <= piece.hi && piece.hi <= 1.0);
        }
        for (lo, hi) in p {
            prop_assert!(u.contains(lo) && u.contains(hi) && u.contains(0.5 * (lo + hi)));
        }
    }

    #[test]
    fn interval_set_algebra(p in pieces_strategy(), q in pieces_strategy(), x in unit()) {
        let (a, b) = (IntervalUnion::from_pieces(p), IntervalUnion::from_pieces(q));
        let (inside_a, inside_b) = (a.contains_eps(x, 0.0), b.contains_eps(x, 0.0));
        if inside_a && inside_b {
            prop_assert!(a.intersect(&b).contains(x));
        }
        if a.intersect(&b).contains_eps(x, 0.0) {
            prop_assert!(a.contains(x) && b.contains(x));
        }
        prop_assert_eq!(a.union_of(&b).contains_eps(x, 0.0), inside_a || inside_b);
        if !a.contains(x) {
            prop_assert!(a.complement().contains(x));
        }
        prop_assert!(a.intersect(&b).is_subset(&a));
        prop_assert!(a.is_subset(&a.union_of(&b)));
    }

    #[test]
    fn cell_sets_solve_the_cell(t in tnorm_strategy(), ap in unit(), am in unit(), b in unit()) {
        let sys = BipolarSystem::new(vec![vec![ap]], vec![vec![am]], vec![b], t).unwrap();
        let cell = cell_sets(&sys, 0, 0);
        let value = |x: f64| sys.row_value(&[x], 0).unwrap();
        for piece in cell.solution.pieces() {
            for x in [piece.lo, 0.5 * (piece.lo + piece.hi), piece.hi] {
                prop_assert!((value(x) - b).abs() <= 1e-9, "x = {}: {} vs {}", x, value(x), b);
            }
        }
        for piece in cell.relaxed.pieces() {
            for x in [piece.lo, 0.5 * (piece.lo + piece.hi), piece.hi] {
                prop_assert!(value(x) <= b + 1e-9);
            }
        }
        prop_assert!(cell.solution.is_subset(&cell.relaxed));
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            if value(x) == b {
                prop_assert!(cell.solution.contains(x), "{} solves but is outside {}", x, cell.solution);
            }
            if value(x) <= b {
                prop_assert!(cell.relaxed.contains(x));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn planted_point_satisfies_every_row((sys, hidden) in system_strategy(1.0)) {
        let an = sys.analyze();
        for i in 0..sys.rows() {
            prop_assert!(an.satisfies_equation(&hidden, i).unwrap());
            prop_assert!(sys.residual(&hidden, i).unwrap() <= 1e-12);
        }
        prop_assert!(an.is_feasible_point(&hidden).unwrap());
    }

    #[test]
    fn region_equals_pointwise_test((sys, _) in system_strategy(0.8)) {
        let res = feasible_region(&sys, ResolveOptions::default()).unwrap();
        let grid = breakpoint_grid(&res.analysis, 0.1).unwrap();
        let report = grid_membership_check(&res.analysis, &res.boxes, &grid, GridOptions::default()).unwrap();
        prop_assert_eq!(report.mismatch_count, 0, "{:?}", report.mismatches);
        prop_assert_eq!(res.is_feasible(), report.feasible_points > 0);
    }

    #[test]
    fn planted_points_are_covered((sys, hidden) in system_strategy(1.0)) {
        let res = feasible_region(&sys, ResolveOptions::default()).unwrap();
        prop_assert!(res.is_feasible(), "{:?}", res.verdict);
        prop_assert!(res.contains(&hidden));
    }

    #[test]
    fn simplification_preserves_region((sys, _) in system_strategy(0.8)) {
        let an = sys.analyze();
        let state = simplify_to_fixpoint(&an);
        let grid = breakpoint_grid(&an, 0.1).unwrap();
        let total: usize = grid.iter().map(Vec::len).product();
        for mut k in 0..total {
            let mut x = vec![0.0; grid.len()];
            for (j, g) in grid.iter().enumerate().rev() {
                x[j] = g[k % g.len()];
                k /= g.len();
            }
            prop_assert_eq!(an.is_feasible_point(&x).unwrap(), in_reduced_region(&an, &state, &x), "x = {:?}", x);
        }
        // Every step removes a row or a column.
        prop_assert!(state.log.len() <= sys.rows() + sys.cols());
        prop_assert_eq!(ReductionState::replay(sys.rows(), sys.cols(), &state.log), state.clone());
        prop_assert_eq!(simplify_to_fixpoint(&an), state);
    }

    #[test]
    fn simplified_and_plain_regions_agree((sys, _) in system_strategy(0.8)) {
        let simplified = feasible_region(&sys, ResolveOptions::default()).unwrap();
        let plain = feasible_region(&sys, ResolveOptions { simplify: false, ..Default::default() }).unwrap();
        prop_assert_eq!(simplified.is_feasible(), plain.is_feasible());
        let grid = breakpoint_grid(&plain.analysis, 0.1).unwrap();
        let total: usize = grid.iter().map(Vec::len).product();
        for mut k in 0..total {
            let mut x = vec![0.0; grid.len()];
            for (j, g) in grid.iter().enumerate().rev() {
                x[j] = g[k % g.len()];
                k /= g.len();
            }
            prop_assert_eq!(simplified.contains(&x), plain.contains(&x));
        }
    }

    #[test]
    fn enumeration_is_complete((sys, _) in system_strategy(0.8)) {
        let an = sys.analyze();
        prop_assume!(an.necessary_feasibility().is_ok());
        let state = ReductionState::initial(sys.rows(), sys.cols());
        let found = enumerate_admissible(&an, &state, u64::MAX).unwrap();
        let eps = an.eps();

        // Every assignment vector, filtered by the shared-column test.
        let choices: Vec<&[usize]> = (0..sys.rows()).map(|i| an.cols_of_row(i)).collect();
        let total = count_bound(&an, &state) as usize;
        let mut expected = Vec::new();
        for mut k in 0..total {
            let mut cols = vec![0; choices.len()];
            for (i, c) in choices.iter().enumerate().rev() {
                cols[i] = c[k % c.len()];
                k /= c.len();
            }
            let compatible = (0..sys.cols()).all(|j| {
                let rows: Vec<usize> = (0..cols.len()).filter(|&i| cols[i] == j).collect();
                let common = rows
                    .iter()
                    .fold(IntervalUnion::full(), |acc, &i| acc.intersect_eps(an.restricted(i, j), eps));
                rows.is_empty() || !common.is_empty()
            });
            if compatible {
                expected.push(cols);
            }
        }
        let got: Vec<Vec<usize>> = found.into_iter().map(|e| e.cols).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn box_vertices_are_feasible((sys, _) in system_strategy(1.0)) {
        let res = feasible_region(&sys, ResolveOptions::default()).unwrap();
        for bx in &res.boxes {
            for x in box_vertices(&bx.factors, 1 << 10) {
                prop_assert!(res.analysis.is_feasible_point(&x).unwrap(), "vertex {:?}", x);
            }
        }
    }

    #[test]
    fn candidates_are_box_optima((sys, _) in system_strategy(1.0), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = sys.cols();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let obj = objective_catalog("linear", &ObjectiveParams { c: Some(c), ..Default::default() }, n).unwrap();
        let res = feasible_region(&sys, ResolveOptions::default()).unwrap();
        let (best, all) = global_optimum(&res.boxes, &obj).unwrap();
        for (bx, cand) in res.boxes.iter().zip(&all) {
            prop_assert!(res.analysis.is_feasible_point(&cand.point).unwrap());
            for j in 0..n {
                let want = if obj.j_minus().contains(&j) { bx.factors[j].max_elem() } else { bx.factors[j].min_elem() };
                prop_assert_eq!(cand.point[j], want.unwrap());
            }
            prop_assert_eq!(&local_candidate(bx, &obj).unwrap(), cand);
            for _ in 0..1000 {
                let x: Vec<f64> = bx.factors.iter().map(|f| {
                    let p = f.pieces()[rng.gen_range(0..f.pieces().len())];
                    p.lo + (p.hi - p.lo) * rng.gen::<f64>()
                }).collect();
                prop_assert!(cand.value <= obj.evaluate(&x) + 1e-9);
            }
            prop_assert!(best.value <= cand.value);
        }
        let grid = breakpoint_grid(&res.analysis, 0.05).unwrap();
        let brute = brute_force_min(&res.analysis, &obj, &grid, GridOptions::default()).unwrap().unwrap();
        prop_assert!((brute.value - best.value).abs() <= 1e-9, "{} vs {}", brute.value, best.value);
    }

    #[test]
    fn jacobi_matches_cubic(v in prop::collection::vec(-1.0..1.0f64, 6)) {
        let a = [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]];
        prop_assert!((max_eigenvalue(a, 1e-12) - cubic_max_eigenvalue(a)).abs() <= 1e-9);
    }
}

#[test]
fn catalog_declarations_survive_probing() {
    let p = ObjectiveParams { c: Some(vec![1.0; 9]), p: Some(3.0), r: Some(4), alpha: Some(vec![10.0]) };
    for name in bipolar_fre::optimize::CATALOG {
        let obj = objective_catalog(name, &p, 9).unwrap();
        let report = bipolar_fre::optimize::check_monotone(&obj, 2000, 11);
        assert!(report.violations.is_empty(), "{name}: {:?}", report.violations.first());
    }
    let declared: BTreeSet<usize> = objective_catalog("perspective", &p, 9).unwrap().j_minus().clone();
    assert_eq!(declared, BTreeSet::from([8]));
}
