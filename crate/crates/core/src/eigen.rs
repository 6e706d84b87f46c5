//! Eigenvalues of small symmetric matrices by cyclic Jacobi rotation.
#![allow(clippy::needless_range_loop)]

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of the symmetric matrix `a` (only the upper triangle is
/// read), in ascending order. Sweeps until the off-diagonal norm drops
/// below `tol`.
pub fn symmetric_eigenvalues<const N: usize>(a: [[f64; N]; N], tol: f64) -> [f64; N] {
    let mut m = a;
    for i in 0..N {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (i + 1..N).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum::<f64>()
            .sqrt();
        if off < tol {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                rotate(&mut m, p, q);
            }
        }
    }
    let mut out = [0.0; N];
    for (k, v) in out.iter_mut().enumerate() {
        *v = m[k][k];
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Annihilates `m[p][q]` with one Givens rotation `Jᵀ M J`.
fn rotate<const N: usize>(m: &mut [[f64; N]; N], p: usize, q: usize) {
    let apq = m[p][q];
    if apq == 0.0 {
        return;
    }
    let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..N {
        let (mkp, mkq) = (m[k][p], m[k][q]);
        m[k][p] = c * mkp - s * mkq;
        m[k][q] = s * mkp + c * mkq;
    }
    for k in 0..N {
        let (mpk, mqk) = (m[p][k], m[q][k]);
        m[p][k] = c * mpk - s * mqk;
        m[q][k] = s * mpk + c * mqk;
    }
    m[p][q] = 0.0;
    m[q][p] = 0.0;
}

/// Largest eigenvalue of a symmetric matrix.
pub fn max_eigenvalue<const N: usize>(a: [[f64; N]; N], tol: f64) -> f64 {
    symmetric_eigenvalues(a, tol)[N - 1]
}
