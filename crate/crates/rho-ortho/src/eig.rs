//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! A complex pivot `a_pq = |a_pq|·e^{iφ}` is first rotated onto the real
//! axis by the phase `diag(1, e^{-iφ})` and then annihilated by the usual
//! real Givens rotation, so the same sweep handles both fields; real input
//! stays real throughout. Convergence is declared when the off-diagonal
//! Frobenius mass drops below `1e-14·‖M‖_F`; sweeps are capped at 60.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, C64};
use crate::tol::Tolerances;

const OFF_DIAGONAL_CUTOFF: f64 = 1e-14;
const MAX_SWEEPS: usize = 60;

/// Full spectrum of a hermitian matrix: eigenvalues descending, columns of
/// `eigenvectors` orthonormal and matched index-for-index.
#[derive(Debug, Clone, Serialize)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

pub fn hermitian_eig(m: &Matrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::InvalidMatrix("hermitian_eig needs a square matrix".into()));
    }
    let scale = m.norm_max();
    if m.hermitian_defect() > tol.tol_resid * scale.max(1e-300) && scale > 0.0 {
        return Err(Error::NotHermitian);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = Matrix::identity(n, m.field());

    let fro = m.norm_fro();
    if n > 1 && fro > 0.0 {
        let target = OFF_DIAGONAL_CUTOFF * fro;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_mass(&a) <= target {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_mass(&a) > target {
            return Err(Error::NoConvergence("jacobi eigenvalue sweep"));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(n);
    for &idx in &order {
        eigenvalues.push(diag[idx]);
        cols.push(normalize_phase(v.col(idx)));
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: Matrix::from_cols(&cols, m.field()),
    })
}

fn off_diagonal_mass(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating the (p, q) pivot of the
/// hermitian working matrix `a`, accumulated into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let abs_apq = apq.norm();
    if abs_apq == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let phase = apq / abs_apq; // e^{iφ}

    let tau = (aqq - app) / (2.0 * abs_apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.rows();
    // columns p, q of A: A <- A·U with U = P·G (P the phase, G the Givens)
    let ph = phase.conj(); // e^{-iφ}
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * ph * s);
        a.set(k, q, akp * s + akq * ph * c);
    }
    // rows p, q: A <- U*·A
    let phc = phase; // conj(e^{-iφ})
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * phc * s);
        a.set(q, k, apk * s + aqk * phc * c);
    }
    // exact zeros on the pivot pair, real diagonal
    let new_pp = c * c * app + s * s * aqq - 2.0 * c * s * abs_apq;
    let new_qq = s * s * app + c * c * aqq + 2.0 * c * s * abs_apq;
    a.set(p, p, C64::new(new_pp, 0.0));
    a.set(q, q, C64::new(new_qq, 0.0));
    a.set(p, q, C64::new(0.0, 0.0));
    a.set(q, p, C64::new(0.0, 0.0));

    for k in 0..v.rows() {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * ph * s);
        v.set(k, q, vkp * s + vkq * ph * c);
    }
}

/// Deterministic sign/phase normalization: the first coordinate that is not
/// negligibly small is rotated onto the positive real axis.
pub(crate) fn normalize_phase(mut v: Vec<C64>) -> Vec<C64> {
    let biggest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if biggest == 0.0 {
        return v;
    }
    let lead = v.iter().find(|z| z.norm() > 1e-12 * biggest);
    if let Some(&z) = lead {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
    v
}
