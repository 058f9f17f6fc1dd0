//! Singular value decomposition, polar decomposition and isometry tests.
//!
//! The SVD reuses the hermitian eigensolver on `M*M`: right singular
//! vectors are its eigenvectors, `σᵢ = sqrt(λᵢ)`, and left vectors come
//! from `uᵢ = Mvᵢ/σᵢ`, completed by Gram-Schmidt against the standard
//! basis wherever `σᵢ` is negligible. Accuracy loses the usual squared
//! condition number, which is fine at the target sizes (n ≤ 64).

use serde::Serialize;

use crate::eig::{hermitian_eig, normalize_phase};
use crate::error::{Error, Result};
use crate::matrix::{dot, norm2, scale_vec, sub_vec, unit_vec, Matrix, C64};
use crate::tol::Tolerances;

/// `M = U·diag(σ)·V*` with descending `σ`; `right_vectors` is `V`,
/// `left_vectors` is `U`, both with orthonormal columns.
#[derive(Debug, Clone, Serialize)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub right_vectors: Matrix,
    pub left_vectors: Matrix,
}

impl Svd {
    /// Operator norm `σ₁` (0 for an empty or zero matrix).
    pub fn operator_norm(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

pub fn svd(m: &Matrix, tol: &Tolerances) -> Result<Svd> {
    if !m.all_finite() {
        return Err(Error::InvalidMatrix("svd input must be finite".into()));
    }
    if m.rows() < m.cols() {
        // work on the adjoint and swap factors: M* = U'ΣV'* gives M = V'ΣU'*
        let flipped = svd(&m.adjoint(), tol)?;
        return Ok(Svd {
            singular_values: flipped.singular_values,
            right_vectors: flipped.left_vectors,
            left_vectors: flipped.right_vectors,
        });
    }

    let gram = m.adjoint().mul(m);
    let eig = hermitian_eig(&gram, tol)?;
    let n = m.cols();
    let singular_values: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    let sigma_top = singular_values.first().copied().unwrap_or(0.0);

    let mut left_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for i in 0..n {
        let v = eig.eigenvectors.col(i);
        let sigma = singular_values[i];
        if sigma > 1e-12 * sigma_top.max(1e-300) && sigma > 0.0 {
            let u = scale_vec(&m.apply(&v), C64::new(1.0 / sigma, 0.0));
            left_cols.push(u);
        } else {
            left_cols.push(complete_column(m.rows(), &left_cols));
        }
    }

    Ok(Svd {
        singular_values,
        right_vectors: eig.eigenvectors,
        left_vectors: Matrix::from_cols(&left_cols, m.field()),
    })
}

/// First standard basis vector with a healthy component orthogonal to the
/// columns gathered so far, orthonormalized against them.
fn complete_column(dim: usize, existing: &[Vec<C64>]) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for k in 0..dim {
        let mut cand = unit_vec(dim, k);
        for _ in 0..2 {
            for e in existing {
                let coeff = dot(&cand, e);
                cand = sub_vec(&cand, &scale_vec(e, coeff));
            }
        }
        let len = norm2(&cand);
        if len > 0.5 {
            return normalize_phase(scale_vec(&cand, C64::new(1.0 / len, 0.0)));
        }
        if best.as_ref().map_or(true, |(l, _)| len > *l) {
            best = Some((len, cand));
        }
    }
    let (len, cand) = best.expect("dimension is positive");
    normalize_phase(scale_vec(&cand, C64::new(1.0 / len.max(1e-300), 0.0)))
}

/// Operator norm `‖M‖ = σ₁`.
pub fn operator_norm(m: &Matrix, tol: &Tolerances) -> Result<f64> {
    Ok(svd(m, tol)?.operator_norm())
}

/// Polar decomposition `S = U·P` with `U` unitary (even when `S` is
/// singular, by completing the isometric part on the kernel) and
/// `P = (S*S)^{1/2}` positive semidefinite.
pub fn polar_decompose(s: &Matrix, tol: &Tolerances) -> Result<(Matrix, Matrix)> {
    if !s.is_square() {
        return Err(Error::InvalidMatrix("polar decomposition needs a square matrix".into()));
    }
    let f = svd(s, tol)?;
    let v = &f.right_vectors;
    let u = f.left_vectors.mul(&v.adjoint());
    let sigma = Matrix::diag_real(&f.singular_values);
    let p = v.mul(&sigma).mul(&v.adjoint());
    Ok((u, p))
}

/// True iff `T*T = ‖T‖²·I` within `tol_resid·‖T‖²`; the zero operator is
/// not an isometry. Scalar multiples of isometries pass by construction.
pub fn is_isometry(t: &Matrix, tol: &Tolerances) -> Result<bool> {
    if !t.is_square() {
        return Err(Error::InvalidMatrix("isometry test needs a square matrix".into()));
    }
    if t.is_zero() {
        return Ok(false);
    }
    let norm = operator_norm(t, tol)?;
    let gram = t.adjoint().mul(t);
    let shifted = gram.sub(&Matrix::identity(t.rows(), t.field()).scale(C64::new(norm * norm, 0.0)));
    Ok(shifted.norm_max() <= tol.tol_resid * norm * norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Field;
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut impl Rng, complex: bool) -> Matrix {
        Matrix::from_fn(
            n,
            n,
            if complex { Field::Complex } else { Field::Real },
            |_, _| {
                Complex64::new(
                    rng.gen_range(-1.0..1.0),
                    if complex { rng.gen_range(-1.0..1.0) } else { 0.0 },
                )
            },
        )
    }

    fn reconstruct(f: &Svd) -> Matrix {
        let sigma = Matrix::diag_real(&f.singular_values);
        f.left_vectors.mul(&sigma).mul(&f.right_vectors.adjoint())
    }

    #[test]
    fn diagonal_singular_values() {
        let m = Matrix::diag_real(&[1.0, 0.5]);
        let f = svd(&m, &Tolerances::default()).unwrap();
        assert_eq!(f.singular_values, vec![1.0, 0.5]);
    }

    #[test]
    fn zero_matrix_has_zero_spectrum_and_unitary_factors() {
        let m = Matrix::zeros(3, 3, Field::Real);
        let f = svd(&m, &Tolerances::default()).unwrap();
        assert_eq!(f.singular_values, vec![0.0, 0.0, 0.0]);
        let g = f.left_vectors.adjoint().mul(&f.left_vectors);
        assert!(g.sub(&Matrix::identity(3, Field::Real)).norm_max() < 1e-12);
    }

    #[test]
    fn random_reconstruction_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..20 {
            let m = random_matrix(4, &mut rng, trial % 2 == 0);
            let f = svd(&m, &Tolerances::default()).unwrap();
            let diff = reconstruct(&f).sub(&m).norm_max();
            assert!(diff <= 1e-10, "reconstruction defect {diff}");
        }
    }

    #[test]
    fn operator_norm_dominates_random_unit_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = random_matrix(4, &mut rng, false);
        let top = operator_norm(&m, &Tolerances::default()).unwrap();
        let mut best = 0.0f64;
        for _ in 0..10_000 {
            let mut x: Vec<Complex64> = (0..4)
                .map(|_| Complex64::new(rng.sample::<f64, _>(rand_distr_standard()), 0.0))
                .collect();
            let len = norm2(&x);
            if len == 0.0 {
                continue;
            }
            for c in x.iter_mut() {
                *c /= len;
            }
            best = best.max(norm2(&m.apply(&x)));
        }
        assert!(top + 1e-9 >= best, "σ₁ {top} below sampled {best}");
        assert!(top <= best + 0.05, "σ₁ {top} far above sampled max {best}");
    }

    // thin wrapper so the sampling loop reads cleanly
    fn rand_distr_standard() -> rand::distributions::Uniform<f64> {
        rand::distributions::Uniform::new(-1.0, 1.0)
    }

    #[test]
    fn polar_identity() {
        let (u, p) = polar_decompose(&Matrix::identity(2, Field::Real), &Tolerances::default()).unwrap();
        assert!(u.sub(&Matrix::identity(2, Field::Real)).norm_max() < 1e-12);
        assert!(p.sub(&Matrix::identity(2, Field::Real)).norm_max() < 1e-12);
    }

    #[test]
    fn polar_of_singular_nilpotent() {
        // S = [[0,2],[0,0]]: P = diag(0,2), U unitary with U·P = S
        let s = Matrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let (u, p) = polar_decompose(&s, &Tolerances::default()).unwrap();
        assert!((p.get(0, 0).norm()) < 1e-12);
        assert!((p.get(1, 1).re - 2.0).abs() < 1e-12);
        let gram = u.adjoint().mul(&u);
        assert!(gram.sub(&Matrix::identity(2, Field::Real)).norm_max() < 1e-12);
        assert!(u.mul(&p).sub(&s).norm_max() < 1e-12);
    }

    #[test]
    fn polar_random_invertible() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let m = random_matrix(3, &mut rng, true);
            let (u, p) = polar_decompose(&m, &Tolerances::default()).unwrap();
            assert!(u.mul(&p).sub(&m).norm_max() <= 1e-9);
            let gram = u.adjoint().mul(&u);
            assert!(gram.sub(&Matrix::identity(3, Field::Complex)).norm_max() < 1e-10);
            let peig = hermitian_eig(&p, &Tolerances::default()).unwrap();
            assert!(peig.eigenvalues.iter().all(|&l| l >= -1e-10));
        }
    }

    #[test]
    fn rotation_is_isometry() {
        let (c, s) = (0.7f64.cos(), 0.7f64.sin());
        let r = Matrix::from_real(2, 2, &[c, -s, s, c]);
        assert!(is_isometry(&r, &Tolerances::default()).unwrap());
        let d = Matrix::diag_real(&[1.0, 0.5]);
        assert!(!is_isometry(&d, &Tolerances::default()).unwrap());
        assert!(!is_isometry(&Matrix::zeros(2, 2, Field::Real), &Tolerances::default()).unwrap());
    }

    #[test]
    fn scaled_unitary_is_isometry() {
        // build a 3x3 unitary from two householder reflections
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut u = Matrix::identity(3, Field::Real);
        for _ in 0..2 {
            let w: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0f64), 0.0))
                .collect();
            let len = norm2(&w);
            let w: Vec<Complex64> = w.iter().map(|z| z / len).collect();
            let refl = Matrix::from_fn(3, 3, Field::Real, |i, j| {
                let delta = if i == j { 1.0 } else { 0.0 };
                Complex64::new(delta, 0.0) - Complex64::new(2.0, 0.0) * w[i] * w[j].conj()
            });
            u = u.mul(&refl);
        }
        let t = u.scale(Complex64::new(3.0, 0.0));
        assert!(is_isometry(&t, &Tolerances::default()).unwrap());
    }

    #[test]
    fn hermitian_svd_matches_absolute_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut m = Matrix::zeros(4, 4, Field::Real);
        for i in 0..4 {
            for j in i..4 {
                let x = rng.gen_range(-1.0..1.0);
                m.set(i, j, Complex64::new(x, 0.0));
                m.set(j, i, Complex64::new(x, 0.0));
            }
        }
        let tol = Tolerances::default();
        let eig = hermitian_eig(&m, &tol).unwrap();
        let mut abs_eigs: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs()).collect();
        abs_eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let f = svd(&m, &tol).unwrap();
        for (a, b) in abs_eigs.iter().zip(&f.singular_values) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
