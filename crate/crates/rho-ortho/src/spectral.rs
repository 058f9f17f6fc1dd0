//! Norm-attainment subspaces, numerical ranges and maximal numerical ranges.
//!
//! For a nonzero operator `T` on a finite-dimensional Hilbert space the
//! norm attainment set `M_T` is the unit sphere of `H₀`, the span of the
//! right singular vectors whose singular value sits in the top band
//! `σ ≥ σ₁(1 − tol_attain)`. The maximal numerical range of `A*T`
//! relative to `T` is then exactly the numerical range of the compression
//! `K = B₀*(A*T)B₀` of `A*T` to `H₀`.
//!
//! Numerical ranges are sampled by the classical support-function method:
//! for each angle θ the top eigenpair of the hermitian part of
//! `e^{-iθ}K` gives the support value `h(θ)` and a boundary point
//! `⟨Kv, v⟩`. Because the grid always contains θ = 0 and θ = π, the real
//! extent `[−h(π), h(0)]` read off a sample is exact (two hermitian
//! eigenvalue problems), not a discretization.

use num_complex::Complex64;
use serde::Serialize;

use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix, C64};
use crate::par;
use crate::svd::svd;
use crate::tol::Tolerances;

/// Orthonormal basis of the top singular subspace `H₀` together with the
/// attained norm. `full_space` marks scalar multiples of isometries.
#[derive(Debug, Clone, Serialize)]
pub struct NormAttainmentSubspace {
    pub basis: Matrix,
    pub sigma_max: f64,
    pub full_space: bool,
}

impl NormAttainmentSubspace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RangeKind {
    #[serde(rename = "numerical_range")]
    NumericalRange,
    #[serde(rename = "maximal_numerical_range")]
    MaximalNumericalRange,
}

/// Sampled convex planar region: one boundary point and one support value
/// per angle of a uniform grid on `[0, 2π)`.
#[derive(Debug, Clone, Serialize)]
pub struct RangeSample {
    pub kind: RangeKind,
    pub thetas: Vec<f64>,
    #[serde(serialize_with = "serialize_points")]
    pub boundary_points: Vec<C64>,
    pub support_values: Vec<f64>,
}

fn serialize_points<S: serde::Serializer>(
    points: &[C64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(points.len()))?;
    for p in points {
        seq.serialize_element(&[p.re, p.im])?;
    }
    seq.end()
}

impl RangeSample {
    /// CSV export, columns `theta,re,im,support`, one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im,support\n");
        for i in 0..self.thetas.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.thetas[i], self.boundary_points[i].re, self.boundary_points[i].im, self.support_values[i]
            ));
        }
        out
    }
}

/// Real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealExtent {
    pub lo: f64,
    pub hi: f64,
}

impl RealExtent {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Span of the right singular vectors attaining the operator norm.
pub fn norm_attainment_subspace(t: &Matrix, tol: &Tolerances) -> Result<NormAttainmentSubspace> {
    if !t.is_square() {
        return Err(Error::InvalidMatrix("norm attainment needs a square operator".into()));
    }
    let f = svd(t, tol)?;
    let sigma_max = f.operator_norm();
    if sigma_max <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let n = t.cols();
    let k = f
        .singular_values
        .iter()
        .take_while(|&&s| s >= sigma_max * (1.0 - tol.tol_attain))
        .count();
    let cols: Vec<Vec<C64>> = (0..k).map(|j| f.right_vectors.col(j)).collect();
    Ok(NormAttainmentSubspace {
        basis: Matrix::from_cols(&cols, t.field()),
        sigma_max,
        full_space: k == n,
    })
}

fn even_samples(samples: usize) -> usize {
    let s = samples.max(8);
    s + (s % 2)
}

/// Sampled numerical range `W(A) = {⟨Ax, x⟩ : ‖x‖ = 1}`.
pub fn numerical_range(a: &Matrix, samples: usize) -> Result<RangeSample> {
    numerical_range_kind(a, samples, RangeKind::NumericalRange)
}

fn numerical_range_kind(a: &Matrix, samples: usize, kind: RangeKind) -> Result<RangeSample> {
    if !a.is_square() {
        return Err(Error::InvalidMatrix("numerical range needs a square operator".into()));
    }
    let m = even_samples(samples);
    let tol = Tolerances::default();
    let a = a.clone().into_complex();
    let per_theta = par::map_indexed(m, |j| -> Result<(f64, C64, f64)> {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let rot = C64::from_polar(1.0, -theta);
        let h = a.scale(rot).hermitian_part();
        let eig = hermitian_eig(&h, &tol)?;
        let top = eig.eigenvalues[0];
        let v = eig.eigenvectors.col(0);
        let point = dot(&a.apply(&v), &v);
        Ok((theta, point, top))
    });
    let mut thetas = Vec::with_capacity(m);
    let mut boundary_points = Vec::with_capacity(m);
    let mut support_values = Vec::with_capacity(m);
    for item in per_theta {
        let (theta, point, support) = item?;
        thetas.push(theta);
        boundary_points.push(point);
        support_values.push(support);
    }
    Ok(RangeSample {
        kind,
        thetas,
        boundary_points,
        support_values,
    })
}

/// Compression `B₀*(A*T)B₀` of `A*T` to the norm attainment subspace of
/// `T`; when `M_T` is the whole sphere the compression is skipped.
pub(crate) fn attainment_compression(
    t: &Matrix,
    a: &Matrix,
    nas: &NormAttainmentSubspace,
) -> Matrix {
    let product = a.adjoint().mul(t);
    if nas.full_space {
        product
    } else {
        nas.basis.adjoint().mul(&product).mul(&nas.basis)
    }
}

/// Maximal numerical range of `A*T` relative to `T`, sampled like
/// [`numerical_range`]. In finite dimension
/// `W_T(A*T) = {⟨A*Tx, x⟩ : x ∈ S_{H₀}} = W(B₀*(A*T)B₀)`.
pub fn maximal_numerical_range(
    t: &Matrix,
    a: &Matrix,
    tol: &Tolerances,
    samples: usize,
) -> Result<RangeSample> {
    t.same_shape(a)?;
    let nas = norm_attainment_subspace(t, tol)?;
    let k = attainment_compression(t, a, &nas);
    numerical_range_kind(&k, samples, RangeKind::MaximalNumericalRange)
}

/// Real extent of a sampled convex region: `[−h(π), h(0)]`, exact for
/// convex sets since both angles are grid points.
pub fn real_extent(r: &RangeSample) -> RealExtent {
    assert!(!r.support_values.is_empty(), "range sample is empty");
    let m = r.support_values.len();
    let hi = r.support_values[0];
    let lo = -r.support_values[m / 2];
    RealExtent { lo, hi }
}

/// Real extent of `W_T(A*T)` computed directly from the two extreme
/// eigenvalues of the hermitian part of the compression. Identical to
/// `real_extent(maximal_numerical_range(..))` but avoids the full sweep;
/// every orthogonality predicate funnels through here.
pub(crate) fn attainment_extent(
    t: &Matrix,
    a: &Matrix,
    tol: &Tolerances,
) -> Result<(RealExtent, NormAttainmentSubspace)> {
    t.same_shape(a)?;
    let nas = norm_attainment_subspace(t, tol)?;
    let k = attainment_compression(t, a, &nas);
    let herm = k.hermitian_part();
    let eig = hermitian_eig(&herm, tol)?;
    let hi = eig.eigenvalues[0];
    let lo = *eig.eigenvalues.last().expect("nonempty spectrum");
    Ok((RealExtent { lo, hi }, nas))
}

/// Orthogonal projection of `z` onto the line `L_θ = {re^{iθ}}`:
/// `Pr_θ(z) = e^{iθ}(Re(z)cosθ + Im(z)sinθ)`.
pub fn project_theta(z: C64, theta: f64) -> C64 {
    Complex64::from_polar(1.0, theta) * (z.re * theta.cos() + z.im * theta.sin())
}

/// Origin symmetry of a real extent at the working tolerance, scaled by
/// the caller's product of norms.
pub fn is_extent_symmetric(e: &RealExtent, scale: f64, tol: &Tolerances) -> bool {
    assert!(scale > 0.0, "scale must be positive");
    (e.lo + e.hi).abs() <= tol.tol_ortho_decision * scale
}
