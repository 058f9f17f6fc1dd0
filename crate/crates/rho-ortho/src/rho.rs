//! Norm derivatives and the orthogonality predicates built from them.
//!
//! For a normed space the one-sided derivatives of the norm at `x` toward
//! `y` are `ρ'±(x, y) = ‖x‖·lim_{t→0±} (‖x+ty‖−‖x‖)/t` and
//! `ρ'(x, y) = (ρ'₊ + ρ'₋)/2`; `x ⊥_ρ y` means `ρ'(x, y) = 0`, which is
//! strictly stronger than Birkhoff-James orthogonality
//! (`ρ'₋ ≤ 0 ≤ ρ'₊`).
//!
//! On a Hilbert space the norm is smooth away from 0 and both derivatives
//! collapse to `Re⟨y, x⟩`. For operators with the spectral norm the
//! derivatives are the endpoints of the real extent of the maximal
//! numerical range of `A*T` relative to `T`:
//!
//! ```text
//!   ρ'₊(T, A) = sup Re W_T(A*T) = max { Re⟨Ax, Tx⟩ : x ∈ M_T }
//!   ρ'₋(T, A) = inf Re W_T(A*T)
//! ```
//!
//! which the one-sided finite differences of `t ↦ ‖T + tA‖` corroborate
//! (that oracle is what pins the scaling: both sides are bilinear in
//! `(T, A)` and satisfy `ρ'(λT, λA) = |λ|²ρ'(T, A)`).
//!
//! The zero operator is handled leniently by default: `ρ'(0, ·) ≡ 0` via
//! the `‖x‖` factor in the definition, and `0 ⊥_ρ A ⊥_ρ 0` are declared
//! true so that "only the zero operator is ρ-symmetric" statements have
//! their intended edge case. Strict variants reject zero instead.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{dot, norm2, Matrix, C64};
use crate::spectral::attainment_extent;
use crate::svd::operator_norm;
use crate::tol::Tolerances;

/// One-sided norm derivatives at a point, plus the norm of the base point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivativeReport {
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub rho: f64,
    #[serde(rename = "norm_T")]
    pub norm_t: f64,
}

impl DerivativeReport {
    pub(crate) fn new(rho_plus: f64, rho_minus: f64, norm_t: f64) -> DerivativeReport {
        DerivativeReport {
            rho_plus,
            rho_minus,
            rho: 0.5 * (rho_plus + rho_minus),
            norm_t,
        }
    }

    pub(crate) fn zero() -> DerivativeReport {
        DerivativeReport::new(0.0, 0.0, 0.0)
    }
}

/// Outcome of the two orthogonality predicates on one ordered pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrthogonalityVerdict {
    pub rho_orthogonal: bool,
    pub bj_orthogonal: bool,
    pub report: DerivativeReport,
    pub scale: f64,
}

/// Norm derivatives for Hilbert-space vectors: smoothness gives
/// `ρ'₊ = ρ'₋ = Re⟨y, x⟩`. The zero base point yields the zero report.
pub fn rho_vec(x: &[C64], y: &[C64]) -> DerivativeReport {
    assert_eq!(x.len(), y.len(), "vector lengths differ");
    let norm_x = norm2(x);
    if norm_x == 0.0 {
        return DerivativeReport::zero();
    }
    let value = dot(y, x).re;
    DerivativeReport::new(value, value, norm_x)
}

/// Strict-mode variant of [`rho_vec`]: a zero base point is an error.
pub fn rho_vec_strict(x: &[C64], y: &[C64]) -> Result<DerivativeReport> {
    if norm2(x) == 0.0 {
        return Err(Error::ZeroBasePoint);
    }
    Ok(rho_vec(x, y))
}

/// Operator norm derivatives `ρ'±(T, A)` via the real extent of
/// `W_T(A*T)`. Lenient on the zero operator.
pub fn rho_operator(t: &Matrix, a: &Matrix, tol: &Tolerances) -> Result<DerivativeReport> {
    t.same_shape(a)?;
    if t.is_zero() {
        return Ok(DerivativeReport::zero());
    }
    let (extent, nas) = attainment_extent(t, a, tol)?;
    Ok(DerivativeReport::new(extent.hi, extent.lo, nas.sigma_max))
}

/// Strict-mode variant of [`rho_operator`].
pub fn rho_operator_strict(t: &Matrix, a: &Matrix, tol: &Tolerances) -> Result<DerivativeReport> {
    if t.is_zero() {
        return Err(Error::ZeroOperator);
    }
    rho_operator(t, a, tol)
}

/// Both orthogonality predicates at once.
///
/// `rho_orthogonal ⇔ |ρ'₊ + ρ'₋| ≤ tol·‖T‖‖A‖` and
/// `bj_orthogonal ⇔ ρ'₋ ≤ tol·‖T‖‖A‖ ∧ ρ'₊ ≥ −tol·‖T‖‖A‖`, so the first
/// implies the second at equal tolerance. A zero operator on either side
/// makes both verdicts true.
pub fn is_rho_orthogonal(t: &Matrix, a: &Matrix, tol: &Tolerances) -> Result<OrthogonalityVerdict> {
    t.same_shape(a)?;
    if t.is_zero() || a.is_zero() {
        return Ok(OrthogonalityVerdict {
            rho_orthogonal: true,
            bj_orthogonal: true,
            report: DerivativeReport::zero(),
            scale: 0.0,
        });
    }
    let report = rho_operator(t, a, tol)?;
    let norm_a = operator_norm(a, tol)?;
    let scale = report.norm_t * norm_a;
    let eps = tol.tol_ortho_decision * scale;
    Ok(OrthogonalityVerdict {
        rho_orthogonal: (report.rho_plus + report.rho_minus).abs() <= eps,
        bj_orthogonal: report.rho_minus <= eps && report.rho_plus >= -eps,
        report,
        scale,
    })
}

/// Birkhoff-James orthogonality alone: `ρ'₋ ≤ 0 ≤ ρ'₊` at tolerance.
pub fn is_bj_orthogonal(t: &Matrix, a: &Matrix, tol: &Tolerances) -> Result<bool> {
    Ok(is_rho_orthogonal(t, a, tol)?.bj_orthogonal)
}

/// One-sided finite difference `‖T‖·(‖T + tA‖ − ‖T‖)/t` for `t > 0`:
/// the defining quotient of `ρ'₊(T, A)`, used as an independent oracle.
pub fn finite_difference_rho_plus(t: &Matrix, a: &Matrix, step: f64) -> Result<f64> {
    assert!(step > 0.0, "step must be positive");
    finite_difference(t, a, step)
}

/// Same quotient evaluated from the left (`t < 0`), approximating
/// `ρ'₋(T, A)`; `step` is still passed as a positive magnitude.
pub fn finite_difference_rho_minus(t: &Matrix, a: &Matrix, step: f64) -> Result<f64> {
    assert!(step > 0.0, "step must be positive");
    finite_difference(t, a, -step)
}

fn finite_difference(t: &Matrix, a: &Matrix, step: f64) -> Result<f64> {
    t.same_shape(a)?;
    let tol = Tolerances::default();
    let norm_t = operator_norm(t, &tol)?;
    let perturbed = t.add(&a.scale(C64::new(step, 0.0)));
    let norm_shift = operator_norm(&perturbed, &tol)?;
    Ok(norm_t * (norm_shift - norm_t) / step)
}

/// Shift `A` along `T` so the real extent of `W_T(A*T)` is centered at
/// the origin: `A' = A − c·T` with real `c`, making `T ⊥_ρ A'`.
///
/// On the attainment subspace `T*T` acts as `‖T‖²·I` (exactly so when the
/// top singular value is simple or exactly degenerate), hence
/// `W_T((A − cT)*T) = W_T(A*T) − c‖T‖²` and one step with
/// `c = (ρ'₊ + ρ'₋)/(2‖T‖²)` centers the extent; the loop mops up the
/// residual when the top band is only degenerate to within `tol_attain`.
pub fn midpoint_shift(t: &Matrix, a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    t.same_shape(a)?;
    if t.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let mut shifted = a.clone();
    for _ in 0..8 {
        let report = rho_operator(t, &shifted, tol)?;
        let c = report.rho / (report.norm_t * report.norm_t);
        if c == 0.0 {
            break;
        }
        shifted = shifted.sub(&t.scale(C64::new(c, 0.0)));
        let after = rho_operator(t, &shifted, tol)?;
        let norm_a = operator_norm(&shifted, tol)?;
        if after.rho.abs() <= 0.25 * tol.tol_ortho_decision * report.norm_t * norm_a.max(1e-300) {
            break;
        }
    }
    Ok(shifted)
}
