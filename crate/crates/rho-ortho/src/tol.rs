use serde::{Deserialize, Serialize};

/// Working tolerances used throughout the library.
///
/// All thresholds are relative: residuals scale with the norm of the matrix
/// they certify, orthogonality decisions scale with `‖T‖·‖A‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residual bound for eigen/singular decompositions, relative to the norm.
    pub tol_resid: f64,
    /// Gram-matrix deviation bound for orthonormal vector systems.
    pub tol_orth: f64,
    /// Unit-vector norm deviation bound.
    pub tol_unit: f64,
    /// Relative band below the top singular value that still counts as
    /// norm-attaining when computing the subspace spanned by `M_T`.
    pub tol_attain: f64,
    /// Decision threshold for the orthogonality predicates, scaled by
    /// `‖T‖·‖A‖` wherever it is used.
    pub tol_ortho_decision: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_resid: 1e-10,
            tol_orth: 1e-10,
            tol_unit: 1e-10,
            tol_attain: 1e-8,
            tol_ortho_decision: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> bool {
        let all = [
            self.tol_resid,
            self.tol_orth,
            self.tol_unit,
            self.tol_attain,
            self.tol_ortho_decision,
        ];
        all.iter().all(|t| t.is_finite() && *t >= 0.0 && *t <= 1e-2)
    }
}
