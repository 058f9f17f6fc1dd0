//! Norm derivatives on real ℓ∞ⁿ.
//!
//! The sup norm is polyhedral, so everything is finite and exact: the
//! extreme supporting functionals of a nonzero `x` are the signed
//! coordinate functionals `sgn(x_k)·e*_k` at max-modulus coordinates, and
//!
//! ```text
//!   ρ'₊(x, y) = ‖x‖∞ · max { f(y) : f ∈ Ext(J(x)) }
//!   ρ'₋(x, y) = ‖x‖∞ · min { f(y) : f ∈ Ext(J(x)) }
//! ```
//!
//! For operators `T: ℓ∞ⁿ → ℓ∞ⁿ` the norm is attained on sign vectors
//! (extreme points of the unit cube) and the operator derivatives
//! aggregate the pointwise ones over the norm-attaining sign vectors:
//! `ρ'₊(T, A) = max { ρ'₊(Tε, Aε) }`, `ρ'₋(T, A) = min { ρ'₋(Tε, Aε) }`.
//!
//! All of this is dyadic-exact for dyadic inputs, which is what makes the
//! golden counterexamples reproducible with `==` on floats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::rho::DerivativeReport;
use crate::tol::Tolerances;

/// Relative tie tolerance for max-modulus coordinates; faces of the cube
/// are exact in the intended fixtures, this only absorbs rounding dust.
const TIE_TOL: f64 = 1e-12;

/// Largest dimension for which the 2ⁿ sign enumeration is allowed.
const MAX_ENUM_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinfVector(pub Vec<f64>);

impl LinfVector {
    pub fn sup_norm(&self) -> f64 {
        self.0.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Signed coordinate functional `sign·e*_index`, an extreme point of the
/// dual ball supporting its base vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportFunctional {
    pub index: usize,
    pub sign: f64,
}

impl SupportFunctional {
    pub fn eval(&self, y: &LinfVector) -> f64 {
        self.sign * y.0[self.index]
    }
}

/// Operator on ℓ∞ⁿ given by its matrix, norms measured in the sup norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinfOperator {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl LinfOperator {
    pub fn from_rows(rows: &[Vec<f64>]) -> LinfOperator {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        LinfOperator {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn apply(&self, x: &LinfVector) -> LinfVector {
        assert_eq!(x.0.len(), self.cols);
        LinfVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * x.0[j]).sum())
                .collect(),
        )
    }

    /// `‖T‖` for ℓ∞ⁿ → ℓ∞ⁿ, exactly the maximal absolute row sum.
    pub fn op_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).abs()).sum())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0.0)
    }
}

/// Extreme supporting functionals of a nonzero ℓ∞ vector:
/// `{sgn(x_k)·e*_k : |x_k| = ‖x‖∞}` with a relative tie tolerance.
pub fn ext_support_functionals(x: &LinfVector) -> Result<Vec<SupportFunctional>> {
    let norm = x.sup_norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(x.0
        .iter()
        .enumerate()
        .filter(|(_, &v)| v.abs() >= norm * (1.0 - TIE_TOL))
        .map(|(k, &v)| SupportFunctional {
            index: k,
            sign: if v >= 0.0 { 1.0 } else { -1.0 },
        })
        .collect())
}

/// Norm derivatives of the sup norm at `x` toward `y`. Lenient at zero.
pub fn rho_pm_linf_vec(x: &LinfVector, y: &LinfVector) -> DerivativeReport {
    let norm = x.sup_norm();
    if norm == 0.0 {
        return DerivativeReport::zero();
    }
    let funcs = ext_support_functionals(x).expect("nonzero checked above");
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for f in &funcs {
        let v = f.eval(y);
        hi = hi.max(v);
        lo = lo.min(v);
    }
    DerivativeReport::new(norm * hi, norm * lo, norm)
}

/// Norm-attaining sign vectors: all `ε ∈ {−1, 1}ⁿ` with
/// `‖Tε‖∞ ≥ ‖T‖(1 − tol_attain)`. The operator norm itself is the exact
/// max over sign vectors.
pub fn mt_ext(t: &LinfOperator, tol: &Tolerances) -> Result<Vec<LinfVector>> {
    if t.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let n = t.dim();
    if n > MAX_ENUM_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    let count = 1usize << n;
    let norms: Vec<(LinfVector, f64)> = par::map_indexed(count, |mask| {
        let eps = LinfVector(
            (0..n)
                .map(|j| if mask >> j & 1 == 1 { -1.0 } else { 1.0 })
                .collect(),
        );
        let norm = t.apply(&eps).sup_norm();
        (eps, norm)
    });
    let top = norms.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    debug_assert!((top - t.op_norm()).abs() <= 1e-12 * top.max(1.0));
    Ok(norms
        .into_iter()
        .filter(|(_, v)| *v >= top * (1.0 - tol.tol_attain))
        .map(|(eps, _)| eps)
        .collect())
}

/// Operator norm derivatives on ℓ∞ⁿ: pointwise derivatives along `M_T`
/// extreme points, aggregated by max (for ρ'₊) and min (for ρ'₋).
pub fn rho_pm_linf_op(t: &LinfOperator, a: &LinfOperator, tol: &Tolerances) -> Result<DerivativeReport> {
    assert_eq!(t.dim(), a.dim(), "operator dimensions differ");
    let attaining = mt_ext(t, tol)?;
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for eps in &attaining {
        let rep = rho_pm_linf_vec(&t.apply(eps), &a.apply(eps));
        hi = hi.max(rep.rho_plus);
        lo = lo.min(rep.rho_minus);
    }
    Ok(DerivativeReport::new(hi, lo, t.op_norm()))
}

/// Scan the faces of the unit square that lie inside `M_T` for a point
/// `x₀` with `ρ'(Tx₀, Ax₀) = 0`; only `n = 2` is face-parameterized.
///
/// Grid minima are sharpened by bisecting every sign change of
/// `s ↦ ρ'(Tx(s), Ax(s))` between adjacent in-band grid points, so a
/// transversal zero is located to machine precision rather than grid
/// resolution. Returns the argmin when the minimum clears the decision
/// tolerance, otherwise `None` (ρ' can jump across 0 at functional-set
/// switches without ever vanishing).
pub fn pointwise_witness_scan(
    t: &LinfOperator,
    a: &LinfOperator,
    grid: usize,
    tol: &Tolerances,
) -> Result<Option<LinfVector>> {
    if t.dim() != 2 {
        return Err(Error::UnsupportedDimension(t.dim()));
    }
    if t.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let grid = grid.max(16);
    let norm_t = t.op_norm();
    let norm_a = a.op_norm();
    let in_band = |v: &LinfVector| t.apply(v).sup_norm() >= norm_t * (1.0 - tol.tol_attain);
    let rho_at = |v: &LinfVector| rho_pm_linf_vec(&t.apply(v), &a.apply(v)).rho;

    let mut best: Option<(f64, LinfVector)> = None;
    let mut consider = |v: LinfVector, val: f64| {
        if best.as_ref().map_or(true, |(b, _)| val.abs() < b.abs()) {
            best = Some((val, v));
        }
    };

    // faces: (axis held fixed, its sign)
    for (axis, fixed) in [(0usize, 1.0f64), (0, -1.0), (1, 1.0), (1, -1.0)] {
        let at = |s: f64| {
            let mut coords = [0.0f64; 2];
            coords[axis] = fixed;
            coords[1 - axis] = s;
            LinfVector(coords.to_vec())
        };
        let mut prev: Option<(f64, f64)> = None; // (s, rho) of last in-band point
        for j in 0..grid {
            let s = -1.0 + 2.0 * j as f64 / (grid - 1) as f64;
            let v = at(s);
            if !in_band(&v) {
                prev = None;
                continue;
            }
            let val = rho_at(&v);
            consider(v, val);
            if let Some((ps, pval)) = prev {
                if pval.signum() != val.signum() && pval != 0.0 && val != 0.0 {
                    // bisect the bracket
                    let (mut lo_s, mut lo_v, mut hi_s) = (ps, pval, s);
                    for _ in 0..100 {
                        let mid = 0.5 * (lo_s + hi_s);
                        let mv = rho_at(&at(mid));
                        if mv == 0.0 {
                            lo_s = mid;
                            lo_v = 0.0;
                            break;
                        }
                        if mv.signum() == lo_v.signum() {
                            lo_s = mid;
                            lo_v = mv;
                        } else {
                            hi_s = mid;
                        }
                    }
                    let refined = at(lo_s);
                    if in_band(&refined) {
                        let rv = rho_at(&refined);
                        consider(refined, rv);
                    }
                }
            }
            prev = Some((s, val));
        }
    }

    Ok(match best {
        Some((val, v)) if val.abs() <= tol.tol_ortho_decision * norm_t * norm_a.max(1e-300) => Some(v),
        _ => None,
    })
}

// -- fixtures ----------------------------------------------------------------

/// Fixture format naming operators by their images at designated extreme
/// points, e.g. `{"space":"linf2","images":{"(1,1)":[1,0.5],"(1,-1)":[1,-0.5]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinfFixture {
    pub space: String,
    pub images: BTreeMap<String, Vec<f64>>,
}

impl LinfFixture {
    /// Recover the operator matrix by solving the change of basis from
    /// the designated extreme points to the standard basis.
    pub fn to_operator(&self) -> Result<LinfOperator> {
        if self.space != "linf2" {
            return Err(Error::InvalidMatrix(format!(
                "unsupported fixture space {:?}",
                self.space
            )));
        }
        if self.images.len() != 2 {
            return Err(Error::InvalidMatrix(
                "linf2 fixture needs exactly two extreme-point images".into(),
            ));
        }
        let mut points = Vec::new();
        let mut images = Vec::new();
        for (key, img) in &self.images {
            let p = parse_point(key)?;
            if img.len() != 2 {
                return Err(Error::InvalidMatrix("image must have two coordinates".into()));
            }
            points.push(p);
            images.push([img[0], img[1]]);
        }
        // solve T·[p1 p2] = [y1 y2]  =>  T = Y·P⁻¹, columns of P the points
        let p = [
            [points[0][0], points[1][0]],
            [points[0][1], points[1][1]],
        ];
        let det_p = p[0][0] * p[1][1] - p[0][1] * p[1][0];
        if det_p == 0.0 {
            return Err(Error::InvalidMatrix("extreme points are linearly dependent".into()));
        }
        let p_inv = [
            [p[1][1] / det_p, -p[0][1] / det_p],
            [-p[1][0] / det_p, p[0][0] / det_p],
        ];
        let y = [
            [images[0][0], images[1][0]],
            [images[0][1], images[1][1]],
        ];
        let mut t = [[0.0f64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                t[i][j] = y[i][0] * p_inv[0][j] + y[i][1] * p_inv[1][j];
            }
        }
        Ok(LinfOperator::from_rows(&[t[0].to_vec(), t[1].to_vec()]))
    }
}

fn parse_point(key: &str) -> Result<[f64; 2]> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidMatrix(format!("bad extreme point key {key:?}")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::InvalidMatrix(format!("bad extreme point key {key:?}")));
    }
    let x: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidMatrix(format!("bad coordinate in {key:?}")))?;
    let y: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidMatrix(format!("bad coordinate in {key:?}")))?;
    Ok([x, y])
}

pub fn linf_fixture_from_json(text: &str) -> Result<LinfOperator> {
    let fixture: LinfFixture =
        serde_json::from_str(text).map_err(|e| Error::InvalidMatrix(e.to_string()))?;
    fixture.to_operator()
}

/// The operator pair from the necessity counterexample:
/// `T(1,1) = (1, ½)`, `T(1,−1) = (1, −½)`, `A(1,1) = (½, 0)`,
/// `A(1,−1) = (−1, 0)`.
pub fn necessity_example() -> (LinfOperator, LinfOperator) {
    let t = LinfOperator::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.5]]);
    let a = LinfOperator::from_rows(&[vec![-0.25, 0.75], vec![0.0, 0.0]]);
    (t, a)
}

/// The operator pair from the sufficiency counterexample:
/// `T(1,1) = (1, 0)`, `T(−1,1) = (½, 1)`, `A(1,1) = (1, 0)`,
/// `A(−1,1) = (0, −1)`.
pub fn sufficiency_example() -> (LinfOperator, LinfOperator) {
    let t = LinfOperator::from_rows(&[vec![0.25, 0.75], vec![-0.5, 0.5]]);
    let a = LinfOperator::from_rows(&[vec![0.5, 0.5], vec![0.5, -0.5]]);
    (t, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_functionals_of_plain_and_tied_vectors() {
        let single = ext_support_functionals(&LinfVector(vec![1.0, 0.5])).unwrap();
        assert_eq!(single, vec![SupportFunctional { index: 0, sign: 1.0 }]);

        let tied = ext_support_functionals(&LinfVector(vec![1.0, -1.0])).unwrap();
        assert_eq!(
            tied,
            vec![
                SupportFunctional { index: 0, sign: 1.0 },
                SupportFunctional { index: 1, sign: -1.0 }
            ]
        );

        let partial = ext_support_functionals(&LinfVector(vec![-1.0, -1.0, 0.3])).unwrap();
        assert_eq!(
            partial,
            vec![
                SupportFunctional { index: 0, sign: -1.0 },
                SupportFunctional { index: 1, sign: -1.0 }
            ]
        );

        assert_eq!(
            ext_support_functionals(&LinfVector(vec![0.0, 0.0])).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn vector_derivatives_examples() {
        let rep = rho_pm_linf_vec(&LinfVector(vec![1.0, 0.5]), &LinfVector(vec![0.5, 7.0]));
        assert_eq!((rep.rho_plus, rep.rho_minus), (0.5, 0.5));

        let rep = rho_pm_linf_vec(&LinfVector(vec![1.0, -1.0]), &LinfVector(vec![1.0, 1.0]));
        assert_eq!((rep.rho_plus, rep.rho_minus), (1.0, -1.0));

        // x = (1,1): derivatives are max/min of the coordinates of y
        let rep = rho_pm_linf_vec(&LinfVector(vec![1.0, 1.0]), &LinfVector(vec![-0.3, 0.8]));
        assert_eq!((rep.rho_plus, rep.rho_minus), (0.8, -0.3));
    }

    #[test]
    fn vector_derivatives_match_finite_differences() {
        // oracle: one-sided difference quotients of ‖x + ty‖∞
        let sup = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let cases = [
            (vec![1.0, 0.5], vec![0.5, 7.0]),
            (vec![1.0, -1.0], vec![1.0, 1.0]),
            (vec![1.0, 1.0], vec![-0.3, 0.8]),
            (vec![-0.7, 0.7, 0.2], vec![1.0, -2.0, 0.5]),
        ];
        for (x, y) in cases {
            let rep = rho_pm_linf_vec(&LinfVector(x.clone()), &LinfVector(y.clone()));
            let nx = sup(&x);
            let t = 1e-7;
            let plus: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + t * b).collect();
            let minus: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - t * b).collect();
            let fd_plus = nx * (sup(&plus) - nx) / t;
            let fd_minus = nx * (nx - sup(&minus)) / t;
            assert!((fd_plus - rep.rho_plus).abs() < 1e-5);
            assert!((fd_minus - rep.rho_minus).abs() < 1e-5);
        }
    }

    #[test]
    fn attaining_sign_vectors_of_named_operators() {
        let tol = Tolerances::default();
        let (t, _) = necessity_example();
        // every sign vector attains for this T
        assert_eq!(mt_ext(&t, &tol).unwrap().len(), 4);

        let id = LinfOperator::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(mt_ext(&id, &tol).unwrap().len(), 4);

        let d = LinfOperator::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.5]]);
        assert_eq!(mt_ext(&d, &tol).unwrap().len(), 4);
    }

    #[test]
    fn operator_norm_is_max_row_sum_and_max_over_signs() {
        let t = LinfOperator::from_rows(&[vec![0.25, 0.75], vec![-0.5, 0.5]]);
        assert_eq!(t.op_norm(), 1.0);
        // brute-force over sign vectors agrees
        let mut best = 0.0f64;
        for mask in 0..4 {
            let eps = LinfVector(vec![
                if mask & 1 == 1 { -1.0 } else { 1.0 },
                if mask & 2 == 2 { -1.0 } else { 1.0 },
            ]);
            best = best.max(t.apply(&eps).sup_norm());
        }
        assert_eq!(best, 1.0);
    }

    #[test]
    fn necessity_example_golden_values() {
        let tol = Tolerances::default();
        let (t, a) = necessity_example();
        let rep = rho_pm_linf_op(&t, &a, &tol).unwrap();
        // dyadic inputs: results are exact
        assert_eq!(rep.rho_plus, 0.5);
        assert_eq!(rep.rho_minus, -1.0);
        assert!(rep.rho != 0.0, "T is not rho-orthogonal to A");
    }

    #[test]
    fn necessity_example_pointwise_witness() {
        let tol = Tolerances::default();
        let (t, a) = necessity_example();
        let witness = pointwise_witness_scan(&t, &a, 10_000, &tol).unwrap().unwrap();
        // A(1, 1/3) = 0, so T(1,1/3) is rho-orthogonal to A(1,1/3)
        assert_eq!(witness.0[0], 1.0);
        assert!((witness.0[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!(a.apply(&witness).sup_norm() < 1e-12);
    }

    #[test]
    fn sufficiency_example_golden_values() {
        let tol = Tolerances::default();
        let (t, a) = sufficiency_example();
        let rep = rho_pm_linf_op(&t, &a, &tol).unwrap();
        assert_eq!(rep.rho_plus, 1.0);
        assert_eq!(rep.rho_minus, -1.0);
        assert_eq!(rep.rho, 0.0, "T is rho-orthogonal to A");
        // ... and yet the pointwise derivative at (1,1) does not vanish
        let point = LinfVector(vec![1.0, 1.0]);
        let pointwise = rho_pm_linf_vec(&t.apply(&point), &a.apply(&point));
        assert_eq!(pointwise.rho, 1.0);
    }

    #[test]
    fn scan_returns_none_when_rho_never_vanishes() {
        let tol = Tolerances::default();
        let (t, _) = necessity_example();
        // A = T: rho'(Tx, Tx) = ‖Tx‖² > 0 on M_T
        assert!(pointwise_witness_scan(&t, &t, 1000, &tol).unwrap().is_none());
    }

    #[test]
    fn scan_rejects_unsupported_dimension() {
        let t = LinfOperator::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        assert_eq!(
            pointwise_witness_scan(&t, &t, 100, &Tolerances::default()).unwrap_err(),
            Error::UnsupportedDimension(3)
        );
    }

    #[test]
    fn zero_partner_has_zero_derivatives() {
        let tol = Tolerances::default();
        let (t, _) = necessity_example();
        let zero = LinfOperator::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]]);
        let rep = rho_pm_linf_op(&t, &zero, &tol).unwrap();
        assert_eq!((rep.rho_plus, rep.rho_minus), (0.0, 0.0));
    }

    #[test]
    fn fixture_parses_the_necessity_pair() {
        let text = r#"{"space":"linf2","images":{"(1,1)":[1,0.5],"(1,-1)":[1,-0.5]}}"#;
        let t = linf_fixture_from_json(text).unwrap();
        assert_eq!(t, necessity_example().0);

        let text = r#"{"space":"linf2","images":{"(1,1)":[0.5,0],"(1,-1)":[-1,0]}}"#;
        let a = linf_fixture_from_json(text).unwrap();
        assert_eq!(a, necessity_example().1);
    }

    #[test]
    fn fixture_parses_the_sufficiency_pair() {
        let text = r#"{"space":"linf2","images":{"(1,1)":[1,0],"(-1,1)":[0.5,1]}}"#;
        let t = linf_fixture_from_json(text).unwrap();
        assert_eq!(t, sufficiency_example().0);
    }

    #[test]
    fn fixture_rejects_degenerate_points() {
        let text = r#"{"space":"linf2","images":{"(1,1)":[1,0],"(-1,-1)":[0,1]}}"#;
        assert!(linf_fixture_from_json(text).is_err());
    }
}
