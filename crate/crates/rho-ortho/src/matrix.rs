//! Dense matrices over the real or complex field, plus the handful of
//! vector helpers the rest of the library leans on.
//!
//! Storage is always `Complex64` row-major; the `field` tag records whether
//! the operator lives over ℝ (imaginary parts identically zero) or ℂ. The
//! inner product is conjugate-linear in its *second* argument, so
//! `dot(a, b) = Σ aᵢ·conj(bᵢ)` and `⟨Tx, Ax⟩ = dot(Tx, Ax)`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Scalar field an operator is defined over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "real")]
    Real,
    #[serde(rename = "complex")]
    Complex,
}

impl Field {
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
    field: Field,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
            field,
        }
    }

    pub fn identity(n: usize, field: Field) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from a flat row-major slice of complex entries.
    pub fn from_complex(rows: usize, cols: usize, entries: &[C64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Matrix {
            rows,
            cols,
            entries: entries.to_vec(),
            field: Field::Complex,
        }
    }

    /// Build a real-field matrix from a flat row-major slice.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Matrix {
            rows,
            cols,
            entries: entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
            field: Field::Real,
        }
    }

    pub fn diag_real(values: &[f64]) -> Matrix {
        let n = values.len();
        let mut m = Matrix::zeros(n, n, Field::Real);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, C64::new(v, 0.0));
        }
        m
    }

    pub fn diag_complex(values: &[C64]) -> Matrix {
        let n = values.len();
        let mut m = Matrix::zeros(n, n, Field::Complex);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, field: Field, f: impl Fn(usize, usize) -> C64) -> Matrix {
        let mut m = Matrix::zeros(rows, cols, field);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        if v.im != 0.0 {
            self.field = Field::Complex;
        }
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Force the field tag to complex (no entry changes).
    pub fn into_complex(mut self) -> Matrix {
        self.field = Field::Complex;
        self
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.field, |i, j| self.get(j, i))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.field, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols, self.field.join(other.field));
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.entries[i * out.cols + j] = v;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        out.field = self.field.join(other.field);
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        out.field = self.field.join(other.field);
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> Matrix {
        let mut out = self.clone();
        if s.im != 0.0 {
            out.field = Field::Complex;
        }
        for a in out.entries.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "matvec shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * x[j])
                    .sum::<C64>()
            })
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self.set(i, j, v[i]);
        }
    }

    /// Matrix with the given columns.
    pub fn from_cols(cols: &[Vec<C64>], field: Field) -> Matrix {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Matrix::zeros(rows, cols.len(), field);
        for (j, c) in cols.iter().enumerate() {
            m.set_col(j, c);
        }
        m
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// `‖M − M*‖_max`, zero for exactly hermitian matrices.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        // the defect of a hermitian matrix includes the imaginary diagonal,
        // covered above since conj flips it
        worst
    }

    pub fn hermitian_part(&self) -> Matrix {
        assert!(self.is_square());
        let adj = self.adjoint();
        self.add(&adj).scale(C64::new(0.5, 0.0))
    }

    /// Check shape agreement with another operator.
    pub fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols))
        }
    }
}

// -- vector helpers ----------------------------------------------------------

/// Inner product, conjugate-linear in the second argument.
#[inline]
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm2(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn scale_vec(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|z| z * s).collect()
}

pub fn add_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn unit_vec(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[k] = C64::new(1.0, 0.0);
    v
}

// -- JSON encoding -----------------------------------------------------------
//
// {"rows":n,"cols":m,"field":"real"|"complex","entries":[[re,im],...]}
// row-major; real mode also accepts bare numbers.

#[derive(Serialize)]
struct MatrixSer {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<EntrySer>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum EntrySer {
    Bare(f64),
    Pair([f64; 2]),
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|z| match self.field {
                Field::Real => EntrySer::Bare(z.re),
                Field::Complex => EntrySer::Pair([z.re, z.im]),
            })
            .collect();
        MatrixSer {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        }
        .serialize(serializer)
    }
}

#[derive(Deserialize)]
struct MatrixDe {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<EntryDe>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryDe {
    Bare(f64),
    Pair([f64; 2]),
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Matrix, D::Error> {
        let raw = MatrixDe::deserialize(deserializer)?;
        if raw.entries.len() != raw.rows * raw.cols {
            return Err(D::Error::custom(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                raw.rows * raw.cols,
                raw.rows,
                raw.cols,
                raw.entries.len()
            )));
        }
        let mut entries = Vec::with_capacity(raw.entries.len());
        for e in &raw.entries {
            let z = match *e {
                EntryDe::Bare(re) => C64::new(re, 0.0),
                EntryDe::Pair([re, im]) => C64::new(re, im),
            };
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(D::Error::custom("matrix entries must be finite"));
            }
            if raw.field == Field::Real && z.im != 0.0 {
                return Err(D::Error::custom(
                    "real-field matrix has a nonzero imaginary part",
                ));
            }
            entries.push(z);
        }
        Ok(Matrix {
            rows: raw.rows,
            cols: raw.cols,
            entries,
            field: raw.field,
        })
    }
}

pub fn matrix_from_json(text: &str) -> Result<Matrix> {
    serde_json::from_str(text).map_err(|e| Error::InvalidMatrix(e.to_string()))
}
