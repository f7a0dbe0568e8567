//! Complex matrices stored as separate real and imaginary parts, so that
//! products run through the optimized real GEMM kernel.

use crate::channels::{CMatrix, C64};
use nalgebra::DMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct SplitMatrix {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl SplitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { re: DMatrix::zeros(rows, cols), im: DMatrix::zeros(rows, cols) }
    }

    pub fn from_complex(m: &CMatrix) -> Self {
        Self { re: m.map(|z| z.re), im: m.map(|z| z.im) }
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.re.nrows(), self.re.ncols(), |i, j| C64::new(self.re[(i, j)], self.im[(i, j)]))
    }

    pub fn nrows(&self) -> usize {
        self.re.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.re.ncols()
    }

    /// self · rhs.
    pub fn mul(&self, rhs: &SplitMatrix) -> SplitMatrix {
        let mut out = SplitMatrix::zeros(self.nrows(), rhs.ncols());
        self.mul_into(rhs, &mut out);
        out
    }

    pub fn mul_into(&self, rhs: &SplitMatrix, out: &mut SplitMatrix) {
        out.re.gemm(1.0, &self.re, &rhs.re, 0.0);
        out.re.gemm(-1.0, &self.im, &rhs.im, 1.0);
        out.im.gemm(1.0, &self.re, &rhs.im, 0.0);
        out.im.gemm(1.0, &self.im, &rhs.re, 1.0);
    }

    /// self† · rhs. The transpose is materialized first so the product
    /// runs through the same blocked kernel as `mul`.
    pub fn adjoint_mul(&self, rhs: &SplitMatrix) -> SplitMatrix {
        self.adjoint().mul(rhs)
    }

    pub fn adjoint(&self) -> SplitMatrix {
        SplitMatrix { re: self.re.transpose(), im: -self.im.transpose() }
    }

    /// Rows `start..start+len` as a new matrix.
    pub fn rows(&self, start: usize, len: usize) -> SplitMatrix {
        SplitMatrix { re: self.re.rows(start, len).into_owned(), im: self.im.rows(start, len).into_owned() }
    }

    /// Squared Euclidean norm of column j.
    pub fn column_norm_sqr(&self, j: usize) -> f64 {
        self.re.column(j).norm_squared() + self.im.column(j).norm_squared()
    }
}
