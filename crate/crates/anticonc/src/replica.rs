use crate::perm::{factorial, ConjugacyClasses};
use nalgebra::{DMatrix, DVector};
use std::io::{self, Write};
use std::ops::Mul;

/// Dense real k!×k! matrix indexed by the lexicographic table of S_k.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicaMatrix {
    k: usize,
    mat: DMatrix<f64>,
}

impl ReplicaMatrix {
    pub fn from_matrix(k: usize, mat: DMatrix<f64>) -> Self {
        let n = factorial(k);
        assert_eq!(mat.shape(), (n, n), "replica matrix of degree {k} must be {n}x{n}");
        Self { k, mat }
    }

    pub fn from_diagonal(k: usize, diag: &DVector<f64>) -> Self {
        Self::from_matrix(k, DMatrix::from_diagonal(diag))
    }

    pub fn identity(k: usize) -> Self {
        let n = factorial(k);
        Self { k, mat: DMatrix::identity(n, n) }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.mat[(i, j)] == 0.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).amax()
    }

    /// Collapses a matrix that commutes with simultaneous conjugation onto
    /// the space of class functions: `out[C, C'] = Σ_{π ∈ C'} M[rep(C), π]`.
    pub fn lump(&self, classes: &ConjugacyClasses) -> DMatrix<f64> {
        let c = classes.len();
        DMatrix::from_fn(c, c, |a, b| {
            let r = classes.representative(a);
            classes.members[b].iter().map(|&j| self.mat[(r, j)]).sum()
        })
    }

    /// Writes the matrix as CSV, rows and columns in table order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim()).map(|j| format!("{:.17e}", self.mat[(i, j)])).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

impl Mul for &ReplicaMatrix {
    type Output = ReplicaMatrix;

    fn mul(self, rhs: &ReplicaMatrix) -> ReplicaMatrix {
        assert_eq!(self.k, rhs.k);
        ReplicaMatrix { k: self.k, mat: &self.mat * &rhs.mat }
    }
}

pub fn ones(k: usize) -> DVector<f64> {
    DVector::from_element(factorial(k), 1.0)
}
