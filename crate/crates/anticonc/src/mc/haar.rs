use crate::channels::{CMatrix, C64};
use crate::cmat::SplitMatrix;
use crate::error::{check_range, Error, Result};
use crate::mc::{OverlapSample, RandomStream};
use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of diag(R) moved into Q.
pub fn sample_haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    haar_isometry(dim, dim, rng)
}

/// Haar-distributed isometry with `cols` orthonormal columns in C^rows
/// (the first `cols` columns of a Haar unitary).
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(cols <= rows && cols > 0);
    let z = CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng));
    if rows >= 2 * cols && cols >= 16 {
        if let Some(q) = cholesky_qr(&z) {
            return q;
        }
    }
    householder_qr(z)
}

fn householder_qr(z: CMatrix) -> CMatrix {
    let cols = z.ncols();
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let n = d.norm();
        let phase = if n > 0.0 { d / n } else { C64::new(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Q = Z R⁻¹ with Z†Z = R†R. R has a positive diagonal, so Q is the same
/// matrix the phase-corrected Householder QR would return. Used for tall
/// matrices where Z†Z is well conditioned.
fn cholesky_qr(z: &CMatrix) -> Option<CMatrix> {
    let sz = SplitMatrix::from_complex(z);
    let gram = sz.adjoint_mul(&sz).to_complex();
    // Z†Z = L L†, so R = L† and Q = Z L⁻†.
    let l = gram.cholesky()?.unpack();
    let n = l.nrows();
    let linv = l.solve_lower_triangular(&CMatrix::identity(n, n))?;
    Some(sz.mul(&SplitMatrix::from_complex(&linv.adjoint())).to_complex())
}

/// Normalized complex Gaussian vector, uniformly distributed on the sphere.
pub fn sample_haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| complex_gaussian(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Rescaled noisy probabilities w = D[(1−ε)|ψ_x|² + ε/D] of `n_states`
/// Haar states on `qubits` qubits under global depolarizing noise ε. State
/// c is drawn from `stream.child(c)` and every basis string is kept.
pub fn sample_haar_global(qubits: usize, eps_glob: f64, n_states: usize, stream: RandomStream) -> Result<Vec<OverlapSample>> {
    check_range("eps_glob", eps_glob, 0.0, 1.0, "[0, 1]")?;
    if qubits == 0 || qubits > 24 {
        return Err(Error::Resource(format!("Haar states are limited to 1..=24 qubits, got {qubits}")));
    }
    let dim = 1usize << qubits;
    let mut out = Vec::with_capacity(dim * n_states);
    for c in 0..n_states as u64 {
        let psi = sample_haar_state(dim, &mut stream.child(c).rng());
        out.extend(psi.iter().enumerate().map(|(x, z)| OverlapSample {
            w: (1.0 - eps_glob) * dim as f64 * z.norm_sqr() + eps_glob,
            circuit: c,
            bitstring: (0..qubits).rev().map(|b| ((x >> b) & 1) as u8).collect(),
        }));
    }
    Ok(out)
}


#[cfg(test)]
mod global_tests {
    use super::*;

    #[test]
    fn global_noise_shifts_every_probability() {
        let stream = RandomStream::new(9, 0);
        let clean = sample_haar_global(6, 0.0, 3, stream).unwrap();
        let noisy = sample_haar_global(6, 0.25, 3, stream).unwrap();
        assert_eq!(clean.len(), 3 * 64);
        for (a, b) in clean.iter().zip(&noisy) {
            assert!((b.w - (0.75 * a.w + 0.25)).abs() < 1e-12);
            assert_eq!(a.bitstring.len(), 6);
        }
        let total: f64 = clean.iter().filter(|s| s.circuit == 1).map(|s| s.w).sum();
        assert!((total - 64.0).abs() < 1e-9);
        assert!(sample_haar_global(6, 1.5, 1, stream).is_err());
    }
}
