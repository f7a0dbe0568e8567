//! Gram and Weingarten matrices on S_k, plus the noisy Weingarten
//! coefficients for a gate followed by depolarizing noise on its block.

use crate::error::{check_range, Error, Result};
use crate::perm::{common_fixed_point_list, PermutationTable, MAX_DEGREE};
use crate::replica::ReplicaMatrix;
use nalgebra::DMatrix;

/// Relative eigenvalue cutoff used by the pseudo-inverse when G is singular.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-12;

/// G_σπ(q) = q^{#cycles(σ⁻¹π)}.
pub fn gram_matrix(k: usize, q: u64) -> Result<ReplicaMatrix> {
    let table = PermutationTable::enumerate(k)?;
    Ok(gram_from_table(&table, q as f64))
}

pub(crate) fn gram_from_table(table: &PermutationTable, q: f64) -> ReplicaMatrix {
    let cycles = table.relative_cycle_table();
    let pow: Vec<f64> = (0..=table.degree() as i32).map(|c| q.powi(c)).collect();
    let n = table.len();
    let m = DMatrix::from_fn(n, n, |i, j| pow[cycles[i][j] as usize]);
    ReplicaMatrix::from_matrix(table.degree(), m)
}

/// Weingarten matrix: the inverse of G(q) when q ≥ k, otherwise its
/// Moore–Penrose pseudo-inverse.
pub fn weingarten_matrix(k: usize, q: u64) -> Result<ReplicaMatrix> {
    if q == 0 {
        return Err(Error::OutOfRange { name: "q", value: 0.0, allowed: "q >= 1" });
    }
    let g = gram_matrix(k, q)?;
    weingarten_from_gram(&g, q as usize >= k)
}

fn weingarten_from_gram(g: &ReplicaMatrix, invertible: bool) -> Result<ReplicaMatrix> {
    let k = g.degree();
    let m = g.as_matrix();
    if invertible {
        // G is positive definite for q ≥ k; Cholesky also rejects any
        // numerically indefinite input.
        let inv =
            m.clone().cholesky().ok_or_else(|| Error::Numerical(format!("Gram matrix of degree {k} is not positive definite")))?.inverse();
        let sym = (&inv + inv.transpose()) * 0.5;
        return Ok(ReplicaMatrix::from_matrix(k, sym));
    }
    Ok(ReplicaMatrix::from_matrix(k, symmetric_pseudo_inverse(m, PINV_RELATIVE_CUTOFF)?))
}

/// Pseudo-inverse of a symmetric matrix through its eigendecomposition,
/// discarding eigenvalues below `rel_cutoff · λ_max`.
pub fn symmetric_pseudo_inverse(m: &DMatrix<f64>, rel_cutoff: f64) -> Result<DMatrix<f64>> {
    let eig = m
        .clone()
        .try_symmetric_eigen(1e-15, 10_000)
        .ok_or_else(|| Error::Numerical(format!("symmetric eigensolver did not converge on a {}x{} matrix", m.nrows(), m.ncols())))?;
    let lmax = eig.eigenvalues.amax();
    if !lmax.is_finite() {
        return Err(Error::Numerical("non-finite eigenvalue in pseudo-inverse".into()));
    }
    let cut = rel_cutoff * lmax;
    let inv_vals = eig.eigenvalues.map(|l| if l.abs() > cut { 1.0 / l } else { 0.0 });
    let v = &eig.eigenvectors;
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * inv_vals[j]);
    let p = &scaled * v.transpose();
    Ok((&p + p.transpose()) * 0.5)
}

/// max |q^{−k}G(q) − 1 − A/q|, which shrinks like q^{−2}.
pub fn expansion_residual(k: usize, q: u64) -> Result<f64> {
    let table = PermutationTable::enumerate(k)?;
    let g = gram_from_table(&table, q as f64);
    let a = table.transposition_adjacency();
    let qf = q as f64;
    let n = table.len();
    let r = g.as_matrix() / qf.powi(k as i32) - DMatrix::identity(n, n) - a.as_matrix() / qf;
    Ok(r.amax())
}

/// max |q^{k}Wg(q) − 1 + A/q|, the same expansion on the inverse side.
pub fn weingarten_expansion_residual(k: usize, q: u64) -> Result<f64> {
    let table = PermutationTable::enumerate(k)?;
    let wg = weingarten_matrix(k, q)?;
    let a = table.transposition_adjacency();
    let qf = q as f64;
    let n = table.len();
    let r = wg.as_matrix() * qf.powi(k as i32) - DMatrix::identity(n, n) + a.as_matrix() / qf;
    Ok(r.amax())
}

/// Weingarten matrices of every degree up to some bound, for one q.
///
/// Degree 0 is the scalar 1. Entries are looked up through the class of
/// σ⁻¹π, so a reduced pair only needs its cycle type.
#[derive(Debug)]
pub struct WeingartenFamily {
    q: u64,
    tables: Vec<Option<PermutationTable>>,
    matrices: Vec<Option<ReplicaMatrix>>,
}

impl WeingartenFamily {
    pub fn new(q: u64, max_degree: usize) -> Result<Self> {
        if max_degree > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange { k: max_degree, max: MAX_DEGREE });
        }
        let mut tables = vec![None];
        let mut matrices = vec![None];
        for m in 1..=max_degree {
            let t = PermutationTable::enumerate(m)?;
            matrices.push(Some(weingarten_matrix(m, q)?));
            tables.push(Some(t));
        }
        Ok(Self { q, tables, matrices })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Wg^{(m)}_{π,σ} for two permutations of degree m; m = 0 gives 1.
    pub fn entry(&self, pi: &crate::perm::Permutation, sigma: &crate::perm::Permutation) -> f64 {
        let m = pi.degree();
        let (Some(t), Some(w)) = (&self.tables[m], &self.matrices[m]) else { unreachable!("degree {m} not built") };
        w.get(t.index_of(pi).unwrap(), t.index_of(sigma).unwrap())
    }
}

/// Noisy Weingarten coefficients for a Haar gate on a q-dimensional block
/// followed by depolarizing noise of strength ε on that block:
///
/// W̃g_{π,σ} = Σ_{i=0}^{n_F(π,σ)} C(n_F, i) (ε/q)^i (1−ε)^{k−i} Wg^{(k−i)}(π̃_i, σ̃_i),
///
/// where π̃_i, σ̃_i drop i common fixed points.
pub fn noisy_weingarten(k: usize, q: u64, eps: f64) -> Result<ReplicaMatrix> {
    check_range("eps", eps, 0.0, 1.0, "[0, 1]")?;
    let table = PermutationTable::enumerate(k)?;
    let family = WeingartenFamily::new(q, k)?;
    noisy_weingarten_with(&table, &family, eps)
}

pub fn noisy_weingarten_with(table: &PermutationTable, family: &WeingartenFamily, eps: f64) -> Result<ReplicaMatrix> {
    check_range("eps", eps, 0.0, 1.0, "[0, 1]")?;
    let k = table.degree();
    let q = family.q() as f64;
    let n = table.len();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let pi = table.get(i);
        for j in i..n {
            let sigma = table.get(j);
            let fixed = common_fixed_point_list(pi, sigma)?;
            let v = noisy_entry(pi, sigma, &fixed, family, eps, q, k);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(ReplicaMatrix::from_matrix(k, out))
}

fn noisy_entry(
    pi: &crate::perm::Permutation,
    sigma: &crate::perm::Permutation,
    fixed: &[usize],
    family: &WeingartenFamily,
    eps: f64,
    q: f64,
    k: usize,
) -> f64 {
    let nf = fixed.len();
    let mut total = 0.0;
    for i in 0..=nf {
        let removed = &fixed[..i];
        let w = if i == k {
            1.0
        } else {
            let pr = pi.remove_fixed_points(removed).expect("common fixed point");
            let sr = sigma.remove_fixed_points(removed).expect("common fixed point");
            family.entry(&pr, &sr)
        };
        total += binomial(nf, i) * (eps / q).powi(i as i32) * (1.0 - eps).powi((k - i) as i32) * w;
    }
    total
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gram_examples() {
        let g = gram_matrix(2, 2).unwrap();
        assert_eq!(g.as_matrix(), &DMatrix::from_row_slice(2, 2, &[4.0, 2.0, 2.0, 4.0]));
        let g1 = gram_matrix(4, 1).unwrap();
        assert!(g1.as_matrix().iter().all(|&v| v == 1.0));
        let g35 = gram_matrix(3, 5).unwrap();
        assert!(g35.as_matrix().diagonal().iter().all(|&v| v == 125.0));
    }

    #[test]
    fn weingarten_examples() {
        let w = weingarten_matrix(2, 2).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[4.0, -2.0, -2.0, 4.0]) / 12.0;
        assert_abs_diff_eq!(w.max_abs_diff(&ReplicaMatrix::from_matrix(2, want)), 0.0, epsilon = 1e-15);
        let g = gram_matrix(3, 4).unwrap();
        let w = weingarten_matrix(3, 4).unwrap();
        let id = (&g * &w).into_matrix() - DMatrix::identity(6, 6);
        assert!(id.amax() < 1e-10);
        for q in [1u64, 2, 7] {
            assert_abs_diff_eq!(weingarten_matrix(1, q).unwrap().get(0, 0), 1.0 / q as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn pseudo_inverse_identities() {
        for k in 1..=6 {
            for q in [2u64, 3, 4, 8, 16] {
                let g = gram_matrix(k, q).unwrap();
                let w = weingarten_matrix(k, q).unwrap();
                let gm = g.as_matrix();
                let wm = w.as_matrix();
                let scale_g = gm.amax();
                let scale_w = wm.amax();
                let r1 = (gm * wm * gm - gm).amax() / scale_g;
                let r2 = (wm * gm * wm - wm).amax() / scale_w;
                assert!(r1 < 1e-10, "GWG != G at k={k} q={q}: {r1}");
                assert!(r2 < 1e-10, "WGW != W at k={k} q={q}: {r2}");
            }
        }
    }

    #[test]
    fn gram_is_singular_below_degree() {
        // For q < k the rank of G(q) drops, so the pseudo-inverse path is exercised.
        let g = gram_matrix(3, 2).unwrap();
        let eig = g.as_matrix().clone().symmetric_eigen();
        let lmax = eig.eigenvalues.amax();
        assert!(eig.eigenvalues.iter().any(|&l| l.abs() < 1e-10 * lmax));
    }

    #[test]
    fn expansion_residuals() {
        for q in [2u64, 5, 17, 100] {
            assert_eq!(expansion_residual(2, q).unwrap(), 0.0);
        }
        let r50 = expansion_residual(3, 50).unwrap();
        let r100 = expansion_residual(3, 100).unwrap();
        assert!((r50 / r100 - 4.0).abs() < 0.05, "ratio {}", r50 / r100);
        // C = q²·residual stays bounded over the sweep.
        for k in 3..=5 {
            let c: Vec<f64> = [20u64, 40, 80, 160].iter().map(|&q| expansion_residual(k, q).unwrap() * (q * q) as f64).collect();
            let spread = c.iter().cloned().fold(f64::MIN, f64::max) / c.iter().cloned().fold(f64::MAX, f64::min);
            assert!(spread < 1.2, "k={k}: {c:?}");
        }
        let w50 = weingarten_expansion_residual(3, 50).unwrap();
        let w100 = weingarten_expansion_residual(3, 100).unwrap();
        assert!((w50 / w100 - 4.0).abs() < 0.2, "ratio {}", w50 / w100);
    }

    #[test]
    fn gram_is_class_function() {
        let t = PermutationTable::enumerate(4).unwrap();
        let g = gram_matrix(4, 3).unwrap();
        let c = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let ci = c.inverse();
        for (i, s) in t.elements().iter().enumerate() {
            for (j, p) in t.elements().iter().enumerate() {
                let si = t.index_of(&c.compose(s).compose(&ci)).unwrap();
                let pj = t.index_of(&c.compose(p).compose(&ci)).unwrap();
                assert_eq!(g.get(i, j), g.get(si, pj));
            }
        }
    }

    #[test]
    fn noisy_reduces_to_clean_at_zero() {
        for k in 1..=4 {
            let a = noisy_weingarten(k, 5, 0.0).unwrap();
            let b = weingarten_matrix(k, 5).unwrap();
            assert_eq!(a.max_abs_diff(&b), 0.0);
        }
    }

    #[test]
    fn noisy_k1_is_trace_map() {
        for eps in [0.0, 0.3, 1.0] {
            let w = noisy_weingarten(1, 6, eps).unwrap();
            assert_abs_diff_eq!(w.get(0, 0), 1.0 / 6.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn removed_fixed_point_choice_is_immaterial() {
        let fam = WeingartenFamily::new(7, 5).unwrap();
        let pi2 = Permutation::new(vec![0, 1, 3, 2, 4]).unwrap();
        let sigma2 = Permutation::new(vec![0, 1, 3, 2, 4]).unwrap();
        let fixed = common_fixed_point_list(&pi2, &sigma2).unwrap();
        assert_eq!(fixed, vec![0, 1, 4]);
        let a = fam.entry(&pi2.remove_fixed_points(&[0, 1]).unwrap(), &sigma2.remove_fixed_points(&[0, 1]).unwrap());
        let b = fam.entry(&pi2.remove_fixed_points(&[1, 4]).unwrap(), &sigma2.remove_fixed_points(&[1, 4]).unwrap());
        let c = fam.entry(&pi2.remove_fixed_points(&[0, 4]).unwrap(), &sigma2.remove_fixed_points(&[0, 4]).unwrap());
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn noisy_is_polynomial_in_eps() {
        // Degree-k polynomial: the (k+1)-th finite difference vanishes.
        let k = 3;
        let h = 0.1;
        let ws: Vec<ReplicaMatrix> = (0..=k + 1).map(|i| noisy_weingarten(k, 4, 0.2 + h * i as f64).unwrap()).collect();
        let n = ws[0].dim();
        for a in 0..n {
            for b in 0..n {
                let vals: Vec<f64> = ws.iter().map(|w| w.get(a, b)).collect();
                let d4 = vals[0] - 4.0 * vals[1] + 6.0 * vals[2] - 4.0 * vals[3] + vals[4];
                assert!(d4.abs() < 1e-12 * vals.iter().map(|v| v.abs()).fold(1e-3, f64::max));
            }
        }
    }

    #[test]
    fn noisy_matches_haar_monte_carlo() {
        // E_U[Π_r ⟨0|Φ_U(|a_r⟩⟨a_r|)|0⟩] for Φ_U = depolarizing ∘ U against
        // Σ W̃g_{πσ} Tr(P_π† X) Tr(|00⟩⟨00| P_σ), with X = |a⟩⟨a| ⊗ |b⟩⟨b|.
        use crate::mc::{jackknife_mean, sample_haar_state, sample_haar_unitary};
        use rand::SeedableRng;
        let (q, eps) = (4usize, 0.1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let a = sample_haar_state(q, &mut rng);
        let b = sample_haar_state(q, &mut rng);
        let overlap = a.dotc(&b).norm_sqr();
        let w = noisy_weingarten(2, q as u64, eps).unwrap();
        let inputs = [1.0, overlap];
        let want: f64 = (0..2).flat_map(|p| (0..2).map(move |s| (p, s))).map(|(p, s)| w.get(p, s) * inputs[p]).sum();
        let xs: Vec<f64> = (0..100_000)
            .map(|_| {
                let u = sample_haar_unitary(q, &mut rng);
                let pa = (1.0 - eps) * (u.row(0) * &a)[0].norm_sqr() + eps / q as f64;
                let pb = (1.0 - eps) * (u.row(0) * &b)[0].norm_sqr() + eps / q as f64;
                pa * pb
            })
            .collect();
        let g: Vec<usize> = (0..xs.len()).collect();
        let (m, se) = jackknife_mean(&xs, &g);
        assert!((m - want).abs() < 3.0 * se, "{m} ± {se} vs {want}");
    }
}
