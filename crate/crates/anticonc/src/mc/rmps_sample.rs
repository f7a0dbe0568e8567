//! Bitstring overlaps w = D⟨x|ρ|x⟩ of sampled staircase RMPS.
//!
//! Gate j = 1..L (L = N − r) is a Haar isometry V_j from the incoming bond
//! (χ) to the pair (output qudit j−1, outgoing bond), stored as a dχ×χ
//! matrix with rows s·χ + b. Its χ×χ row blocks A_s propagate the bond
//! once qudit j−1 is fixed to s. The last gate keeps all r+1 qudits and its
//! row t is the big-endian index of qudits L−1..N−1.
//!
//! All quantities are rescaled by a factor d per step, so a noiseless
//! overlap is |v'·B_{L−1}⋯B_1 e_0|² with B = √d A and v' = √(dχ)·row t of V_L.
//!
//! Ladder noise (depolarizing on each gate's dχ block) turns the pure bond
//! vector into a χ×χ operator obeying
//!
//!   Ê_j = B_j Ê_{j−1} B_j† + c_j 1,   c_j = ε Tr Ê_{j−1} / χ,
//!
//! with B_j = √((1−ε)d) A_{x_{j−1}}, and w = (1−ε)(V'ÊV'†)_tt + ε Tr Ê.
//! Unrolling the recursion, the readout needs only backward row vectors
//! ρ_m = v'B_{L−1}⋯B_{m+1}, which are exact, and the traces Tr Ê_j. Those
//! follow Tr Ê_j = Tr Ê_{j−1} + Tr[(B_j†B_j − 1 + ε)Ê_{j−1}], whose last
//! term is estimated without bias from random-phase probes u ← B u + √(c/K) g
//! with g_i uniform on {±1, ±i}.
//! The probes only see the small fluctuation B†B − (1−ε), not the bulk of
//! the trace.

use super::haar::haar_isometry;
use super::RandomStream;
use crate::channels::{projected_adjoint, CMatrix, C64};
use crate::cmat::SplitMatrix;
use crate::error::{Error, Result};
use crate::rmps::{RmpsSpec, RmpsVariant};
use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Memory cap for the stored isometries of one circuit.
const MAX_CIRCUIT_BYTES: usize = 1 << 31;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapSample {
    pub w: f64,
    pub circuit: u64,
    /// Measured digits, qudit 0 first.
    pub bitstring: Vec<u8>,
}

impl OverlapSample {
    pub fn bitstring_string(&self) -> String {
        self.bitstring.iter().map(|&x| char::from_digit(x as u32, 36).unwrap_or('?')).collect()
    }
}

/// How the ladder variant evaluates the mixed bond operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LadderMethod {
    /// Full χ×χ recursion per bitstring. Cost O(Nχ³) per sample.
    Exact,
    /// Exact readout rows plus `probes` random-phase trace probes.
    /// Cost O(N(K+2)χ²) per sample; unbiased.
    Probes { probes: usize },
}

impl Default for LadderMethod {
    fn default() -> Self {
        LadderMethod::Probes { probes: 4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub n_circuits: usize,
    pub n_bitstrings: usize,
    #[serde(default)]
    pub ladder_method: LadderMethod,
}

/// The isometries of one sampled circuit.
#[derive(Clone, Debug)]
pub struct Staircase {
    pub n: usize,
    pub d: usize,
    pub chi: usize,
    pub gates: Vec<CMatrix>,
}

impl Staircase {
    pub fn sample<R: Rng + ?Sized>(n: usize, d: usize, chi: usize, rng: &mut R) -> Self {
        let r = (chi as f64).log(d as f64).round() as usize;
        let gates = (0..n - r).map(|_| haar_isometry(d * chi, chi, rng)).collect();
        Self { n, d, chi, gates }
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    fn block(&self, gate: usize, s: usize) -> CMatrix {
        self.gates[gate].rows(s * self.chi, self.chi).into_owned()
    }

    /// Index of the last gate's output row for a full bitstring.
    fn final_row(&self, bits: &[u8]) -> usize {
        bits[self.num_gates() - 1..].iter().fold(0, |acc, &x| acc * self.d + x as usize)
    }
}

/// Full state vector of a staircase, big-endian over qudits (small N only).
pub fn staircase_amplitudes(st: &Staircase) -> Result<DVector<C64>> {
    let dim = (st.d as f64).powi(st.n as i32);
    if dim > (1u64 << 26) as f64 {
        return Err(Error::Resource(format!("state of dimension {dim:.0} is too large")));
    }
    let (d, chi) = (st.d, st.chi);
    let l = st.num_gates();
    // One bond vector per fixed prefix.
    let mut bonds: Vec<DVector<C64>> = vec![DVector::from_fn(chi, |i, _| C64::new((i == 0) as u8 as f64, 0.0))];
    for j in 0..l - 1 {
        let blocks: Vec<CMatrix> = (0..d).map(|s| st.block(j, s)).collect();
        bonds = bonds.iter().flat_map(|b| blocks.iter().map(move |a| a * b)).collect();
    }
    let last = &st.gates[l - 1];
    let mut psi = Vec::with_capacity(dim as usize);
    for b in &bonds {
        psi.extend((last * b).iter().copied());
    }
    Ok(DVector::from_vec(psi))
}

fn check_resources(spec: &RmpsSpec) -> Result<()> {
    let chi = spec.chi();
    let bytes = (spec.n - spec.r as usize) * spec.d * chi * chi * 16;
    if bytes > MAX_CIRCUIT_BYTES {
        return Err(Error::Resource(format!("one circuit needs {bytes} bytes of isometries")));
    }
    Ok(())
}

fn random_bits<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..d) as u8).collect()
}

/// Samples `n_circuits` independent circuits and `n_bitstrings` uniform
/// bitstrings per circuit. Circuit c uses the child stream c of `stream`.
pub fn sample_rmps_overlaps(spec: &RmpsSpec, opts: &SampleOptions, stream: RandomStream) -> Result<Vec<OverlapSample>> {
    check_resources(spec)?;
    if opts.n_circuits == 0 || opts.n_bitstrings == 0 {
        return Err(Error::Invalid("need at least one circuit and one bitstring".into()));
    }
    if let LadderMethod::Probes { probes: 0 } = opts.ladder_method {
        return Err(Error::Invalid("probe method needs at least one probe".into()));
    }
    let per_circuit: Vec<Result<Vec<OverlapSample>>> =
        (0..opts.n_circuits).into_par_iter().map(|c| sample_circuit(spec, opts, stream.child(c as u64), c as u64)).collect();
    let mut out = Vec::with_capacity(opts.n_circuits * opts.n_bitstrings);
    for r in per_circuit {
        out.extend(r?);
    }
    Ok(out)
}

fn sample_circuit(spec: &RmpsSpec, opts: &SampleOptions, stream: RandomStream, circuit: u64) -> Result<Vec<OverlapSample>> {
    let mut rng = stream.rng();
    let st = Staircase::sample(spec.n, spec.d, spec.chi(), &mut rng);
    let bits: Vec<Vec<u8>> = (0..opts.n_bitstrings).map(|_| random_bits(spec.n, spec.d, &mut rng)).collect();
    let ws = match &spec.variant {
        RmpsVariant::Physical(ch) => {
            let rhos: Vec<CMatrix> = (0..spec.d).map(|x| projected_adjoint(ch, x).map(|p| p.rho)).collect::<Result<_>>()?;
            bits.iter().map(|b| physical_overlap(&st, &rhos, b)).collect()
        }
        RmpsVariant::Ladder { eps } => match opts.ladder_method {
            LadderMethod::Exact => bits.iter().map(|b| ladder_overlap_exact(&st, *eps, b)).collect(),
            LadderMethod::Probes { probes } => {
                // Probe noise comes from its own stream so that the circuit
                // and bitstrings do not depend on the probe count.
                let mut probe_rng = stream.child(u64::MAX).rng();
                ladder_overlaps_probed(&st, *eps, &bits, probes, &mut probe_rng)
            }
        },
    };
    Ok(ws.into_iter().zip(bits).map(|(w, bitstring)| OverlapSample { w, circuit, bitstring }).collect())
}

/// Re-evaluates the same circuits and bitstrings with an independent probe
/// stream and returns the RMS relative difference between the two runs,
/// a direct measure of the probe noise in individual overlaps.
pub fn probe_noise_check(spec: &RmpsSpec, opts: &SampleOptions, stream: RandomStream) -> Result<f64> {
    let LadderMethod::Probes { probes } = opts.ladder_method else {
        return Ok(0.0);
    };
    let RmpsVariant::Ladder { eps } = spec.variant else {
        return Ok(0.0);
    };
    let mut acc = 0.0;
    let mut count = 0usize;
    for c in 0..opts.n_circuits {
        let child = stream.child(c as u64);
        let mut rng = child.rng();
        let st = Staircase::sample(spec.n, spec.d, spec.chi(), &mut rng);
        let bits: Vec<Vec<u8>> = (0..opts.n_bitstrings).map(|_| random_bits(spec.n, spec.d, &mut rng)).collect();
        let a = ladder_overlaps_probed(&st, eps, &bits, probes, &mut child.child(u64::MAX).rng());
        let b = ladder_overlaps_probed(&st, eps, &bits, probes, &mut child.child(u64::MAX - 1).rng());
        for (x, y) in a.iter().zip(&b) {
            let m = 0.5 * (x + y);
            if m > 0.0 {
                acc += ((x - y) / m).powi(2);
                count += 1;
            }
        }
    }
    Ok((acc / count.max(1) as f64).sqrt())
}

/// w = D⟨ψ|⊗_i ρ_{x_i}|ψ⟩ by left-to-right contraction of the bond operator.
fn physical_overlap(st: &Staircase, rhos: &[CMatrix], bits: &[u8]) -> f64 {
    let (d, chi) = (st.d, st.chi);
    let l = st.num_gates();
    let df = d as f64;
    // ρ_x = Σ_j λ_j v_j v_j†, so the update is Σ_j λ_j B_j E B_j† with
    // B_j = Σ_b conj(v_jb) A_b.
    let mut e = CMatrix::zeros(chi, chi);
    e[(0, 0)] = C64::new(1.0, 0.0);
    for j in 0..l - 1 {
        let rho = &rhos[bits[j] as usize];
        let eig = rho.clone().symmetric_eigen();
        let mut next = CMatrix::zeros(chi, chi);
        for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam.abs() < 1e-15 {
                continue;
            }
            let mut b = CMatrix::zeros(chi, chi);
            for s in 0..d {
                let c = eig.eigenvectors[(s, idx)].conj();
                if c != C64::new(0.0, 0.0) {
                    b += st.block(j, s) * c;
                }
            }
            next += (&b * &e * b.adjoint()) * C64::new(lam * df, 0.0);
        }
        e = next;
    }
    // Final gate: Tr[(ρ_{x_{L−1}} ⊗ … ⊗ ρ_{x_{N−1}}) V E V†].
    let v = &st.gates[l - 1];
    let out = v * &e * v.adjoint();
    let mut tail = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for &x in &bits[l - 1..] {
        tail = tail.kronecker(&rhos[x as usize]);
    }
    let p: C64 = tail.component_mul(&out.transpose()).sum();
    p.re * (d * chi) as f64
}

fn ladder_overlap_exact(st: &Staircase, eps: f64, bits: &[u8]) -> f64 {
    let (d, chi) = (st.d, st.chi);
    let l = st.num_gates();
    let scale = C64::new(((1.0 - eps) * d as f64).sqrt(), 0.0);
    let mut e = CMatrix::zeros(chi, chi);
    e[(0, 0)] = C64::new(1.0, 0.0);
    for (j, &bit) in bits[..l - 1].iter().enumerate() {
        let b = st.block(j, bit as usize) * scale;
        let c = eps * e.trace().re / chi as f64;
        e = &b * &e * b.adjoint();
        for i in 0..chi {
            e[(i, i)] += c;
        }
    }
    let t = st.final_row(bits);
    let row = st.gates[l - 1].row(t) * C64::new(((d * chi) as f64).sqrt(), 0.0);
    let readout = (&row * &e * row.adjoint())[(0, 0)].re;
    (1.0 - eps) * readout + eps * e.trace().re
}

/// Batched probe evaluation of all bitstrings of one circuit.
fn ladder_overlaps_probed<R: Rng + ?Sized>(st: &Staircase, eps: f64, bits: &[Vec<u8>], k: usize, rng: &mut R) -> Vec<f64> {
    let (d, chi) = (st.d, st.chi);
    let l = st.num_gates();
    let nb = bits.len();
    let width = k + 1;
    let scale = ((1.0 - eps) * d as f64).sqrt();
    let blocks: Vec<Vec<SplitMatrix>> = (0..l - 1)
        .map(|j| {
            (0..d)
                .map(|s| {
                    let mut m = SplitMatrix::from_complex(&st.block(j, s));
                    m.re *= scale;
                    m.im *= scale;
                    m
                })
                .collect()
        })
        .collect();
    let groups = |j: usize| -> Vec<Vec<usize>> {
        let mut g = vec![Vec::new(); d];
        for (b, x) in bits.iter().enumerate() {
            g[x[j] as usize].push(b);
        }
        g
    };

    // Forward: column b·width is the pure part, the next k columns probes.
    let mut state = SplitMatrix::zeros(chi, nb * width);
    for b in 0..nb {
        state.re[(0, b * width)] = 1.0;
    }
    let mut trace = vec![1.0; nb];
    let mut c = vec![vec![0.0; nb]; l];
    let norms = |state: &SplitMatrix, b: usize| -> f64 { (0..width).map(|p| state.column_norm_sqr(b * width + p)).sum() };
    for j in 0..l - 1 {
        let before: Vec<f64> = (0..nb).map(|b| norms(&state, b)).collect();
        for (s, members) in groups(j).iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let cols: Vec<usize> = members.iter().flat_map(|&b| b * width..(b + 1) * width).collect();
            let gathered = gather_columns(&state, &cols);
            let moved = blocks[j][s].mul(&gathered);
            scatter_columns(&mut state, &moved, &cols);
        }
        for b in 0..nb {
            let cj = eps * trace[b] / chi as f64;
            c[j + 1][b] = cj;
            // Tr Ê_j = Tr Ê_{j−1} + Tr[(B†B − (1−ε))Ê_{j−1}]: only the
            // fluctuating second term is left to the probes.
            trace[b] += norms(&state, b) - (1.0 - eps) * before[b];
            // Random phases from {±1, ±i}: E[g g†] = 1 like a complex
            // Gaussian, with no variance from the diagonal.
            let amp = (cj / k as f64).sqrt();
            for p in 1..=k {
                let col = b * width + p;
                let mut bits = 0u64;
                for i in 0..chi {
                    if i % 32 == 0 {
                        bits = rng.random();
                    }
                    let (re, im) = match bits & 3 {
                        0 => (amp, 0.0),
                        1 => (-amp, 0.0),
                        2 => (0.0, amp),
                        _ => (0.0, -amp),
                    };
                    bits >>= 2;
                    state.re[(i, col)] += re;
                    state.im[(i, col)] += im;
                }
            }
        }
    }

    // Backward: column b holds ρ_m† for bitstring b.
    let last = &st.gates[l - 1];
    let vscale = ((d * chi) as f64).sqrt();
    let mut rows = SplitMatrix::zeros(chi, nb);
    for (b, x) in bits.iter().enumerate() {
        let t = st.final_row(x);
        for i in 0..chi {
            let z = last[(t, i)].conj() * vscale;
            rows.re[(i, b)] = z.re;
            rows.im[(i, b)] = z.im;
        }
    }
    let adjoints: Vec<Vec<SplitMatrix>> = blocks.iter().map(|g| g.iter().map(SplitMatrix::adjoint).collect()).collect();
    let mut acc = vec![0.0; nb];
    for m in (1..l).rev() {
        for (b, a) in acc.iter_mut().enumerate() {
            *a += c[m][b] * rows.column_norm_sqr(b);
        }
        for (s, members) in groups(m - 1).iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let gathered = gather_columns(&rows, members);
            let moved = adjoints[m - 1][s].mul(&gathered);
            scatter_columns(&mut rows, &moved, members);
        }
    }
    (0..nb)
        .map(|b| {
            let pure = rows.re[(0, b)].powi(2) + rows.im[(0, b)].powi(2);
            (1.0 - eps) * (pure + acc[b]) + eps * trace[b]
        })
        .collect()
}

fn gather_columns(m: &SplitMatrix, cols: &[usize]) -> SplitMatrix {
    let mut out = SplitMatrix::zeros(m.nrows(), cols.len());
    for (o, &c) in cols.iter().enumerate() {
        out.re.set_column(o, &m.re.column(c));
        out.im.set_column(o, &m.im.column(c));
    }
    out
}

fn scatter_columns(m: &mut SplitMatrix, src: &SplitMatrix, cols: &[usize]) {
    for (o, &c) in cols.iter().enumerate() {
        m.re.set_column(c, &src.re.column(o));
        m.im.set_column(c, &src.im.column(o));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{make_depolarizing, KrausChannel};
    use crate::mc::{empirical_moments, jackknife_mean};
    use crate::rmps::ipr_physical;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn index_of(bits: &[u8], d: usize) -> usize {
        bits.iter().fold(0, |acc, &x| acc * d + x as usize)
    }

    fn all_bits(n: usize, d: usize) -> Vec<Vec<u8>> {
        (0..d.pow(n as u32))
            .map(|mut i| {
                let mut v = vec![0u8; n];
                for q in (0..n).rev() {
                    v[q] = (i % d) as u8;
                    i /= d;
                }
                v
            })
            .collect()
    }

    /// Completes a dχ×χ isometry, whose columns are the inputs with the
    /// fresh qudit in |0⟩, to a unitary on r+1 qudits.
    fn complete(v: &CMatrix, d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let (rows, chi) = v.shape();
        let mut m = CMatrix::zeros(rows, rows);
        for b in 0..chi {
            m.set_column(b, &v.column(b));
        }
        for c in chi..rows {
            m.set_column(c, &haar_isometry(rows, 1, rng).column(0));
        }
        // Gram–Schmidt the filler columns against the fixed ones.
        for c in chi..rows {
            let mut col = m.column(c).into_owned();
            for p in 0..c {
                let proj = m.column(p).dotc(&col);
                col -= m.column(p) * proj;
            }
            let n = col.norm();
            m.set_column(c, &(col / C64::new(n, 0.0)));
        }
        let mut u = CMatrix::zeros(rows, rows);
        // Inputs b·d + f: f = 0 takes the isometry columns.
        let mut filler = chi;
        for i in 0..rows {
            if i % d == 0 {
                u.set_column(i, &m.column(i / d));
            } else {
                u.set_column(i, &m.column(filler));
                filler += 1;
            }
        }
        u
    }

    /// Applies `op` to qudits start..start+m of an N-qudit density matrix.
    fn apply_block(rho: &CMatrix, op: &CMatrix, start: usize, m: usize, d: usize, n: usize) -> CMatrix {
        let left = d.pow(start as u32);
        let right = d.pow((n - start - m) as u32);
        let full = CMatrix::identity(left, left).kronecker(op).kronecker(&CMatrix::identity(right, right));
        &full * rho * full.adjoint()
    }

    /// Full density-matrix simulation of the noisy ladder staircase.
    fn ladder_density_matrix(st: &Staircase, eps: f64, rng: &mut ChaCha8Rng) -> CMatrix {
        let (n, d, chi) = (st.n, st.d, st.chi);
        let r = st.n - st.num_gates();
        let dim = d.pow(n as u32);
        let mut rho = CMatrix::zeros(dim, dim);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        let depol = make_depolarizing(d * chi, eps).unwrap();
        for (j, v) in st.gates.iter().enumerate() {
            let u = complete(v, d, rng);
            rho = apply_block(&rho, &u, j, r + 1, d, n);
            let mut next = CMatrix::zeros(dim, dim);
            for k in depol.kraus_ops() {
                next += apply_block(&rho, k, j, r + 1, d, n);
            }
            rho = next;
        }
        rho
    }

    #[test]
    fn amplitudes_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let st = Staircase::sample(7, 2, 4, &mut rng);
        let psi = staircase_amplitudes(&st).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_ladder_matches_density_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (n, d, chi, eps) = (5, 2, 4, 0.15);
        let st = Staircase::sample(n, d, chi, &mut rng);
        let rho = ladder_density_matrix(&st, eps, &mut rng);
        let dim = d.pow(n as u32) as f64;
        for bits in all_bits(n, d) {
            let want = dim * rho[(index_of(&bits, d), index_of(&bits, d))].re;
            let got = ladder_overlap_exact(&st, eps, &bits);
            assert!((got - want).abs() < 1e-12 * want.max(1.0), "{bits:?}: {got} vs {want}");
        }
        // Noiseless limit reproduces |ψ|².
        let psi = staircase_amplitudes(&st).unwrap();
        for bits in all_bits(n, d) {
            let want = dim * psi[index_of(&bits, d)].norm_sqr();
            assert!((ladder_overlap_exact(&st, 0.0, &bits) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn probes_are_unbiased() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (n, d, chi, eps) = (9, 2, 8, 0.2);
        let st = Staircase::sample(n, d, chi, &mut rng);
        let bits: Vec<Vec<u8>> = (0..4).map(|_| random_bits(n, d, &mut rng)).collect();
        let exact: Vec<f64> = bits.iter().map(|b| ladder_overlap_exact(&st, eps, b)).collect();
        let runs: Vec<Vec<f64>> = (0..2000).map(|_| ladder_overlaps_probed(&st, eps, &bits, 2, &mut rng)).collect();
        for (b, &want) in exact.iter().enumerate() {
            let xs: Vec<f64> = runs.iter().map(|r| r[b]).collect();
            let g: Vec<usize> = (0..xs.len()).collect();
            let (m, se) = jackknife_mean(&xs, &g);
            assert!((m - want).abs() < 4.0 * se + 1e-12, "bitstring {b}: {m} ± {se} vs {want}");
        }
        // Zero noise: the probe path is deterministic and exact.
        let clean = ladder_overlaps_probed(&st, 0.0, &bits, 2, &mut rng);
        for (b, w) in clean.iter().enumerate() {
            assert!((w - ladder_overlap_exact(&st, 0.0, &bits[b])).abs() < 1e-11);
        }
    }

    #[test]
    fn physical_shortcut_matches_density_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (n, d, chi) = (6, 2, 4);
        let ch = crate::channels::make_amplitude_damping(0.3).unwrap();
        let st = Staircase::sample(n, d, chi, &mut rng);
        let psi = staircase_amplitudes(&st).unwrap();
        let mut rho = &psi * psi.adjoint();
        for q in 0..n {
            rho = ch.apply_on_factor(&rho, q, n);
        }
        let rhos: Vec<CMatrix> = (0..d).map(|x| projected_adjoint(&ch, x).unwrap().rho).collect();
        let dim = 64.0;
        for bits in all_bits(n, d) {
            let i = index_of(&bits, d);
            let want = dim * rho[(i, i)].re;
            let got = physical_overlap(&st, &rhos, &bits);
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn identity_channel_second_moment() {
        let spec = RmpsSpec::new(8, 2, 3, RmpsVariant::Physical(KrausChannel::identity(2))).unwrap();
        let opts = SampleOptions { n_circuits: 400, n_bitstrings: 50, ladder_method: LadderMethod::Exact };
        let samples = sample_rmps_overlaps(&spec, &opts, RandomStream::new(10, 0)).unwrap();
        assert!(samples.iter().all(|s| s.w >= 0.0));
        let m = empirical_moments(&samples, 2).unwrap();
        assert!((m[0].value - 1.0).abs() < 3.0 * m[0].std_err);
        let want = ipr_physical(&spec, 2).unwrap() * 256.0;
        assert!((m[1].value - want).abs() < 3.0 * m[1].std_err, "{} ± {} vs {want}", m[1].value, m[1].std_err);
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = RmpsSpec::new(10, 2, 2, RmpsVariant::Ladder { eps: 0.1 }).unwrap();
        let opts = SampleOptions { n_circuits: 3, n_bitstrings: 5, ladder_method: LadderMethod::Probes { probes: 3 } };
        let a = sample_rmps_overlaps(&spec, &opts, RandomStream::new(5, 1)).unwrap();
        let b = sample_rmps_overlaps(&spec, &opts, RandomStream::new(5, 1)).unwrap();
        assert_eq!(a, b);
        let noise = probe_noise_check(&spec, &opts, RandomStream::new(5, 1)).unwrap();
        assert!(noise > 0.0 && noise < 0.5, "{noise}");
    }
}
