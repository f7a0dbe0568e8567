//! Exact circuit-averaged XEB and low moments of noisy brickwall circuits.
//!
//! After averaging every gate, the replicated state is a combination of
//! product states ⊗_i |σ_i⟩⟩ with one permutation label per site. The
//! contraction keeps a dense weight vector over these labels (k!^N
//! entries). Single-site noise between gates is deferred and absorbed in
//! the next gate's input overlaps ⟨⟨π|𝒩^m|σ⟩⟩. Two-site noise is applied
//! right after the gate as a linear map on the pair's labels; it must keep
//! the span of permutation states invariant, which holds for depolarizing
//! noise and is checked numerically for any other channel.

use crate::channels::{make_amplitude_damping, make_depolarizing, CMatrix, ChannelKind, KrausChannel, C64};
use crate::error::{check_range, Error, Result};
use crate::perm::{Permutation, PermutationTable};
use crate::replica::ReplicaMatrix;
use crate::weingarten::{gram_matrix, symmetric_pseudo_inverse, weingarten_matrix, PINV_RELATIVE_CUTOFF};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest weight vector the contraction will allocate.
pub const MAX_LATTICE_STATES: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoisePlacement {
    /// A two-qudit channel after every gate.
    #[default]
    TwoSitePerGate,
    /// A single-qudit channel on every qudit after every layer, idle
    /// boundary qudits included.
    OneSitePerQuditPerLayer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BrickwallSpec {
    pub n: usize,
    pub t: usize,
    pub d: usize,
    pub noise: ChannelKind,
    #[serde(default)]
    pub placement: NoisePlacement,
    pub rate: f64,
}

impl BrickwallSpec {
    pub fn new(n: usize, t: usize, d: usize, noise: ChannelKind, placement: NoisePlacement, rate: f64) -> Result<Self> {
        let s = Self { n, t, d, noise, placement, rate };
        s.validate()?;
        Ok(s)
    }

    /// Depolarizing noise after every gate at ε = η₀/(N t).
    pub fn depolarizing_per_gate(n: usize, t: usize, d: usize, eta0: f64) -> Result<Self> {
        Self::new(n, t, d, ChannelKind::Depolarizing, NoisePlacement::TwoSitePerGate, eta0 / (n * t) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n % 2 != 0 {
            return Err(Error::Invalid(format!("brickwall needs an even N >= 2, got {}", self.n)));
        }
        if self.t == 0 {
            return Err(Error::Invalid("depth must be at least 1".into()));
        }
        if self.d < 2 {
            return Err(Error::Invalid(format!("local dimension must be at least 2, got {}", self.d)));
        }
        check_range("rate", self.rate, 0.0, 1.0, "[0, 1]")?;
        Ok(())
    }

    /// Gate pairs of layer `layer` (0-based): even layers start at qudit 0.
    pub fn layer_pairs(&self, layer: usize) -> Vec<(usize, usize)> {
        let start = layer % 2;
        (start..self.n - 1).step_by(2).map(|i| (i, i + 1)).collect()
    }

    /// The channel inserted at each noise location (acting on d² for
    /// two-site placement, d for single-site).
    pub fn channel(&self) -> Result<KrausChannel> {
        let q = match self.placement {
            NoisePlacement::TwoSitePerGate => self.d * self.d,
            NoisePlacement::OneSitePerQuditPerLayer => self.d,
        };
        match self.noise {
            ChannelKind::Identity => Ok(KrausChannel::identity(q)),
            ChannelKind::Depolarizing => make_depolarizing(q, self.rate),
            ChannelKind::AmplitudeDamping => {
                if self.d != 2 {
                    return Err(Error::Invalid("amplitude damping needs d = 2".into()));
                }
                let ad = make_amplitude_damping(self.rate)?;
                match self.placement {
                    NoisePlacement::OneSitePerQuditPerLayer => Ok(ad),
                    NoisePlacement::TwoSitePerGate => {
                        let ops = ad.kraus_ops().iter().flat_map(|a| ad.kraus_ops().iter().map(move |b| a.kronecker(b))).collect();
                        KrausChannel::new(4, ops, format!("amplitude_damping^2(gamma={})", self.rate))
                    }
                }
            }
        }
    }

    pub fn noise_label(&self) -> String {
        let kind = match self.noise {
            ChannelKind::Identity => "identity",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::AmplitudeDamping => "amplitude_damping",
        };
        let place = match self.placement {
            NoisePlacement::TwoSitePerGate => "two_site",
            NoisePlacement::OneSitePerQuditPerLayer => "one_site",
        };
        format!("{kind}_{place}")
    }
}

/// Haar average of one two-qudit gate: Σ_{π,σ} Wg_{πσ}(d²) |σ⟩⟩⟨⟨π|, with
/// |σ⟩⟩ on the pair equal to |σ⟩⟩_d ⊗ |σ⟩⟩_d.
#[derive(Clone, Debug)]
pub struct GateDecomposition {
    pub k: usize,
    pub d: usize,
    pub wg: ReplicaMatrix,
}

impl GateDecomposition {
    pub fn coefficient(&self, pi: usize, sigma: usize) -> f64 {
        self.wg.get(pi, sigma)
    }
}

pub fn averaged_gate_decomposition(k: usize, d: usize) -> Result<GateDecomposition> {
    if !(1..=3).contains(&k) {
        return Err(Error::DegreeOutOfRange { k, max: 3 });
    }
    Ok(GateDecomposition { k, d, wg: weingarten_matrix(k, (d * d) as u64)? })
}

/// J_{πσ} = ⟨⟨π|𝒩_mask|σ⟩⟩ for one site.
#[derive(Clone, Debug)]
pub struct SiteNoiseMatrix {
    pub mask: Vec<bool>,
    pub j: ReplicaMatrix,
}

/// Permutation operator P_σ on (C^q)^{⊗k}: |i_1…i_k⟩ ↦ |i_{σ⁻¹(1)}…i_{σ⁻¹(k)}⟩.
fn permutation_operator(sigma: &Permutation, q: usize) -> CMatrix {
    let k = sigma.degree();
    let dim = q.pow(k as u32);
    let mut m = CMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; k];
    for input in 0..dim {
        let mut rem = input;
        for r in (0..k).rev() {
            digits[r] = rem % q;
            rem /= q;
        }
        let out = (0..k).fold(0, |acc, r| acc * q + digits[sigma.inverse().apply(r)]);
        m[(out, input)] = C64::new(1.0, 0.0);
    }
    m
}

/// Two-site permutation operator in replica-major order, so that factor r
/// of (C^{d²})^{⊗k} is the pair (site a, site b) of replica r.
fn pair_permutation_operator(sa: &Permutation, sb: &Permutation, d: usize) -> CMatrix {
    let k = sa.degree();
    let q = d * d;
    let dim = q.pow(k as u32);
    let mut m = CMatrix::zeros(dim, dim);
    let mut a = vec![0usize; k];
    let mut b = vec![0usize; k];
    let (ia, ib) = (sa.inverse(), sb.inverse());
    for input in 0..dim {
        let mut rem = input;
        for r in (0..k).rev() {
            let pair = rem % q;
            rem /= q;
            a[r] = pair / d;
            b[r] = pair % d;
        }
        let out = (0..k).fold(0, |acc, r| acc * q + a[ia.apply(r)] * d + b[ib.apply(r)]);
        m[(out, input)] = C64::new(1.0, 0.0);
    }
    m
}

fn apply_masked(channel: &KrausChannel, x: &CMatrix, mask: &[bool]) -> CMatrix {
    let mut y = x.clone();
    for (r, &noisy) in mask.iter().enumerate() {
        if noisy {
            y = channel.apply_on_factor(&y, r, mask.len());
        }
    }
    y
}

fn hs_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn check_mask(k: usize, mask: &[bool]) -> Result<()> {
    if mask.len() != k {
        return Err(Error::Invalid(format!("replica mask has length {} but k = {k}", mask.len())));
    }
    Ok(())
}

/// Single-site noise matrix with the channel applied `power` times.
fn site_noise_power(channel: &KrausChannel, table: &PermutationTable, mask: &[bool], power: usize) -> ReplicaMatrix {
    let q = channel.dim();
    let ops: Vec<CMatrix> = table.elements().iter().map(|p| permutation_operator(p, q)).collect();
    let images: Vec<CMatrix> = ops.iter().map(|p| (0..power).fold(p.clone(), |acc, _| apply_masked(channel, &acc, mask))).collect();
    let n = table.len();
    ReplicaMatrix::from_matrix(table.degree(), DMatrix::from_fn(n, n, |i, j| hs_inner(&ops[i], &images[j])))
}

pub fn site_noise_matrix(channel: &KrausChannel, k: usize, mask: &[bool], d: usize) -> Result<SiteNoiseMatrix> {
    check_mask(k, mask)?;
    if channel.dim() != d {
        return Err(Error::Invalid(format!("channel dimension {} does not match d = {d}", channel.dim())));
    }
    let table = PermutationTable::enumerate(k)?;
    Ok(SiteNoiseMatrix { mask: mask.to_vec(), j: site_noise_power(channel, &table, mask, 1) })
}

/// Final contraction f^{(m)}(σ) = Σ_x ⟨x…x|𝒩^m(P_σ)|x…x⟩.
fn final_vector(channel: &KrausChannel, table: &PermutationTable, mask: &[bool], power: usize) -> Vec<f64> {
    let q = channel.dim();
    let k = table.degree();
    let diag: Vec<usize> = (0..q).map(|x| (0..k).fold(0, |acc, _| acc * q + x)).collect();
    table
        .elements()
        .iter()
        .map(|p| {
            let img = (0..power).fold(permutation_operator(p, q), |acc, _| apply_masked(channel, &acc, mask));
            diag.iter().map(|&i| img[(i, i)].re).sum()
        })
        .collect()
}

/// Linear map on pair labels (row = output (τa,τb), column = input (σa,σb))
/// realizing the two-site channel on the masked replicas.
fn pair_noise_matrix(channel: &KrausChannel, table: &PermutationTable, mask: &[bool], d: usize) -> Result<DMatrix<f64>> {
    let l = table.len();
    let basis: Vec<CMatrix> = (0..l * l).map(|i| pair_permutation_operator(table.get(i / l), table.get(i % l), d)).collect();
    let gram = DMatrix::from_fn(l * l, l * l, |i, j| hs_inner(&basis[i], &basis[j]));
    // For d < k the pair states are linearly dependent; any solution of the
    // normal equations represents the same operator.
    let pinv = symmetric_pseudo_inverse(&gram, PINV_RELATIVE_CUTOFF)?;
    let mut out = DMatrix::zeros(l * l, l * l);
    for (col, p) in basis.iter().enumerate() {
        let img = apply_masked(channel, p, mask);
        let rhs = nalgebra::DVector::from_iterator(l * l, basis.iter().map(|b| hs_inner(b, &img)));
        let coef = &pinv * rhs;
        let mut recon = CMatrix::zeros(img.nrows(), img.ncols());
        for (c, b) in coef.iter().zip(&basis) {
            recon += b * C64::new(*c, 0.0);
        }
        let resid = (&recon - &img).norm() / img.norm().max(1.0);
        if resid > 1e-10 {
            return Err(Error::Unsupported(format!(
                "channel '{}' does not preserve permutation states on a gate pair (residual {resid:.2e})",
                channel.label()
            )));
        }
        out.set_column(col, &coef);
    }
    Ok(out)
}

/// Σ_x E[Π_r p_r(x)] · D^{k−1}, where replica r carries noise iff mask[r].
/// With k = 2 and one noisy replica this is 1 + XEB.
pub fn replica_contraction(spec: &BrickwallSpec, k: usize, mask: &[bool]) -> Result<f64> {
    spec.validate()?;
    check_mask(k, mask)?;
    let gate = averaged_gate_decomposition(k, spec.d)?;
    let table = PermutationTable::enumerate(k)?;
    let l = table.len();
    let states = (l as f64).powi(spec.n as i32);
    if states > MAX_LATTICE_STATES as f64 {
        return Err(Error::Resource(format!("{l}^{} labels exceed the cap of {MAX_LATTICE_STATES}", spec.n)));
    }
    let channel = spec.channel()?;
    let noiseless = matches!(spec.noise, ChannelKind::Identity) || spec.rate == 0.0 || !mask.iter().any(|&m| m);
    let d = spec.d;
    let identity_label = 0;

    // Input overlaps for each pending-noise count. Count 0 is the Gram
    // matrix; a fresh site (|0…0⟩) overlaps 1 with every π.
    let mut site_j: Vec<ReplicaMatrix> = vec![gram_matrix(k, d as u64)?];
    let pair_noise = match (spec.placement, noiseless) {
        (NoisePlacement::TwoSitePerGate, false) => Some(pair_noise_matrix(&channel, &table, mask, d)?),
        _ => None,
    };
    let one_site = !noiseless && spec.placement == NoisePlacement::OneSitePerQuditPerLayer;

    let n = spec.n;
    let mut weights = vec![0.0; states as usize];
    weights[0] = 1.0; // all sites carry the identity label, marked fresh
    let mut fresh = vec![true; n];
    let mut pending = vec![0usize; n];
    let stride = |i: usize| l.pow((n - 1 - i) as u32);

    for layer in 0..spec.t {
        for (a, b) in spec.layer_pairs(layer) {
            for &s in &[a, b] {
                while site_j.len() <= pending[s] {
                    let m = site_j.len();
                    site_j.push(site_noise_power(&channel, &table, mask, m));
                }
            }
            // K(σ; x, y) = Σ_π Wg_{πσ} J_a(π, x) J_b(π, y)
            let overlap = |site: usize, pi: usize, x: usize| -> f64 {
                if fresh[site] {
                    (x == identity_label) as u8 as f64
                } else {
                    site_j[pending[site]].get(pi, x)
                }
            };
            let mut kernel = vec![0.0; l * l * l];
            for sigma in 0..l {
                for x in 0..l {
                    for y in 0..l {
                        kernel[(sigma * l + x) * l + y] =
                            (0..l).map(|pi| gate.coefficient(pi, sigma) * overlap(a, pi, x) * overlap(b, pi, y)).sum();
                    }
                }
            }
            let mut map = DMatrix::zeros(l * l, l * l);
            for sigma in 0..l {
                for xy in 0..l * l {
                    map[(sigma * l + sigma, xy)] = kernel[sigma * l * l + xy];
                }
            }
            if let Some(noise) = &pair_noise {
                map = noise * map;
            }
            apply_pair(&mut weights, &map, stride(a), l);
            fresh[a] = false;
            fresh[b] = false;
            pending[a] = 0;
            pending[b] = 0;
        }
        if one_site {
            for p in pending.iter_mut() {
                *p += 1;
            }
        }
    }

    let finals: Vec<Vec<f64>> = {
        let max_m = pending.iter().copied().max().unwrap_or(0);
        let ch = if one_site { channel.clone() } else { KrausChannel::identity(d) };
        (0..=max_m).map(|m| final_vector(&ch, &table, mask, m)).collect()
    };
    let total: f64 = weights
        .par_iter()
        .enumerate()
        .map(|(idx, &w)| {
            if w == 0.0 {
                return 0.0;
            }
            let mut rem = idx;
            let mut prod = w;
            for i in (0..n).rev() {
                prod *= finals[pending[i]][rem % l];
                rem /= l;
            }
            prod
        })
        .sum();
    Ok(total * (d as f64).powi((n * (k - 1)) as i32))
}

/// Applies a (l²×l²) map to the labels of sites (i, i+1), where `sa` is the
/// stride of site i.
fn apply_pair(weights: &mut [f64], map: &DMatrix<f64>, sa: usize, l: usize) {
    let sb = sa / l;
    let block = sa * l;
    let ll = l * l;
    weights.par_chunks_mut(block).for_each(|chunk| {
        let mut input = vec![0.0; ll];
        for lo in 0..sb {
            let mut any = false;
            for x in 0..l {
                for y in 0..l {
                    let v = chunk[x * sa + y * sb + lo];
                    input[x * l + y] = v;
                    any |= v != 0.0;
                }
            }
            if !any {
                continue;
            }
            for x in 0..l {
                for y in 0..l {
                    let row = x * l + y;
                    chunk[x * sa + y * sb + lo] = (0..ll).map(|c| map[(row, c)] * input[c]).sum();
                }
            }
        }
    });
}

/// Exact circuit-averaged linear XEB, E_U[D Σ_x p_noisy p_ideal] − 1.
pub fn xeb_brickwall_avg(spec: &BrickwallSpec) -> Result<f64> {
    Ok(replica_contraction(spec, 2, &[true, false])? - 1.0)
}

/// E[w^k] of the noisy output distribution, k ≤ 3.
pub fn brickwall_moment(spec: &BrickwallSpec, k: usize) -> Result<f64> {
    replica_contraction(spec, k, &vec![true; k])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSweep {
    pub ns: Vec<usize>,
    pub ts: Vec<usize>,
    pub d: usize,
    pub noise: ChannelKind,
    #[serde(default)]
    pub placement: NoisePlacement,
    /// Total noise η₀; each point uses rate η₀/(N t).
    pub eta0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: usize,
    pub t: usize,
    pub d: usize,
    pub noise_label: String,
    pub rate: f64,
    pub xeb: f64,
    /// log(1+xeb) − log(1+xeb_ref), with xeb_ref the value at the deepest
    /// depth of the same N.
    pub delta_log: f64,
}

pub fn xeb_curve(sweep: &CurveSweep) -> Result<Vec<CurveRow>> {
    if sweep.ns.is_empty() || sweep.ts.is_empty() {
        return Err(Error::Invalid("sweep needs at least one N and one depth".into()));
    }
    let mut ts = sweep.ts.clone();
    ts.sort_unstable();
    ts.dedup();
    let mut rows = Vec::new();
    for &n in &sweep.ns {
        let mut block = Vec::with_capacity(ts.len());
        for &t in &ts {
            let rate = sweep.eta0 / (n * t) as f64;
            let spec = BrickwallSpec::new(n, t, sweep.d, sweep.noise, sweep.placement, rate)?;
            let xeb = xeb_brickwall_avg(&spec)?;
            block.push(CurveRow { n, t, d: sweep.d, noise_label: spec.noise_label(), rate, xeb, delta_log: 0.0 });
        }
        let reference = (1.0 + block.last().map(|r| r.xeb).unwrap_or(0.0)).ln();
        for r in &mut block {
            r.delta_log = (1.0 + r.xeb).ln() - reference;
        }
        rows.extend(block);
    }
    Ok(rows)
}
