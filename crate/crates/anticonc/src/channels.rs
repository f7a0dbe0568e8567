//! Kraus-form noise channels and the single-site quantities the transfer
//! matrices need: projected adjoints ρ_x, the diagonal weight Λ and the
//! effective weak-noise rate.

use crate::error::{check_range, Error, Result};
use crate::perm::PermutationTable;
use crate::replica::ReplicaMatrix;
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<CMatrix>,
    label: String,
}

impl KrausChannel {
    /// Validates Σ K†K = 1 before accepting the operators.
    pub fn new(dim: usize, ops: Vec<CMatrix>, label: impl Into<String>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::Invalid("a channel needs at least one Kraus operator".into()));
        }
        if let Some(bad) = ops.iter().find(|k| k.shape() != (dim, dim)) {
            return Err(Error::Invalid(format!("Kraus operator of shape {:?} in a dimension-{dim} channel", bad.shape())));
        }
        let ch = Self { dim, ops, label: label.into() };
        let r = ch.completeness_residual();
        if r > COMPLETENESS_TOL {
            return Err(Error::Invalid(format!("Kraus operators are not trace preserving (residual {r:.3e})")));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, ops: vec![CMatrix::identity(dim, dim)], label: "identity".into() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// max |Σ_α K_α†K_α − 1|.
    pub fn completeness_residual(&self) -> f64 {
        let mut s = CMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            s += k.adjoint() * k;
        }
        (s - CMatrix::identity(self.dim, self.dim)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// Applies the channel to tensor factor `factor` of an operator on
    /// `(C^dim)^{⊗n_factors}`.
    pub fn apply_on_factor(&self, x: &CMatrix, factor: usize, n_factors: usize) -> CMatrix {
        let d = self.dim;
        let outer = d.pow(factor as u32);
        let inner = d.pow((n_factors - factor - 1) as u32);
        let mut out = CMatrix::zeros(x.nrows(), x.ncols());
        for k in &self.ops {
            let full = kron(&kron(&CMatrix::identity(outer, outer), k), &CMatrix::identity(inner, inner));
            out += &full * x * full.adjoint();
        }
        out
    }

    pub fn from_spec(spec: &ChannelSpec) -> Result<Self> {
        match spec.kind {
            ChannelKind::Identity => Ok(Self::identity(spec.dim)),
            ChannelKind::Depolarizing => make_depolarizing(spec.dim, spec.param),
            ChannelKind::AmplitudeDamping => {
                if spec.dim != 2 {
                    return Err(Error::Invalid(format!("amplitude damping is a qubit channel, got dim {}", spec.dim)));
                }
                make_amplitude_damping(spec.param)
            }
        }
    }
}

/// Channel description as it appears in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(rename = "type")]
    pub kind: ChannelKind,
    #[serde(default)]
    pub param: f64,
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Depolarizing,
    AmplitudeDamping,
    Identity,
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// ρ ↦ (1−ε)ρ + ε Tr(ρ) 1/q, written with the q² Weyl operators X^aZ^b.
pub fn make_depolarizing(q: usize, eps: f64) -> Result<KrausChannel> {
    check_range("eps", eps, 0.0, 1.0, "[0, 1]")?;
    if q == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    let qf = q as f64;
    let mut ops = Vec::with_capacity(q * q);
    let w0 = (1.0 - eps + eps / (qf * qf)).sqrt();
    ops.push(CMatrix::identity(q, q) * C64::new(w0, 0.0));
    if eps > 0.0 {
        let c = eps.sqrt() / qf;
        for a in 0..q {
            for b in 0..q {
                if a == 0 && b == 0 {
                    continue;
                }
                ops.push(weyl(q, a, b) * C64::new(c, 0.0));
            }
        }
    }
    let label = if eps == 0.0 { "identity".to_string() } else { format!("depolarizing(q={q},eps={eps})") };
    KrausChannel::new(q, ops, label)
}

/// X^a Z^b with X|j⟩ = |j+1⟩ and Z|j⟩ = ω^j|j⟩.
fn weyl(q: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(q, q);
    for j in 0..q {
        let phase = 2.0 * std::f64::consts::PI * (b * j) as f64 / q as f64;
        m[((j + a) % q, j)] = C64::from_polar(1.0, phase);
    }
    m
}

/// Qubit amplitude damping: K0 = diag(1, √(1−γ)), K1 = √γ|0⟩⟨1|.
pub fn make_amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    check_range("gamma", gamma, 0.0, 1.0, "[0, 1]")?;
    let z = C64::new(0.0, 0.0);
    let k0 = CMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), z, z, C64::new((1.0 - gamma).sqrt(), 0.0)]);
    let k1 = CMatrix::from_row_slice(2, 2, &[z, C64::new(gamma.sqrt(), 0.0), z, z]);
    let ops = if gamma == 0.0 { vec![k0] } else { vec![k0, k1] };
    KrausChannel::new(2, ops, format!("amplitude_damping(gamma={gamma})"))
}

/// ρ_x = Σ_α K_α†|x⟩⟨x|K_α together with its spectrum.
#[derive(Clone, Debug)]
pub struct ProjectedAdjoint {
    pub x: usize,
    pub rho: CMatrix,
    eigenvalues: DVector<f64>,
}

impl ProjectedAdjoint {
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Tr[ρ_x^a].
    pub fn trace_power(&self, a: usize) -> f64 {
        self.eigenvalues.iter().map(|&l| l.max(0.0).powi(a as i32)).sum()
    }
}

pub fn projected_adjoint(channel: &KrausChannel, x: usize) -> Result<ProjectedAdjoint> {
    let q = channel.dim();
    if x >= q {
        return Err(Error::Invalid(format!("basis index {x} outside 0..{q}")));
    }
    let mut rho = CMatrix::zeros(q, q);
    for k in channel.kraus_ops() {
        // K†|x⟩⟨x|K = (row x of K)† (row x of K).
        let row = k.row(x);
        rho += row.adjoint() * row;
    }
    let eigenvalues = rho.clone().symmetric_eigen().eigenvalues;
    Ok(ProjectedAdjoint { x, rho, eigenvalues })
}

/// Λ_σσ = Σ_x Π_a Tr[ρ_x^a]^{n_C(a;σ)}.
pub fn lambda_matrix(channel: &KrausChannel, k: usize, d: usize) -> Result<ReplicaMatrix> {
    if channel.dim() != d {
        return Err(Error::Invalid(format!("channel dimension {} does not match d = {d}", channel.dim())));
    }
    let table = PermutationTable::enumerate(k)?;
    let adj: Vec<ProjectedAdjoint> = (0..d).map(|x| projected_adjoint(channel, x)).collect::<Result<_>>()?;
    let powers: Vec<Vec<f64>> = adj.iter().map(|p| (0..=k).map(|a| p.trace_power(a)).collect()).collect();
    let diag = DVector::from_iterator(
        table.len(),
        table.elements().iter().map(|s| {
            let ct = s.cycle_counts();
            powers.iter().map(|tp| (1..=k).map(|a| tp[a].powi(ct.of_length(a) as i32)).product::<f64>()).sum::<f64>()
        }),
    );
    Ok(ReplicaMatrix::from_diagonal(k, &diag))
}

/// (1/d)·Σ_x (1 − ⟨x|ρ_x|x⟩).
pub fn effective_epsilon(channel: &KrausChannel, d: usize) -> Result<f64> {
    if channel.dim() != d {
        return Err(Error::Invalid(format!("channel dimension {} does not match d = {d}", channel.dim())));
    }
    let mut s = 0.0;
    for x in 0..d {
        s += 1.0 - projected_adjoint(channel, x)?.rho[(x, x)].re;
    }
    Ok(s / d as f64)
}
