use super::haar::sample_haar_unitary;
use super::RandomStream;
use crate::channels::{CMatrix, KrausChannel, C64};
use crate::error::{Error, Result};
use crate::lattice::{BrickwallSpec, NoisePlacement};
use nalgebra::DVector;

/// Largest N for the exact density-matrix simulation.
pub const MAX_EXACT_QUDITS: usize = 10;

#[derive(Clone, Debug)]
pub struct BrickwallOutcome {
    pub p_noisy: Vec<f64>,
    pub p_ideal: Vec<f64>,
    /// Tr ρ² of the noisy final state.
    pub purity: f64,
}

/// Multiplies `op` (acting on `width` consecutive qudits from `site`) into
/// every column of a column-major d^N × cols buffer.
fn apply_left(data: &mut [C64], rows: usize, op: &CMatrix, site: usize, width: usize, d: usize, n: usize) {
    let q = d.pow(width as u32);
    let lo = d.pow((n - site - width) as u32);
    let hi = rows / (q * lo);
    let mut buf = vec![C64::new(0.0, 0.0); q];
    for col in data.chunks_mut(rows) {
        for h in 0..hi {
            for l in 0..lo {
                let base = h * q * lo + l;
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = col[base + i * lo];
                }
                for o in 0..q {
                    let mut acc = C64::new(0.0, 0.0);
                    for (i, b) in buf.iter().enumerate() {
                        acc += op[(o, i)] * b;
                    }
                    col[base + o * lo] = acc;
                }
            }
        }
    }
}

/// K ρ K† for a local operator K.
fn conjugate_local(rho: &CMatrix, op: &CMatrix, site: usize, width: usize, d: usize, n: usize) -> CMatrix {
    let dim = rho.nrows();
    let mut left = rho.clone();
    apply_left(left.as_mut_slice(), dim, op, site, width, d, n);
    // (K (Kρ)†)† = Kρ K†
    let mut right = left.adjoint();
    apply_left(right.as_mut_slice(), dim, op, site, width, d, n);
    right.adjoint()
}

fn apply_channel(rho: &CMatrix, ch: &KrausChannel, site: usize, width: usize, d: usize, n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
    for k in ch.kraus_ops() {
        out += conjugate_local(rho, k, site, width, d, n);
    }
    out
}

/// Runs one random circuit on both a pure state (ideal) and a density
/// matrix (noisy), with the same gates in both branches.
pub fn simulate_brickwall_exact(spec: &BrickwallSpec, stream: RandomStream) -> Result<BrickwallOutcome> {
    spec.validate()?;
    if spec.n > MAX_EXACT_QUDITS {
        return Err(Error::Resource(format!("exact simulation is limited to N <= {MAX_EXACT_QUDITS}, got {}", spec.n)));
    }
    let (n, d) = (spec.n, spec.d);
    let dim = d.pow(n as u32);
    let channel = spec.channel()?;
    let mut rng = stream.rng();
    let mut psi = DVector::<C64>::zeros(dim);
    psi[0] = C64::new(1.0, 0.0);
    let mut rho = CMatrix::zeros(dim, dim);
    rho[(0, 0)] = C64::new(1.0, 0.0);
    for layer in 0..spec.t {
        for (a, _) in spec.layer_pairs(layer) {
            let u = sample_haar_unitary(d * d, &mut rng);
            apply_left(psi.as_mut_slice(), dim, &u, a, 2, d, n);
            rho = conjugate_local(&rho, &u, a, 2, d, n);
            if spec.placement == NoisePlacement::TwoSitePerGate {
                rho = apply_channel(&rho, &channel, a, 2, d, n);
            }
        }
        if spec.placement == NoisePlacement::OneSitePerQuditPerLayer {
            for site in 0..n {
                rho = apply_channel(&rho, &channel, site, 1, d, n);
            }
        }
    }
    let p_ideal: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
    let p_noisy: Vec<f64> = (0..dim).map(|i| rho[(i, i)].re).collect();
    let purity = rho.iter().map(|z| z.norm_sqr()).sum();
    Ok(BrickwallOutcome { p_noisy, p_ideal, purity })
}
