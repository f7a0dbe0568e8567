//! Exact finite-size moments of noisy random matrix product states through
//! transfer matrices on S_k.
//!
//! Two noise models are covered. In the physical variant each qudit passes
//! through a single-site channel before measurement and the noise enters as
//! the diagonal weight Λ. In the ladder variant every staircase gate is
//! followed by depolarizing noise on its whole dχ block, which replaces the
//! Weingarten matrix by its noisy counterpart.
//!
//! Normalization. With D = d^N and n = N − r − 1 transfer steps:
//!
//! * physical: I_k = (1|Wg(dχ) T^n Λ^{r+1}|1) with T = Λ G(χ) Wg(dχ);
//! * ladder: I_k = D (1|W̃g(dχ) T^n|1) with T = G(χ) W̃g(dχ).
//!
//! Both give I_1 = 1 for every trace-preserving channel. The ladder needs
//! the extra D because the noisy Weingarten coefficients carry no Λ, which
//! in the physical variant supplies one factor of d per site. Moments
//! E[w^k] = D^{k−1} I_k are evaluated with matrices rescaled to O(1)
//! entries, so N in the hundreds neither overflows nor underflows.

use crate::channels::{effective_epsilon, lambda_matrix, make_amplitude_damping, make_depolarizing, KrausChannel};
use crate::error::{check_range, Error, Result};
use crate::perm::PermutationTable;
use crate::replica::ReplicaMatrix;
use crate::scaling::{global_depolarizing_moment, rescaled_moment, ScalingPoint};
use crate::weingarten::{gram_from_table, noisy_weingarten_with, weingarten_matrix, WeingartenFamily};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Largest k accepted by the transfer-matrix routines.
pub const MAX_RMPS_MOMENT: usize = 6;

#[derive(Clone, Debug)]
pub enum RmpsVariant {
    /// Single-site channel on every qudit after the staircase.
    Physical(KrausChannel),
    /// Depolarizing noise of strength `eps` on each gate's dχ block.
    Ladder { eps: f64 },
}

impl RmpsVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Physical(_) => "physical",
            Self::Ladder { .. } => "ladder",
        }
    }
}

/// Staircase RMPS on N qudits of dimension d with bond dimension χ = d^r.
#[derive(Clone, Debug)]
pub struct RmpsSpec {
    pub n: usize,
    pub d: usize,
    pub r: u32,
    pub variant: RmpsVariant,
}

impl RmpsSpec {
    pub fn new(n: usize, d: usize, r: u32, variant: RmpsVariant) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid(format!("local dimension must be at least 2, got {d}")));
        }
        if n <= r as usize + 1 {
            return Err(Error::Invalid(format!("need N > r + 1, got N = {n}, r = {r}")));
        }
        if d.checked_pow(r + 1).is_none() || (d as f64).powi(r as i32 + 1) > 1e15 {
            return Err(Error::Resource(format!("bond dimension {d}^{r} is too large")));
        }
        match &variant {
            RmpsVariant::Physical(ch) if ch.dim() != d => {
                return Err(Error::Invalid(format!("channel dimension {} does not match d = {d}", ch.dim())));
            }
            RmpsVariant::Ladder { eps } => check_range("eps", *eps, 0.0, 1.0, "[0, 1]")?,
            _ => {}
        }
        Ok(Self { n, d, r, variant })
    }

    pub fn chi(&self) -> usize {
        self.d.pow(self.r)
    }

    /// Number of transfer steps, N − r − 1.
    pub fn steps(&self) -> usize {
        self.n - self.r as usize - 1
    }

    /// x = (d−1)N/(dχ).
    pub fn x(&self) -> f64 {
        (self.d - 1) as f64 * self.n as f64 / (self.d * self.chi()) as f64
    }

    /// log D = N log d.
    pub fn log_dim(&self) -> f64 {
        self.n as f64 * (self.d as f64).ln()
    }
}

/// Raw (unnormalized) transfer matrix with its boundary vectors.
#[derive(Clone, Debug)]
pub struct TransferOperator {
    pub t: ReplicaMatrix,
    pub left: DVector<f64>,
    pub right: DVector<f64>,
}

fn check_moment(k: usize) -> Result<()> {
    if (1..=MAX_RMPS_MOMENT).contains(&k) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange { k, max: MAX_RMPS_MOMENT })
    }
}

/// T = Λ G(χ) Wg(dχ), (L| = (1|Wg(dχ), |R) = Λ^{r+1}|1).
pub fn build_physical_transfer(spec: &RmpsSpec, k: usize) -> Result<TransferOperator> {
    check_moment(k)?;
    let RmpsVariant::Physical(ch) = &spec.variant else {
        return Err(Error::Invalid("physical transfer matrix requested for a ladder spec".into()));
    };
    let table = PermutationTable::enumerate(k)?;
    let lam = lambda_matrix(ch, k, spec.d)?;
    let g = gram_from_table(&table, spec.chi() as f64);
    let wg = weingarten_matrix(k, (spec.d * spec.chi()) as u64)?;
    let t = &(&lam * &g) * &wg;
    let ones = DVector::from_element(table.len(), 1.0);
    let left = wg.as_matrix().tr_mul(&ones);
    let lam_d = lam.as_matrix().diagonal();
    let right = lam_d.map(|l| l.powi(spec.r as i32 + 1));
    Ok(TransferOperator { t, left, right })
}

/// T = G(χ) W̃g(dχ), (L| = (1|W̃g(dχ), |R) = |1).
pub fn build_ladder_transfer(spec: &RmpsSpec, k: usize) -> Result<TransferOperator> {
    check_moment(k)?;
    let RmpsVariant::Ladder { eps } = spec.variant else {
        return Err(Error::Invalid("ladder transfer matrix requested for a physical spec".into()));
    };
    let table = PermutationTable::enumerate(k)?;
    let g = gram_from_table(&table, spec.chi() as f64);
    let family = WeingartenFamily::new((spec.d * spec.chi()) as u64, k)?;
    let nwg = noisy_weingarten_with(&table, &family, eps)?;
    let t = &g * &nwg;
    let ones = DVector::from_element(table.len(), 1.0);
    let left = nwg.as_matrix().tr_mul(&ones);
    Ok(TransferOperator { t, left, right: ones })
}

/// Rescaled building blocks: Ĝ = G(χ)/χ^k, Ŵ = (dχ)^k·Wg or W̃g, and the
/// diagonal Λ/d (all ones for the ladder).
struct Normalized {
    g: DMatrix<f64>,
    w: DMatrix<f64>,
    lam: DVector<f64>,
}

fn normalized(spec: &RmpsSpec, k: usize) -> Result<Normalized> {
    let table = PermutationTable::enumerate(k)?;
    let chi = spec.chi() as f64;
    let q = (spec.d * spec.chi()) as u64;
    let g = gram_from_table(&table, chi).into_matrix() / chi.powi(k as i32);
    let (w, lam) = match &spec.variant {
        RmpsVariant::Physical(ch) => {
            let lam = lambda_matrix(ch, k, spec.d)?.as_matrix().diagonal() / spec.d as f64;
            (weingarten_matrix(k, q)?.into_matrix(), lam)
        }
        RmpsVariant::Ladder { eps } => {
            let family = WeingartenFamily::new(q, k)?;
            (noisy_weingarten_with(&table, &family, *eps)?.into_matrix(), DVector::from_element(table.len(), 1.0))
        }
    };
    Ok(Normalized { g, w: w * (q as f64).powi(k as i32), lam })
}

fn moment_from(spec: &RmpsSpec, nm: &Normalized) -> f64 {
    // physical: (1|Ŵ [(Λ/d) Ĝ Ŵ]^n (Λ/d)^{r+1}|1)
    // ladder:   (1|Ŵ [Ĝ Ŵ]^n|1)
    let mut v = match spec.variant {
        RmpsVariant::Physical(_) => nm.lam.map(|l| l.powi(spec.r as i32 + 1)),
        RmpsVariant::Ladder { .. } => nm.lam.clone(),
    };
    for _ in 0..spec.steps() {
        let u = &nm.w * &v;
        v = (&nm.g * u).component_mul(&nm.lam);
    }
    (&nm.w * v).sum()
}

/// E[w^k] = D^{k−1} I_k.
pub fn rescaled_moment_exact(spec: &RmpsSpec, k: usize) -> Result<f64> {
    check_moment(k)?;
    Ok(moment_from(spec, &normalized(spec, k)?))
}

/// Physical-variant moment with Λ/d replaced by a caller-supplied diagonal.
pub fn physical_moment_with_lambda(spec: &RmpsSpec, k: usize, lambda_over_d: &DVector<f64>) -> Result<f64> {
    check_moment(k)?;
    let mut nm = normalized(spec, k)?;
    if lambda_over_d.len() != nm.lam.len() {
        return Err(Error::Invalid("Λ diagonal has the wrong length".into()));
    }
    nm.lam = lambda_over_d.clone();
    Ok(moment_from(spec, &nm))
}

/// ln I_k, finite even where I_k itself underflows.
pub fn log_ipr(spec: &RmpsSpec, k: usize) -> Result<f64> {
    Ok(rescaled_moment_exact(spec, k)?.ln() - (k as f64 - 1.0) * spec.log_dim())
}

/// I_k = (L|T^{N−r−1}|R) for the physical variant.
pub fn ipr_physical(spec: &RmpsSpec, k: usize) -> Result<f64> {
    if !matches!(spec.variant, RmpsVariant::Physical(_)) {
        return Err(Error::Invalid("ipr_physical needs a physical spec".into()));
    }
    Ok(log_ipr(spec, k)?.exp())
}

/// I_k = D (L|T^{N−r−1}|R) for the ladder variant.
pub fn ipr_ladder(spec: &RmpsSpec, k: usize) -> Result<f64> {
    if !matches!(spec.variant, RmpsVariant::Ladder { .. }) {
        return Err(Error::Invalid("ipr_ladder needs a ladder spec".into()));
    }
    Ok(log_ipr(spec, k)?.exp())
}

/// Evaluates (L|T^n|R) directly from the raw operator. Only usable while
/// the entries stay inside f64 range; the normalized path is preferred.
pub fn contract_raw(op: &TransferOperator, steps: usize) -> f64 {
    let mut v = op.right.clone();
    for _ in 0..steps {
        v = op.t.as_matrix() * v;
    }
    op.left.dot(&v)
}

/// χ → ∞ limit of the physical variant: E[w^k] = Σ_σ (Λ_σσ/d)^N.
pub fn physical_moment_infinite_bond(channel: &KrausChannel, k: usize, n: usize) -> Result<f64> {
    check_moment(k)?;
    let d = channel.dim();
    let lam = lambda_matrix(channel, k, d)?;
    Ok(lam.as_matrix().diagonal().iter().map(|l| (l / d as f64).powi(n as i32)).sum())
}

/// How the per-gate ladder rate is derived from η.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LadderRate {
    /// ε = η/N.
    #[default]
    PerQudit,
    /// ε = η/(N − r), so the N − r gates carry exactly η errors on average.
    PerGate,
}

/// Noise family used for the physical variant in scaling sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PhysicalNoise {
    #[default]
    Depolarizing,
    AmplitudeDamping,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    Physical,
    Ladder,
}

/// Everything a scaling sweep needs beyond (k, x, η, N).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub d: usize,
    pub ladder_rate: LadderRate,
    pub physical_noise: PhysicalNoise,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { d: 2, ladder_rate: LadderRate::PerQudit, physical_noise: PhysicalNoise::Depolarizing }
    }
}

/// The r ≥ 1 with N > r + 1 whose χ = d^r is closest in log to (d−1)N/(dx).
pub fn choose_bond_exponent(n: usize, d: usize, x: f64) -> Result<u32> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Invalid(format!("no admissible bond dimension for x = {x}")));
    }
    let target = ((d - 1) as f64 * n as f64 / (d as f64 * x)).ln() / (d as f64).ln();
    let r_max = n.saturating_sub(2) as u32;
    if r_max < 1 {
        return Err(Error::Invalid(format!("N = {n} is too small for any bond dimension")));
    }
    Ok((target.round().max(1.0) as u32).min(r_max))
}

/// Builds the spec for one point of a scaling sweep.
pub fn sweep_spec(kind: VariantKind, n: usize, r: u32, eta: f64, opts: &SweepOptions) -> Result<RmpsSpec> {
    let d = opts.d;
    let variant = match kind {
        VariantKind::Ladder => {
            let gates = match opts.ladder_rate {
                LadderRate::PerQudit => n,
                LadderRate::PerGate => n - r as usize,
            };
            RmpsVariant::Ladder { eps: eta / gates as f64 }
        }
        VariantKind::Physical => RmpsVariant::Physical(physical_channel(opts, n, eta)?),
    };
    RmpsSpec::new(n, d, r, variant)
}

/// A single-site channel whose effective rate is η/N.
pub fn physical_channel(opts: &SweepOptions, n: usize, eta: f64) -> Result<KrausChannel> {
    let d = opts.d;
    let target = eta / n as f64;
    let ch = match opts.physical_noise {
        PhysicalNoise::Depolarizing => make_depolarizing(d, target * d as f64 / (d - 1) as f64)?,
        PhysicalNoise::AmplitudeDamping => {
            if d != 2 {
                return Err(Error::Invalid("amplitude damping needs d = 2".into()));
            }
            make_amplitude_damping(2.0 * target)?
        }
    };
    debug_assert!((effective_epsilon(&ch, d).unwrap() - target).abs() < 1e-12);
    Ok(ch)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub variant: VariantKind,
    pub n: usize,
    pub d: usize,
    /// None stands for the χ → ∞ limit.
    pub chi: Option<usize>,
    pub k: usize,
    pub eta_nominal: f64,
    pub x_attained: f64,
    pub ipr: f64,
    pub moment: f64,
    pub scaling_prediction: f64,
    pub rel_dev: f64,
}

/// Finite-size moments against the scaling limit over a list of sizes.
///
/// For x = 0 the physical variant is evaluated at χ → ∞ and compared with
/// the shifted Porter–Thomas moments; the ladder has no such limit.
pub fn scaling_convergence_report(
    kind: VariantKind,
    k: usize,
    x: f64,
    eta: f64,
    ns: &[usize],
    opts: &SweepOptions,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        if x == 0.0 {
            if kind != VariantKind::Physical {
                return Err(Error::Invalid("x = 0 has no admissible bond dimension in the ladder variant".into()));
            }
            let ch = physical_channel(opts, n, eta)?;
            let moment = physical_moment_infinite_bond(&ch, k, n)?;
            let pred = global_depolarizing_moment(k, -(-eta).exp_m1())?;
            rows.push(ConvergenceRow {
                variant: kind,
                n,
                d: opts.d,
                chi: None,
                k,
                eta_nominal: eta,
                x_attained: 0.0,
                ipr: (moment.ln() - (k as f64 - 1.0) * n as f64 * (opts.d as f64).ln()).exp(),
                moment,
                scaling_prediction: pred,
                rel_dev: moment / pred - 1.0,
            });
            continue;
        }
        let r = choose_bond_exponent(n, opts.d, x)?;
        let spec = sweep_spec(kind, n, r, eta, opts)?;
        let moment = rescaled_moment_exact(&spec, k)?;
        let xa = spec.x();
        let pred = rescaled_moment(k, ScalingPoint::new(xa, eta)?)?;
        rows.push(ConvergenceRow {
            variant: kind,
            n,
            d: opts.d,
            chi: Some(spec.chi()),
            k,
            eta_nominal: eta,
            x_attained: xa,
            ipr: (moment.ln() - (k as f64 - 1.0) * spec.log_dim()).exp(),
            moment,
            scaling_prediction: pred,
            rel_dev: moment / pred - 1.0,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::make_depolarizing;
    use approx::assert_relative_eq;

    fn physical(n: usize, d: usize, r: u32, ch: KrausChannel) -> RmpsSpec {
        RmpsSpec::new(n, d, r, RmpsVariant::Physical(ch)).unwrap()
    }

    fn ladder(n: usize, d: usize, r: u32, eps: f64) -> RmpsSpec {
        RmpsSpec::new(n, d, r, RmpsVariant::Ladder { eps }).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(RmpsSpec::new(3, 2, 2, RmpsVariant::Ladder { eps: 0.1 }).is_err());
        assert!(RmpsSpec::new(8, 2, 2, RmpsVariant::Physical(KrausChannel::identity(3))).is_err());
        assert!(RmpsSpec::new(8, 2, 2, RmpsVariant::Ladder { eps: 1.5 }).is_err());
        let s = ladder(128, 2, 7, 0.0);
        assert_eq!(s.chi(), 128);
        assert_relative_eq!(s.x(), 0.5);
    }

    #[test]
    fn identity_channel_k1_transfer_is_one() {
        let s = physical(6, 3, 1, KrausChannel::identity(3));
        let op = build_physical_transfer(&s, 1).unwrap();
        assert_relative_eq!(op.t.get(0, 0), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn k2_transfer_by_hand() {
        // d = 2, χ = 2, identity channel: Λ = 2·1, G(2) = [[4,2],[2,4]],
        // Wg(4) = [[16,4],[4,16]]⁻¹ = [[16,−4],[−4,16]]/240.
        let s = physical(5, 2, 1, KrausChannel::identity(2));
        let op = build_physical_transfer(&s, 2).unwrap();
        let g = DMatrix::from_row_slice(2, 2, &[4.0, 2.0, 2.0, 4.0]);
        let wg = DMatrix::from_row_slice(2, 2, &[16.0, -4.0, -4.0, 16.0]) / 240.0;
        let want = g * wg * 2.0;
        assert!((op.t.as_matrix() - want).amax() < 1e-14);
        // Λ is a pure left factor: T = Λ·(G Wg).
        let ch = make_depolarizing(2, 0.2).unwrap();
        let s = physical(5, 2, 1, ch.clone());
        let op = build_physical_transfer(&s, 2).unwrap();
        let lam = lambda_matrix(&ch, 2, 2).unwrap();
        let gw =
            gram_from_table(&PermutationTable::enumerate(2).unwrap(), 2.0).into_matrix() * weingarten_matrix(2, 4).unwrap().into_matrix();
        assert!((op.t.as_matrix() - lam.as_matrix() * gw).amax() < 1e-14);
    }

    #[test]
    fn normalization_k1() {
        for ch in [KrausChannel::identity(2), make_depolarizing(2, 0.3).unwrap(), make_amplitude_damping(0.4).unwrap()] {
            let s = physical(9, 2, 2, ch);
            assert_relative_eq!(rescaled_moment_exact(&s, 1).unwrap(), 1.0, max_relative = 1e-10);
            assert_relative_eq!(ipr_physical(&s, 1).unwrap(), 1.0, max_relative = 1e-10);
        }
        for eps in [0.0, 0.05, 0.5, 1.0] {
            let s = ladder(9, 2, 2, eps);
            assert_relative_eq!(ipr_ladder(&s, 1).unwrap(), 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn raw_contraction_agrees_with_normalized() {
        let ch = make_amplitude_damping(0.1).unwrap();
        let s = physical(8, 2, 2, ch);
        for k in 1..=4 {
            let op = build_physical_transfer(&s, k).unwrap();
            assert_relative_eq!(contract_raw(&op, s.steps()), ipr_physical(&s, k).unwrap(), max_relative = 1e-10);
        }
        let s = ladder(8, 2, 2, 0.07);
        for k in 1..=4 {
            let op = build_ladder_transfer(&s, k).unwrap();
            let d_pow = 2f64.powi(8);
            assert_relative_eq!(d_pow * contract_raw(&op, s.steps()), ipr_ladder(&s, k).unwrap(), max_relative = 1e-10);
        }
    }

    #[test]
    fn ladder_at_zero_noise_matches_physical_identity() {
        for (n, r) in [(6usize, 1u32), (10, 3)] {
            for k in 1..=5 {
                let a = ipr_ladder(&ladder(n, 2, r, 0.0), k).unwrap();
                let b = ipr_physical(&physical(n, 2, r, KrausChannel::identity(2)), k).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn ipr_decreasing_in_k() {
        let s = physical(12, 2, 3, make_depolarizing(2, 0.1).unwrap());
        let v: Vec<f64> = (1..=6).map(|k| ipr_physical(&s, k).unwrap()).collect();
        for w in v.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(v.iter().all(|&i| i > 0.0 && i <= 1.0 + 1e-12));
    }

    #[test]
    fn full_depolarizing_is_classical() {
        let s = physical(40, 2, 3, make_depolarizing(2, 1.0).unwrap());
        assert_relative_eq!(rescaled_moment_exact(&s, 2).unwrap(), 1.0, max_relative = 1e-10);
        assert_relative_eq!(log_ipr(&s, 2).unwrap(), -40.0 * 2f64.ln(), max_relative = 1e-10);
    }

    #[test]
    fn weak_noise_lambda_substitution_is_second_order() {
        let resid = |eps: f64| {
            let ch = make_depolarizing(2, eps).unwrap();
            let s = physical(10, 2, 2, ch.clone());
            let e = effective_epsilon(&ch, 2).unwrap();
            let t = PermutationTable::enumerate(3).unwrap();
            let lin = DVector::from_iterator(t.len(), t.elements().iter().map(|p| 1.0 - e * (3 - p.fixed_points()) as f64));
            (rescaled_moment_exact(&s, 3).unwrap() / physical_moment_with_lambda(&s, 3, &lin).unwrap() - 1.0).abs()
        };
        let ratio = resid(0.02) / resid(0.01);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn infinite_bond_limit() {
        // Large χ at fixed N approaches the χ → ∞ expression.
        let ch = make_depolarizing(2, 0.05).unwrap();
        let s = physical(14, 2, 11, ch.clone());
        let exact = rescaled_moment_exact(&s, 2).unwrap();
        let lim = physical_moment_infinite_bond(&ch, 2, 14).unwrap();
        assert!((exact / lim - 1.0).abs() < 5e-3, "{exact} vs {lim}");
        // At large N with η fixed the limit tends to the shifted Porter–Thomas moments.
        let eta = 1.5;
        let opts = SweepOptions::default();
        let rows = scaling_convergence_report(VariantKind::Physical, 3, 0.0, eta, &[100, 1000, 10000], &opts).unwrap();
        let devs: Vec<f64> = rows.iter().map(|r| r.rel_dev.abs()).collect();
        assert!(devs[0] > devs[1] && devs[1] > devs[2], "{devs:?}");
        assert!(devs[2] < 1e-3);
        assert!(scaling_convergence_report(VariantKind::Ladder, 2, 0.0, eta, &[64], &opts).is_err());
    }

    #[test]
    fn noiseless_branch_tends_to_porter_thomas_times_lognormal() {
        let opts = SweepOptions::default();
        let rows = scaling_convergence_report(VariantKind::Ladder, 2, 0.5, 0.0, &[32, 64, 128, 256], &opts).unwrap();
        let devs: Vec<f64> = rows.iter().map(|r| r.rel_dev.abs()).collect();
        for w in devs.windows(2) {
            assert!(w[1] < w[0], "{devs:?}");
        }
        assert!(devs[3] < 0.03, "{devs:?}");
    }

    #[test]
    fn bond_choice() {
        assert_eq!(choose_bond_exponent(128, 2, 0.5).unwrap(), 7);
        assert_eq!(choose_bond_exponent(32, 2, 0.5).unwrap(), 5);
        assert!(choose_bond_exponent(32, 2, 0.0).is_err());
    }
}
