//! Probability-of-probabilities reconstruction from moments.
//!
//! The density of y = log w is modelled by a Gram–Charlier A series around
//! a Gaussian base,
//!
//! ```text
//! p(y) = φ(z)/σ · [1 + Σ_{n=3..m} c_n He_n(z)],   z = (y − μ)/σ,
//! ```
//!
//! with probabilists' Hermite polynomials He_n. Because
//! E_φ[e^{tz} He_n(z)] = tⁿ e^{t²/2}, the model moments have the closed form
//!
//! ```text
//! E[w^k] = e^{kμ + k²σ²/2} · [1 + Σ_n c_n (kσ)ⁿ].
//! ```
//!
//! The fit eliminates μ through E[w] = 1 and solves for σ and the c_n by
//! damped Gauss–Newton on log-moments. The series can dip below zero in the
//! tails; the evaluated density is clipped there, renormalized, and the
//! clipped mass is reported.

use crate::error::{Error, Result};
use crate::mc::{empirical_moments, ks_critical_value, ks_statistic, MomentEstimate, OverlapSample};
use crate::scaling::reference::{cumulative, interp, LognormalPt, LNPT_POINTS, LNPT_W_MAX, LNPT_W_MIN};
use crate::scaling::{rescaled_moments, ScalingPoint};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Highest moment order accepted by [`MomentVector`].
pub const MAX_POP_MOMENT: usize = 6;
/// Default Hermite order: the c₃ and c₄ corrections.
pub const DEFAULT_ORDER: usize = 4;
/// Fits whose clipped negative mass exceeds this fraction are rejected.
pub const MAX_CLIPPED_MASS: f64 = 5e-3;
/// Tolerance on E[w] = 1 for input moments.
pub const MEAN_TOLERANCE: f64 = 1e-6;

const MAX_ITERATIONS: usize = 200;
/// Largest |model/input − 1| accepted for a square (exactly determined) fit.
const FIT_TOLERANCE: f64 = 1e-8;
const TABLE_STEP: f64 = 0.004;

/// Moments E[w^k] for k = 1..=k_max.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    std_errs: Option<Vec<f64>>,
}

impl MomentVector {
    /// Validates finiteness, E[w] = 1 and log-convexity in k (with E[w⁰] = 1).
    pub fn new(values: Vec<f64>, std_errs: Option<Vec<f64>>) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_POP_MOMENT {
            return Err(Error::DegreeOutOfRange { k: values.len(), max: MAX_POP_MOMENT });
        }
        if let Some(se) = &std_errs {
            if se.len() != values.len() {
                return Err(Error::Invalid(format!("{} standard errors for {} moments", se.len(), values.len())));
            }
        }
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::Invalid(format!("moments must be finite and positive: {values:?}")));
        }
        if (values[0] - 1.0).abs() > MEAN_TOLERANCE {
            return Err(Error::Invalid(format!("normalization constraint violated: E[w] = {}", values[0])));
        }
        let logs: Vec<f64> = std::iter::once(0.0).chain(values.iter().map(|v| v.ln())).collect();
        for k in 1..values.len() {
            let curvature = logs[k + 1] - 2.0 * logs[k] + logs[k - 1];
            if curvature < -1e-9 * logs[k + 1].abs().max(1.0) {
                return Err(Error::Invalid(format!("moments are not log-convex at k = {}", k + 1)));
            }
        }
        Ok(Self { values, std_errs })
    }

    /// Scaling-limit moments at `point` for k = 1..=k_max.
    pub fn from_scaling(point: ScalingPoint, k_max: usize) -> Result<Self> {
        if k_max == 0 || k_max > MAX_POP_MOMENT {
            return Err(Error::DegreeOutOfRange { k: k_max, max: MAX_POP_MOMENT });
        }
        Self::new(rescaled_moments(k_max, point)?, None)
    }

    pub fn k_max(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn std_errs(&self) -> Option<&[f64]> {
        self.std_errs.as_deref()
    }

    /// E[w^k], 1-based.
    pub fn get(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    /// Moments of g in w = g·v with v ~ Exp(1) independent: E[g^k] = E[w^k]/k!.
    pub fn divide_out_pt(&self) -> Result<Self> {
        let mut fact = 1.0;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                fact *= (i + 1) as f64;
                v / fact
            })
            .collect();
        Self::new(values, None)
    }
}

/// Fitted Gram–Charlier density in y = log w.
#[derive(Clone, Debug, Serialize)]
pub struct GramCharlierModel {
    pub mu: f64,
    pub sigma: f64,
    /// c₃, …, c_m.
    pub coeffs: Vec<f64>,
    /// model/input − 1 for k = 1..=k_max.
    pub residuals: Vec<f64>,
    /// Negative mass removed by clipping, relative to unit total.
    pub clipped_mass: f64,
    #[serde(skip)]
    table: Table,
}

/// Clipped, normalized density on a uniform grid in z.
#[derive(Clone, Debug, Default)]
struct Table {
    z: Vec<f64>,
    density: Vec<f64>,
    cdf: Vec<f64>,
    norm: f64,
}

impl GramCharlierModel {
    /// Hermite order m (2 for a pure lognormal).
    pub fn order(&self) -> usize {
        self.coeffs.len() + 2
    }

    /// 1 + Σ c_n He_n(z), before clipping.
    pub fn series(&self, z: f64) -> f64 {
        hermite_series(z, &self.coeffs)
    }

    /// Density of y = log w.
    pub fn pdf_log(&self, y: f64) -> f64 {
        let z = (y - self.mu) / self.sigma;
        let raw = standard_normal(z) * hermite_series(z, &self.coeffs);
        raw.max(0.0) / (self.sigma * self.table.norm)
    }

    /// Density of w, P(w) = p(log w)/w.
    pub fn pdf(&self, w: f64) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        self.pdf_log(w.ln()) / w
    }

    /// CDF of y = log w.
    pub fn cdf_log(&self, y: f64) -> f64 {
        let z = (y - self.mu) / self.sigma;
        let t = &self.table;
        if z <= t.z[0] {
            return 0.0;
        }
        if z >= t.z[t.z.len() - 1] {
            return 1.0;
        }
        let pos = (z - t.z[0]) / TABLE_STEP;
        let i = (pos.floor() as usize).min(t.z.len() - 2);
        let frac = pos - i as f64;
        t.cdf[i] + frac * (t.cdf[i + 1] - t.cdf[i])
    }

    pub fn cdf(&self, w: f64) -> f64 {
        if w <= 0.0 {
            0.0
        } else {
            self.cdf_log(w.ln())
        }
    }

    /// E[w^k] of the clipped density by quadrature.
    pub fn moment_quadrature(&self, k: f64) -> f64 {
        let t = &self.table;
        let f: Vec<f64> = t.z.iter().zip(&t.density).map(|(&z, &p)| (k * (self.mu + self.sigma * z)).exp() * p).collect();
        uniform_trapezoid(&f, TABLE_STEP)
    }

    /// E[w^k] of the unclipped series in closed form.
    pub fn moment_closed_form(&self, k: usize) -> f64 {
        log_moment(k, self.mu, self.sigma, &self.coeffs).exp()
    }

    /// Total mass of the clipped density on the evaluation grid (1 up to rounding).
    pub fn total_mass(&self) -> f64 {
        uniform_trapezoid(&self.table.density, TABLE_STEP)
    }

    /// (y, p(y)) samples of the tabulated density, for convolution.
    fn y_table(&self, stride: usize) -> (Vec<f64>, Vec<f64>, f64) {
        let t = &self.table;
        let idx: Vec<usize> = (0..t.z.len()).step_by(stride).collect();
        let y = idx.iter().map(|&i| self.mu + self.sigma * t.z[i]).collect();
        let p = idx.iter().map(|&i| t.density[i] / self.sigma).collect();
        (y, p, self.sigma * TABLE_STEP * stride as f64)
    }
}

/// 1 + Σ_{n≥3} c_n He_n(z).
fn hermite_series(z: f64, coeffs: &[f64]) -> f64 {
    let (mut h_prev, mut h) = (1.0, z);
    let mut acc = 1.0;
    for n in 2..coeffs.len() + 3 {
        let next = z * h - (n - 1) as f64 * h_prev;
        h_prev = h;
        h = next;
        if n >= 3 {
            acc += coeffs[n - 3] * h;
        }
    }
    acc
}

fn standard_normal(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn uniform_trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[n - 1]))
}

/// 1 + Σ c_n (kσ)ⁿ.
fn moment_factor(k: usize, sigma: f64, coeffs: &[f64]) -> f64 {
    let t = k as f64 * sigma;
    coeffs.iter().enumerate().map(|(i, c)| c * t.powi(i as i32 + 3)).sum::<f64>() + 1.0
}

fn log_moment(k: usize, mu: f64, sigma: f64, coeffs: &[f64]) -> f64 {
    let kf = k as f64;
    kf * mu + 0.5 * kf * kf * sigma * sigma + moment_factor(k, sigma, coeffs).ln()
}

/// μ that enforces E[w] = 1.
fn constrained_mu(sigma: f64, coeffs: &[f64]) -> f64 {
    -0.5 * sigma * sigma - moment_factor(1, sigma, coeffs).ln()
}

/// Residuals log M_k(σ, c) − log m_k for k = 2..=k_max and their Jacobian
/// with respect to (σ, c₃, …). `None` if a moment factor is non-positive.
fn residuals_and_jacobian(params: &[f64], targets: &[f64]) -> Option<(DVector<f64>, DMatrix<f64>)> {
    let sigma = params[0];
    let coeffs = &params[1..];
    if sigma <= 0.0 {
        return None;
    }
    let s1 = moment_factor(1, sigma, coeffs);
    if s1 <= 0.0 {
        return None;
    }
    let mu = constrained_mu(sigma, coeffs);
    let dmu_ds = -sigma - coeffs.iter().enumerate().map(|(i, c)| c * (i + 3) as f64 * sigma.powi(i as i32 + 2)).sum::<f64>() / s1;
    let rows = targets.len() - 1;
    let mut r = DVector::zeros(rows);
    let mut jac = DMatrix::zeros(rows, params.len());
    for row in 0..rows {
        let k = row + 2;
        let kf = k as f64;
        let sk = moment_factor(k, sigma, coeffs);
        if sk <= 0.0 {
            return None;
        }
        r[row] = log_moment(k, mu, sigma, coeffs) - targets[k - 1].ln();
        let dsk_ds: f64 =
            coeffs.iter().enumerate().map(|(i, c)| c * (i + 3) as f64 * kf.powi(i as i32 + 3) * sigma.powi(i as i32 + 2)).sum();
        jac[(row, 0)] = kf * dmu_ds + kf * kf * sigma + dsk_ds / sk;
        for (i, _) in coeffs.iter().enumerate() {
            let n = i as i32 + 3;
            jac[(row, i + 1)] = -kf * sigma.powi(n) / s1 + (kf * sigma).powi(n) / sk;
        }
    }
    Some((r, jac))
}

/// Fits a Gram–Charlier model of Hermite order `order` (2..=6) to the
/// moments. Needs `moments.k_max() ≥ order`; with equality the system is
/// square and the fit is exact to rounding.
pub fn fit_gram_charlier(moments: &MomentVector, order: usize) -> Result<GramCharlierModel> {
    if !(2..=MAX_POP_MOMENT).contains(&order) {
        return Err(Error::Invalid(format!("Hermite order {order} outside 2..={MAX_POP_MOMENT}")));
    }
    if moments.k_max() < order {
        return Err(Error::Invalid(format!("order {order} needs at least {order} moments, got {}", moments.k_max())));
    }
    let targets = moments.values();
    let square = moments.k_max() == order;
    // Lognormal start: σ² = log E[w²] when E[w] = 1.
    let mut start = vec![0.0; order - 1];
    start[0] = targets[1].ln().max(1e-12).sqrt();
    let (params, stationary) = levenberg_marquardt(start, |p| residuals_and_jacobian(p, targets))?;
    let sigma = params[0];
    let mut coeffs = params[1..].to_vec();
    let mut mu = constrained_mu(sigma, &coeffs);
    let mut sigma = sigma;
    let (mut table, mut clipped_mass) = build_table(sigma, &coeffs, moments.k_max());
    let mut residuals: Vec<f64> =
        (1..=moments.k_max()).map(|k| (log_moment(k, mu, sigma, &coeffs) - targets[k - 1].ln()).exp_m1()).collect();
    let mut ok = if square { max_abs(&residuals) < FIT_TOLERANCE } else { stationary };
    if ok && clipped_mass > 0.0 && clipped_mass <= MAX_CLIPPED_MASS {
        // Clipping shifts the moments; refit μ, σ and c against the
        // moments of the clipped density itself.
        let mut full = vec![mu, sigma];
        full.extend_from_slice(&coeffs);
        let (refined, stationary) = levenberg_marquardt(full, |p| clipped_residuals(p, targets))?;
        mu = refined[0];
        sigma = refined[1];
        coeffs = refined[2..].to_vec();
        (table, clipped_mass) = build_table(sigma, &coeffs, moments.k_max());
        let model = GramCharlierModel { mu, sigma, coeffs: coeffs.clone(), residuals: Vec::new(), clipped_mass, table: table.clone() };
        residuals = (1..=moments.k_max()).map(|k| model.moment_quadrature(k as f64) / targets[k - 1] - 1.0).collect();
        ok = if square { max_abs(&residuals) < FIT_TOLERANCE } else { stationary };
    }
    if !ok {
        return Err(Error::Numerical(format!("Gram-Charlier fit did not converge; last residuals {residuals:?}")));
    }
    if clipped_mass > MAX_CLIPPED_MASS {
        return Err(Error::Numerical(format!(
            "Gram-Charlier series has clipped negative mass {clipped_mass:.3e} > {MAX_CLIPPED_MASS:e} (σ = {sigma}, c = {coeffs:?})"
        )));
    }
    Ok(GramCharlierModel { mu, sigma, coeffs, residuals, clipped_mass, table })
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Log-moment residuals of the clipped, renormalized density for
/// k = 1..=k_max, parameters (μ, σ, c₃, …), Jacobian by central differences.
fn clipped_residuals(params: &[f64], targets: &[f64]) -> Option<(DVector<f64>, DMatrix<f64>)> {
    let eval = |p: &[f64]| -> Option<DVector<f64>> {
        if p[1] <= 0.0 {
            return None;
        }
        let (table, _) = build_table(p[1], &p[2..], targets.len());
        let model = GramCharlierModel { mu: p[0], sigma: p[1], coeffs: p[2..].to_vec(), residuals: Vec::new(), clipped_mass: 0.0, table };
        let r: Vec<f64> = (1..=targets.len()).map(|k| model.moment_quadrature(k as f64).ln() - targets[k - 1].ln()).collect();
        r.iter().all(|v| v.is_finite()).then(|| DVector::from_vec(r))
    };
    let r = eval(params)?;
    let mut jac = DMatrix::zeros(r.len(), params.len());
    for j in 0..params.len() {
        let h = 1e-6 * params[j].abs().max(1e-3);
        let mut plus = params.to_vec();
        let mut minus = params.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let col = (eval(&plus)? - eval(&minus)?) / (2.0 * h);
        jac.set_column(j, &col);
    }
    Some((r, jac))
}

/// Damped Gauss–Newton. Returns the final parameters and whether the
/// iteration stopped at a stationary point (zero residual, vanishing step
/// or no descent direction) rather than at the iteration cap.
fn levenberg_marquardt<F>(mut params: Vec<f64>, f: F) -> Result<(Vec<f64>, bool)>
where
    F: Fn(&[f64]) -> Option<(DVector<f64>, DMatrix<f64>)>,
{
    let (mut r, mut jac) = f(&params).ok_or_else(|| Error::Numerical("invalid initial guess for the Gram-Charlier fit".into()))?;
    let mut cost = r.norm_squared();
    let mut lambda = 1e-6;
    for _ in 0..MAX_ITERATIONS {
        if cost.sqrt() < 1e-14 {
            return Ok((params, true));
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let grad = &jt * &r;
        let mut accepted = None;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            if let Some(delta) = a.lu().solve(&(-&grad)) {
                let trial: Vec<f64> = params.iter().zip(delta.iter()).map(|(p, d)| p + d).collect();
                if let Some((r_new, jac_new)) = f(&trial) {
                    if r_new.norm_squared() < cost {
                        accepted = Some((trial, r_new, jac_new, delta.norm()));
                        break;
                    }
                }
            }
            lambda *= 10.0;
        }
        let Some((trial, r_new, jac_new, step)) = accepted else {
            return Ok((params, true));
        };
        let scale = 1.0 + params.iter().map(|p| p * p).sum::<f64>().sqrt();
        params = trial;
        r = r_new;
        jac = jac_new;
        cost = r.norm_squared();
        lambda = (lambda * 0.3).max(1e-12);
        if step <= 1e-13 * scale {
            return Ok((params, true));
        }
    }
    Ok((params, false))
}

fn build_table(sigma: f64, coeffs: &[f64], k_max: usize) -> (Table, f64) {
    // The integrand e^{kσz}φ(z) peaks at z = kσ; cover it with margin.
    let half = 10.0 + k_max as f64 * sigma;
    let n = (2.0 * half / TABLE_STEP).ceil() as usize + 1;
    let z: Vec<f64> = (0..n).map(|i| -half + TABLE_STEP * i as f64).collect();
    let raw: Vec<f64> = z.iter().map(|&z| standard_normal(z) * hermite_series(z, coeffs)).collect();
    let negative: Vec<f64> = raw.iter().map(|v| (-v).max(0.0)).collect();
    let clipped_mass = uniform_trapezoid(&negative, TABLE_STEP);
    let mut density: Vec<f64> = raw.iter().map(|v| v.max(0.0)).collect();
    let norm = uniform_trapezoid(&density, TABLE_STEP);
    density.iter_mut().for_each(|p| *p /= norm);
    let mut cdf = Vec::with_capacity(n);
    let mut acc = 0.0;
    cdf.push(0.0);
    for i in 1..n {
        acc += 0.5 * TABLE_STEP * (density[i] + density[i - 1]);
        cdf.push(acc);
    }
    (Table { z, density, cdf, norm }, clipped_mass)
}

/// Knobs of [`pop_prediction`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PopOptions {
    /// Hermite order m.
    pub order: usize,
    /// Below this η the Gram–Charlier part is convolved with Porter–Thomas.
    pub eta_switch: f64,
}

impl Default for PopOptions {
    fn default() -> Self {
        Self { order: DEFAULT_ORDER, eta_switch: 1.0 }
    }
}

/// Predicted law of w at a scaling point.
#[derive(Clone, Debug)]
pub enum PopPrediction {
    /// η = 0: lognormal × Porter–Thomas, no fit.
    LognormalPt(LognormalPt),
    /// η ≥ η_switch: Gram–Charlier series in log w.
    GramCharlier(GramCharlierModel),
    /// 0 < η < η_switch: w = g·v with g Gram–Charlier and v ~ Exp(1).
    PtConvolved { model: GramCharlierModel, w: Vec<f64>, pdf: Vec<f64>, cdf: Vec<f64> },
}

/// One row of a prediction curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub w: f64,
    pub pdf: f64,
    /// Density of log w, w·P(w).
    pub pdf_log_w: f64,
}

impl PopPrediction {
    pub fn pdf(&self, w: f64) -> f64 {
        match self {
            Self::LognormalPt(l) => l.pdf(w),
            Self::GramCharlier(m) => m.pdf(w),
            Self::PtConvolved { w: grid, pdf, .. } => interp(grid, pdf, w).unwrap_or(0.0),
        }
    }

    pub fn cdf(&self, w: f64) -> f64 {
        match self {
            Self::LognormalPt(l) => l.cdf(w),
            Self::GramCharlier(m) => m.cdf(w),
            Self::PtConvolved { w: grid, cdf, .. } => {
                if w <= grid[0] {
                    0.0
                } else {
                    interp(grid, cdf, w).unwrap_or(1.0)
                }
            }
        }
    }

    /// The fitted series, if the prediction has one.
    pub fn model(&self) -> Option<&GramCharlierModel> {
        match self {
            Self::LognormalPt(_) => None,
            Self::GramCharlier(m) | Self::PtConvolved { model: m, .. } => Some(m),
        }
    }

    pub fn curve(&self, grid: &[f64]) -> Vec<CurvePoint> {
        grid.iter()
            .map(|&w| {
                let pdf = self.pdf(w);
                CurvePoint { w, pdf, pdf_log_w: w * pdf }
            })
            .collect()
    }
}

/// Moments at `point` (up to the Hermite order) turned into a density.
pub fn pop_prediction(point: ScalingPoint, options: &PopOptions) -> Result<PopPrediction> {
    if point.eta == 0.0 {
        return Ok(PopPrediction::LognormalPt(LognormalPt::new(point.x)?));
    }
    let moments = MomentVector::from_scaling(point, options.order)?;
    if point.eta >= options.eta_switch {
        return Ok(PopPrediction::GramCharlier(fit_gram_charlier(&moments, options.order)?));
    }
    let model = fit_gram_charlier(&moments.divide_out_pt()?, options.order)?;
    // Cover the heavy upper tail of a wide lognormal factor.
    let (lmin, lmax) = (LNPT_W_MIN.ln(), LNPT_W_MAX.ln().max(model.mu + 10.0 * model.sigma + 3.0));
    let w: Vec<f64> = (0..LNPT_POINTS).map(|i| (lmin + (lmax - lmin) * i as f64 / (LNPT_POINTS - 1) as f64).exp()).collect();
    let (ys, ps, dy) = model.y_table(4);
    let pdf: Vec<f64> = w
        .iter()
        .map(|&w| {
            // ∫ p(y) e^{−y} exp(−w e^{−y}) dy
            let f: Vec<f64> = ys.iter().zip(&ps).map(|(&y, &p)| p * (-y - w * (-y).exp()).exp()).collect();
            uniform_trapezoid(&f, dy)
        })
        .collect();
    let cdf = cumulative(&w, &pdf);
    Ok(PopPrediction::PtConvolved { model, w, pdf, cdf })
}

/// Goodness of fit of a prediction against sampled overlaps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PopComparison {
    pub samples: usize,
    pub ks_distance: f64,
    /// KS critical value at `alpha`.
    pub ks_critical: f64,
    pub alpha: f64,
    pub empirical_moments: Vec<MomentEstimate>,
    /// Moments of the prediction's input for the same k.
    pub predicted_moments: Vec<f64>,
}

impl PopComparison {
    pub fn ks_passes(&self) -> bool {
        self.ks_distance < self.ks_critical
    }
}

/// KS distance between the sampled w and the prediction's CDF, plus
/// sample moments next to the scaling moments at `point`.
pub fn compare_samples(
    samples: &[OverlapSample],
    prediction: &PopPrediction,
    point: ScalingPoint,
    k_max: usize,
    alpha: f64,
) -> Result<PopComparison> {
    let ws: Vec<f64> = samples.iter().map(|s| s.w).collect();
    let ks_distance = ks_statistic(&ws, |w| prediction.cdf(w))?;
    Ok(PopComparison {
        samples: ws.len(),
        ks_distance,
        ks_critical: ks_critical_value(ws.len(), alpha),
        alpha,
        empirical_moments: empirical_moments(samples, k_max)?,
        predicted_moments: rescaled_moments(k_max, point)?,
    })
}
