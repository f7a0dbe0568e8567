//! Reference output-probability distributions for the rescaled probability w.

use crate::error::{check_range, Result};

/// Porter–Thomas density e^{−w}.
pub fn pt_pdf(w: f64) -> f64 {
    if w < 0.0 {
        0.0
    } else {
        (-w).exp()
    }
}

pub fn pt_cdf(w: f64) -> f64 {
    if w <= 0.0 {
        0.0
    } else {
        -(-w).exp_m1()
    }
}

/// Shifted Porter–Thomas density, the law of w under global depolarizing
/// noise: (1−ε)⁻¹ e^{−(w−ε)/(1−ε)} for w ≥ ε.
pub fn spt_pdf(w: f64, eps: f64) -> f64 {
    if eps >= 1.0 || w < eps {
        return 0.0;
    }
    let s = 1.0 - eps;
    (-(w - eps) / s).exp() / s
}

/// CDF of the shifted Porter–Thomas law; a unit step at w = 1 when ε = 1.
pub fn spt_cdf(w: f64, eps: f64) -> f64 {
    if eps >= 1.0 {
        return if w >= 1.0 { 1.0 } else { 0.0 };
    }
    if w <= eps {
        0.0
    } else {
        -(-(w - eps) / (1.0 - eps)).exp_m1()
    }
}

/// Mean of the shifted Porter–Thomas law, ε + (1−ε) = 1.
pub fn spt_mean(eps: f64) -> f64 {
    eps + (1.0 - eps)
}

/// The classical (fully mixed) limit puts all weight on w = 1.
pub fn classical_contains(w: f64, tol: f64) -> bool {
    (w - 1.0).abs() <= tol
}

/// Parameters (μ, σ²) = (−x/2, x) of the lognormal factor g, chosen so that
/// E[g] = 1 and E[g^k] = e^{x k(k−1)/2}.
pub fn lognormal_params(x: f64) -> (f64, f64) {
    (-x / 2.0, x)
}

pub fn lognormal_pdf(g: f64, x: f64) -> f64 {
    if g <= 0.0 {
        return 0.0;
    }
    let (mu, var) = lognormal_params(x);
    let z = g.ln() - mu;
    (-(z * z) / (2.0 * var)).exp() / (g * (2.0 * std::f64::consts::PI * var).sqrt())
}

/// Lower and upper edge of the tabulation grid in w.
pub const LNPT_W_MIN: f64 = 1e-6;
pub const LNPT_W_MAX: f64 = 50.0;
/// Default number of log-spaced grid points.
pub const LNPT_POINTS: usize = 4096;

/// Law of w = g·v with g lognormal (μ = −x/2, σ² = x) and v ~ Exp(1),
/// tabulated on a log-spaced grid and renormalized to unit mass there.
#[derive(Clone, Debug)]
pub struct LognormalPt {
    x: f64,
    w: Vec<f64>,
    pdf: Vec<f64>,
    cdf: Vec<f64>,
}

impl LognormalPt {
    pub fn new(x: f64) -> Result<Self> {
        Self::with_grid(x, LNPT_POINTS)
    }

    pub fn with_grid(x: f64, points: usize) -> Result<Self> {
        check_range("x", x, 0.0, f64::MAX, "[0, inf)")?;
        let points = points.max(LNPT_POINTS);
        let (lmin, lmax) = (LNPT_W_MIN.ln(), LNPT_W_MAX.ln());
        let w: Vec<f64> = (0..points).map(|i| (lmin + (lmax - lmin) * i as f64 / (points - 1) as f64).exp()).collect();
        let mut pdf: Vec<f64> =
            if x == 0.0 { w.iter().map(|&v| pt_pdf(v)).collect() } else { w.iter().map(|&v| mixture_density(v, x)).collect() };
        let mass = trapezoid(&w, &pdf);
        pdf.iter_mut().for_each(|p| *p /= mass);
        let cdf = cumulative(&w, &pdf);
        Ok(Self { x, w, pdf, cdf })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn grid(&self) -> &[f64] {
        &self.w
    }

    pub fn values(&self) -> &[f64] {
        &self.pdf
    }

    /// Density at w, interpolated linearly in log w; zero off the grid.
    pub fn pdf(&self, w: f64) -> f64 {
        interp(&self.w, &self.pdf, w).unwrap_or(0.0)
    }

    pub fn cdf(&self, w: f64) -> f64 {
        if w <= self.w[0] {
            return 0.0;
        }
        interp(&self.w, &self.cdf, w).unwrap_or(1.0)
    }
}

/// ∫ φ(u; μ, σ²) e^{−u} exp(−w e^{−u}) du over u = log g, trapezoid rule.
fn mixture_density(w: f64, x: f64) -> f64 {
    let (mu, var) = lognormal_params(x);
    let sd = var.sqrt();
    const NU: usize = 2001;
    let (lo, hi) = (mu - 10.0 * sd, mu + 10.0 * sd);
    let h = (hi - lo) / (NU - 1) as f64;
    let norm = 1.0 / (sd * (2.0 * std::f64::consts::PI).sqrt());
    let mut s = 0.0;
    for i in 0..NU {
        let u = lo + h * i as f64;
        let z = (u - mu) / sd;
        let f = norm * (-0.5 * z * z - u - w * (-u).exp()).exp();
        s += if i == 0 || i == NU - 1 { 0.5 * f } else { f };
    }
    s * h
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).sum()
}

pub(crate) fn cumulative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..x.len() {
        acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
        out.push(acc);
    }
    out
}

/// Linear interpolation in log x on an increasing positive grid.
pub(crate) fn interp(x: &[f64], y: &[f64], at: f64) -> Option<f64> {
    if at < x[0] || at > x[x.len() - 1] || !at.is_finite() {
        return None;
    }
    let i = x.partition_point(|&v| v <= at).clamp(1, x.len() - 1);
    let (x0, x1) = (x[i - 1].ln(), x[i].ln());
    let t = if x1 > x0 { (at.ln() - x0) / (x1 - x0) } else { 0.0 };
    Some(y[i - 1] + t * (y[i] - y[i - 1]))
}
