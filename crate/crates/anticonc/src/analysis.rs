//! Parameter extraction from XEB data: η from the deep plateau, x by
//! inverting the closed-form XEB, τ from the depth dependence of x, and
//! local log-log slopes of the excess log-XEB.

use crate::error::{Error, Result};
use crate::lattice::CurveRow;
use crate::scaling::{xeb_scaling, RegimeLabel, ScalingPoint};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Relative spread (max − min)/mean below which the deepest values count as a plateau.
pub const PLATEAU_SPREAD: f64 = 0.02;
/// Number of deepest values used for the plateau.
pub const PLATEAU_DEPTHS: usize = 3;
/// x̂ below this is dominated by rounding of the floor e^{−η} and is left
/// out of the τ fit.
pub const MIN_FIT_X: f64 = 1e-4;
/// Upper end of the x search interval.
pub const X_MAX: f64 = 50.0;
/// Minimum number of points in a slope window.
pub const MIN_WINDOW_POINTS: usize = 5;

/// η = −log(mean) of the deepest XEB values, given in order of increasing
/// depth. Uses the last [`PLATEAU_DEPTHS`] values (at least two are needed).
pub fn extract_eta(xeb_deep_values: &[f64]) -> Result<f64> {
    if xeb_deep_values.len() < 2 {
        return Err(Error::Invalid(format!("need at least 2 deep XEB values, got {}", xeb_deep_values.len())));
    }
    let tail = &xeb_deep_values[xeb_deep_values.len().saturating_sub(PLATEAU_DEPTHS)..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(Error::Invalid(format!("deep XEB values must be positive, mean = {mean}")));
    }
    let spread = (hi - lo) / mean;
    if spread >= PLATEAU_SPREAD {
        return Err(Error::Numerical(format!("no plateau: relative spread {spread:.3e} of {tail:?}")));
    }
    Ok(-mean.ln())
}

/// Result of inverting the closed-form XEB for x at fixed η.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XInversion {
    pub x: f64,
    /// The value was below the x = 0 floor e^{−η} and was clamped to x = 0.
    pub below_floor: bool,
}

/// Solves xeb_scaling(x, η) = `xeb` for x ∈ [0, X_MAX] by bisection to
/// |Δx| < 1e−12·x (and never coarser than 1e−10 absolute).
pub fn invert_xeb_for_x(xeb: f64, eta: f64) -> Result<XInversion> {
    let at = |x: f64| xeb_scaling(ScalingPoint { x, eta });
    check_monotone(eta)?;
    let floor = at(0.0);
    let tol = 1e-12 * floor.abs().max(1e-300);
    if xeb <= floor + tol {
        return Ok(XInversion { x: 0.0, below_floor: xeb < floor - tol });
    }
    if !(xeb <= at(X_MAX)) {
        return Err(Error::OutOfRange { name: "xeb", value: xeb, allowed: "at most xeb_scaling(X_MAX, eta)" });
    }
    let (mut lo, mut hi) = (0.0, X_MAX);
    while hi - lo > 1e-12 * hi && hi > f64::MIN_POSITIVE {
        let mid = 0.5 * (lo + hi);
        if at(mid) < xeb {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(XInversion { x: 0.5 * (lo + hi), below_floor: false })
}

/// Checks that the closed-form XEB increases strictly in x on a dense grid.
fn check_monotone(eta: f64) -> Result<()> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::OutOfRange { name: "eta", value: eta, allowed: "[0, inf)" });
    }
    let grid = (0..=400).map(|i| if i == 0 { 0.0 } else { X_MAX * 10f64.powf(-6.0 * (1.0 - i as f64 / 400.0)) });
    let mut prev = f64::NEG_INFINITY;
    for x in grid {
        let v = xeb_scaling(ScalingPoint { x, eta });
        if v <= prev {
            return Err(Error::Numerical(format!("closed-form XEB is not increasing in x at x = {x}, eta = {eta}")));
        }
        prev = v;
    }
    Ok(())
}

/// One (N, t) point with its extracted x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XHat {
    pub n: usize,
    pub t: usize,
    pub x_hat: f64,
}

/// Fitted scaling parameters of a family of XEB curves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Present when η was extracted from a plateau.
    pub eta_hat: Option<f64>,
    pub x_table: Vec<XHat>,
    pub tau_hat: f64,
    pub tau_std_err: f64,
    /// Thouless prefactor N₀ in N_th(t) = N₀ e^{t/τ}, so x = N/N_th(t).
    pub n0_hat: f64,
    pub n0_std_err: f64,
    /// Residuals of log x̂ − (log N − t/τ − log N₀), one per table row.
    pub log_residuals: Vec<f64>,
    pub rms_log_residual: f64,
    /// RMS spread of Δlog(1+xeb) across N at matched N e^{−t/τ}, divided by
    /// the range of Δlog(1+xeb). Absent when no XEB curves were supplied.
    pub collapse_residual: Option<f64>,
}

/// Least-squares fit of log x̂ = log N − t/τ − log N₀ (rows with x̂ = 0 are
/// rejected). Needs at least three depths and two sizes.
pub fn fit_tau(x_table: &[XHat]) -> Result<FitResult> {
    let mut depths: Vec<usize> = x_table.iter().map(|r| r.t).collect();
    depths.sort_unstable();
    depths.dedup();
    let mut sizes: Vec<usize> = x_table.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if depths.len() < 3 || sizes.len() < 2 {
        return Err(Error::Invalid(format!("fit_tau needs ≥ 3 depths and ≥ 2 sizes, got {} and {}", depths.len(), sizes.len())));
    }
    if let Some(bad) = x_table.iter().find(|r| !(r.x_hat > 0.0) || !r.x_hat.is_finite()) {
        return Err(Error::Invalid(format!("x_hat must be positive and finite, got {} at (N, t) = ({}, {})", bad.x_hat, bad.n, bad.t)));
    }
    let ts: Vec<f64> = x_table.iter().map(|r| r.t as f64).collect();
    let ys: Vec<f64> = x_table.iter().map(|r| r.x_hat.ln() - (r.n as f64).ln()).collect();
    let line = ordinary_least_squares(&ts, &ys)?;
    if !(line.slope < 0.0) {
        return Err(Error::Numerical(format!("x does not decay with depth (slope {})", line.slope)));
    }
    let tau_hat = -1.0 / line.slope;
    let tau_std_err = line.slope_se / (line.slope * line.slope);
    let n0_hat = (-line.intercept).exp();
    Ok(FitResult {
        eta_hat: None,
        x_table: x_table.to_vec(),
        tau_hat,
        tau_std_err,
        n0_hat,
        n0_std_err: n0_hat * line.intercept_se,
        rms_log_residual: (line.residuals.iter().map(|r| r * r).sum::<f64>() / line.residuals.len() as f64).sqrt(),
        log_residuals: line.residuals,
        collapse_residual: None,
    })
}

/// Full pipeline on brickwall XEB curves: η from the plateau of each size
/// (averaged), x̂ by inversion, τ by [`fit_tau`], and the collapse residual.
/// Points with x̂ < [`MIN_FIT_X`] sit on the floor, carry no depth
/// information and are left out of the τ fit.
pub fn fit_xeb_curves(rows: &[CurveRow]) -> Result<FitResult> {
    let sizes = group_by_size(rows);
    let mut etas = Vec::new();
    for block in sizes.values() {
        let deep: Vec<f64> = block.iter().map(|r| r.xeb).collect();
        etas.push(extract_eta(&deep)?);
    }
    let eta_hat = etas.iter().sum::<f64>() / etas.len() as f64;
    let mut table = Vec::new();
    for r in rows {
        let inv = invert_xeb_for_x(r.xeb, eta_hat)?;
        if inv.x >= MIN_FIT_X {
            table.push(XHat { n: r.n, t: r.t, x_hat: inv.x });
        }
    }
    let mut fit = fit_tau(&table)?;
    fit.eta_hat = Some(eta_hat);
    fit.collapse_residual = Some(collapse_residual(rows, fit.tau_hat, eta_hat)?);
    Ok(fit)
}

fn group_by_size(rows: &[CurveRow]) -> std::collections::BTreeMap<usize, Vec<&CurveRow>> {
    let mut map: std::collections::BTreeMap<usize, Vec<&CurveRow>> = Default::default();
    for r in rows {
        map.entry(r.n).or_default().push(r);
    }
    for block in map.values_mut() {
        block.sort_by_key(|r| r.t);
    }
    map
}

/// Collapse quality of Δlog(1+xeb) = log(1+xeb) − log(1+e^{−η̂}) plotted
/// against u = log N − t/τ. Each curve is linearly interpolated in u onto
/// the other curves' abscissae inside the common range; the RMS deviation
/// from the pointwise mean is divided by the overall range of Δlog(1+xeb).
pub fn collapse_residual(rows: &[CurveRow], tau: f64, eta_hat: f64) -> Result<f64> {
    let floor = (-eta_hat).exp().ln_1p();
    let curves: Vec<Vec<(f64, f64)>> = group_by_size(rows)
        .into_iter()
        .map(|(n, block)| {
            let mut pts: Vec<(f64, f64)> = block.iter().map(|r| ((n as f64).ln() - r.t as f64 / tau, (1.0 + r.xeb).ln() - floor)).collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts
        })
        .collect();
    if curves.len() < 2 {
        return Err(Error::Invalid("collapse needs at least two sizes".into()));
    }
    let lo = curves.iter().map(|c| c[0].0).fold(f64::NEG_INFINITY, f64::max);
    let hi = curves.iter().map(|c| c[c.len() - 1].0).fold(f64::INFINITY, f64::min);
    if !(hi > lo) {
        return Err(Error::Numerical("curves do not overlap after rescaling".into()));
    }
    let abscissae: Vec<f64> = curves.iter().flatten().map(|p| p.0).filter(|u| (lo..=hi).contains(u)).collect();
    let (mut sum_sq, mut count) = (0.0, 0usize);
    for &u in &abscissae {
        let vals: Vec<f64> = curves.iter().map(|c| interpolate(c, u)).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        for v in vals {
            sum_sq += (v - mean).powi(2);
            count += 1;
        }
    }
    let all: Vec<f64> = curves.iter().flatten().map(|p| p.1).collect();
    let range = all.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - all.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((sum_sq / count as f64).sqrt() / range)
}

fn interpolate(curve: &[(f64, f64)], u: f64) -> f64 {
    let i = curve.partition_point(|p| p.0 <= u).clamp(1, curve.len() - 1);
    let ((u0, v0), (u1, v1)) = (curve[i - 1], curve[i]);
    if u1 == u0 {
        v0
    } else {
        v0 + (u - u0) * (v1 - v0) / (u1 - u0)
    }
}

struct Line {
    slope: f64,
    intercept: f64,
    slope_se: f64,
    intercept_se: f64,
    residuals: Vec<f64>,
}

fn ordinary_least_squares(xs: &[f64], ys: &[f64]) -> Result<Line> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Numerical("degenerate design matrix: all abscissae equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - intercept - slope * x).collect();
    let dof = (xs.len() as f64 - 2.0).max(1.0);
    let s2 = residuals.iter().map(|r| r * r).sum::<f64>() / dof;
    Ok(Line { slope, intercept, slope_se: (s2 / sxx).sqrt(), intercept_se: (s2 * (1.0 / n + mx * mx / sxx)).sqrt(), residuals })
}

/// A window in log10 x around `center`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeWindow {
    pub label: RegimeLabel,
    pub center: f64,
    pub half_width_decades: f64,
}

/// Windows at 10η/3 (short depth), η/3 (intermediate) and 0.3·min(1, η/3)
/// (deep), each a quarter decade wide on either side.
pub fn default_windows(eta: f64) -> Result<Vec<SlopeWindow>> {
    if !(eta > 0.0) {
        return Err(Error::OutOfRange { name: "eta", value: eta, allowed: "eta > 0" });
    }
    let w = |label, center| SlopeWindow { label, center, half_width_decades: 0.25 };
    Ok(vec![
        w(RegimeLabel::ShortDepth, 10.0 * eta / 3.0),
        w(RegimeLabel::Intermediate, eta / 3.0),
        w(RegimeLabel::Deep, 0.3 * f64::min(1.0, eta / 3.0)),
    ])
}

/// Local slope of log Δlog(1+xeb) against log x in one window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub window: SlopeWindow,
    pub points: usize,
    pub slope: f64,
    pub std_err: f64,
    /// 95% confidence interval from the Student t quantile.
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Fits log Δ = a + s·log x separately in each window. `curve` holds
/// (x, Δlog(1+xeb)) pairs with both entries positive.
pub fn regime_report(curve: &[(f64, f64)], windows: &[SlopeWindow]) -> Result<Vec<SlopeEstimate>> {
    let pts: Vec<(f64, f64)> = curve.iter().filter(|(x, d)| *x > 0.0 && *d > 0.0).map(|(x, d)| (x.log10(), d.ln())).collect();
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo >= 2.0) {
        return Err(Error::Invalid(format!("curve spans {:.2} decades in x, need at least 2", (hi - lo).max(0.0))));
    }
    windows
        .iter()
        .map(|window| {
            let c = window.center.log10();
            let inside: Vec<(f64, f64)> = pts.iter().copied().filter(|p| (p.0 - c).abs() <= window.half_width_decades).collect();
            if inside.len() < MIN_WINDOW_POINTS {
                return Err(Error::Invalid(format!(
                    "window around x = {} holds {} points, need {MIN_WINDOW_POINTS}",
                    window.center,
                    inside.len()
                )));
            }
            let xs: Vec<f64> = inside.iter().map(|p| p.0 * std::f64::consts::LN_10).collect();
            let ys: Vec<f64> = inside.iter().map(|p| p.1).collect();
            let line = ordinary_least_squares(&xs, &ys)?;
            let dof = (inside.len() - 2) as f64;
            let q = StudentsT::new(0.0, 1.0, dof).map_err(|e| Error::Numerical(e.to_string()))?.inverse_cdf(0.975);
            Ok(SlopeEstimate {
                window: *window,
                points: inside.len(),
                slope: line.slope,
                std_err: line.slope_se,
                ci_low: line.slope - q * line.slope_se,
                ci_high: line.slope + q * line.slope_se,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::delta_log_xeb;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn xeb(x: f64, eta: f64) -> f64 {
        xeb_scaling(ScalingPoint::new(x, eta).unwrap())
    }

    #[test]
    fn plateau_gives_eta() {
        let v = (-2.0f64).exp();
        assert!((extract_eta(&[0.5, v, v, v]).unwrap() - 2.0).abs() < 1e-12);
        let eta = extract_eta(&[xeb(2e-4, 3.0), xeb(1e-4, 3.0)]).unwrap();
        assert!((eta / 3.0 - 1.0).abs() < 5e-3, "{eta}");
    }

    #[test]
    fn jittered_plateau_gives_eta_within_one_percent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let vals: Vec<f64> = [4e-5, 2e-5, 1e-5].iter().map(|&x| xeb(x, 2.5) + rng.random_range(-1e-4..1e-4)).collect();
            let eta = extract_eta(&vals).unwrap();
            assert!((eta / 2.5 - 1.0).abs() < 0.01, "{eta}");
        }
    }

    #[test]
    fn missing_plateau_is_an_error() {
        assert!(matches!(extract_eta(&[0.5, 0.3, 0.2]), Err(Error::Numerical(_))));
        assert!(extract_eta(&[0.2]).is_err());
    }

    #[test]
    fn inversion_round_trips() {
        let eta: f64 = 2.0;
        assert_eq!(invert_xeb_for_x((-eta).exp(), eta).unwrap(), XInversion { x: 0.0, below_floor: false });
        let inv = invert_xeb_for_x(xeb(1.3, eta), eta).unwrap();
        assert!((inv.x - 1.3).abs() < 1e-6);
        let low = invert_xeb_for_x(0.5 * (-eta).exp(), eta).unwrap();
        assert!(low.below_floor && low.x == 0.0);
        assert!(invert_xeb_for_x(1e30, eta).is_err());
    }

    #[test]
    fn inversion_tolerates_jitter() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(x, eta) in &[(1.3, 2.0), (0.5, 4.0), (3.0, 6.0), (0.8, 0.5)] {
            for _ in 0..20 {
                let inv = invert_xeb_for_x(xeb(x, eta) + rng.random_range(-1e-4..1e-4), eta).unwrap();
                assert!((inv.x / x - 1.0).abs() < 0.01, "x = {x}, η = {eta}: {}", inv.x);
            }
        }
    }

    #[test]
    fn closed_form_is_monotone_in_x() {
        for eta in [0.0, 0.5, 2.0, 8.0, 20.0] {
            check_monotone(eta).unwrap();
        }
    }

    fn synthetic_table(tau: f64, n0: f64) -> Vec<XHat> {
        let mut table = Vec::new();
        for n in [12, 16, 20] {
            for t in 2..=10 {
                table.push(XHat { n, t, x_hat: n as f64 * (-(t as f64) / tau).exp() / n0 });
            }
        }
        table
    }

    #[test]
    fn tau_is_recovered_from_synthetic_scaling() {
        let fit = fit_tau(&synthetic_table(1.7, 1.0)).unwrap();
        assert!((fit.tau_hat / 1.7 - 1.0).abs() < 1e-10);
        assert!((fit.n0_hat - 1.0).abs() < 1e-10);
        assert!(fit.rms_log_residual < 1e-12);
        let fit = fit_tau(&synthetic_table(2.3, 4.0)).unwrap();
        assert!((fit.tau_hat / 2.3 - 1.0).abs() < 1e-10 && (fit.n0_hat / 4.0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tau_with_noise_has_honest_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut table = synthetic_table(1.7, 1.0);
        for r in &mut table {
            r.x_hat *= (rng.random_range(-0.01..0.01f64)).exp();
        }
        let fit = fit_tau(&table).unwrap();
        assert!((fit.tau_hat - 1.7).abs() < 4.0 * fit.tau_std_err + 1e-3);
        assert!(fit.tau_std_err > 0.0 && fit.log_residuals.len() == table.len());
    }

    #[test]
    fn tau_preconditions() {
        let short: Vec<XHat> = synthetic_table(1.7, 1.0).into_iter().filter(|r| r.t < 4).collect();
        assert!(fit_tau(&short).is_err());
        let one_size: Vec<XHat> = synthetic_table(1.7, 1.0).into_iter().filter(|r| r.n == 12).collect();
        assert!(fit_tau(&one_size).is_err());
    }

    fn synthetic_rows(tau: f64, eta: f64) -> Vec<CurveRow> {
        let mut rows = Vec::new();
        for n in [12usize, 16, 20] {
            for t in 1..=40 {
                let x = n as f64 * (-(t as f64) / tau).exp();
                let v = xeb(x, eta);
                rows.push(CurveRow { n, t, d: 2, noise_label: "synthetic".into(), rate: 0.0, xeb: v, delta_log: 0.0 });
            }
        }
        rows
    }

    #[test]
    fn curve_pipeline_recovers_eta_and_tau() {
        let fit = fit_xeb_curves(&synthetic_rows(1.7, 3.0)).unwrap();
        assert!((fit.eta_hat.unwrap() / 3.0 - 1.0).abs() < 1e-6);
        assert!((fit.tau_hat / 1.7 - 1.0).abs() < 1e-3, "{}", fit.tau_hat);
        // Only linear interpolation between integer depths remains.
        assert!(fit.collapse_residual.unwrap() < 5e-3, "{:?}", fit.collapse_residual);
    }

    #[test]
    fn mismatched_tau_spoils_the_collapse() {
        let rows = synthetic_rows(1.7, 3.0);
        let good = collapse_residual(&rows, 1.7, 3.0).unwrap();
        let bad = collapse_residual(&rows, 3.0, 3.0).unwrap();
        assert!(bad > 5.0 * good, "{good} vs {bad}");
    }

    fn closed_form_curve(eta: f64) -> Vec<(f64, f64)> {
        (0..=300)
            .map(|i| 10f64.powf(-3.0 + 5.0 * i as f64 / 300.0))
            .map(|x| (x, delta_log_xeb(ScalingPoint::new(x, eta).unwrap())))
            .collect()
    }

    /// d log Δ / d log x by central differences.
    fn local_slope(x: f64, eta: f64) -> f64 {
        let h = 1e-4;
        let f = |x: f64| delta_log_xeb(ScalingPoint::new(x, eta).unwrap()).ln();
        (f(x * (1.0 + h)) - f(x * (1.0 - h))) / ((1.0 + h).ln() - (1.0 - h).ln())
    }

    #[test]
    fn window_slopes_follow_the_closed_form() {
        let eta = 6.0;
        let report = regime_report(&closed_form_curve(eta), &default_windows(eta).unwrap()).unwrap();
        for est in &report {
            let oracle = local_slope(est.window.center, eta);
            assert!((est.slope - oracle).abs() < 0.03, "{:?}: {} vs {oracle}", est.window.label, est.slope);
            assert!(est.ci_low <= est.slope && est.slope <= est.ci_high);
        }
        // Ends of the curve are linear in x; the crossover is steeper.
        assert!((report[0].slope - 1.0).abs() < 0.15 && (report[2].slope - 1.0).abs() < 0.15);
        assert!(report[1].slope > report[0].slope && report[1].slope > report[2].slope);
    }

    #[test]
    fn noiseless_curve_has_unit_slope() {
        let windows: Vec<SlopeWindow> = [0.01, 0.1, 1.0, 10.0]
            .iter()
            .map(|&center| SlopeWindow { label: RegimeLabel::ShortDepth, center, half_width_decades: 0.25 })
            .collect();
        for est in regime_report(&closed_form_curve(0.0), &windows).unwrap() {
            assert!((est.slope - 1.0).abs() < 1e-6, "{}", est.slope);
        }
    }

    #[test]
    fn sparse_windows_and_short_curves_are_errors() {
        let curve = closed_form_curve(6.0);
        let sparse: Vec<(f64, f64)> = curve.iter().step_by(40).copied().collect();
        assert!(regime_report(&sparse, &default_windows(6.0).unwrap()).is_err());
        let short: Vec<(f64, f64)> = curve.iter().filter(|p| p.0 < 0.5).copied().collect();
        assert!(regime_report(&short, &default_windows(6.0).unwrap()).is_err());
    }
}
