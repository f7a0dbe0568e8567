use crate::config::{BrickwallConfig, ExperimentConfig, HaarConfig, Model, RmpsConfig};
use crate::output::{fmt_f64, Csv, Run};
use anticonc::analysis::{default_windows, fit_xeb_curves, regime_report, SlopeEstimate};
use anticonc::lattice::{xeb_brickwall_avg, xeb_curve, BrickwallSpec, CurveRow};
use anticonc::mc::{
    empirical_moments, empirical_xeb, jackknife_mean, ks_critical_value, ks_statistic, pop_histogram, probe_noise_check,
    sample_haar_global, sample_rmps_overlaps, simulate_brickwall_exact, Binning, LadderMethod, OverlapSample, RandomStream,
};
use anticonc::pop::{compare_samples, pop_prediction, PopOptions};
use anticonc::rmps::{rescaled_moment_exact, sweep_spec, RmpsVariant, VariantKind};
use anticonc::scaling::reference::{spt_cdf, spt_pdf};
use anticonc::scaling::{delta_log_xeb, rescaled_moments, xeb_scaling, ScalingPoint};
use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// KS level used by `pop-compare`.
const KS_ALPHA: f64 = 0.01;

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    ensure!(lo > 0.0 && hi > lo && points >= 2, "need 0 < min < max and at least 2 points");
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect())
}

pub fn moments(run: &mut Run, x: f64, eta: f64, k_max: usize) -> Result<()> {
    let values = rescaled_moments(k_max, ScalingPoint::new(x, eta)?)?;
    let mut csv = Csv::new(&["k", "moment"]);
    for (i, v) in values.iter().enumerate() {
        csv.push(vec![(i + 1).to_string(), fmt_f64(*v)]);
    }
    run.csv("moments.csv", &csv)
}

pub fn xeb_curve_closed_form(run: &mut Run, eta: f64, x_min: f64, x_max: f64, points: usize, regimes: bool) -> Result<()> {
    let xs = log_grid(x_min, x_max, points)?;
    let mut csv = Csv::new(&["x", "xeb", "delta_log"]);
    let mut curve = Vec::with_capacity(xs.len());
    for &x in &xs {
        let p = ScalingPoint::new(x, eta)?;
        let d = delta_log_xeb(p);
        curve.push((x, d));
        csv.push(vec![fmt_f64(x), fmt_f64(xeb_scaling(p)), fmt_f64(d)]);
    }
    run.csv("xeb_curve.csv", &csv)?;
    if regimes {
        let report = regime_report(&curve, &default_windows(eta)?)?;
        run.json("regimes.json", &report)?;
    }
    Ok(())
}

fn rmps_model(cfg: &ExperimentConfig) -> Result<(VariantKind, &RmpsConfig)> {
    RmpsConfig::kind(&cfg.model).context("this command needs an rmps_physical or rmps_ladder model")
}

pub fn rmps_exact(run: &mut Run, cfg: &ExperimentConfig) -> Result<()> {
    let (kind, rmps) = rmps_model(cfg)?;
    let ns = if rmps.ns.is_empty() { vec![rmps.n] } else { rmps.ns.clone() };
    let mut csv = Csv::new(&["variant", "n", "d", "chi", "k", "x", "eta", "moment", "scaling", "rel_dev"]);
    for &n in &ns {
        let spec = sweep_spec(kind, n, rmps.bond_exponent(n)?, rmps.eta, &rmps.sweep_options())?;
        let point = ScalingPoint::new(spec.x(), rmps.eta)?;
        let scaling = rescaled_moments(cfg.k_max, point)?;
        for k in 1..=cfg.k_max {
            let m = rescaled_moment_exact(&spec, k)?;
            let s = scaling[k - 1];
            csv.push(vec![
                spec.variant.name().into(),
                n.to_string(),
                spec.d.to_string(),
                spec.chi().to_string(),
                k.to_string(),
                fmt_f64(spec.x()),
                fmt_f64(rmps.eta),
                fmt_f64(m),
                fmt_f64(s),
                fmt_f64(m / s - 1.0),
            ]);
        }
    }
    run.csv("rmps_exact.csv", &csv)
}

/// Samples for `rmps-sample` and `pop-compare`.
fn draw_samples(cfg: &ExperimentConfig, stream: RandomStream) -> Result<Vec<OverlapSample>> {
    match &cfg.model {
        Model::HaarGlobal(HaarConfig { qubits, eps_glob, states }) => Ok(sample_haar_global(*qubits, *eps_glob, *states, stream)?),
        Model::Brickwall(_) => bail!("sampling commands need an rmps_* or haar_global model"),
        model => {
            let (kind, rmps) = RmpsConfig::kind(model).expect("rmps model");
            let opts = rmps.sampling.context("the rmps model needs a `sampling` section")?;
            Ok(sample_rmps_overlaps(&rmps.spec(kind)?, &opts, stream)?)
        }
    }
}

fn moments_csv(samples: &[OverlapSample], k_max: usize) -> Result<Csv> {
    let mut csv = Csv::new(&["k", "moment", "std_err"]);
    for m in empirical_moments(samples, k_max)? {
        csv.push(vec![m.k.to_string(), fmt_f64(m.value), fmt_f64(m.std_err)]);
    }
    Ok(csv)
}

fn histogram_csv(samples: &[OverlapSample], binning: &Binning) -> Result<Csv> {
    let h = pop_histogram(samples, binning)?;
    let density = h.density();
    let mut csv = Csv::new(&["lo", "hi", "count", "density"]);
    for ((edge, count), dens) in h.edges.windows(2).zip(&h.counts).zip(&density) {
        csv.push(vec![fmt_f64(edge[0]), fmt_f64(edge[1]), count.to_string(), fmt_f64(*dens)]);
    }
    Ok(csv)
}

pub fn rmps_sample(run: &mut Run, cfg: &ExperimentConfig, stream: RandomStream) -> Result<()> {
    let samples = draw_samples(cfg, stream)?;
    let mut csv = Csv::new(&["circuit", "bitstring", "w"]);
    for s in &samples {
        csv.push(vec![s.circuit.to_string(), s.bitstring_string(), fmt_f64(s.w)]);
    }
    run.csv("samples.csv", &csv)?;
    run.csv("moments.csv", &moments_csv(&samples, cfg.k_max)?)?;
    run.csv("histogram.csv", &histogram_csv(&samples, &cfg.binning)?)
}

fn brickwall_model(cfg: &ExperimentConfig) -> Result<&BrickwallConfig> {
    match &cfg.model {
        Model::Brickwall(b) => Ok(b),
        _ => bail!("this command needs a brickwall model"),
    }
}

fn curve_csv(rows: &[CurveRow]) -> Csv {
    let mut csv = Csv::new(&["n", "t", "d", "noise", "rate", "xeb", "delta_log"]);
    for r in rows {
        csv.push(vec![
            r.n.to_string(),
            r.t.to_string(),
            r.d.to_string(),
            r.noise_label.clone(),
            fmt_f64(r.rate),
            fmt_f64(r.xeb),
            fmt_f64(r.delta_log),
        ]);
    }
    csv
}

pub fn brickwall_avg(run: &mut Run, cfg: &ExperimentConfig) -> Result<()> {
    let rows = xeb_curve(&brickwall_model(cfg)?.sweep)?;
    run.csv("brickwall_avg.csv", &curve_csv(&rows))
}

#[derive(Serialize)]
struct SimSummary {
    n: usize,
    t: usize,
    rate: f64,
    circuits: usize,
    xeb_mean: f64,
    xeb_std_err: f64,
    purity_mean: f64,
    replica_average: f64,
}

pub fn brickwall_sim(run: &mut Run, cfg: &ExperimentConfig, stream: RandomStream) -> Result<()> {
    let b = brickwall_model(cfg)?;
    let circuits = b.circuits.context("brickwall-sim needs `circuits` in the brickwall model")?;
    ensure!(circuits >= 2, "need at least 2 circuits");
    let s = &b.sweep;
    let mut csv = Csv::new(&["n", "t", "circuit", "xeb", "purity"]);
    let mut summary = Vec::new();
    let mut point = 0u64;
    for &n in &s.ns {
        for &t in &s.ts {
            let spec = BrickwallSpec::new(n, t, s.d, s.noise, s.placement, s.eta0 / (n * t) as f64)?;
            let base = stream.child(point);
            point += 1;
            let outcomes: Vec<(f64, f64)> = (0..circuits as u64)
                .into_par_iter()
                .map(|c| {
                    let o = simulate_brickwall_exact(&spec, base.child(c))?;
                    Ok((empirical_xeb(&o.p_noisy, &o.p_ideal)?, o.purity))
                })
                .collect::<anticonc::Result<_>>()?;
            for (c, (xeb, purity)) in outcomes.iter().enumerate() {
                csv.push(vec![n.to_string(), t.to_string(), c.to_string(), fmt_f64(*xeb), fmt_f64(*purity)]);
            }
            let xebs: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
            let groups: Vec<usize> = (0..xebs.len()).collect();
            let (mean, se) = jackknife_mean(&xebs, &groups);
            summary.push(SimSummary {
                n,
                t,
                rate: spec.rate,
                circuits,
                xeb_mean: mean,
                xeb_std_err: se,
                purity_mean: outcomes.iter().map(|o| o.1).sum::<f64>() / circuits as f64,
                replica_average: xeb_brickwall_avg(&spec)?,
            });
        }
    }
    run.csv("brickwall_sim.csv", &csv)?;
    run.json("brickwall_sim_summary.json", &summary)
}

#[derive(Deserialize)]
struct CurveRecord {
    n: usize,
    t: usize,
    d: usize,
    noise: String,
    rate: f64,
    xeb: f64,
    delta_log: f64,
}

/// Reads the rows of a `brickwall-avg` CSV.
pub fn read_curve(path: &Path) -> Result<Vec<CurveRow>> {
    let mut reader =
        csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path).with_context(|| format!("reading {}", path.display()))?;
    reader
        .deserialize()
        .map(|rec| {
            let r: CurveRecord = rec?;
            Ok(CurveRow { n: r.n, t: r.t, d: r.d, noise_label: r.noise, rate: r.rate, xeb: r.xeb, delta_log: r.delta_log })
        })
        .collect()
}

#[derive(Serialize)]
struct FitOutput {
    fit: anticonc::analysis::FitResult,
    /// Local slopes of Δlog(1+xeb) against x̂, or why they could not be computed.
    regimes: std::result::Result<Vec<SlopeEstimate>, String>,
}

pub fn fit(run: &mut Run, input: &Path) -> Result<()> {
    let rows = read_curve(input)?;
    let fit = fit_xeb_curves(&rows)?;
    let eta = fit.eta_hat.expect("pipeline sets eta");
    let floor = (-eta).exp().ln_1p();
    let mut curve: Vec<(f64, f64)> = fit
        .x_table
        .iter()
        .filter_map(|p| rows.iter().find(|r| r.n == p.n && r.t == p.t).map(|r| (p.x_hat, (1.0 + r.xeb).ln() - floor)))
        .collect();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    let regimes = default_windows(eta).and_then(|w| regime_report(&curve, &w)).map_err(|e| e.to_string());
    run.json("fit.json", &FitOutput { fit, regimes })
}

pub fn pop_predict(run: &mut Run, x: f64, eta: f64, options: &PopOptions, grid: &[f64]) -> Result<()> {
    let prediction = pop_prediction(ScalingPoint::new(x, eta)?, options)?;
    let mut csv = Csv::new(&["w", "pdf", "pdf_log_w"]);
    for p in prediction.curve(grid) {
        csv.push(vec![fmt_f64(p.w), fmt_f64(p.pdf), fmt_f64(p.pdf_log_w)]);
    }
    run.csv("pop_curve.csv", &csv)?;
    if let Some(model) = prediction.model() {
        run.json("pop_model.json", model)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareSummary {
    x: f64,
    eta: f64,
    reference: &'static str,
    samples: usize,
    ks_distance: f64,
    ks_critical: f64,
    alpha: f64,
    ks_passes: bool,
    empirical_moments: Vec<anticonc::mc::MomentEstimate>,
    predicted_moments: Vec<f64>,
    /// RMS relative difference of repeated probe evaluations of one circuit.
    #[serde(skip_serializing_if = "Option::is_none")]
    probe_noise: Option<f64>,
}

pub fn pop_compare(run: &mut Run, cfg: &ExperimentConfig, stream: RandomStream) -> Result<()> {
    let samples = draw_samples(cfg, stream)?;
    let h = pop_histogram(&samples, &cfg.binning)?;
    let centers = h.centers();
    let mut pred_csv = Csv::new(&["w", "pdf", "pdf_log_w"]);
    let summary = match &cfg.model {
        Model::HaarGlobal(hc) => {
            let ws: Vec<f64> = samples.iter().map(|s| s.w).collect();
            let ks = ks_statistic(&ws, |w| spt_cdf(w, hc.eps_glob))?;
            for &w in &centers {
                let p = spt_pdf(w, hc.eps_glob);
                pred_csv.push(vec![fmt_f64(w), fmt_f64(p), fmt_f64(w * p)]);
            }
            let eps: f64 = hc.eps_glob;
            let crit = ks_critical_value(ws.len(), KS_ALPHA);
            CompareSummary {
                x: 0.0,
                eta: -(1.0 - eps).ln(),
                reference: "shifted_porter_thomas",
                samples: ws.len(),
                ks_distance: ks,
                ks_critical: crit,
                alpha: KS_ALPHA,
                ks_passes: ks < crit,
                empirical_moments: empirical_moments(&samples, cfg.k_max)?,
                predicted_moments: (1..=cfg.k_max as u32)
                    .map(|k| anticonc::scaling::global_depolarizing_moment(k as usize, eps))
                    .collect::<anticonc::Result<_>>()?,
                probe_noise: None,
            }
        }
        _ => {
            let (kind, rmps) = rmps_model(cfg)?;
            let spec = rmps.spec(kind)?;
            let point = ScalingPoint::new(spec.x(), rmps.eta)?;
            let prediction = pop_prediction(point, &cfg.pop)?;
            for p in prediction.curve(&centers) {
                pred_csv.push(vec![fmt_f64(p.w), fmt_f64(p.pdf), fmt_f64(p.pdf_log_w)]);
            }
            let cmp = compare_samples(&samples, &prediction, point, cfg.k_max, KS_ALPHA)?;
            let opts = rmps.sampling.expect("checked by draw_samples");
            let probe_noise = match (&spec.variant, opts.ladder_method) {
                (RmpsVariant::Ladder { .. }, LadderMethod::Probes { .. }) => {
                    let check = anticonc::mc::SampleOptions { n_circuits: 1, n_bitstrings: opts.n_bitstrings.min(200), ..opts };
                    Some(probe_noise_check(&spec, &check, stream)? / std::f64::consts::SQRT_2)
                }
                _ => None,
            };
            CompareSummary {
                x: point.x,
                eta: point.eta,
                reference: "gram_charlier",
                samples: cmp.samples,
                ks_passes: cmp.ks_passes(),
                ks_distance: cmp.ks_distance,
                ks_critical: cmp.ks_critical,
                alpha: cmp.alpha,
                empirical_moments: cmp.empirical_moments,
                predicted_moments: cmp.predicted_moments,
                probe_noise,
            }
        }
    };
    run.csv("histogram.csv", &histogram_csv(&samples, &cfg.binning)?)?;
    run.csv("prediction.csv", &pred_csv)?;
    run.json("compare.json", &summary)
}
