use super::OverlapSample;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Linear XEB of one circuit: D Σ_x p_noisy(x) p_ideal(x) − 1.
pub fn empirical_xeb(p_noisy: &[f64], p_ideal: &[f64]) -> Result<f64> {
    if p_noisy.is_empty() {
        return Err(Error::Invalid("empty probability vector".into()));
    }
    if p_noisy.len() != p_ideal.len() {
        return Err(Error::Invalid(format!("probability vectors differ in length: {} vs {}", p_noisy.len(), p_ideal.len())));
    }
    let dot: f64 = p_noisy.iter().zip(p_ideal).map(|(a, b)| a * b).sum();
    Ok(p_noisy.len() as f64 * dot - 1.0)
}

/// Grouped delete-one jackknife of the mean. Observations sharing a group
/// label (a circuit) are removed together, which accounts for correlations
/// between bitstrings of the same circuit. Returns (mean, standard error).
pub fn jackknife_mean<G: Ord + Copy>(values: &[f64], groups: &[G]) -> (f64, f64) {
    assert_eq!(values.len(), groups.len());
    let mut sums: BTreeMap<G, (f64, usize)> = BTreeMap::new();
    for (&v, &g) in values.iter().zip(groups) {
        let e = sums.entry(g).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    let total: f64 = values.iter().sum();
    let n = values.len();
    let mean = total / n as f64;
    let g = sums.len();
    if g < 2 {
        return (mean, f64::NAN);
    }
    let loo: Vec<f64> = sums.values().map(|&(s, c)| (total - s) / (n - c) as f64).collect();
    let loo_mean = loo.iter().sum::<f64>() / g as f64;
    let var = loo.iter().map(|v| (v - loo_mean).powi(2)).sum::<f64>() * (g - 1) as f64 / g as f64;
    (mean, var.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: usize,
    pub value: f64,
    pub std_err: f64,
}

/// Sample moments E[w^k], k = 1..=k_max, with jackknife errors over circuits.
pub fn empirical_moments(samples: &[OverlapSample], k_max: usize) -> Result<Vec<MomentEstimate>> {
    if samples.is_empty() {
        return Err(Error::Invalid("no samples".into()));
    }
    if k_max == 0 {
        return Err(Error::Invalid("k_max must be at least 1".into()));
    }
    let groups: Vec<u64> = samples.iter().map(|s| s.circuit).collect();
    Ok((1..=k_max)
        .map(|k| {
            let vals: Vec<f64> = samples.iter().map(|s| s.w.powi(k as i32)).collect();
            let (value, std_err) = jackknife_mean(&vals, &groups);
            MomentEstimate { k, value, std_err }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Binning {
    LogSpaced { min: f64, max: f64, bins: usize },
    Linear { min: f64, max: f64, bins: usize },
}

impl Default for Binning {
    fn default() -> Self {
        Binning::LogSpaced { min: 1e-4, max: 50.0, bins: 120 }
    }
}

impl Binning {
    pub fn edges(&self) -> Result<Vec<f64>> {
        match *self {
            Binning::LogSpaced { min, max, bins } => {
                if !(min > 0.0 && max > min && bins > 0) {
                    return Err(Error::Invalid(format!("bad log binning [{min}, {max}] x {bins}")));
                }
                let (a, b) = (min.ln(), max.ln());
                Ok((0..=bins).map(|i| (a + (b - a) * i as f64 / bins as f64).exp()).collect())
            }
            Binning::Linear { min, max, bins } => {
                if !(max > min && bins > 0) {
                    return Err(Error::Invalid(format!("bad linear binning [{min}, {max}] x {bins}")));
                }
                Ok((0..=bins).map(|i| min + (max - min) * i as f64 / bins as f64).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    pub total: u64,
}

impl Histogram {
    /// Probability density per bin, normalized by the total count
    /// (under- and overflow included in the total).
    pub fn density(&self) -> Vec<f64> {
        self.counts.iter().zip(self.edges.windows(2)).map(|(&c, e)| c as f64 / (self.total as f64 * (e[1] - e[0]))).collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }
}

pub fn pop_histogram(samples: &[OverlapSample], binning: &Binning) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::Invalid("no samples".into()));
    }
    let edges = binning.edges()?;
    let bins = edges.len() - 1;
    let mut h = Histogram { counts: vec![0; bins], underflow: 0, overflow: 0, total: samples.len() as u64, edges };
    for s in samples {
        if s.w < h.edges[0] {
            h.underflow += 1;
        } else if s.w >= h.edges[bins] {
            h.overflow += 1;
        } else {
            let i = h.edges.partition_point(|&e| e <= s.w) - 1;
            h.counts[i.min(bins - 1)] += 1;
        }
    }
    Ok(h)
}

/// One-sample Kolmogorov–Smirnov distance sup |F_n − F|.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Invalid("no samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Asymptotic KS critical value at significance `alpha`,
/// sqrt(−ln(α/2)/2)/√n (1.6276/√n at α = 0.01).
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{sample_haar_state, RandomStream};
    use crate::scaling::reference::{pt_cdf, spt_cdf};

    fn haar_samples(n_states: usize, dim: usize, eps: f64, seed: u64) -> (Vec<OverlapSample>, Vec<f64>) {
        let mut out = Vec::new();
        let mut xebs = Vec::new();
        for c in 0..n_states {
            let mut rng = RandomStream::new(seed, c as u64).rng();
            let psi = sample_haar_state(dim, &mut rng);
            let ideal: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
            let noisy: Vec<f64> = ideal.iter().map(|p| (1.0 - eps) * p + eps / dim as f64).collect();
            xebs.push(empirical_xeb(&noisy, &ideal).unwrap());
            out.extend(noisy.iter().enumerate().map(|(x, p)| OverlapSample {
                w: dim as f64 * p,
                circuit: c as u64,
                bitstring: (0..10).rev().map(|b| ((x >> b) & 1) as u8).collect(),
            }));
        }
        (out, xebs)
    }

    #[test]
    fn xeb_of_identical_haar_state_is_one() {
        let (_, xebs) = haar_samples(200, 1024, 0.0, 1);
        let groups: Vec<usize> = (0..xebs.len()).collect();
        let (m, se) = jackknife_mean(&xebs, &groups);
        assert!((m - 1.0).abs() < 3.0 * se, "{m} ± {se}");
    }

    #[test]
    fn global_depolarizing_shifts_support_and_xeb() {
        let eps = 0.4;
        let (samples, xebs) = haar_samples(100, 1024, eps, 2);
        let groups: Vec<usize> = (0..xebs.len()).collect();
        let (m, se) = jackknife_mean(&xebs, &groups);
        assert!((m - 0.6).abs() < 3.0 * se);
        let wmin = samples.iter().map(|s| s.w).fold(f64::INFINITY, f64::min);
        assert!(wmin >= eps && wmin < eps + 1e-3, "support starts at {wmin}");
        let ws: Vec<f64> = samples.iter().map(|s| s.w).collect();
        let d = ks_statistic(&ws, |w| spt_cdf(w, eps)).unwrap();
        assert!(d < ks_critical_value(ws.len(), 0.01));
    }

    #[test]
    fn porter_thomas_ks() {
        let (samples, _) = haar_samples(100, 1024, 0.0, 3);
        let ws: Vec<f64> = samples.iter().map(|s| s.w).collect();
        let d = ks_statistic(&ws, pt_cdf).unwrap();
        assert!(d < ks_critical_value(ws.len(), 0.01), "{d}");
        let h = pop_histogram(&samples, &Binning::default()).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>() + h.underflow + h.overflow, h.total);
    }

    #[test]
    fn ks_critical_value_at_one_percent() {
        assert!((ks_critical_value(1, 0.01) - 1.6276).abs() < 1e-4);
    }

    #[test]
    fn jackknife_equals_standard_error_for_singletons() {
        let xs = [1.0, 2.0, 4.0, 7.0];
        let (m, se) = jackknife_mean(&xs, &[0, 1, 2, 3]);
        let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 3.0;
        assert!((se - (var / 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn jackknife_shrinks_with_more_circuits() {
        let (s1, _) = haar_samples(100, 64, 0.0, 4);
        let (s2, _) = haar_samples(400, 64, 0.0, 5);
        let e1 = empirical_moments(&s1, 2).unwrap()[1].std_err;
        let e2 = empirical_moments(&s2, 2).unwrap()[1].std_err;
        let ratio = e1 / e2;
        assert!((1.5..2.7).contains(&ratio), "{ratio}");
    }

    #[test]
    fn empty_inputs_are_errors() {
        assert!(empirical_moments(&[], 2).is_err());
        assert!(empirical_xeb(&[], &[]).is_err());
        assert!(ks_statistic(&[], pt_cdf).is_err());
    }
}
