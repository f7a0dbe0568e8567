//! Scaling-limit moments E[w^k] = (1|exp(xA − ηP)|1), the closed-form XEB
//! and its asymptotic regimes.

use crate::error::{check_range, Error, Result};
use crate::perm::{ConjugacyClasses, PermutationTable};
use crate::replica::ReplicaMatrix;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub mod reference;

/// Largest k for which scaling moments are offered.
pub const MAX_MOMENT: usize = 7;

/// Rescaled inverse depth x and rescaled error count η.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub x: f64,
    pub eta: f64,
}

impl ScalingPoint {
    pub fn new(x: f64, eta: f64) -> Result<Self> {
        check_range("x", x, 0.0, f64::MAX, "[0, inf)")?;
        check_range("eta", eta, 0.0, f64::MAX, "[0, inf)")?;
        Ok(Self { x, eta })
    }

    /// θ = √(x² + η²/4), the argument of the closed-form XEB.
    pub fn theta(&self) -> f64 {
        self.x.hypot(self.eta / 2.0)
    }

    pub fn regime(&self) -> RegimeLabel {
        RegimeLabel::classify(self.x, self.eta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeLabel {
    ShortDepth,
    Intermediate,
    Deep,
}

impl RegimeLabel {
    /// Short depth when x > 3η; deep when x < min(1, η/3); intermediate otherwise.
    pub fn classify(x: f64, eta: f64) -> Self {
        if x > 3.0 * eta {
            Self::ShortDepth
        } else if x < f64::min(1.0, eta / 3.0) {
            Self::Deep
        } else {
            Self::Intermediate
        }
    }
}

/// A and P collapsed onto class functions of S_k.
///
/// Both matrices commute with simultaneous conjugation and |1) is
/// conjugation invariant, so exp(xA − ηP)|1) stays constant on conjugacy
/// classes. The exponential can then be taken on a p(k)×p(k) matrix
/// (11×11 at k = 6) instead of k!×k!.
///
/// With S the diagonal of class sizes, S^{1/2} M S^{−1/2} is symmetric for
/// the lumped M, so the moment is Σ_λ (v_λ·√s)² e^λ. Every term is positive,
/// which keeps the result within a few ulps where scaling and squaring
/// loses an order of magnitude more at large x.
#[derive(Debug)]
pub struct LumpedGenerator {
    k: usize,
    /// Symmetrized A and P.
    a: DMatrix<f64>,
    p: DMatrix<f64>,
    sqrt_sizes: DVector<f64>,
}

impl LumpedGenerator {
    fn build(k: usize) -> Result<Self> {
        let table = PermutationTable::enumerate(k)?;
        let classes: ConjugacyClasses = table.conjugacy_classes();
        let sqrt_sizes = DVector::from_iterator(classes.len(), classes.members.iter().map(|m| (m.len() as f64).sqrt()));
        let symmetrize = |m: DMatrix<f64>| {
            let h = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| sqrt_sizes[i] * m[(i, j)] / sqrt_sizes[j]);
            (&h + h.transpose()) * 0.5
        };
        let a = symmetrize(table.transposition_adjacency().lump(&classes));
        let p = symmetrize(table.fixed_point_matrix().lump(&classes));
        Ok(Self { k, a, p, sqrt_sizes })
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// (1|exp(xA − ηP)|1).
    pub fn moment(&self, point: ScalingPoint) -> f64 {
        let eig = (&self.a * point.x - &self.p * point.eta).symmetric_eigen();
        let proj = eig.eigenvectors.transpose() * &self.sqrt_sizes;
        proj.iter().zip(eig.eigenvalues.iter()).map(|(c, l)| c * c * l.exp()).sum()
    }
}

fn generator(k: usize) -> Result<Arc<LumpedGenerator>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LumpedGenerator>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().expect("generator cache poisoned").get(&k) {
        return Ok(g.clone());
    }
    let g = Arc::new(LumpedGenerator::build(k)?);
    cache.lock().expect("generator cache poisoned").insert(k, g.clone());
    Ok(g)
}

fn check_k(k: usize) -> Result<()> {
    if (1..=MAX_MOMENT).contains(&k) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange { k, max: MAX_MOMENT })
    }
}

/// E[w^k] in the scaling limit, i.e. D^{k−1}I_k = (1|exp(xA − ηP)|1).
pub fn rescaled_moment(k: usize, point: ScalingPoint) -> Result<f64> {
    check_k(k)?;
    Ok(generator(k)?.moment(point))
}

/// Moments for k = 1..=k_max.
pub fn rescaled_moments(k_max: usize, point: ScalingPoint) -> Result<Vec<f64>> {
    (1..=k_max).map(|k| rescaled_moment(k, point)).collect()
}

/// Same quantity via the exponential of the full k!×k! generator. Kept as
/// a cross-check of the class-function reduction.
pub fn rescaled_moment_dense(k: usize, point: ScalingPoint) -> Result<f64> {
    check_k(k)?;
    let table = PermutationTable::enumerate(k)?;
    let m = dense_generator(&table, point);
    let ones = DVector::from_element(table.len(), 1.0);
    Ok(ones.dot(&(m.exp() * &ones)))
}

pub(crate) fn dense_generator(table: &PermutationTable, point: ScalingPoint) -> DMatrix<f64> {
    let a: ReplicaMatrix = table.transposition_adjacency();
    let p = table.fixed_point_matrix();
    a.as_matrix() * point.x - p.as_matrix() * point.eta
}

/// Closed-form linear XEB, 2e^{−η/2}[cosh θ + x sinh θ/θ] − 1.
pub fn xeb_scaling(point: ScalingPoint) -> f64 {
    let th = point.theta();
    let sinhc = if th < 1e-8 { 1.0 + th * th / 6.0 } else { th.sinh() / th };
    2.0 * (-point.eta / 2.0).exp() * (th.cosh() + point.x * sinhc) - 1.0
}

/// log(1 + xeb) − log(1 + e^{−η}): the excess over the deep-circuit floor.
pub fn delta_log_xeb(point: ScalingPoint) -> f64 {
    (1.0 + xeb_scaling(point)).ln() - (-point.eta).exp().ln_1p()
}

/// Short-depth asymptote k!·exp(x k(k−1)/2 − η(k−1)), valid for η ≪ x.
pub fn asymptotic_moment_short_depth(k: usize, point: ScalingPoint) -> Result<f64> {
    check_k(k)?;
    if point.x <= 0.0 {
        return Err(Error::OutOfRange { name: "x", value: point.x, allowed: "x > 0" });
    }
    let kf = k as f64;
    let kfact: f64 = (1..=k).map(|i| i as f64).product();
    Ok(kfact * (point.x * kf * (kf - 1.0) / 2.0 - point.eta * (kf - 1.0)).exp())
}

/// Deep-regime asymptote exp(x²k(k−1)/(4η))·(1 + x k(k−1)/(2η)), valid for x ≪ η.
pub fn asymptotic_moment_deep(k: usize, point: ScalingPoint) -> Result<f64> {
    check_k(k)?;
    let (quad, lin) = deep_regime_terms(k, point)?;
    Ok(quad.exp() * (1.0 + lin))
}

/// The two corrections in the deep asymptote: x²k(k−1)/(4η) and x k(k−1)/(2η).
pub fn deep_regime_terms(k: usize, point: ScalingPoint) -> Result<(f64, f64)> {
    if point.eta <= 0.0 {
        return Err(Error::OutOfRange { name: "eta", value: point.eta, allowed: "eta > 0" });
    }
    let c = (k * (k - 1)) as f64;
    Ok((point.x * point.x * c / (4.0 * point.eta), point.x * c / (2.0 * point.eta)))
}

/// Σ_σ (1 − ε_glob)^{P_σσ}: the moments of the shifted Porter–Thomas law.
pub fn global_depolarizing_moment(k: usize, eps_glob: f64) -> Result<f64> {
    check_k(k)?;
    check_range("eps_glob", eps_glob, 0.0, 1.0, "[0, 1]")?;
    let table = PermutationTable::enumerate(k)?;
    let s = 1.0 - eps_glob;
    Ok(table.elements().iter().map(|p| s.powi((k - p.fixed_points()) as i32)).sum())
}
