//! Gaussian-emission hidden Markov model: Baum-Welch fitting and Viterbi
//! decoding.
//!
//! Emissions are handled in log space and rescaled per time step, so long
//! or widely spread series do not underflow. Fitted models are returned in
//! canonical order: state 0 has the lowest emission mean.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HmmConfig {
    pub n_states: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub variance_floor: f64,
    pub seed: u64,
    /// Extra seeded random initialisations tried after the sorted split.
    pub restarts: usize,
}

impl Default for HmmConfig {
    fn default() -> Self {
        Self { n_states: 2, max_iter: 200, tol: 1e-8, variance_floor: 1e-6, seed: 42, restarts: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HmmModel {
    pub n_states: usize,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    /// Row-stochastic, `transition[i][j] = P(next = j | current = i)`.
    pub transition: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HmmFit {
    pub model: HmmModel,
    /// Log-likelihood after each EM iteration of the selected start.
    pub log_likelihoods: Vec<f64>,
    pub converged: bool,
    /// All observations equal; both states collapsed onto the constant.
    pub degenerate: bool,
}

fn log_pdf(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * ((2.0 * PI * var).ln() + (x - mean).powi(2) / var)
}

impl HmmModel {
    pub fn validate(&self) -> Result<()> {
        let k = self.n_states;
        if self.means.len() != k || self.variances.len() != k || self.initial.len() != k {
            return Err(Error::Domain("HMM parameter lengths disagree with n_states".into()));
        }
        if self.transition.len() != k || self.transition.iter().any(|r| r.len() != k) {
            return Err(Error::Domain("HMM transition matrix has wrong shape".into()));
        }
        for row in &self.transition {
            if (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 || row.iter().any(|p| *p < 0.0) {
                return Err(Error::Domain("HMM transition rows must be probability vectors".into()));
            }
        }
        if self.variances.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Domain("HMM variances must be positive".into()));
        }
        Ok(())
    }

    /// Reorders states by ascending emission mean.
    pub fn canonical(&self) -> HmmModel {
        let mut order: Vec<usize> = (0..self.n_states).collect();
        order.sort_by(|&a, &b| self.means[a].total_cmp(&self.means[b]).then(a.cmp(&b)));
        HmmModel {
            n_states: self.n_states,
            means: order.iter().map(|&i| self.means[i]).collect(),
            variances: order.iter().map(|&i| self.variances[i]).collect(),
            transition: order
                .iter()
                .map(|&i| order.iter().map(|&j| self.transition[i][j]).collect())
                .collect(),
            initial: order.iter().map(|&i| self.initial[i]).collect(),
        }
    }

    /// Per-step emission likelihoods scaled by their row maximum, plus the
    /// log of that maximum.
    fn scaled_emissions(&self, series: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
        series
            .iter()
            .map(|&x| {
                let logs: Vec<f64> =
                    (0..self.n_states).map(|i| log_pdf(x, self.means[i], self.variances[i])).collect();
                let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (logs.iter().map(|l| (l - max).exp()).collect(), max)
            })
            .unzip()
    }

    /// Scaled forward-backward pass. Returns (alpha, beta, scales, loglik).
    #[allow(clippy::type_complexity)]
    fn forward_backward(&self, emis: &[Vec<f64>], emis_log_max: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>, f64) {
        let k = self.n_states;
        let t_len = emis.len();
        let mut alpha = vec![vec![0.0; k]; t_len];
        let mut scale = vec![0.0; t_len];
        for t in 0..t_len {
            for j in 0..k {
                let prior = if t == 0 {
                    self.initial[j]
                } else {
                    (0..k).map(|i| alpha[t - 1][i] * self.transition[i][j]).sum()
                };
                alpha[t][j] = prior * emis[t][j];
            }
            let c: f64 = alpha[t].iter().sum();
            let c = if c > 0.0 { c } else { f64::MIN_POSITIVE };
            alpha[t].iter_mut().for_each(|a| *a /= c);
            scale[t] = c;
        }
        let mut beta = vec![vec![1.0; k]; t_len];
        for t in (0..t_len.saturating_sub(1)).rev() {
            for i in 0..k {
                beta[t][i] = (0..k)
                    .map(|j| self.transition[i][j] * emis[t + 1][j] * beta[t + 1][j])
                    .sum::<f64>()
                    / scale[t + 1];
            }
        }
        let loglik = scale.iter().map(|c| c.ln()).sum::<f64>() + emis_log_max.iter().sum::<f64>();
        (alpha, beta, scale, loglik)
    }

    pub fn log_likelihood(&self, series: &[f64]) -> f64 {
        let (emis, maxes) = self.scaled_emissions(series);
        self.forward_backward(&emis, &maxes).3
    }
}

fn em_step(model: &HmmModel, series: &[f64], floor: f64) -> (HmmModel, f64) {
    let k = model.n_states;
    let t_len = series.len();
    let (emis, maxes) = model.scaled_emissions(series);
    let (alpha, beta, scale, loglik) = model.forward_backward(&emis, &maxes);

    let gamma: Vec<Vec<f64>> = (0..t_len)
        .map(|t| {
            let row: Vec<f64> = (0..k).map(|i| alpha[t][i] * beta[t][i]).collect();
            let s: f64 = row.iter().sum();
            row.iter().map(|g| g / s).collect()
        })
        .collect();

    let mut xi_sum = vec![vec![0.0; k]; k];
    for t in 0..t_len - 1 {
        for i in 0..k {
            for j in 0..k {
                xi_sum[i][j] +=
                    alpha[t][i] * model.transition[i][j] * emis[t + 1][j] * beta[t + 1][j] / scale[t + 1];
            }
        }
    }

    let mut next = model.clone();
    next.initial = gamma[0].clone();
    for i in 0..k {
        let row_total: f64 = xi_sum[i].iter().sum();
        if row_total > 0.0 {
            next.transition[i] = xi_sum[i].iter().map(|x| x / row_total).collect();
        }
        let weight: f64 = gamma.iter().map(|g| g[i]).sum();
        if weight > 1e-300 {
            let mean = gamma.iter().zip(series).map(|(g, x)| g[i] * x).sum::<f64>() / weight;
            let var = gamma.iter().zip(series).map(|(g, x)| g[i] * (x - mean).powi(2)).sum::<f64>() / weight;
            next.means[i] = mean;
            next.variances[i] = var.max(floor);
        }
    }
    (next, loglik)
}

fn sorted_split_start(series: &[f64], k: usize, floor: f64) -> HmmModel {
    let mut sorted = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut means = Vec::with_capacity(k);
    let mut variances = Vec::with_capacity(k);
    for c in 0..k {
        let chunk = &sorted[c * n / k..(c + 1) * n / k];
        let m = chunk.iter().sum::<f64>() / chunk.len() as f64;
        let v = chunk.iter().map(|x| (x - m).powi(2)).sum::<f64>() / chunk.len() as f64;
        means.push(m);
        variances.push(v.max(floor));
    }
    start_model(means, variances)
}

fn start_model(means: Vec<f64>, variances: Vec<f64>) -> HmmModel {
    let k = means.len();
    let stay = 0.8;
    let transition = (0..k)
        .map(|i| (0..k).map(|j| if i == j { stay } else { (1.0 - stay) / (k - 1) as f64 }).collect())
        .collect();
    HmmModel { n_states: k, means, variances, transition, initial: vec![1.0 / k as f64; k] }
}

fn run_em(mut model: HmmModel, series: &[f64], config: &HmmConfig) -> (HmmModel, Vec<f64>, bool) {
    let mut lls = Vec::new();
    let mut converged = false;
    for _ in 0..config.max_iter {
        let (next, ll) = em_step(&model, series, config.variance_floor);
        let improved = lls.last().map(|prev| ll - prev);
        lls.push(ll);
        model = next;
        if improved.is_some_and(|d| d.abs() < config.tol) {
            converged = true;
            break;
        }
    }
    // Log-likelihood of the final parameters.
    lls.push(model.log_likelihood(series));
    (model, lls, converged)
}

/// Fits a Gaussian HMM by Baum-Welch. Deterministic for a fixed config.
pub fn hmm_fit(series: &[f64], config: &HmmConfig) -> Result<HmmFit> {
    let k = config.n_states;
    if k < 2 {
        return Err(Error::Domain("HMM needs at least two states".into()));
    }
    if series.len() < 2 * k {
        return Err(Error::Domain(format!("HMM needs at least {} observations, got {}", 2 * k, series.len())));
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("HMM input must be finite".into()));
    }
    if !(config.variance_floor > 0.0) {
        return Err(Error::Domain("variance floor must be positive".into()));
    }

    let first = series[0];
    if series.iter().all(|&x| x == first) {
        let model = start_model(vec![first; k], vec![config.variance_floor; k]);
        let ll = model.log_likelihood(series);
        return Ok(HmmFit { model, log_likelihoods: vec![ll], converged: true, degenerate: true });
    }

    let mut best = run_em(sorted_split_start(series, k, config.variance_floor), series, config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = (series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).max(config.variance_floor);
    for _ in 0..config.restarts {
        let means = (0..k).map(|_| series[rng.gen_range(0..series.len())]).collect();
        let candidate = run_em(start_model(means, vec![var; k]), series, config);
        if candidate.1.last() > best.1.last() {
            best = candidate;
        }
    }
    let (model, log_likelihoods, converged) = best;
    Ok(HmmFit { model: model.canonical(), log_likelihoods, converged, degenerate: false })
}

/// Most likely state path (Viterbi). Ties go to the lower state index.
pub fn hmm_decode(model: &HmmModel, series: &[f64]) -> Result<Vec<usize>> {
    model.validate()?;
    if series.is_empty() {
        return Ok(Vec::new());
    }
    let k = model.n_states;
    let ln = |p: f64| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY };
    let emit = |x: f64, i: usize| log_pdf(x, model.means[i], model.variances[i]);

    let mut delta: Vec<f64> = (0..k).map(|i| ln(model.initial[i]) + emit(series[0], i)).collect();
    let mut back = Vec::with_capacity(series.len());
    for &x in &series[1..] {
        let mut next = vec![f64::NEG_INFINITY; k];
        let mut ptr = vec![0; k];
        for j in 0..k {
            for i in 0..k {
                let cand = delta[i] + ln(model.transition[i][j]);
                if cand > next[j] {
                    next[j] = cand;
                    ptr[j] = i;
                }
            }
            next[j] += emit(x, j);
        }
        back.push(ptr);
        delta = next;
    }
    let mut state = (0..k).fold(0, |best, i| if delta[i] > delta[best] { i } else { best });
    let mut path = vec![state; series.len()];
    for (t, ptr) in back.iter().enumerate().rev() {
        state = ptr[state];
        path[t] = state;
    }
    Ok(path)
}
