//! Deterministic parallel random search over a box of parameters.
//!
//! Trial `i` draws its parameters from a ChaCha stream keyed by `(seed, i)`,
//! so every trial is reproducible on its own. Trials are evaluated in fixed
//! blocks on the rayon pool and merged in index order; the running maximum,
//! the argmax (lowest index on ties) and the recorded trace are therefore
//! identical for any number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

const BLOCK: u64 = 8192;

/// Independent uniform ranges `[lower, upper)` for each coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterBox {
    names: Vec<&'static str>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ParameterBox {
    pub fn new(coords: &[(&'static str, f64, f64)]) -> Self {
        Self {
            names: coords.iter().map(|c| c.0).collect(),
            lower: coords.iter().map(|c| c.1).collect(),
            upper: coords.iter().map(|c| c.2).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[&'static str] {
        &self.names
    }

    fn sample_into(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        for (k, slot) in out.iter_mut().enumerate() {
            let u: f64 = rng.random();
            *slot = self.lower[k] + (self.upper[k] - self.lower[k]) * u;
        }
    }

    fn clamp(&self, k: usize, x: f64) -> f64 {
        x.clamp(self.lower[k], self.upper[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Number of random trials `N_r`.
    pub trials: u64,
    pub seed: u64,
    /// Density of the recorded running-maximum trace (log-spaced).
    pub checkpoints_per_decade: u32,
    /// Polish the best trial with a coordinate search after sampling.
    pub refine: bool,
}

impl SearchConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self { trials, seed, checkpoints_per_decade: 20, refine: false }
    }

    pub fn with_refinement(mut self, refine: bool) -> Self {
        self.refine = refine;
        self
    }

    pub fn with_checkpoints_per_decade(mut self, n: u32) -> Self {
        self.checkpoints_per_decade = n;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Trials evaluated so far.
    pub trials: u64,
    pub running_max: f64,
}

/// Outcome of the optional coordinate refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub value: f64,
    pub params: Vec<f64>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Largest objective value over the random trials.
    pub best_value: f64,
    pub best_params: Vec<f64>,
    pub best_trial: u64,
    pub param_names: Vec<&'static str>,
    /// Running maximum at log-spaced trial counts; the last point is at `trials`.
    pub trace: Vec<TracePoint>,
    pub seed: u64,
    pub trials: u64,
    pub refinement: Option<Refinement>,
}

impl SearchResult {
    /// Refined value when refinement ran and improved on sampling, else `best_value`.
    pub fn value(&self) -> f64 {
        match &self.refinement {
            Some(r) if r.value > self.best_value => r.value,
            _ => self.best_value,
        }
    }
}

/// Log-spaced trial counts `1, ..., trials` (deduplicated, always ending at `trials`).
pub fn checkpoints(trials: u64, per_decade: u32) -> Vec<u64> {
    let mut out = Vec::new();
    let per_decade = per_decade.max(1) as f64;
    let mut k = 0u32;
    loop {
        let n = 10f64.powf(k as f64 / per_decade).round() as u64;
        if n >= trials {
            break;
        }
        if out.last() != Some(&n) {
            out.push(n);
        }
        k += 1;
    }
    out.push(trials);
    out
}

fn stream_key(seed: u64) -> [u8; 32] {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

fn trial_params(space: &ParameterBox, key: [u8; 32], trial: u64, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    space.sample_into(&mut rng, out);
}

/// Parameters drawn for `trial` under `seed`.
pub fn params_for_trial(space: &ParameterBox, seed: u64, trial: u64) -> Vec<f64> {
    let mut p = vec![0.0; space.dim()];
    trial_params(space, stream_key(seed), trial, &mut p);
    p
}

/// Maximizes `objective` over `cfg.trials` random points of `space`.
pub fn random_search<F>(space: &ParameterBox, cfg: &SearchConfig, objective: F) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let key = stream_key(cfg.seed);
    let marks = checkpoints(cfg.trials, cfg.checkpoints_per_decade);
    let mut next_mark = 0;
    let mut trace = Vec::with_capacity(marks.len());
    let mut best = f64::NEG_INFINITY;
    let mut best_trial = 0;

    let mut start = 0;
    while start < cfg.trials {
        let end = (start + BLOCK).min(cfg.trials);
        let values = (start..end)
            .into_par_iter()
            .map_init(
                || vec![0.0; space.dim()],
                |buf, i| {
                    trial_params(space, key, i, buf);
                    objective(buf)
                },
            )
            .collect::<Result<Vec<f64>>>()?;
        for (offset, v) in values.into_iter().enumerate() {
            let i = start + offset as u64;
            if v > best {
                best = v;
                best_trial = i;
            }
            while next_mark < marks.len() && marks[next_mark] == i + 1 {
                trace.push(TracePoint { trials: i + 1, running_max: best });
                next_mark += 1;
            }
        }
        start = end;
    }
    if !best.is_finite() {
        return Err(Error::InvalidArgument("objective produced no finite value".into()));
    }

    let mut best_params = vec![0.0; space.dim()];
    trial_params(space, key, best_trial, &mut best_params);
    let refinement = if cfg.refine { Some(coordinate_refine(space, &best_params, best, &objective)?) } else { None };
    Ok(SearchResult {
        best_value: best,
        best_params,
        best_trial,
        param_names: space.names().to_vec(),
        trace,
        seed: cfg.seed,
        trials: cfg.trials,
        refinement,
    })
}

/// Compass search: try `+-step` along each coordinate, halve the step when nothing improves.
fn coordinate_refine<F>(space: &ParameterBox, start: &[f64], start_value: f64, objective: &F) -> Result<Refinement>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut params = start.to_vec();
    let mut value = start_value;
    let mut steps: Vec<f64> = (0..space.dim()).map(|k| 0.05 * (space.upper[k] - space.lower[k])).collect();
    let mut evaluations = 0;
    for _ in 0..200 {
        let mut improved = false;
        for k in 0..space.dim() {
            for dir in [1.0, -1.0] {
                let mut cand = params.clone();
                cand[k] = space.clamp(k, cand[k] + dir * steps[k]);
                let v = objective(&cand)?;
                evaluations += 1;
                if v > value {
                    value = v;
                    params = cand;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            steps.iter_mut().for_each(|s| *s *= 0.5);
            if steps.iter().all(|&s| s < 1e-10) {
                break;
            }
        }
    }
    Ok(Refinement { value, params, evaluations })
}
