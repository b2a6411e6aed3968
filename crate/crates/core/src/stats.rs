//! Monte Carlo plumbing: fixed-size trial chunks, ordered aggregation and
//! the [`ExperimentReport`] summary.
//!
//! Trials are split into chunks of [`CHUNK`] trials; chunk `c` draws from
//! substream `c` of the seed. Results are reduced in chunk order, so the
//! outcome never depends on how many rayon workers ran the chunks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::{substream, StreamRng};

pub const CHUNK: u64 = 1024;
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment_id: String,
    pub params: Vec<(String, String)>,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub seed: u64,
    #[serde(default)]
    pub wall_clock_secs: f64,
}

impl ExperimentReport {
    pub fn from_moments(id: &str, trials: u64, sum: f64, sum_sq: f64, seed: u64) -> Self {
        let n = trials.max(1) as f64;
        let mean = sum / n;
        let var = if trials > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        Self::from_estimate(id, trials, mean, (var / n).sqrt(), seed)
    }

    pub fn from_estimate(id: &str, trials: u64, estimate: f64, stderr: f64, seed: u64) -> Self {
        ExperimentReport {
            experiment_id: id.to_string(),
            params: Vec::new(),
            trials,
            estimate,
            stderr,
            ci95_lo: estimate - Z95 * stderr,
            ci95_hi: estimate + Z95 * stderr,
            seed,
            wall_clock_secs: 0.0,
        }
    }

    pub fn with_param(mut self, name: &str, value: impl ToString) -> Self {
        self.params.push((name.to_string(), value.to_string()));
        self
    }
}

/// Sum and sum of squares over a batch of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn merge(mut self, o: Moments) -> Moments {
        self.n += o.n;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    pub fn report(&self, id: &str, seed: u64) -> ExperimentReport {
        ExperimentReport::from_moments(id, self.n, self.sum, self.sum_sq, seed)
    }
}

/// Runs `trials` independent trials of `f` in fixed chunks and returns the
/// ordered sum of moments.
pub fn run_trials<F>(trials: u64, seed: u64, f: F) -> Moments
where
    F: Fn(&mut StreamRng) -> f64 + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c);
            let len = CHUNK.min(trials - c * CHUNK);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(f(&mut rng));
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// Like [`run_trials`] but for vector-valued trials: returns per-component
/// sums in chunk order.
pub fn run_trials_vec<F>(trials: u64, seed: u64, width: usize, f: F) -> Vec<f64>
where
    F: Fn(&mut StreamRng, &mut [f64]) + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c);
            let len = CHUNK.min(trials - c * CHUNK);
            let mut acc = vec![0.0; width];
            for _ in 0..len {
                f(&mut rng, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; width];
    for p in parts {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// One result per index, item `i` drawing from substream `i`; returned in
/// index order.
pub fn run_indexed<T, F>(count: u64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut StreamRng) -> T + Sync,
{
    (0..count).into_par_iter().map(|i| f(i, &mut substream(seed, i))).collect()
}

/// Fixed-column CSV: `experiment_id`, the parameter names of the first
/// report, then `trials,estimate,stderr,ci95_lo,ci95_hi,seed`. Reports
/// with other parameter names get their own header block.
pub fn to_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::new();
    let mut header: Option<Vec<&str>> = None;
    for r in reports {
        let names: Vec<&str> = r.params.iter().map(|(k, _)| k.as_str()).collect();
        if header.as_ref() != Some(&names) {
            let mut cols = vec!["experiment_id"];
            cols.extend(&names);
            cols.extend(["trials", "estimate", "stderr", "ci95_lo", "ci95_hi", "seed"]);
            out.push_str(&cols.join(","));
            out.push('\n');
            header = Some(names);
        }
        let mut row = vec![csv_field(&r.experiment_id)];
        row.extend(r.params.iter().map(|(_, v)| csv_field(v)));
        row.extend([
            r.trials.to_string(),
            r.estimate.to_string(),
            r.stderr.to_string(),
            r.ci95_lo.to_string(),
            r.ci95_hi.to_string(),
            r.seed.to_string(),
        ]);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn csv_field(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

/// Standard error of a Bernoulli mean.
pub fn bernoulli_stderr(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}
