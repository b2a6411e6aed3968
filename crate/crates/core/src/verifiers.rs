//! Numerical oracles: Gaussian-approximation checks, noise stability,
//! Sheppard-law calibration and a chi-square goodness-of-fit helper.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Error, Result};
use crate::primitives::{sheppard, BernoulliWords, BitVector};
use crate::protocols::gip_agreement_rate;
use crate::stats::{run_trials, run_trials_vec, ExperimentReport};

/// Upper-tail p-value of Pearson's statistic for `counts` against
/// `expected` probabilities. Cells with expected count below 5 are pooled.
pub fn chi_square_p_value(counts: &[u64], expected: &[f64]) -> Result<f64> {
    if counts.len() != expected.len() {
        return Err(Error::LengthMismatch { left: counts.len(), right: expected.len() });
    }
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(invalid("no observations"));
    }
    let n = n as f64;
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut pool_obs, mut pool_exp) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(expected) {
        let e = p * n;
        if p == 0.0 {
            if c > 0 {
                return Ok(0.0);
            }
            continue;
        }
        if e < 5.0 {
            pool_obs += c as f64;
            pool_exp += e;
            continue;
        }
        stat += (c as f64 - e).powi(2) / e;
        cells += 1;
    }
    if pool_exp > 0.0 {
        stat += (pool_obs - pool_exp).powi(2) / pool_exp;
        cells += 1;
    }
    if cells < 2 {
        return Ok(1.0);
    }
    let dist = ChiSquared::new((cells - 1) as f64).map_err(|e| invalid(e.to_string()))?;
    Ok(dist.sf(stat))
}

/// Monte Carlo rate at which two rho-correlated standard Gaussians have
/// different signs.
pub fn sign_disagreement_mc(rho: f64, trials: u64, seed: u64) -> Result<ExperimentReport> {
    let target = sheppard(rho)?;
    let rho = rho.clamp(-1.0, 1.0);
    let side = (1.0 - rho * rho).sqrt();
    let m = run_trials(trials, seed, |rng| {
        let a: f64 = rng.sample(StandardNormal);
        let b = rho * a + side * rng.sample::<f64, _>(StandardNormal);
        f64::from(u8::from((a >= 0.0) != (b >= 0.0)))
    });
    Ok(m.report("sign-disagreement", seed).with_param("rho", rho).with_param("sheppard", target))
}

/// Monte Carlo `E[Maj(x) Maj(y)]` for the +-1 majority on `k` bits with
/// rho-correlated inputs (ties count as +1).
pub fn noise_stability_mc(k: usize, rho: f64, trials: u64, seed: u64) -> Result<ExperimentReport> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(invalid("rho outside [-1, 1]"));
    }
    let flips = BernoulliWords::new((1.0 - rho) / 2.0)?;
    let m = run_trials(trials, seed, |rng| {
        let x = BitVector::random(k, rng);
        let y = x.xor(&flips.vector(k, rng)).expect("same length");
        let maj = |v: &BitVector| if 2 * v.count_ones() <= k { 1.0 } else { -1.0 };
        maj(&x) * maj(&y)
    });
    Ok(m.report("noise-stability", seed).with_param("k", k).with_param("rho", rho))
}

/// Sign-orthant comparison for a normalized pair of subset sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianCheckReport {
    pub ell: usize,
    /// `|T \ S| / ell` after rounding to an integer count.
    pub delta_prime: f64,
    pub trials: u64,
    /// Orthants in the order `(+,+), (+,-), (-,+), (-,-)`.
    pub empirical: [f64; 4],
    pub predicted: [f64; 4],
    pub max_deviation: f64,
    /// Smallest eigenvalue of the covariance.
    pub lambda: f64,
    /// `1 / (lambda^{3/2} sqrt(ell))`; infinite when degenerate.
    pub error_scale: f64,
    pub degenerate: bool,
    /// Average covariance `[var_T, cov, var_S]`.
    pub covariance: [f64; 3],
}

/// Samples `(ell^{-1/2} sum_T X_i Y_i, ell^{-1/2} sum_S X_i Y_i)` for
/// `S ⊆ T`, `|T| = ell`, `|T \ S| = round(delta' ell)` and compares orthant
/// frequencies with the Gaussian of the same covariance.
pub fn berry_esseen_check(ell: usize, delta_prime: f64, trials: u64, seed: u64) -> Result<GaussianCheckReport> {
    if ell < 16 {
        return Err(invalid("ell must be at least 16"));
    }
    if trials < 100_000 {
        return Err(invalid("at least 1e5 trials"));
    }
    if !(0.0..=1.0).contains(&delta_prime) {
        return Err(invalid("delta' outside [0, 1]"));
    }
    let extra = (delta_prime * ell as f64).round() as usize;
    let shared = ell - extra;
    let dp = extra as f64 / ell as f64;
    let sums = run_trials_vec(trials, seed, 7, |rng, acc| {
        let ones = |len: usize, rng: &mut dyn RngCore| BitVector::random(len, rng).count_ones() as i64;
        let b = shared as i64 - 2 * ones(shared, rng);
        let a = b + extra as i64 - 2 * ones(extra, rng);
        let idx = usize::from(a < 0) * 2 + usize::from(b < 0);
        acc[idx] += 1.0;
        let (af, bf) = (a as f64, b as f64);
        acc[4] += af * af;
        acc[5] += af * bf;
        acc[6] += bf * bf;
    });
    let n = trials as f64;
    let empirical = [sums[0] / n, sums[1] / n, sums[2] / n, sums[3] / n];
    let l = ell as f64;
    let covariance = [sums[4] / n / l, sums[5] / n / l, sums[6] / n / l];
    let rho = (1.0 - dp).sqrt();
    let off = sheppard(rho)? / 2.0;
    let predicted = [0.5 - off, off, off, 0.5 - off];
    let max_deviation = empirical.iter().zip(&predicted).map(|(e, p)| (e - p).abs()).fold(0.0, f64::max);
    // eigenvalues of [[1, 1-d], [1-d, 1-d]]
    let (tr, det) = (2.0 - dp, (1.0 - dp) * dp);
    let lambda = ((tr - (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0).max(0.0);
    let degenerate = lambda <= 1e-15;
    let error_scale = if degenerate { f64::INFINITY } else { 1.0 / (lambda.powf(1.5) * l.sqrt()) };
    Ok(GaussianCheckReport {
        ell,
        delta_prime: dp,
        trials,
        empirical,
        predicted,
        max_deviation,
        lambda,
        error_scale,
        degenerate,
        covariance,
    })
}

/// Least-squares fit of `y = c x^p` on log scales; returns `(c, p)`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(invalid("need at least two matching points"));
    }
    if xs.iter().chain(ys).any(|&v| v.is_nan() || v <= 0.0) {
        return Err(invalid("power-law fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let p = sxy / sxx;
    Ok(((my - p * mx).exp(), p))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub rho: f64,
    pub target: f64,
    pub agreement: f64,
    pub stderr: f64,
}

/// Measured sign-agreement rates of the block-sum estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTable {
    pub rho_grid: Vec<f64>,
    pub d: usize,
    pub repetitions: u64,
    pub seed: u64,
    pub rows: Vec<CalibrationRow>,
}

const CALIBRATION_MAGIC: &str = "# ctxlab calibration v1";

impl CalibrationTable {
    /// Correlation inferred from the rows at `rho`, averaging
    /// `cos(pi (1 - agreement)) / target` over nonzero targets.
    pub fn effective_rho(&self, rho: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.rho == rho && r.target.abs() > 0.25)
            .map(|r| (PI * (1.0 - r.agreement)).cos() / r.target)
            .collect();
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let grid: Vec<String> = self.rho_grid.iter().map(f64::to_string).collect();
        writeln!(s, "{CALIBRATION_MAGIC}").unwrap();
        writeln!(s, "rho_grid {}", grid.join(",")).unwrap();
        writeln!(s, "d {}", self.d).unwrap();
        writeln!(s, "repetitions {}", self.repetitions).unwrap();
        writeln!(s, "seed {}", self.seed).unwrap();
        writeln!(s, "rho target agreement stderr").unwrap();
        for r in &self.rows {
            writeln!(s, "{} {} {} {}", r.rho, r.target, r.agreement, r.stderr).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let perr = |m: &str| Error::Parse(m.to_string());
        if lines.next().map(str::trim) != Some(CALIBRATION_MAGIC) {
            return Err(perr("missing calibration header"));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| perr("truncated header"))?;
            line.strip_prefix(name)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| perr(&format!("expected `{name}`")))
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| perr(&format!("bad number `{s}`")));
        let rho_grid = field("rho_grid")?.split(',').map(num).collect::<Result<Vec<_>>>()?;
        let d = field("d")?.parse().map_err(|_| perr("bad d"))?;
        let repetitions = field("repetitions")?.parse().map_err(|_| perr("bad repetitions"))?;
        let seed = field("seed")?.parse().map_err(|_| perr("bad seed"))?;
        if lines.next().map(str::trim) != Some("rho target agreement stderr") {
            return Err(perr("missing column header"));
        }
        let rows = lines
            .map(|l| {
                let f: Vec<&str> = l.split_whitespace().collect();
                if f.len() != 4 {
                    return Err(perr(&format!("row `{l}` needs 4 fields")));
                }
                Ok(CalibrationRow { rho: num(f[0])?, target: num(f[1])?, agreement: num(f[2])?, stderr: num(f[3])? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CalibrationTable { rho_grid, d, repetitions, seed, rows })
    }
}

/// Agreement rate of the block-sum sign estimator for every `rho` in the
/// grid and every target inner product.
pub fn sheppard_calibration(
    rho_grid: &[f64],
    targets: &[f64],
    d: usize,
    repetitions: u64,
    seed: u64,
) -> Result<CalibrationTable> {
    if d < 64 {
        return Err(invalid("calibration width d must be at least 64"));
    }
    let mut rows = Vec::new();
    for (gi, &rho) in rho_grid.iter().enumerate() {
        for (ti, &target) in targets.iter().enumerate() {
            let path = crate::rng::path_seed(seed, &[gi as u64, ti as u64]);
            let (target, agreement, stderr) = gip_agreement_rate(target, rho, d, repetitions, path)?;
            rows.push(CalibrationRow { rho, target, agreement, stderr });
        }
    }
    Ok(CalibrationTable { rho_grid: rho_grid.to_vec(), d, repetitions, seed, rows })
}
