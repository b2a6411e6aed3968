//! Named experiments behind the command line: JSON configuration, parameter
//! defaults, and the drivers shared with the check suites.

use std::path::PathBuf;
use std::time::Instant;

use rand::RngCore;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{invalid, Error, Result};
use crate::functions::{
    block_parity_distance_exact, block_parity_distance_mc, distance_exact, distance_monte_carlo, FunctionSpec,
    SubsetFamily, DEFAULT_ENUMERATION_BUDGET,
};
use crate::primitives::{
    all_tuples, binomial, majority_stability_bound, sheppard, BitVector, IndexSubset, SignVector, SortedTuple,
};
use crate::protocols::{
    brute_force_best_protocol, gip_estimate, hash_set_recovery, isr_uncertain_protocol, CertainProtocolTable,
    CoordinateWeights, GipParams,
};
use crate::reductions::{
    odd_shift_graph_table, protocol_pi_prime, score_distance_mc, shift_graph, stretch, verify_indep_coord,
    BlackBoxProtocol, CoinFlip, ExactSubsetMajority, Pi1Derived, Pi1Params, ShiftGameInstance, Side, StretchParams,
};
use crate::rng::path_seed;
use crate::samplers::{DistributionSpec, RandomnessSource};
use crate::simulation::{closeness_fit, half_density_family, intermediate_info_cost};
use crate::stats::{bernoulli_stderr, run_indexed, ExperimentReport};
use crate::verifiers::{berry_esseen_check, fit_power_law, noise_stability_mc, sign_disagreement_mc};

/// One experiment request. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    /// Tenfold fewer trials.
    #[serde(default)]
    pub fast: bool,
}

impl ExperimentConfig {
    pub fn new(kind: &str) -> Self {
        ExperimentConfig {
            kind: kind.into(),
            params: Map::new(),
            trials: None,
            master_seed: 0,
            workers: None,
            out_dir: None,
            fast: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    fn parsed<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| Error::Parse(format!("{} params: {e}", self.kind)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Distance,
    Stability,
    Gip,
    IsrProtocol,
    SetRecovery,
    ShiftGame,
    Chromatic,
    Closeness,
    InfoCost,
    BerryEsseen,
    Bruteforce,
    StretchFigure1,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 12] = [
        ExperimentKind::Distance,
        ExperimentKind::Stability,
        ExperimentKind::Gip,
        ExperimentKind::IsrProtocol,
        ExperimentKind::SetRecovery,
        ExperimentKind::ShiftGame,
        ExperimentKind::Chromatic,
        ExperimentKind::Closeness,
        ExperimentKind::InfoCost,
        ExperimentKind::BerryEsseen,
        ExperimentKind::Bruteforce,
        ExperimentKind::StretchFigure1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Distance => "distance",
            ExperimentKind::Stability => "stability",
            ExperimentKind::Gip => "gip",
            ExperimentKind::IsrProtocol => "isr-protocol",
            ExperimentKind::SetRecovery => "set-recovery",
            ExperimentKind::ShiftGame => "shift-game",
            ExperimentKind::Chromatic => "chromatic",
            ExperimentKind::Closeness => "closeness",
            ExperimentKind::InfoCost => "info-cost",
            ExperimentKind::BerryEsseen => "berry-esseen",
            ExperimentKind::Bruteforce => "bruteforce",
            ExperimentKind::StretchFigure1 => "stretch-figure1",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| invalid(format!("unknown experiment kind `{name}`")))
    }
}

/// Reports plus named text files.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentOutput {
    pub reports: Vec<ExperimentReport>,
    pub artifacts: Vec<(String, String)>,
}

// ---- parameter blocks -------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistanceParams {
    /// `subset`: `f_S` vs `f_T` with `S = [ell - removed]`, `T = [ell]`.
    /// `block-parity`: majority of parities with correlated blocks.
    pub family: String,
    pub ell: usize,
    pub removed: usize,
    pub k: usize,
    pub delta_prime: f64,
    /// `monte-carlo`, `exact` or `both`.
    pub method: String,
}

impl Default for DistanceParams {
    fn default() -> Self {
        DistanceParams {
            family: "subset".into(),
            ell: 1000,
            removed: 40,
            k: 99,
            delta_prime: 0.02,
            method: "monte-carlo".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilityParams {
    /// `gaussian` (sign disagreement) or `majority`.
    pub target: String,
    pub k: usize,
    pub rho: Vec<f64>,
}

impl Default for StabilityParams {
    fn default() -> Self {
        StabilityParams { target: "gaussian".into(), k: 99, rho: vec![-0.9, -0.5, 0.0, 0.5, 0.9] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GipRunParams {
    pub d: usize,
    pub rho: Vec<f64>,
    pub theta: f64,
    pub targets: usize,
    pub constant: f64,
}

impl Default for GipRunParams {
    fn default() -> Self {
        GipRunParams { d: 512, rho: vec![1.0, 0.5], theta: 0.1, targets: 1, constant: 8.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsrParams {
    pub theta: f64,
    pub rho: Vec<f64>,
    /// Bit count per block.
    pub n: usize,
    /// 1-based subsets, one per block.
    pub blocks: Vec<Vec<usize>>,
    /// Rho values whose message length is recorded.
    pub bits_rho: Vec<f64>,
}

impl Default for IsrParams {
    fn default() -> Self {
        IsrParams {
            theta: 0.1,
            rho: vec![0.5],
            n: 2,
            blocks: vec![vec![1, 2], vec![2]],
            bits_rho: vec![1.0, 0.5, 0.25],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SetRecoveryParams {
    pub ell: usize,
    pub size: usize,
    pub failure_prob: f64,
}

impl Default for SetRecoveryParams {
    fn default() -> Self {
        SetRecoveryParams { ell: 16, size: 8, failure_prob: 0.01 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShiftGameParams {
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub eta: f64,
    pub universe: Option<usize>,
    /// Overrides of the derived `delta'` and `ell`.
    pub delta_prime: Option<f64>,
    pub ell: Option<usize>,
    /// `exact` or `coin`.
    pub protocol: String,
    /// `games`, `score-distance` or `independence`.
    pub measure: String,
}

impl Default for ShiftGameParams {
    fn default() -> Self {
        ShiftGameParams {
            epsilon: 0.25,
            delta: 0.1,
            alpha: 0.01,
            eta: 0.1,
            universe: None,
            delta_prime: None,
            ell: None,
            protocol: "exact".into(),
            measure: "games".into(),
        }
    }
}

impl ShiftGameParams {
    pub fn pi1(&self) -> Pi1Params {
        let mut p = Pi1Params::from_delta(self.epsilon, self.delta, self.alpha, self.eta);
        if let Some(dp) = self.delta_prime {
            p.delta_prime = dp;
            p.ell = (64.0 / dp - 1e-9).ceil() as usize;
        }
        if let Some(l) = self.ell {
            p.ell = l;
        }
        p.universe = self.universe;
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChromaticParams {
    pub max_vertices: usize,
    /// `odd` or `all` tuple lengths.
    pub lengths: String,
    pub export: bool,
}

impl Default for ChromaticParams {
    fn default() -> Self {
        ChromaticParams { max_vertices: 64, lengths: "odd".into(), export: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClosenessParams {
    pub k: usize,
    pub eps: f64,
    pub ns: Vec<usize>,
}

impl Default for ClosenessParams {
    fn default() -> Self {
        ClosenessParams { k: 1, eps: 0.25, ns: vec![4, 6, 8, 10] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InfoCostParams {
    pub k: usize,
    pub n: usize,
    pub eps: f64,
    /// Noise of Alice's subsets around Bob's under the conditioned law.
    pub s_noise: f64,
    /// `conditioned` or `kappa`.
    pub law: String,
    /// `none`, `first-parity` or `all-parities`.
    pub message: String,
}

impl Default for InfoCostParams {
    fn default() -> Self {
        InfoCostParams {
            k: 2,
            n: 2,
            eps: 0.25,
            s_noise: 0.0,
            law: "conditioned".into(),
            message: "first-parity".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BerryEsseenParams {
    pub ells: Vec<usize>,
    pub delta_prime: f64,
}

impl Default for BerryEsseenParams {
    fn default() -> Self {
        BerryEsseenParams { ells: vec![64, 256, 1024], delta_prime: 0.04 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BruteforceParams {
    /// `alice-bit`, `xor` or `majority`.
    pub case: String,
    pub c: u32,
}

impl Default for BruteforceParams {
    fn default() -> Self {
        BruteforceParams { case: "xor".into(), c: 1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoParams {}

/// Validated parameters of any kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Plan {
    Distance(DistanceParams),
    Stability(StabilityParams),
    Gip(GipRunParams),
    IsrProtocol(IsrParams),
    SetRecovery(SetRecoveryParams),
    ShiftGame(ShiftGameParams),
    Chromatic(ChromaticParams),
    Closeness(ClosenessParams),
    InfoCost(InfoCostParams),
    BerryEsseen(BerryEsseenParams),
    Bruteforce(BruteforceParams),
    StretchFigure1,
}

fn one_of(name: &str, v: &str, allowed: &[&str]) -> Result<()> {
    if allowed.contains(&v) {
        Ok(())
    } else {
        Err(invalid(format!("{name} = `{v}` is not one of {allowed:?}")))
    }
}

fn rho_list(v: &[f64], allow_zero: bool) -> Result<()> {
    if v.is_empty() {
        return Err(invalid("rho list is empty"));
    }
    for &r in v {
        let ok = if allow_zero { (-1.0..=1.0).contains(&r) } else { r > 0.0 && r <= 1.0 };
        if !ok {
            return Err(invalid(format!("rho = {r} out of range")));
        }
    }
    Ok(())
}

/// Parses and validates the parameters before any sampling.
pub fn plan(cfg: &ExperimentConfig) -> Result<Plan> {
    if cfg.trials == Some(0) {
        return Err(invalid("trials must be positive"));
    }
    if cfg.workers == Some(0) {
        return Err(invalid("workers must be positive"));
    }
    let kind = ExperimentKind::parse(&cfg.kind)?;
    Ok(match kind {
        ExperimentKind::Distance => {
            let p: DistanceParams = cfg.parsed()?;
            one_of("family", &p.family, &["subset", "block-parity"])?;
            one_of("method", &p.method, &["monte-carlo", "exact", "both"])?;
            if p.family == "subset" && (p.ell == 0 || p.removed > p.ell) {
                return Err(invalid("need 0 <= removed <= ell and ell >= 1"));
            }
            if p.family == "block-parity" && (p.k == 0 || !(0.0..=1.0).contains(&p.delta_prime)) {
                return Err(invalid("need k >= 1 and delta' in [0, 1]"));
            }
            Plan::Distance(p)
        }
        ExperimentKind::Stability => {
            let p: StabilityParams = cfg.parsed()?;
            one_of("target", &p.target, &["gaussian", "majority"])?;
            rho_list(&p.rho, true)?;
            if p.k == 0 {
                return Err(invalid("k must be positive"));
            }
            Plan::Stability(p)
        }
        ExperimentKind::Gip => {
            let p: GipRunParams = cfg.parsed()?;
            rho_list(&p.rho, false)?;
            if p.d == 0 || p.targets == 0 {
                return Err(invalid("d and targets must be positive"));
            }
            for &r in &p.rho {
                GipParams { constant: p.constant, ..GipParams::new(p.theta, r) }.validate()?;
            }
            Plan::Gip(p)
        }
        ExperimentKind::IsrProtocol => {
            let p: IsrParams = cfg.parsed()?;
            rho_list(&p.rho, false)?;
            rho_list(&p.bits_rho, false)?;
            GipParams::new(p.theta / 3.0, 1.0).validate()?;
            isr_family(&p)?;
            Plan::IsrProtocol(p)
        }
        ExperimentKind::SetRecovery => {
            let p: SetRecoveryParams = cfg.parsed()?;
            if p.size > p.ell || !(p.failure_prob > 0.0 && p.failure_prob < 1.0) {
                return Err(invalid("need size <= ell and failure_prob in (0, 1)"));
            }
            Plan::SetRecovery(p)
        }
        ExperimentKind::ShiftGame => {
            let p: ShiftGameParams = cfg.parsed()?;
            one_of("protocol", &p.protocol, &["exact", "coin"])?;
            one_of("measure", &p.measure, &["games", "score-distance", "independence"])?;
            if p.measure != "independence" {
                p.pi1().derive()?;
            }
            Plan::ShiftGame(p)
        }
        ExperimentKind::Chromatic => {
            let p: ChromaticParams = cfg.parsed()?;
            one_of("lengths", &p.lengths, &["odd", "all"])?;
            if p.max_vertices == 0 || p.max_vertices > 64 {
                return Err(invalid("max_vertices must lie in 1..=64"));
            }
            Plan::Chromatic(p)
        }
        ExperimentKind::Closeness => {
            let p: ClosenessParams = cfg.parsed()?;
            if p.k == 0 || p.ns.len() < 2 || p.ns.iter().any(|&n| n < 2) || !(p.eps > 0.0 && p.eps <= 0.5) {
                return Err(invalid("need k >= 1, two or more sizes n >= 2 and eps in (0, 0.5]"));
            }
            Plan::Closeness(p)
        }
        ExperimentKind::InfoCost => {
            let p: InfoCostParams = cfg.parsed()?;
            one_of("law", &p.law, &["conditioned", "kappa"])?;
            one_of("message", &p.message, &["none", "first-parity", "all-parities"])?;
            if p.k == 0 || p.n == 0 || !(0.0..=1.0).contains(&p.s_noise) {
                return Err(invalid("need k, n >= 1 and s_noise in [0, 1]"));
            }
            Plan::InfoCost(p)
        }
        ExperimentKind::BerryEsseen => {
            let p: BerryEsseenParams = cfg.parsed()?;
            if p.ells.iter().any(|&l| l < 16) || p.ells.is_empty() {
                return Err(invalid("every ell must be at least 16"));
            }
            Plan::BerryEsseen(p)
        }
        ExperimentKind::Bruteforce => {
            let p: BruteforceParams = cfg.parsed()?;
            one_of("case", &p.case, &["alice-bit", "xor", "majority"])?;
            if p.c > 2 {
                return Err(invalid("c must be at most 2"));
            }
            Plan::Bruteforce(p)
        }
        ExperimentKind::StretchFigure1 => {
            let _: NoParams = cfg.parsed()?;
            Plan::StretchFigure1
        }
    })
}

/// Runs the experiment on a pool of `workers` threads when given.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let plan = plan(cfg)?;
    let start = Instant::now();
    let go = || execute(&plan, cfg.trials, cfg.fast, cfg.master_seed);
    let mut out = match cfg.workers {
        Some(w) => {
            rayon::ThreadPoolBuilder::new().num_threads(w).build().map_err(|e| invalid(e.to_string()))?.install(go)?
        }
        None => go()?,
    };
    let secs = start.elapsed().as_secs_f64();
    for r in &mut out.reports {
        r.wall_clock_secs = secs;
    }
    Ok(out)
}

fn execute(plan: &Plan, trials: Option<u64>, fast: bool, seed: u64) -> Result<ExperimentOutput> {
    let t = |default: u64| {
        let n = trials.unwrap_or(default);
        if fast {
            (n / 10).max(1)
        } else {
            n
        }
    };
    let mut out = ExperimentOutput::default();
    match plan {
        Plan::Distance(p) => {
            out.reports = distance_reports(p, t(if p.family == "subset" { 1_000_000 } else { 100_000 }), seed)?
        }
        Plan::Stability(p) => {
            for (i, &rho) in p.rho.iter().enumerate() {
                let s = path_seed(seed, &[i as u64]);
                out.reports.push(if p.target == "gaussian" {
                    sign_disagreement_mc(rho, t(1_000_000), s)?
                } else {
                    noise_stability_mc(p.k, rho, t(100_000), s)?.with_param("bound", majority_stability_bound(rho)?)
                });
            }
        }
        Plan::Gip(p) => {
            for (i, &rho) in p.rho.iter().enumerate() {
                let params = GipParams { constant: p.constant, ..GipParams::new(p.theta, rho) };
                out.reports.push(gip_failure_rate(p.d, p.targets, &params, t(1000), path_seed(seed, &[i as u64]))?);
            }
        }
        Plan::IsrProtocol(p) => {
            for (i, &rho) in p.rho.iter().enumerate() {
                out.reports.push(isr_toy_error(p, rho, t(10_000), path_seed(seed, &[i as u64]))?);
            }
            for (i, &rho) in p.bits_rho.iter().enumerate() {
                out.reports.push(isr_toy_bits(p, rho, path_seed(seed, &[1 << 32, i as u64]))?);
            }
        }
        Plan::SetRecovery(p) => out.reports.push(set_recovery_failure(p, t(10_000), seed)?),
        Plan::ShiftGame(p) => match p.measure.as_str() {
            "games" => {
                let d = p.pi1().derive()?;
                let games = t(200);
                for side in [Side::Prefix, Side::Suffix] {
                    let s = path_seed(seed, &[side as u64]);
                    out.reports.push(shift_game_report(&d, &p.protocol, side, games, s)?);
                }
            }
            "score-distance" => out.reports.push(score_distance_mc(&p.pi1().derive()?, t(100_000), seed)?),
            _ => out.reports.extend(independence_family(DEFAULT_INDEPENDENCE_BUDGET)?),
        },
        Plan::Chromatic(p) => {
            let rows = if p.lengths == "odd" {
                odd_shift_graph_table(p.max_vertices)?
            } else {
                shift_graph_table(p.max_vertices)?
            };
            let mut text = String::new();
            for (m, tt, chi, bound) in rows {
                out.reports.push(
                    ExperimentReport::from_estimate("chromatic", 1, chi as f64, 0.0, seed)
                        .with_param("m", m)
                        .with_param("t", tt)
                        .with_param("bound", bound),
                );
                if p.export {
                    text.push_str(&format!("# m = {m}, t = {tt}\n"));
                    text.push_str(&shift_graph(m, tt, p.max_vertices)?.to_text());
                }
            }
            if p.export {
                out.artifacts.push(("shift_graphs.txt".into(), text));
            }
        }
        Plan::Closeness(p) => {
            let fit = closeness_fit(p.k, p.eps, &p.ns, DEFAULT_ENUMERATION_BUDGET)?;
            for (n, tv) in fit.ns.iter().zip(&fit.tv) {
                out.reports.push(
                    ExperimentReport::from_estimate("closeness-tv", 1, *tv, 0.0, seed)
                        .with_param("k", p.k)
                        .with_param("eps", p.eps)
                        .with_param("n", n),
                );
            }
            out.reports.push(
                ExperimentReport::from_estimate("closeness-fit", fit.ns.len() as u64, fit.beta, 0.0, seed)
                    .with_param("k", p.k)
                    .with_param("eps", p.eps)
                    .with_param("c", fit.c),
            );
        }
        Plan::InfoCost(p) => out.reports.push(info_cost_report(p, seed)?),
        Plan::BerryEsseen(p) => out.reports.extend(berry_esseen_series(&p.ells, p.delta_prime, t(1_000_000), seed)?),
        Plan::Bruteforce(p) => out.reports.push(bruteforce_report(p, seed)?),
        Plan::StretchFigure1 => {
            let (reports, text) = stretch_figure1(seed)?;
            out.reports = reports;
            out.artifacts.push(("stretch_figure1.txt".into(), text));
        }
    }
    Ok(out)
}

// ---- drivers ------------------------------------------------------------

pub fn distance_reports(p: &DistanceParams, trials: u64, seed: u64) -> Result<Vec<ExperimentReport>> {
    let mut out = Vec::new();
    if p.family == "block-parity" {
        let bound = sheppard(1.0 - 2.0 * p.delta_prime)?;
        if p.method != "exact" {
            out.push(block_parity_distance_mc(p.k, p.delta_prime, trials, seed)?.with_param("bound", bound));
        }
        if p.method != "monte-carlo" {
            out.push(
                ExperimentReport::from_estimate(
                    "block-parity-distance-exact",
                    1,
                    block_parity_distance_exact(p.k, p.delta_prime),
                    0.0,
                    seed,
                )
                .with_param("k", p.k)
                .with_param("delta_prime", p.delta_prime)
                .with_param("bound", bound),
            );
        }
        return Ok(out);
    }
    let s = FunctionSpec::SubsetMajority(IndexSubset::new((1..=p.ell - p.removed).collect(), p.ell)?);
    let t = FunctionSpec::SubsetMajority(IndexSubset::full(p.ell));
    let dist = DistributionSpec::UniformPairs { n: p.ell };
    let prediction = ((1.0 - p.removed as f64 / p.ell as f64).sqrt()).acos() / std::f64::consts::PI;
    let tag = |r: ExperimentReport| {
        r.with_param("ell", p.ell).with_param("removed", p.removed).with_param("prediction", prediction)
    };
    if p.method != "exact" {
        out.push(tag(distance_monte_carlo(&s, &t, &dist, trials, seed)?));
    }
    if p.method != "monte-carlo" {
        let v = distance_exact(&s, &t, &dist, DEFAULT_ENUMERATION_BUDGET)?;
        out.push(tag(ExperimentReport::from_estimate("distance-exact", 1, v, 0.0, seed)));
    }
    Ok(out)
}

/// Fraction of runs where some estimate misses its inner product by more
/// than `theta`, with random `u` and targets.
pub fn gip_failure_rate(
    d: usize,
    targets: usize,
    params: &GipParams,
    runs: u64,
    seed: u64,
) -> Result<ExperimentReport> {
    params.validate()?;
    let weights = CoordinateWeights::uniform(d)?;
    let results = run_indexed(runs, seed, |_, rng| -> Result<(bool, usize)> {
        let u = SignVector::random(d, rng);
        let vs: Vec<SignVector> = (0..targets).map(|_| SignVector::random(d, rng)).collect();
        let shared = rng.next_u64();
        let (msg, est) = gip_estimate(&u, &vs, &weights, params, shared)?;
        let mut fail = false;
        for (v, e) in vs.iter().zip(&est.estimates) {
            fail |= (e - weights.inner(&u, v)?).abs() > params.theta;
        }
        Ok((fail, msg.len()))
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let fails = results.iter().filter(|r| r.0).count() as f64 / runs as f64;
    Ok(ExperimentReport::from_estimate("gip-failure", runs, fails, bernoulli_stderr(fails, runs), seed)
        .with_param("d", d)
        .with_param("rho", params.rho)
        .with_param("theta", params.theta)
        .with_param("bits", results.first().map_or(0, |r| r.1)))
}

/// Majority-of-parities family and its certain protocol for the toy class.
pub fn isr_family(p: &IsrParams) -> Result<(FunctionSpec, CertainProtocolTable, DistributionSpec)> {
    let subsets = p.blocks.iter().map(|b| IndexSubset::new(b.clone(), p.n)).collect::<Result<Vec<_>>>()?;
    let fam = SubsetFamily::new(subsets, p.n)?;
    let bits = fam.block_count() * p.n;
    if bits > 8 {
        return Err(invalid("toy class limited to 8 input bits"));
    }
    let table = CertainProtocolTable::parity_family(&fam)?;
    Ok((FunctionSpec::MajOfSubsetParity(fam), table, DistributionSpec::UniformPairs { n: bits }))
}

/// Error rate of the uncertain protocol with `f = g` at accuracy `theta / 3`.
pub fn isr_toy_error(p: &IsrParams, rho: f64, trials: u64, seed: u64) -> Result<ExperimentReport> {
    let (f, table, dist) = isr_family(p)?;
    let params = GipParams::new(p.theta / 3.0, rho);
    let compiled = f.compile(table.input_bits)?;
    let k = table.messages();
    let bits = table.input_bits;
    let errors = run_indexed(trials, seed, |_, rng| -> Result<f64> {
        let x = BitVector::random(bits, rng);
        let y = BitVector::random(bits, rng);
        let run = isr_uncertain_protocol(&f, &table, &dist, &x, &y, &params, k, rng.next_u64())?;
        Ok(f64::from(u8::from(run.run.output != compiled.eval(&x, &y))))
    });
    let errors = errors.into_iter().collect::<Result<Vec<_>>>()?;
    let rate = errors.iter().sum::<f64>() / trials as f64;
    Ok(ExperimentReport::from_estimate("isr-error", trials, rate, bernoulli_stderr(rate, trials), seed)
        .with_param("rho", rho)
        .with_param("theta", p.theta)
        .with_param("bits", params.repetitions(k)))
}

/// Message length of one run of the uncertain protocol.
pub fn isr_toy_bits(p: &IsrParams, rho: f64, seed: u64) -> Result<ExperimentReport> {
    let (f, table, dist) = isr_family(p)?;
    let params = GipParams::new(p.theta / 3.0, rho);
    let zero = BitVector::zeros(table.input_bits);
    let run = isr_uncertain_protocol(&f, &table, &dist, &zero, &zero, &params, table.messages(), seed)?;
    Ok(ExperimentReport::from_estimate("isr-bits", 1, run.run.bits_communicated as f64, 0.0, seed)
        .with_param("rho", rho)
        .with_param("theta", p.theta))
}

pub fn set_recovery_failure(p: &SetRecoveryParams, trials: u64, seed: u64) -> Result<ExperimentReport> {
    let t = IndexSubset::full(p.ell);
    let outcomes = run_indexed(trials, seed, |_, rng| -> Result<(bool, usize)> {
        let mut pool: Vec<usize> = (1..=p.ell).collect();
        for i in 0..p.size {
            let j = i + (rng.next_u64() % (p.ell - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut chosen = pool[..p.size].to_vec();
        chosen.sort_unstable();
        let s = IndexSubset::new(chosen, p.ell)?;
        let r = hash_set_recovery(&s, &t, p.failure_prob, &RandomnessSource::Public { shared_seed: rng.next_u64() })?;
        Ok((r.recovered.as_ref() != Some(&s), r.payload_bits))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let rate = outcomes.iter().filter(|o| o.0).count() as f64 / trials as f64;
    Ok(ExperimentReport::from_estimate("set-recovery-failure", trials, rate, bernoulli_stderr(rate, trials), seed)
        .with_param("ell", p.ell)
        .with_param("size", p.size)
        .with_param("failure_prob", p.failure_prob)
        .with_param("payload_bits", outcomes.first().map_or(0, |o| o.1)))
}

/// Outcome counts of the reduction protocol over random game instances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GameTally {
    pub games: u64,
    pub correct: u64,
    pub yes: u64,
    pub ties: u64,
}

pub fn play_games(
    d: &Pi1Derived,
    protocol: &dyn BlackBoxProtocol,
    side: Side,
    games: u64,
    seed: u64,
) -> Result<GameTally> {
    let outcomes = run_indexed(games, seed, |_, rng| -> Result<_> {
        let sigma = crate::primitives::random_tuple(d.universe, d.t, rng)?;
        protocol_pi_prime(&ShiftGameInstance::new(sigma, side)?, d, protocol, rng)
    });
    let mut tally = GameTally { games, ..Default::default() };
    for o in outcomes {
        let o = o?;
        tally.yes += u64::from(o.yes);
        tally.correct += u64::from(o.yes == (side == Side::Prefix));
        tally.ties += u64::from(o.err_prefix == o.err_suffix);
    }
    Ok(tally)
}

fn black_box(name: &str) -> Result<Box<dyn BlackBoxProtocol>> {
    match name {
        "exact" => Ok(Box::new(ExactSubsetMajority)),
        "coin" => Ok(Box::new(CoinFlip)),
        other => Err(invalid(format!("unknown black box `{other}`"))),
    }
}

/// Correct-answer rate for one side; the YES rate and tie count ride along
/// as parameters.
pub fn shift_game_report(
    d: &Pi1Derived,
    protocol: &str,
    side: Side,
    games: u64,
    seed: u64,
) -> Result<ExperimentReport> {
    let tally = play_games(d, black_box(protocol)?.as_ref(), side, games, seed)?;
    let rate = tally.correct as f64 / games as f64;
    Ok(ExperimentReport::from_estimate("shift-game-correct", games, rate, bernoulli_stderr(rate, games), seed)
        .with_param("protocol", protocol)
        .with_param("side", if side == Side::Prefix { "prefix" } else { "suffix" })
        .with_param("t", d.t)
        .with_param("universe", d.universe)
        .with_param("k", d.k)
        .with_param("yes_rate", tally.yes as f64 / games as f64)
        .with_param("ties", tally.ties))
}

pub const DEFAULT_INDEPENDENCE_BUDGET: u128 = 1 << 28;

/// Exact independence check over `t <= 4`, `r <= 3`, `a <= 3` with
/// `s <= 12`, `d = t + 1`, every tuple and both sides. One report per
/// `(t, r, a)`: the fraction of instances that pass.
pub fn independence_family(budget: u128) -> Result<Vec<ExperimentReport>> {
    let mut out = Vec::new();
    for t in 1..=4usize {
        for r in 1..=3usize {
            for a in 0..=3usize {
                let s = (t - 1) * r + a;
                if s > 12 {
                    continue;
                }
                let p = StretchParams { r, a, d: t + 1 };
                let (mut pass, mut total) = (0u64, 0u64);
                for sigma in all_tuples(t + 1, t) {
                    let sigma = SortedTuple::new(sigma, t + 1)?;
                    for side in [Side::Prefix, Side::Suffix] {
                        total += 1;
                        pass += u64::from(verify_indep_coord(&sigma, &p, side, budget)?);
                    }
                }
                out.push(
                    ExperimentReport::from_estimate("independence", total, pass as f64 / total as f64, 0.0, 0)
                        .with_param("t", t)
                        .with_param("r", r)
                        .with_param("a", a)
                        .with_param("s", s),
                );
            }
        }
    }
    Ok(out)
}

/// Chromatic numbers for every tuple length.
pub fn shift_graph_table(max_vertices: usize) -> Result<Vec<(usize, usize, usize, f64)>> {
    let mut rows = Vec::new();
    for t in 1..=max_vertices {
        let mut m = t;
        while binomial(m, t) <= max_vertices as u128 {
            let g = shift_graph(m, t, max_vertices)?;
            let chi = crate::reductions::chromatic_number_exact(&g.graph, max_vertices)?;
            rows.push((m, t, chi, crate::reductions::shift_graph_bound(m, t)?));
            m += 1;
        }
    }
    Ok(rows)
}

pub fn info_cost_report(p: &InfoCostParams, seed: u64) -> Result<ExperimentReport> {
    let t_hat = half_density_family(p.k, p.n)?;
    let dist = if p.law == "conditioned" {
        DistributionSpec::ConditionedNoisy { t_hat: t_hat.clone(), eps: p.eps }
    } else {
        DistributionSpec::KappaEpsilon { k: p.k, n: p.n, eps: p.eps }
    };
    let (k, n) = (p.k, p.n);
    let blocks = match p.message.as_str() {
        "none" => 0,
        "first-parity" => 1,
        _ => k,
    };
    let message = move |s: &BitVector, x: &BitVector| -> u64 {
        let mut code = 0;
        for i in 0..blocks {
            let si = s.gather_runs(&[(i * n, n)]);
            let xi = x.gather_runs(&[(i * n, n)]);
            code |= u64::from(crate::primitives::f2_inner_bits(&si, &xi).expect("block shape")) << i;
        }
        code
    };
    let v = intermediate_info_cost(&message, &dist, p.s_noise, DEFAULT_ENUMERATION_BUDGET)?;
    Ok(ExperimentReport::from_estimate("info-cost", 1, v, 0.0, seed)
        .with_param("k", k)
        .with_param("n", n)
        .with_param("eps", p.eps)
        .with_param("s_noise", p.s_noise)
        .with_param("law", &p.law)
        .with_param("message", &p.message))
}

/// Max orthant deviation per `ell`, then a `(c, exponent)` power-law fit.
pub fn berry_esseen_series(ells: &[usize], delta_prime: f64, trials: u64, seed: u64) -> Result<Vec<ExperimentReport>> {
    let mut out = Vec::new();
    let mut devs = Vec::new();
    for (i, &ell) in ells.iter().enumerate() {
        let r = berry_esseen_check(ell, delta_prime, trials, path_seed(seed, &[i as u64]))?;
        devs.push(r.max_deviation);
        out.push(
            ExperimentReport::from_estimate(
                "berry-esseen",
                trials,
                r.max_deviation,
                0.5 / (trials as f64).sqrt(),
                seed,
            )
            .with_param("ell", ell)
            .with_param("delta_prime", r.delta_prime)
            .with_param("error_scale", r.error_scale)
            .with_param("cov_t", r.covariance[0])
            .with_param("cov_ts", r.covariance[1])
            .with_param("cov_s", r.covariance[2]),
        );
    }
    if ells.len() >= 2 && devs.iter().all(|&d| d > 0.0) {
        let xs: Vec<f64> = ells.iter().map(|&l| l as f64).collect();
        let (c, p) = fit_power_law(&xs, &devs)?;
        out.push(
            ExperimentReport::from_estimate("berry-esseen-fit", ells.len() as u64, p, 0.0, seed)
                .with_param("delta_prime", delta_prime)
                .with_param("c", c),
        );
    }
    Ok(out)
}

pub fn bruteforce_report(p: &BruteforceParams, seed: u64) -> Result<ExperimentReport> {
    let (f, dist) = match p.case.as_str() {
        "alice-bit" => (FunctionSpec::AliceBit(1), DistributionSpec::UniformPairs { n: 1 }),
        "xor" => (FunctionSpec::XorParity(IndexSubset::full(1)), DistributionSpec::UniformPairs { n: 1 }),
        _ => (FunctionSpec::SubsetMajority(IndexSubset::full(3)), DistributionSpec::UniformPairs { n: 3 }),
    };
    let r = brute_force_best_protocol(&f, &dist, p.c, DEFAULT_ENUMERATION_BUDGET)?;
    let witness: Vec<String> = r.witness.iter().map(usize::to_string).collect();
    Ok(ExperimentReport::from_estimate("bruteforce", 1, r.error, 0.0, seed)
        .with_param("case", &p.case)
        .with_param("c", p.c)
        .with_param("witness", witness.join(" ")))
}

/// The reference stretch example: `r = 2`, `a = 3`, `d = 9`.
pub fn stretch_figure1(seed: u64) -> Result<(Vec<ExperimentReport>, String)> {
    let p = StretchParams { r: 2, a: 3, d: 9 };
    let sigma = SortedTuple::new(vec![2, 4, 5, 7, 9], 9)?;
    let mut reports = Vec::new();
    let mut text = String::new();
    for (name, tuple) in [("sigma", sigma.clone()), ("phi", sigma.prefix()), ("psi", sigma.suffix())] {
        let (st, _) = stretch(&tuple, &p)?;
        text.push_str(&format!("{name} {tuple} -> {st}\n"));
        reports.push(
            ExperimentReport::from_estimate("stretch", 1, st.len() as f64, 0.0, seed)
                .with_param("name", name)
                .with_param("input", &tuple)
                .with_param("output", &st),
        );
    }
    Ok((reports, text))
}
