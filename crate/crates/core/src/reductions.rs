//! The shift-game reduction: stretching tuples into subsets, the shift
//! graph with exact coloring, and the reduction protocol that plays the
//! game with a black-box protocol for the subset-majority task.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, invalid, Error, Result};
use crate::primitives::{all_tuples, binomial, BitVector, IndexSubset, SignVector, SortedTuple};
use crate::rng::StreamRng;
use crate::stats::{run_trials, ExperimentReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StretchParams {
    pub r: usize,
    pub a: usize,
    pub d: usize,
}

impl StretchParams {
    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(invalid("r must be at least 1"));
        }
        Ok(())
    }

    /// Length `d r + a` of the stretched string.
    pub fn stretched_len(&self) -> usize {
        self.d * self.r + self.a
    }
}

/// Repeats each indicator bit of `sigma` over `[d]` `r` times and appends
/// `a` ones; returns the positions of the ones as a tuple and as a set.
pub fn stretch(sigma: &SortedTuple, p: &StretchParams) -> Result<(SortedTuple, IndexSubset)> {
    p.validate()?;
    if sigma.values().iter().any(|&v| v > p.d) {
        return Err(invalid(format!("tuple {sigma} exceeds d = {}", p.d)));
    }
    let mut out = Vec::with_capacity(sigma.len() * p.r + p.a);
    for &v in sigma.values() {
        out.extend((v - 1) * p.r + 1..=v * p.r);
    }
    out.extend(p.d * p.r + 1..=p.d * p.r + p.a);
    let n = p.stretched_len();
    Ok((SortedTuple::new(out.clone(), n)?, IndexSubset::new(out, n)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Prefix,
    Suffix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftGameInstance {
    pub sigma: SortedTuple,
    pub alice_side: Side,
}

impl ShiftGameInstance {
    pub fn new(sigma: SortedTuple, alice_side: Side) -> Result<Self> {
        if sigma.is_empty() {
            return Err(invalid("the game needs t >= 1"));
        }
        Ok(ShiftGameInstance { sigma, alice_side })
    }

    pub fn alice_tuple(&self) -> SortedTuple {
        match self.alice_side {
            Side::Prefix => self.sigma.prefix(),
            Side::Suffix => self.sigma.suffix(),
        }
    }
}

/// Parameters of the reduction protocol. `ell` is the size of Bob's set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pi1Params {
    pub epsilon: f64,
    pub delta_prime: f64,
    pub ell: usize,
    /// Accuracy target for the empirical errors; `k = ceil(4 / eta^2)`.
    pub eta: f64,
    /// Game universe `m`; defaults to `t + 1`.
    pub universe: Option<usize>,
}

/// Integral quantities derived from [`Pi1Params`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pi1Derived {
    pub eps_prime: f64,
    pub t: usize,
    pub r: usize,
    pub a: usize,
    pub s: usize,
    pub k: usize,
    pub universe: usize,
}

impl Pi1Derived {
    pub fn stretch_params(&self) -> StretchParams {
        StretchParams { r: self.r, a: self.a, d: self.universe }
    }
}

fn integral(name: &str, v: f64) -> Result<usize> {
    let n = v.round();
    if v < -1e-9 || (v - n).abs() > 1e-9 * v.abs().max(1.0) {
        return Err(invalid(format!("{name} = {v} is not a nonnegative integer")));
    }
    Ok(n as usize)
}

impl Pi1Params {
    /// `delta' = alpha delta^2` and `ell = ceil(64 / delta')`.
    pub fn from_delta(epsilon: f64, delta: f64, alpha: f64, eta: f64) -> Self {
        let delta_prime = alpha * delta * delta;
        let ell = (64.0 / delta_prime - 1e-9).ceil() as usize;
        Pi1Params { epsilon, delta_prime, ell, eta, universe: None }
    }

    pub fn derive(&self) -> Result<Pi1Derived> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(invalid("epsilon must lie in (0, 0.5]"));
        }
        if !(self.delta_prime > 0.0 && self.delta_prime < 1.0) {
            return Err(invalid("delta' must lie in (0, 1)"));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(invalid("eta must lie in (0, 1)"));
        }
        let eps_prime = 1.0 - (self.epsilon * std::f64::consts::PI).cos();
        let t = (eps_prime / self.delta_prime - 1e-9).ceil().max(1.0) as usize;
        let l = self.ell as f64;
        let r = integral("r", self.delta_prime * l)?;
        let a = integral("a", l * (1.0 - t as f64 * self.delta_prime))?;
        let s = integral("s", l * (1.0 - self.delta_prime))?;
        if r == 0 {
            return Err(invalid("r = delta' ell must be positive"));
        }
        if s != (t - 1) * r + a {
            return Err(invalid(format!("s = {s} differs from (t - 1) r + a = {}", (t - 1) * r + a)));
        }
        let k = (4.0 / (self.eta * self.eta)).ceil() as usize;
        let universe = self.universe.unwrap_or(t + 1);
        if universe < t {
            return Err(invalid("universe smaller than t"));
        }
        Ok(Pi1Derived { eps_prime, t, r, a, s, k, universe })
    }
}

/// `(Sign(sum_j X_{Lambda_j} Y_{Phi_j}), Sign(sum_j X_{Lambda_j} Y_{Psi_j}))`.
pub fn prefix_suffix_scores(
    lambda: &SortedTuple,
    phi: &SortedTuple,
    psi: &SortedTuple,
    x: &SignVector,
    y: &SignVector,
) -> Result<(bool, bool)> {
    let s = lambda.len();
    if phi.len() != s || psi.len() != s {
        return Err(Error::LengthMismatch { left: s, right: phi.len().max(psi.len()) });
    }
    let n = x.len();
    if y.len() != n || [lambda, phi, psi].iter().any(|t| t.values().last().is_some_and(|&v| v > n)) {
        return Err(Error::LengthMismatch { left: n, right: y.len() });
    }
    let score = |other: &SortedTuple| -> i64 {
        lambda.values().iter().zip(other.values()).map(|(&i, &j)| i64::from(x.get(i - 1) * y.get(j - 1))).sum()
    };
    Ok((score(phi) >= 0, score(psi) >= 0))
}

/// Word-level evaluation of the two scores on bit-encoded inputs.
#[derive(Clone, Debug)]
pub struct ScoreKernel {
    lambda: Vec<(usize, usize)>,
    phi: Vec<(usize, usize)>,
    psi: Vec<(usize, usize)>,
    s: usize,
}

impl ScoreKernel {
    pub fn new(lambda: &SortedTuple, phi: &SortedTuple, psi: &SortedTuple) -> Result<Self> {
        let s = lambda.len();
        if phi.len() != s || psi.len() != s {
            return Err(Error::LengthMismatch { left: s, right: phi.len().max(psi.len()) });
        }
        Ok(ScoreKernel { lambda: lambda.runs(), phi: phi.runs(), psi: psi.runs(), s })
    }

    pub fn len(&self) -> usize {
        self.s
    }

    pub fn is_empty(&self) -> bool {
        self.s == 0
    }

    /// Alice's influential bits: `X` read along `Lambda`.
    pub fn influential(&self, x: &BitVector) -> BitVector {
        x.gather_runs(&self.lambda)
    }

    /// Scores from Alice's gathered bits and Bob's full input.
    pub fn scores(&self, x_lambda: &BitVector, y: &BitVector) -> (bool, bool) {
        let all = BitVector::ones(self.s);
        let g = x_lambda.masked_xor_count(&y.gather_runs(&self.phi), &all);
        let h = x_lambda.masked_xor_count(&y.gather_runs(&self.psi), &all);
        (self.s >= 2 * g, self.s >= 2 * h)
    }
}

/// Alice's and Bob's stretched tuples for a game instance.
#[derive(Clone, Debug)]
pub struct StretchedGame {
    pub lambda: SortedTuple,
    pub s_set: IndexSubset,
    pub sigma: SortedTuple,
    pub t_set: IndexSubset,
    pub phi: SortedTuple,
    pub psi: SortedTuple,
}

pub fn stretch_game(instance: &ShiftGameInstance, p: &StretchParams) -> Result<StretchedGame> {
    let (lambda, s_set) = stretch(&instance.alice_tuple(), p)?;
    let (sigma, t_set) = stretch(&instance.sigma, p)?;
    let (phi, _) = stretch(&instance.sigma.prefix(), p)?;
    let (psi, _) = stretch(&instance.sigma.suffix(), p)?;
    Ok(StretchedGame { lambda, s_set, sigma, t_set, phi, psi })
}

/// A protocol for the subset-majority task used as a black box. Inputs are
/// indicator masks with the parties' bit strings; returns Bob's output bit
/// and the bits communicated.
pub trait BlackBoxProtocol: Sync {
    fn run(
        &self,
        alice: (&BitVector, &BitVector),
        bob: (&BitVector, &BitVector),
        rng: &mut dyn RngCore,
    ) -> (bool, usize);
}

/// Alice sends `X` on `T` (she is told `T`); Bob outputs `f_T` exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactSubsetMajority;

impl BlackBoxProtocol for ExactSubsetMajority {
    fn run(
        &self,
        _alice: (&BitVector, &BitVector),
        bob: (&BitVector, &BitVector),
        _rng: &mut dyn RngCore,
    ) -> (bool, usize) {
        let (t, y) = bob;
        let x = _alice.1;
        let size = t.count_ones();
        (size >= 2 * x.masked_xor_count(y, t), size)
    }
}

/// Bob flips a fair coin and nobody speaks.
#[derive(Clone, Copy, Debug, Default)]
pub struct CoinFlip;

impl BlackBoxProtocol for CoinFlip {
    fn run(&self, _a: (&BitVector, &BitVector), _b: (&BitVector, &BitVector), rng: &mut dyn RngCore) -> (bool, usize) {
        (rng.next_u64() & 1 == 1, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiPrimeOutcome {
    pub yes: bool,
    pub err_prefix: usize,
    pub err_suffix: usize,
    pub bits: usize,
}

/// Runs the reduction protocol on one game instance: Bob says YES when
/// the prefix hypothesis explains the black-box outputs at least as well.
pub fn protocol_pi_prime(
    instance: &ShiftGameInstance,
    params: &Pi1Derived,
    pi: &dyn BlackBoxProtocol,
    rng: &mut StreamRng,
) -> Result<PiPrimeOutcome> {
    if instance.sigma.len() != params.t {
        return Err(invalid(format!("tuple length {} differs from t = {}", instance.sigma.len(), params.t)));
    }
    let sp = params.stretch_params();
    let game = stretch_game(instance, &sp)?;
    let n = sp.stretched_len();
    let kernel = ScoreKernel::new(&game.lambda, &game.phi, &game.psi)?;
    let (s_mask, t_mask) = (game.s_set.indicator(), game.t_set.indicator());
    let (mut err_p, mut err_s, mut bits) = (0, 0, 0);
    for _ in 0..params.k {
        let x = BitVector::random(n, rng);
        let y = BitVector::random(n, rng);
        let (b, cost) = pi.run((&s_mask, &x), (&t_mask, &y), rng);
        let sent = kernel.influential(&x);
        bits += cost + sent.len();
        let (g, h) = kernel.scores(&sent, &y);
        err_p += usize::from(g != b);
        err_s += usize::from(h != b);
    }
    Ok(PiPrimeOutcome { yes: err_p <= err_s, err_prefix: err_p, err_suffix: err_s, bits })
}

/// Monte Carlo `Pr[g != h]` over uniform inputs with `sigma = (1..t)` and
/// `d = t`. Only `X` along `Lambda` enters the scores, so it is drawn
/// directly.
pub fn score_distance_mc(params: &Pi1Derived, trials: u64, seed: u64) -> Result<ExperimentReport> {
    let t = params.t;
    let sp = StretchParams { r: params.r, a: params.a, d: t };
    let sigma = SortedTuple::new((1..=t).collect(), t)?;
    let game = stretch_game(&ShiftGameInstance::new(sigma, Side::Prefix)?, &sp)?;
    let kernel = ScoreKernel::new(&game.lambda, &game.phi, &game.psi)?;
    let n = sp.stretched_len();
    let s = kernel.len();
    let m = run_trials(trials, seed, |rng| {
        let x_lambda = BitVector::random(s, rng);
        let y = BitVector::random(n, rng);
        let (g, h) = kernel.scores(&x_lambda, &y);
        f64::from(u8::from(g != h))
    });
    Ok(m.report("score-distance", seed).with_param("t", t).with_param("r", params.r).with_param("a", params.a))
}

/// Exact check that `(X_{Lambda_j} Y_{Phi_j}, X_{Lambda_j} Y_{Psi_j})_j`
/// has independent coordinates, uniform on `{+-1}^2` for `j <= s - a` and
/// uniform on the diagonal afterwards.
pub fn verify_indep_coord(sigma: &SortedTuple, p: &StretchParams, side: Side, budget: u128) -> Result<bool> {
    let instance = ShiftGameInstance::new(sigma.clone(), side)?;
    let game = stretch_game(&instance, p)?;
    let s = game.lambda.len();
    if s > 31 {
        return Err(Error::BudgetExceeded { needed: 1 << 62, budget });
    }
    let mut union: Vec<usize> = game.phi.values().iter().chain(game.psi.values()).copied().collect();
    union.sort_unstable();
    union.dedup();
    let u = union.len();
    check_budget(1u128 << (s + u), budget)?;
    check_budget(1u128 << (2 * s), budget)?;
    let pos: HashMap<usize, usize> = union.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let phi_idx: Vec<usize> = game.phi.values().iter().map(|v| pos[v]).collect();
    let psi_idx: Vec<usize> = game.psi.values().iter().map(|v| pos[v]).collect();
    let gather = |y: u64, idx: &[usize]| idx.iter().enumerate().fold(0u64, |c, (j, &i)| c | ((y >> i) & 1) << j);
    let mut counts = vec![0u32; 1 << (2 * s)];
    for y in 0..1u64 << u {
        let (yp, yq) = (gather(y, &phi_idx), gather(y, &psi_idx));
        for x in 0..1u64 << s {
            counts[((x ^ yp) | (x ^ yq) << s) as usize] += 1;
        }
    }
    let free = s - p.a.min(s);
    let total = 1u128 << (s + u);
    let cells = 1u128 << (2 * free + (s - free));
    if !total.is_multiple_of(cells) {
        return Ok(false);
    }
    let want = (total / cells) as u32;
    let tail_mask: u64 = ((1u64 << s) - 1) & !((1u64 << free) - 1);
    Ok(counts.iter().enumerate().all(|(code, &c)| {
        let (z, w) = (code as u64 & ((1 << s) - 1), code as u64 >> s);
        let allowed = (z ^ w) & tail_mask == 0;
        c == if allowed { want } else { 0 }
    }))
}

/// Undirected graph on at most a few thousand vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edgeless(n: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); n] }
    }

    pub fn complete(n: usize) -> Self {
        Graph { adjacency: (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect() }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    fn masks(&self) -> Vec<u64> {
        self.adjacency.iter().map(|n| n.iter().fold(0u64, |m, &j| m | 1 << j)).collect()
    }
}

pub const DEFAULT_VERTEX_BUDGET: usize = 4096;
pub const DEFAULT_COLORING_BUDGET: usize = 64;

/// Sorted `t`-tuples over `[m]`, adjacent when one's prefix is the other's
/// suffix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftGraph {
    pub m: usize,
    pub t: usize,
    pub vertices: Vec<SortedTuple>,
    pub graph: Graph,
}

pub fn shift_graph(m: usize, t: usize, budget: usize) -> Result<ShiftGraph> {
    if t == 0 || t > m {
        return Err(invalid("shift graph needs 1 <= t <= m"));
    }
    check_budget(binomial(m, t), budget as u128)?;
    let vertices: Vec<SortedTuple> =
        all_tuples(m, t).into_iter().map(|v| SortedTuple::new(v, m)).collect::<Result<_>>()?;
    let index: HashMap<&[usize], usize> = vertices.iter().enumerate().map(|(i, v)| (v.values(), i)).collect();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        let vals = v.values();
        let last = vals[t - 1];
        for x in last + 1..=m {
            let mut w: Vec<usize> = vals[1..].to_vec();
            w.push(x);
            let j = index[w.as_slice()];
            if j != i {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    for a in adjacency.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    Ok(ShiftGraph { m, t, vertices, graph: Graph { adjacency } })
}

fn parse_tuple(s: &str) -> Result<Vec<usize>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bad tuple `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().map_err(|_| Error::Parse(format!("bad value in `{s}`")))).collect()
}

impl ShiftGraph {
    /// One line per vertex: `tuple: neighbor neighbor ...`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let nb: Vec<String> = self.graph.adjacency[i].iter().map(|&j| self.vertices[j].to_string()).collect();
            if nb.is_empty() {
                writeln!(s, "{v}:").unwrap();
            } else {
                writeln!(s, "{v}: {}", nb.join(" ")).unwrap();
            }
        }
        s
    }

    /// Reads the adjacency-list text back for a universe `[m]`.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut lists = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (head, rest) = line.split_once(':').ok_or_else(|| Error::Parse(format!("missing colon: `{line}`")))?;
            vertices.push(SortedTuple::new(parse_tuple(head)?, m)?);
            let nb = rest
                .split_whitespace()
                .map(|tok| parse_tuple(tok).and_then(|v| SortedTuple::new(v, m)))
                .collect::<Result<Vec<_>>>()?;
            lists.push(nb);
        }
        let t = vertices.first().map_or(0, SortedTuple::len);
        if vertices.iter().any(|v| v.len() != t) {
            return Err(Error::Parse("tuples of different lengths".into()));
        }
        let index: HashMap<SortedTuple, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adjacency = Vec::with_capacity(lists.len());
        for nb in lists {
            let mut ids = nb
                .iter()
                .map(|v| index.get(v).copied().ok_or_else(|| Error::Parse(format!("unknown vertex {v}"))))
                .collect::<Result<Vec<_>>>()?;
            ids.sort_unstable();
            adjacency.push(ids);
        }
        for (i, nb) in adjacency.iter().enumerate() {
            if nb.iter().any(|&j| adjacency[j].binary_search(&i).is_err()) {
                return Err(Error::Parse("adjacency is not symmetric".into()));
            }
        }
        Ok(ShiftGraph { m, t, vertices, graph: Graph { adjacency } })
    }
}

fn max_clique(masks: &[u64]) -> usize {
    fn expand(r: usize, mut p: u64, mut x: u64, masks: &[u64], best: &mut usize) {
        if p == 0 {
            if x == 0 {
                *best = (*best).max(r);
            }
            return;
        }
        if r + p.count_ones() as usize <= *best {
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !masks[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            expand(r + 1, p & masks[v], x & masks[v], masks, best);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let n = masks.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    expand(0, all, 0, masks, &mut best);
    best
}

fn greedy_colors(masks: &[u64]) -> usize {
    let n = masks.len();
    let mut color = vec![usize::MAX; n];
    let mut used = 0;
    for _ in 0..n {
        // highest saturation, then highest degree
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| {
                let sat: u64 = (0..n)
                    .filter(|&u| masks[v] >> u & 1 == 1 && color[u] != usize::MAX)
                    .fold(0, |s, u| s | 1 << color[u]);
                (sat.count_ones(), masks[v].count_ones(), std::cmp::Reverse(v))
            })
            .unwrap();
        let taken: u64 =
            (0..n).filter(|&u| masks[v] >> u & 1 == 1 && color[u] != usize::MAX).fold(0, |s, u| s | 1 << color[u]);
        let c = (!taken).trailing_zeros() as usize;
        color[v] = c;
        used = used.max(c + 1);
    }
    used
}

fn colorable(masks: &[u64], k: usize) -> bool {
    fn go(masks: &[u64], k: usize, color: &mut Vec<usize>, colored: usize, used: usize) -> bool {
        let n = masks.len();
        if colored == n {
            return true;
        }
        let taken_of = |v: usize, color: &Vec<usize>| -> u64 {
            let mut nb = masks[v];
            let mut t = 0u64;
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if color[u] != usize::MAX {
                    t |= 1 << color[u];
                }
            }
            t
        };
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| (taken_of(v, color).count_ones(), masks[v].count_ones(), std::cmp::Reverse(v)))
            .unwrap();
        let taken = taken_of(v, color);
        for c in 0..k.min(used + 1) {
            if taken >> c & 1 == 0 {
                color[v] = c;
                if go(masks, k, color, colored + 1, used.max(c + 1)) {
                    return true;
                }
                color[v] = usize::MAX;
            }
        }
        false
    }
    let mut color = vec![usize::MAX; masks.len()];
    go(masks, k, &mut color, 0, 0)
}

/// Exact chromatic number by clique bound, greedy bound and backtracking
/// in between.
pub fn chromatic_number_exact(g: &Graph, budget: usize) -> Result<usize> {
    let n = g.vertex_count();
    check_budget(n as u128, budget.min(64) as u128)?;
    if n == 0 {
        return Ok(0);
    }
    let masks = g.masks();
    let lo = max_clique(&masks).max(1);
    let hi = greedy_colors(&masks);
    for k in lo..hi {
        if colorable(&masks, k) {
            return Ok(k);
        }
    }
    Ok(hi)
}

/// Every `(m, t)` with odd `t` whose shift graph has at most `budget`
/// vertices, paired with its chromatic number and lower bound.
pub fn odd_shift_graph_table(budget: usize) -> Result<Vec<(usize, usize, usize, f64)>> {
    let mut out = Vec::new();
    for t in (1..=budget).step_by(2) {
        let mut m = t;
        while binomial(m, t) <= budget as u128 {
            let g = shift_graph(m, t, budget)?;
            let chi = chromatic_number_exact(&g.graph, budget)?;
            out.push((m, t, chi, shift_graph_bound(m, t)?));
            m += 1;
        }
    }
    Ok(out)
}

/// `log^(t-1)(m)`, with `log^(0)(m) = m`.
pub fn shift_graph_bound(m: usize, t: usize) -> Result<f64> {
    if t == 1 {
        Ok(m as f64)
    } else {
        crate::primitives::iterated_log((t - 1) as u32, m as u64)
    }
}
