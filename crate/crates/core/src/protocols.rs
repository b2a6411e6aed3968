//! One-way protocols: certain baselines, public-coin set recovery, the
//! block-sum inner-product estimator under imperfectly shared randomness,
//! and the uncertain protocol built on it.

use std::f64::consts::PI;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, invalid, Error, Result};
use crate::functions::{maj_subset_parity, subset_majority, BitBlockString, FunctionSpec, SubsetFamily};
use crate::primitives::{f2_inner, BernoulliWords, BitVector, IndexSubset, SignVector};
use crate::rng::{derive_seed, substream, StreamRng};
use crate::samplers::{pair_law, DistributionSpec, RandomnessSource};

/// One-way transcript.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolRun {
    pub message: BitVector,
    pub output: bool,
    pub bits_communicated: usize,
    pub randomness: RandomnessSource,
}

/// Alice sends `X` restricted to `T`; Bob evaluates the subset majority.
pub fn certain_subset_protocol(t: &IndexSubset, x: &SignVector, y: &SignVector) -> Result<ProtocolRun> {
    if x.len() != t.universe() || y.len() != t.universe() {
        return Err(Error::LengthMismatch { left: x.len().min(y.len()), right: t.universe() });
    }
    let sent: Vec<i8> = t.indices().iter().map(|&i| x.get(i - 1)).collect();
    let message = SignVector::new(sent.clone())?.to_bit_vector();
    // Bob only touches the message and his own input.
    let sum: i64 = sent.iter().zip(t.indices()).map(|(&a, &i)| i64::from(a * y.get(i - 1))).sum();
    let output = sum >= 0;
    debug_assert_eq!(output, subset_majority(t, x, y)?);
    Ok(ProtocolRun { bits_communicated: message.len(), message, output, randomness: RandomnessSource::Deterministic })
}

/// Alice sends her `k` block parities; Bob combines them with his own.
pub fn certain_parity_protocol(s: &SubsetFamily, x: &BitBlockString, y: &BitBlockString) -> Result<ProtocolRun> {
    let k = s.block_count();
    if x.block_count() != k
        || y.block_count() != k
        || x.block_size() != s.block_size()
        || y.block_size() != s.block_size()
    {
        return Err(Error::LengthMismatch { left: x.block_count() * x.block_size(), right: k * s.block_size() });
    }
    let bits = (0..k).map(|i| f2_inner(s.block(i), &x.blocks()[i])).collect::<Result<Vec<_>>>()?;
    let message = BitVector::from_bits(&bits);
    let mut sum = 0i64;
    for (i, a) in bits.iter().enumerate() {
        sum += if a ^ f2_inner(s.block(i), &y.blocks()[i])? { -1 } else { 1 };
    }
    let output = sum >= 0;
    debug_assert_eq!(output, maj_subset_parity(s, x, y)?);
    Ok(ProtocolRun { bits_communicated: k, message, output, randomness: RandomnessSource::Deterministic })
}

/// Tag width `ceil(log2(ell^2 / failure_prob))`, at least 1 when `ell > 0`.
pub fn hash_tag_bits(ell: usize, failure_prob: f64) -> Result<usize> {
    if !(failure_prob > 0.0 && failure_prob < 1.0) {
        return Err(invalid("failure_prob must lie in (0, 1)"));
    }
    if ell == 0 {
        return Ok(0);
    }
    let b = ((ell as f64).powi(2) / failure_prob).log2().ceil().max(1.0) as usize;
    if b > 64 {
        return Err(invalid("tags wider than 64 bits"));
    }
    Ok(b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetRecovery {
    /// `None` when a received tag matched two or more elements of `T`.
    pub recovered: Option<IndexSubset>,
    pub tag_bits: usize,
    pub payload_bits: usize,
}

fn hash_tag(key: u64, element: usize, bits: usize) -> u64 {
    if bits == 0 {
        0
    } else {
        derive_seed(key, element as u64) >> (64 - bits)
    }
}

/// Alice hashes each element of `S` with the public hash; Bob decodes every
/// tag against `T`.
pub fn hash_set_recovery(
    s: &IndexSubset,
    t: &IndexSubset,
    failure_prob: f64,
    source: &RandomnessSource,
) -> Result<SetRecovery> {
    let key = match source {
        RandomnessSource::Public { shared_seed } => derive_seed(*shared_seed, 0x5e7),
        _ => return Err(invalid("set recovery runs on public coins")),
    };
    if !s.is_subset_of(t) {
        return Err(invalid("S must be a subset of T"));
    }
    let b = hash_tag_bits(t.len(), failure_prob)?;
    let tags: Vec<u64> = s.indices().iter().map(|&e| hash_tag(key, e, b)).collect();
    let table: Vec<(u64, usize)> = t.indices().iter().map(|&e| (hash_tag(key, e, b), e)).collect();
    let mut found = Vec::with_capacity(tags.len());
    for tag in &tags {
        let mut hits = table.iter().filter(|(h, _)| h == tag);
        let first = hits.next().map(|&(_, e)| e);
        if hits.next().is_some() {
            return Ok(SetRecovery { recovered: None, tag_bits: b, payload_bits: b * tags.len() });
        }
        found.push(first.expect("own tag is always present"));
    }
    found.sort_unstable();
    Ok(SetRecovery {
        recovered: Some(IndexSubset::new(found, t.universe())?),
        tag_bits: b,
        payload_bits: b * tags.len(),
    })
}

/// Rational coordinate weights stored as replication counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateWeights {
    counts: Vec<u64>,
}

pub const DEFAULT_REPLICATION_CAP: u64 = 1 << 16;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CoordinateWeights {
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("no coordinates"));
        }
        Ok(CoordinateWeights { counts: vec![1; d] })
    }

    /// Weight `i` is `counts[i] / sum(counts)`.
    pub fn from_counts(counts: Vec<u64>, cap: u64) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(invalid("weights must not all be zero"));
        }
        if total > cap {
            return Err(invalid(format!("replication total {total} exceeds cap {cap}")));
        }
        let g = counts.iter().fold(0, |g, &c| gcd(g, c));
        Ok(CoordinateWeights { counts: counts.into_iter().map(|c| c / g).collect() })
    }

    /// Exact fractions `num / den` that must sum to one.
    pub fn from_ratios(ratios: &[(u64, u64)], cap: u64) -> Result<Self> {
        if ratios.iter().any(|&(_, d)| d == 0) {
            return Err(invalid("zero denominator"));
        }
        let mut lcm = 1u64;
        for &(_, d) in ratios {
            lcm = lcm / gcd(lcm, d) * d;
            if lcm > cap {
                return Err(invalid(format!("common denominator exceeds cap {cap}")));
            }
        }
        let counts: Vec<u64> = ratios.iter().map(|&(n, d)| n * (lcm / d)).collect();
        if counts.iter().sum::<u64>() != lcm {
            return Err(invalid("weights must sum to exactly one"));
        }
        Self::from_counts(counts, cap)
    }

    /// Floating weights accepted only when each equals a fraction with
    /// denominator at most `max_den` to within 1e-12.
    pub fn from_f64(weights: &[f64], max_den: u64, cap: u64) -> Result<Self> {
        let mut ratios = Vec::with_capacity(weights.len());
        for &w in weights {
            if !(0.0..=1.0).contains(&w) {
                return Err(invalid(format!("weight {w} outside [0, 1]")));
            }
            let hit = (1..=max_den).find_map(|d| {
                let n = (w * d as f64).round();
                ((n / d as f64 - w).abs() < 1e-12).then_some((n as u64, d))
            });
            ratios.push(hit.ok_or_else(|| invalid(format!("weight {w} is not a small rational")))?);
        }
        Self::from_ratios(&ratios, cap)
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.total() as f64
    }

    /// `E_{i ~ P}[u_i v_i]`.
    pub fn inner(&self, u: &SignVector, v: &SignVector) -> Result<f64> {
        if u.len() != self.dim() || v.len() != self.dim() {
            return Err(Error::LengthMismatch { left: u.len().max(v.len()), right: self.dim() });
        }
        let s: i64 = (0..self.dim()).map(|i| self.counts[i] as i64 * i64::from(u.get(i) * v.get(i))).sum();
        Ok(s as f64 / self.total() as f64)
    }

    /// One all-ones word per replicated copy of each -1 coordinate.
    fn expand_masks(&self, u: &SignVector) -> Vec<u64> {
        u.entries()
            .iter()
            .zip(&self.counts)
            .flat_map(|(&e, &c)| std::iter::repeat_n(if e < 0 { u64::MAX } else { 0 }, c as usize))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GipParams {
    pub theta: f64,
    pub rho: f64,
    /// Leading constant of the repetition count.
    pub constant: f64,
    /// Correlation used to invert agreement rates; nominal `rho` when unset.
    pub rho_eff: Option<f64>,
}

impl GipParams {
    pub fn new(theta: f64, rho: f64) -> Self {
        GipParams { theta, rho, constant: 8.0, rho_eff: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(invalid("theta must lie in (0, 1)"));
        }
        if self.rho == 0.0 {
            return Err(invalid("rho = 0 carries no signal"));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(invalid("rho must lie in (0, 1]"));
        }
        if self.constant.is_nan() || self.constant <= 0.0 {
            return Err(invalid("constant must be positive"));
        }
        if let Some(r) = self.rho_eff {
            if !(r > 0.0 && r <= 1.0) {
                return Err(invalid("rho_eff must lie in (0, 1]"));
            }
        }
        Ok(())
    }

    /// `ceil(C theta^-2 rho^-2 ln(3t / theta))`.
    pub fn repetitions(&self, targets: usize) -> u64 {
        let t = targets.max(1) as f64;
        (self.constant / (self.theta * self.theta * self.rho * self.rho) * (3.0 * t / self.theta).ln()).ceil().max(1.0)
            as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GipEstimate {
    pub estimates: Vec<f64>,
    pub agreement: Vec<f64>,
    pub repetitions: u64,
    pub theta: f64,
    pub rho: f64,
}

/// Repetition words: Alice's `len + 1` words drawn in sequence from the
/// shared stream, then Bob's copy through his private noise stream.
struct IsrBlock {
    alice: Vec<u64>,
    bob: Vec<u64>,
    shared: StreamRng,
    noise: StreamRng,
}

impl IsrBlock {
    fn new(len: usize, seed: u64) -> Self {
        IsrBlock {
            alice: vec![0; len + 1],
            bob: vec![0; len + 1],
            shared: substream(seed, 0),
            noise: substream(seed, 1),
        }
    }

    fn fill_alice(&mut self) {
        for w in self.alice.iter_mut() {
            *w = self.shared.next_u64();
        }
    }

    fn fill_bob(&mut self, noise: &BernoulliWords) {
        for (b, a) in self.bob.iter_mut().zip(&self.alice) {
            *b = a ^ noise.word(&mut self.noise);
        }
    }
}

/// `sign(2 sum_c (64 - 2 popcount(w_c ^ mask_c)) + tie)` with the tie bit
/// read from the last word.
#[inline]
fn block_sign(words: &[u64], masks: &[u64]) -> bool {
    let len = masks.len();
    let ones: u64 = words[..len].iter().zip(masks).map(|(w, m)| u64::from((w ^ m).count_ones())).sum();
    let a = 64 * len as i64 - 2 * ones as i64;
    let tie = if words[len] & 1 == 0 { 1 } else { -1 };
    2 * a + tie >= 0
}

fn gip_inputs(weights: &CoordinateWeights, params: &GipParams) -> Result<()> {
    params.validate()?;
    if weights.total() > DEFAULT_REPLICATION_CAP {
        return Err(invalid("replicated dimension exceeds cap"));
    }
    Ok(())
}

/// Alice's message: one sign bit per repetition. Depends only on `u`, her
/// stream and the public parameters.
pub fn gip_alice_message(
    u: &SignVector,
    weights: &CoordinateWeights,
    params: &GipParams,
    targets: usize,
    shared_seed: u64,
) -> Result<BitVector> {
    gip_inputs(weights, params)?;
    if u.len() != weights.dim() {
        return Err(Error::LengthMismatch { left: u.len(), right: weights.dim() });
    }
    let masks = weights.expand_masks(u);
    let m = params.repetitions(targets);
    let mut block = IsrBlock::new(masks.len(), shared_seed);
    let mut msg = BitVector::zeros(0);
    for _ in 0..m {
        block.fill_alice();
        msg.push(block_sign(&block.alice, &masks));
    }
    Ok(msg)
}

fn invert(agreement: f64, params: &GipParams) -> f64 {
    let rho = params.rho_eff.unwrap_or(params.rho);
    ((PI * (1.0 - agreement)).cos() / rho).clamp(-1.0 - params.theta, 1.0 + params.theta)
}

/// Bob's estimates of `E_P[u_i v_i]` for each target from Alice's message.
pub fn gip_bob_estimates(
    message: &BitVector,
    targets: &[SignVector],
    weights: &CoordinateWeights,
    params: &GipParams,
    shared_seed: u64,
) -> Result<GipEstimate> {
    gip_inputs(weights, params)?;
    let m = message.len() as u64;
    if m == 0 {
        return Err(invalid("empty message"));
    }
    let masks = targets
        .iter()
        .map(|v| {
            if v.len() != weights.dim() {
                Err(Error::LengthMismatch { left: v.len(), right: weights.dim() })
            } else {
                Ok(weights.expand_masks(v))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let noise = BernoulliWords::new((1.0 - params.rho) / 2.0)?;
    let mut block = IsrBlock::new(weights.total() as usize, shared_seed);
    let mut agree = vec![0u64; targets.len()];
    for rep in 0..m {
        block.fill_alice();
        block.fill_bob(&noise);
        let a = message.get(rep as usize);
        for (c, mk) in agree.iter_mut().zip(&masks) {
            *c += u64::from(block_sign(&block.bob, mk) == a);
        }
    }
    Ok(finish(agree, m, params))
}

fn finish(agree: Vec<u64>, m: u64, params: &GipParams) -> GipEstimate {
    let agreement: Vec<f64> = agree.iter().map(|&c| c as f64 / m as f64).collect();
    GipEstimate {
        estimates: agreement.iter().map(|&p| invert(p, params)).collect(),
        agreement,
        repetitions: m,
        theta: params.theta,
        rho: params.rho,
    }
}

/// Both parties in one pass; the message equals [`gip_alice_message`].
pub fn gip_estimate(
    u: &SignVector,
    targets: &[SignVector],
    weights: &CoordinateWeights,
    params: &GipParams,
    shared_seed: u64,
) -> Result<(BitVector, GipEstimate)> {
    gip_inputs(weights, params)?;
    if u.len() != weights.dim() {
        return Err(Error::LengthMismatch { left: u.len(), right: weights.dim() });
    }
    let amask = weights.expand_masks(u);
    let masks = targets
        .iter()
        .map(|v| {
            if v.len() != weights.dim() {
                Err(Error::LengthMismatch { left: v.len(), right: weights.dim() })
            } else {
                Ok(weights.expand_masks(v))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let noise = BernoulliWords::new((1.0 - params.rho) / 2.0)?;
    let m = params.repetitions(targets.len());
    let mut block = IsrBlock::new(amask.len(), shared_seed);
    let mut msg = BitVector::zeros(0);
    let mut agree = vec![0u64; targets.len()];
    for _ in 0..m {
        block.fill_alice();
        let a = block_sign(&block.alice, &amask);
        msg.push(a);
        block.fill_bob(&noise);
        for (c, mk) in agree.iter_mut().zip(&masks) {
            *c += u64::from(block_sign(&block.bob, mk) == a);
        }
    }
    Ok((msg, finish(agree, m, params)))
}

/// Sign-agreement rate of the estimator with `d` uniform coordinates and a
/// target inner product rounded to the `2/d` grid. Returns
/// `(realized target, agreement, stderr)`.
pub fn gip_agreement_rate(target: f64, rho: f64, d: usize, repetitions: u64, seed: u64) -> Result<(f64, f64, f64)> {
    if !(-1.0..=1.0).contains(&target) {
        return Err(invalid("target outside [-1, 1]"));
    }
    if repetitions == 0 {
        return Err(invalid("repetitions must be positive"));
    }
    let minus = ((1.0 - target) / 2.0 * d as f64).round() as usize;
    let u = SignVector::all_plus(d);
    let v = SignVector::new((0..d).map(|i| if i < minus { -1 } else { 1 }).collect())?;
    let realized = 1.0 - 2.0 * minus as f64 / d as f64;
    // rho = 0 is a legitimate calibration point even though the estimator rejects it
    let params = GipParams { theta: 0.5, rho: rho.max(f64::MIN_POSITIVE), constant: 1.0, rho_eff: None };
    let noise = BernoulliWords::new((1.0 - rho) / 2.0)?;
    let weights = CoordinateWeights::uniform(d)?;
    gip_inputs(&weights, &params)?;
    let (am, bm) = (weights.expand_masks(&u), weights.expand_masks(&v));
    let mut block = IsrBlock::new(d, seed);
    let mut agree = 0u64;
    for _ in 0..repetitions {
        block.fill_alice();
        block.fill_bob(&noise);
        agree += u64::from(block_sign(&block.alice, &am) == block_sign(&block.bob, &bm));
    }
    let p = agree as f64 / repetitions as f64;
    Ok((realized, p, crate::stats::bernoulli_stderr(p, repetitions)))
}

/// A deterministic one-way protocol on `b`-bit inputs: Alice's message
/// index per `x` code, and Bob's output table per message and `y` code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertainProtocolTable {
    pub input_bits: usize,
    pub alice: Vec<usize>,
    pub bob: Vec<Vec<bool>>,
}

impl CertainProtocolTable {
    pub fn new(input_bits: usize, alice: Vec<usize>, bob: Vec<Vec<bool>>) -> Result<Self> {
        let size = 1usize << input_bits;
        if input_bits > 20 || alice.len() != size || bob.iter().any(|b| b.len() != size) {
            return Err(invalid("protocol tables must cover every input code"));
        }
        if bob.is_empty() || alice.iter().any(|&j| j >= bob.len()) {
            return Err(invalid("message index without a Bob table"));
        }
        Ok(CertainProtocolTable { input_bits, alice, bob })
    }

    /// Alice sends her block parities, Bob takes the majority.
    pub fn parity_family(t: &SubsetFamily) -> Result<Self> {
        let (k, n) = (t.block_count(), t.block_size());
        let bits = k * n;
        if bits > 20 {
            return Err(invalid("table too large"));
        }
        let parities = |code: usize| -> usize {
            let v = BitVector::from_u64(code as u64, bits);
            (0..k).map(|i| usize::from(f2_inner(t.block(i), &v.gather_runs(&[(i * n, n)])).expect("shape")) << i).sum()
        };
        let alice = (0..1usize << bits).map(parities).collect();
        let bob = (0..1usize << k)
            .map(|msg| {
                (0..1usize << bits)
                    .map(|y| {
                        let d = msg ^ parities(y);
                        2 * d.count_ones() as usize <= k
                    })
                    .collect()
            })
            .collect();
        Self::new(bits, alice, bob)
    }

    pub fn messages(&self) -> usize {
        self.bob.len()
    }

    pub fn output(&self, x: u64, y: u64) -> bool {
        self.bob[self.alice[x as usize]][y as usize]
    }
}

/// Result of one uncertain-protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainRun {
    pub run: ProtocolRun,
    pub selected: usize,
    pub estimate: GipEstimate,
}

fn to_sign(bits: impl Iterator<Item = bool>) -> SignVector {
    SignVector::new(bits.map(|b| if b { -1 } else { 1 }).collect()).expect("signs")
}

/// Alice knows `f`, Bob knows `g`'s certain protocol. Bob estimates the
/// correlation of `f(x, .)` with each of his output tables under the
/// `y`-marginal and answers with the best table.
#[allow(clippy::too_many_arguments)]
pub fn isr_uncertain_protocol(
    f: &FunctionSpec,
    g: &CertainProtocolTable,
    dist: &DistributionSpec,
    x: &BitVector,
    y: &BitVector,
    params: &GipParams,
    max_messages: usize,
    shared_seed: u64,
) -> Result<UncertainRun> {
    dist.validate()?;
    if !dist.is_product() {
        return Err(Error::DomainMismatch("the uncertain protocol needs a product distribution".into()));
    }
    let n = g.input_bits;
    if dist.input_len() != Some(n) || x.len() != n || y.len() != n {
        return Err(Error::DomainMismatch(format!("protocol tables are over {n}-bit inputs")));
    }
    if g.messages() > max_messages {
        return Err(Error::BudgetExceeded { needed: g.messages() as u128, budget: max_messages as u128 });
    }
    let f = f.compile(n)?;
    let ys: Vec<BitVector> = (0..1u64 << n).map(|c| BitVector::from_u64(c, n)).collect();
    let u = to_sign(ys.iter().map(|yy| f.eval(x, yy)));
    let targets: Vec<SignVector> = g.bob.iter().map(|b| to_sign(b.iter().copied())).collect();
    let weights = CoordinateWeights::uniform(ys.len())?;
    let (message, estimate) = gip_estimate(&u, &targets, &weights, params, shared_seed)?;
    let mut selected = 0;
    for (j, &e) in estimate.estimates.iter().enumerate() {
        if e > estimate.estimates[selected] {
            selected = j;
        }
    }
    let output = g.bob[selected][y.to_u64() as usize];
    Ok(UncertainRun {
        run: ProtocolRun {
            bits_communicated: message.len(),
            message,
            output,
            randomness: RandomnessSource::Isr { rho: params.rho, shared_seed },
        },
        selected,
        estimate,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceResult {
    pub error: f64,
    /// Message index for each `x` code.
    pub witness: Vec<usize>,
}

/// Exhaustive search over deterministic one-way protocols with `2^c`
/// messages; Bob answers with the posterior-likelier value.
pub fn brute_force_best_protocol(
    f: &FunctionSpec,
    dist: &DistributionSpec,
    c: u32,
    budget: u128,
) -> Result<BruteForceResult> {
    let n = dist.input_len().ok_or_else(|| Error::DomainMismatch("distribution has no (x, y) component".into()))?;
    if n > 3 || c > 2 {
        return Err(invalid("search limited to |X| <= 8 and c <= 2"));
    }
    let xs = 1usize << n;
    let msgs = 1usize << c;
    check_budget((msgs as u128).pow(xs as u32), budget)?;
    let cf = f.compile(n)?;
    let law = pair_law(dist, budget)?;
    // weight[x][y][value]
    let mut w = vec![[0.0f64; 2]; xs * xs];
    for (code, &p) in law.probs().iter().enumerate() {
        let (x, y) = law.decode_pair(code as u64);
        let v = usize::from(cf.eval(&x, &y));
        w[x.to_u64() as usize * xs + y.to_u64() as usize][v] += p;
    }
    let mut best = BruteForceResult { error: f64::INFINITY, witness: vec![0; xs] };
    let mut assign = vec![0usize; xs];
    let total = msgs.pow(xs as u32);
    let mut acc = vec![[0.0f64; 2]; msgs * xs];
    for idx in 0..total {
        let mut r = idx;
        for a in assign.iter_mut() {
            *a = r % msgs;
            r /= msgs;
        }
        acc.iter_mut().for_each(|e| *e = [0.0; 2]);
        for x in 0..xs {
            for y in 0..xs {
                let cell = &mut acc[assign[x] * xs + y];
                cell[0] += w[x * xs + y][0];
                cell[1] += w[x * xs + y][1];
            }
        }
        let success: f64 = acc.iter().map(|e| e[0].max(e[1])).sum();
        let error = (1.0 - success).max(0.0);
        if error < best.error - 1e-15 {
            best = BruteForceResult { error, witness: assign.clone() };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn subset_protocol_sends_t_and_matches() {
        let t = IndexSubset::new(vec![1, 3], 4).unwrap();
        for xc in 0..16u64 {
            for yc in 0..16u64 {
                let x = BitVector::from_u64(xc, 4).to_sign_vector();
                let y = BitVector::from_u64(yc, 4).to_sign_vector();
                let run = certain_subset_protocol(&t, &x, &y).unwrap();
                assert_eq!(run.bits_communicated, 2);
                assert_eq!(run.output, subset_majority(&t, &x, &y).unwrap());
            }
        }
        let e = IndexSubset::empty(3);
        let run = certain_subset_protocol(&e, &SignVector::all_plus(3), &SignVector::all_plus(3).negate()).unwrap();
        assert_eq!((run.bits_communicated, run.output), (0, true));
    }

    #[test]
    fn parity_protocol_exhaustive() {
        let s = SubsetFamily::new(
            vec![
                IndexSubset::new(vec![1], 2).unwrap(),
                IndexSubset::new(vec![1, 2], 2).unwrap(),
                IndexSubset::new(vec![2], 2).unwrap(),
            ],
            2,
        )
        .unwrap();
        for xc in 0..64u64 {
            for yc in 0..64u64 {
                let x = BitBlockString::from_flat(&BitVector::from_u64(xc, 6), 3, 2).unwrap();
                let y = BitBlockString::from_flat(&BitVector::from_u64(yc, 6), 3, 2).unwrap();
                let run = certain_parity_protocol(&s, &x, &y).unwrap();
                assert_eq!(run.bits_communicated, 3);
                assert_eq!(run.output, maj_subset_parity(&s, &x, &y).unwrap());
                if xc == yc {
                    assert!(run.output);
                }
            }
        }
    }

    #[test]
    fn set_recovery_examples() {
        let src = RandomnessSource::Public { shared_seed: 3 };
        let t = IndexSubset::new((1..=16).collect(), 40).unwrap();
        assert_eq!(hash_tag_bits(16, 0.01).unwrap(), 15);
        let r = hash_set_recovery(&IndexSubset::empty(40), &t, 0.01, &src).unwrap();
        assert_eq!(r.recovered, Some(IndexSubset::empty(40)));
        assert_eq!(r.payload_bits, 0);
        let r = hash_set_recovery(&t, &t, 0.01, &src).unwrap();
        if let Some(rec) = r.recovered {
            assert_eq!(rec, t);
        }
        assert_eq!(r.payload_bits, 16 * 15);
        assert!(hash_set_recovery(&t, &t, 0.01, &RandomnessSource::Deterministic).is_err());
    }

    #[test]
    fn set_recovery_failure_rate() {
        let t = IndexSubset::new((1..=16).collect(), 16).unwrap();
        let s = IndexSubset::new(vec![2, 5, 9, 11, 16], 16).unwrap();
        let trials = 10_000u64;
        let mut fail = 0u64;
        for i in 0..trials {
            let r = hash_set_recovery(&s, &t, 0.01, &RandomnessSource::Public { shared_seed: i }).unwrap();
            fail += u64::from(r.recovered.as_ref() != Some(&s));
        }
        let p = fail as f64 / trials as f64;
        let se = (0.01 * 0.99 / trials as f64).sqrt();
        assert!(p <= 0.01 + 3.0 * se, "{p}");
    }

    #[test]
    fn weights_rational_only() {
        let w = CoordinateWeights::from_ratios(&[(1, 2), (1, 4), (1, 4)], 1 << 10).unwrap();
        assert_eq!(w.counts(), &[2, 1, 1]);
        assert!(CoordinateWeights::from_ratios(&[(1, 2), (1, 3)], 1 << 10).is_err());
        assert!(CoordinateWeights::from_f64(
            &[std::f64::consts::FRAC_1_SQRT_2, 1.0 - std::f64::consts::FRAC_1_SQRT_2],
            1000,
            1 << 16
        )
        .is_err());
        let w = CoordinateWeights::from_f64(&[0.75, 0.25], 100, 1 << 10).unwrap();
        assert_eq!(w.counts(), &[3, 1]);
    }

    #[test]
    fn repetition_count() {
        let p = GipParams::new(0.1, 1.0);
        assert_eq!(p.repetitions(1), (800.0 * 30f64.ln()).ceil() as u64);
        assert!(GipParams::new(0.1, 0.0).validate().is_err());
    }

    #[test]
    fn gip_self_and_negation() {
        let mut rng = substream(11, 0);
        let d = 64;
        let u = SignVector::random(d, &mut rng);
        let w = CoordinateWeights::uniform(d).unwrap();
        let p = GipParams::new(0.1, 1.0);
        let (_, est) = gip_estimate(&u, &[u.clone(), u.negate()], &w, &p, 5).unwrap();
        assert!((est.estimates[0] - 1.0).abs() <= 0.1);
        assert!((est.estimates[1] + 1.0).abs() <= 0.1);
    }

    #[test]
    fn gip_split_matches_joint_and_ignores_targets() {
        let mut rng = substream(12, 0);
        let d = 32;
        let u = SignVector::random(d, &mut rng);
        let v1 = SignVector::random(d, &mut rng);
        let v2 = SignVector::random(d, &mut rng);
        let w = CoordinateWeights::uniform(d).unwrap();
        let p = GipParams::new(0.2, 0.5);
        let alone = gip_alice_message(&u, &w, &p, 2, 9).unwrap();
        let (joint, est) = gip_estimate(&u, &[v1.clone(), v2.clone()], &w, &p, 9).unwrap();
        let (other, _) = gip_estimate(&u, &[v2.clone(), v1.clone()], &w, &p, 9).unwrap();
        assert_eq!(alone, joint);
        assert_eq!(alone, other);
        let bob = gip_bob_estimates(&alone, &[v1, v2], &w, &p, 9).unwrap();
        assert_eq!(bob, est);
    }

    #[test]
    fn weighted_targets_use_replication() {
        let w = CoordinateWeights::from_ratios(&[(3, 4), (1, 4)], 64).unwrap();
        let u = SignVector::new(vec![1, 1]).unwrap();
        let v = SignVector::new(vec![1, -1]).unwrap();
        assert_eq!(w.inner(&u, &v).unwrap(), 0.5);
        let (_, est) = gip_estimate(&u, &[v], &w, &GipParams::new(0.1, 1.0), 4).unwrap();
        assert!((est.estimates[0] - 0.5).abs() <= 0.1, "{est:?}");
    }

    #[test]
    fn perfect_sharing_agreement_follows_sheppard() {
        for (target, seed) in [(0.5, 1u64), (0.0, 2), (-0.25, 3)] {
            let (real, p, se) = gip_agreement_rate(target, 1.0, 128, 40_000, seed).unwrap();
            let want = 1.0 - crate::primitives::sheppard(real).unwrap();
            assert!((p - want).abs() <= 3.0 * se + 0.005, "target {target}: {p} vs {want}");
        }
    }

    #[test]
    fn single_message_protocol_outputs_its_table() {
        let table = CertainProtocolTable::new(1, vec![0, 0], vec![vec![true, false]]).unwrap();
        let dist = DistributionSpec::UniformPairs { n: 1 };
        for (xc, yc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let x = BitVector::from_u64(xc, 1);
            let y = BitVector::from_u64(yc, 1);
            let r = isr_uncertain_protocol(
                &FunctionSpec::XorParity(IndexSubset::full(1)),
                &table,
                &dist,
                &x,
                &y,
                &GipParams::new(0.3, 1.0),
                4,
                7,
            )
            .unwrap();
            assert_eq!(r.selected, 0);
            assert_eq!(r.run.output, yc == 0);
        }
    }

    #[test]
    fn uncertain_protocol_rejects_correlated_inputs() {
        let fam = SubsetFamily::repeated(IndexSubset::full(1), 2).unwrap();
        let table = CertainProtocolTable::parity_family(&fam).unwrap();
        let x = BitVector::zeros(2);
        let err = isr_uncertain_protocol(
            &FunctionSpec::MajOfSubsetParity(fam.clone()),
            &table,
            &DistributionSpec::NoisyPairs { k: 2, n: 1, eta: 0.1 },
            &x,
            &x,
            &GipParams::new(0.3, 1.0),
            4,
            1,
        );
        assert!(matches!(err, Err(Error::DomainMismatch(_))));
        let err = isr_uncertain_protocol(
            &FunctionSpec::MajOfSubsetParity(fam),
            &table,
            &DistributionSpec::UniformPairs { n: 2 },
            &x,
            &x,
            &GipParams::new(0.3, 1.0),
            2,
            1,
        );
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn parity_table_matches_function() {
        let fam =
            SubsetFamily::new(vec![IndexSubset::new(vec![1], 2).unwrap(), IndexSubset::new(vec![1, 2], 2).unwrap()], 2)
                .unwrap();
        let table = CertainProtocolTable::parity_family(&fam).unwrap();
        let f = FunctionSpec::MajOfSubsetParity(fam);
        for x in 0..16 {
            for y in 0..16 {
                let want = f.eval(&BitVector::from_u64(x, 4), &BitVector::from_u64(y, 4)).unwrap();
                assert_eq!(table.output(x, y), want);
            }
        }
    }

    #[test]
    fn brute_force_micro_cases() {
        let d = DistributionSpec::UniformPairs { n: 1 };
        let b = 1 << 20;
        assert_eq!(brute_force_best_protocol(&FunctionSpec::AliceBit(1), &d, 1, b).unwrap().error, 0.0);
        let xor = FunctionSpec::XorParity(IndexSubset::full(1));
        assert_eq!(brute_force_best_protocol(&xor, &d, 0, b).unwrap().error, 0.5);
        assert_eq!(brute_force_best_protocol(&xor, &d, 1, b).unwrap().error, 0.0);
    }

    #[test]
    fn brute_force_monotone_in_budget() {
        let d = DistributionSpec::NoisyPairs { k: 1, n: 3, eta: 0.2 };
        let f = FunctionSpec::HammingThreshold(3);
        let errs: Vec<f64> = (0..=2).map(|c| brute_force_best_protocol(&f, &d, c, 1 << 20).unwrap().error).collect();
        assert!(errs[0] >= errs[1] - 1e-15 && errs[1] >= errs[2] - 1e-15, "{errs:?}");
        assert!(brute_force_best_protocol(&f, &d, 2, 100).is_err());
    }
}
