//! Input laws and randomness sources: streaming samplers plus exact
//! enumeration of every law at small sizes.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, invalid, Error, Result};
use crate::functions::SubsetFamily;
use crate::primitives::{f2_inner_bits, noisy_copy, BernoulliWords, BitVector};
use crate::rng::{substream_path, StreamRng};

#[derive(Clone, Debug, PartialEq)]
pub enum DistributionSpec {
    /// x, y independent uniform in {0,1}^n.
    UniformPairs { n: usize },
    /// x uniform in {0,1}^{kn}, y an eta-noisy copy.
    NoisyPairs { k: usize, n: usize, eta: f64 },
    /// S uniform block subsets, T a q-noisy copy of S.
    SubsetNoise { k: usize, n: usize, q: f64 },
    /// Subsets from `SubsetNoise(eps)`, inputs from `NoisyPairs(2eps - 2eps^2)`.
    NuEpsilon { k: usize, n: usize, eps: f64 },
    /// Subsets from `SubsetNoise(eps)`, inputs from `NoisyPairs(eps)`.
    KappaEpsilon { k: usize, n: usize, eps: f64 },
    /// x, y independent eps-noisy copies of a uniform z, conditioned blockwise
    /// on parities U, V drawn uniformly.
    ConditionedNoisy { t_hat: SubsetFamily, eps: f64 },
}

fn unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(invalid(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

/// Flip rate of the input pair under nu_eps.
pub fn nu_pair_noise(eps: f64) -> f64 {
    2.0 * eps - 2.0 * eps * eps
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let shape = |k: usize, n: usize| {
            if k == 0 || n == 0 {
                Err(invalid("shapes must be positive"))
            } else {
                Ok(())
            }
        };
        match self {
            DistributionSpec::UniformPairs { n } => shape(1, *n),
            DistributionSpec::NoisyPairs { k, n, eta } => shape(*k, *n).and(unit("eta", *eta)),
            DistributionSpec::SubsetNoise { k, n, q } => shape(*k, *n).and(unit("q", *q)),
            DistributionSpec::NuEpsilon { k, n, eps } | DistributionSpec::KappaEpsilon { k, n, eps } => {
                shape(*k, *n).and(unit("eps", *eps))
            }
            DistributionSpec::ConditionedNoisy { t_hat, eps } => {
                unit("eps", *eps)?;
                if *eps == 0.0 {
                    return Err(invalid("conditioning needs eps > 0"));
                }
                if t_hat.subsets().iter().any(|s| s.is_empty()) {
                    return Err(invalid("every conditioning block must be nonempty"));
                }
                Ok(())
            }
        }
    }

    /// Total input length per party, if the law draws inputs.
    pub fn input_len(&self) -> Option<usize> {
        match self {
            DistributionSpec::UniformPairs { n } => Some(*n),
            DistributionSpec::NoisyPairs { k, n, .. }
            | DistributionSpec::NuEpsilon { k, n, .. }
            | DistributionSpec::KappaEpsilon { k, n, .. } => Some(k * n),
            DistributionSpec::SubsetNoise { .. } => None,
            DistributionSpec::ConditionedNoisy { t_hat, .. } => Some(t_hat.block_count() * t_hat.block_size()),
        }
    }

    /// `(k, n)` block shape.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            DistributionSpec::UniformPairs { n } => (1, *n),
            DistributionSpec::NoisyPairs { k, n, .. }
            | DistributionSpec::SubsetNoise { k, n, .. }
            | DistributionSpec::NuEpsilon { k, n, .. }
            | DistributionSpec::KappaEpsilon { k, n, .. } => (*k, *n),
            DistributionSpec::ConditionedNoisy { t_hat, .. } => (t_hat.block_count(), t_hat.block_size()),
        }
    }

    /// Flip rate between x and y for the product-noise kinds.
    fn pair_eta(&self) -> Option<f64> {
        match self {
            DistributionSpec::UniformPairs { .. } => Some(0.5),
            DistributionSpec::NoisyPairs { eta, .. } => Some(*eta),
            DistributionSpec::NuEpsilon { eps, .. } => Some(nu_pair_noise(*eps)),
            DistributionSpec::KappaEpsilon { eps, .. } => Some(*eps),
            _ => None,
        }
    }

    fn subset_noise(&self) -> Option<f64> {
        match self {
            DistributionSpec::SubsetNoise { q, .. } => Some(*q),
            DistributionSpec::NuEpsilon { eps, .. } | DistributionSpec::KappaEpsilon { eps, .. } => Some(*eps),
            _ => None,
        }
    }

    /// True when x and y are independent under the law.
    pub fn is_product(&self) -> bool {
        matches!(self.pair_eta(), Some(e) if e == 0.5)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RandomnessSource {
    Deterministic,
    Private { seed_a: u64, seed_b: u64 },
    Public { shared_seed: u64 },
    Isr { rho: f64, shared_seed: u64 },
}

impl RandomnessSource {
    pub fn validate(&self) -> Result<()> {
        if let RandomnessSource::Isr { rho, .. } = self {
            unit("rho", *rho)?;
        }
        Ok(())
    }
}

/// One draw; fields a kind does not produce are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Draw {
    pub s: Option<SubsetFamily>,
    pub t: Option<SubsetFamily>,
    pub x: Option<BitVector>,
    pub y: Option<BitVector>,
}

pub fn sample<R: RngCore + ?Sized>(dist: &DistributionSpec, rng: &mut R) -> Result<Draw> {
    dist.validate()?;
    let (k, n) = dist.shape();
    let subsets = match dist.subset_noise() {
        Some(q) => {
            let s = BitVector::random(k * n, rng);
            let t = noisy_copy(&s, q, rng)?;
            Some((SubsetFamily::from_indicator(&s, k, n)?, SubsetFamily::from_indicator(&t, k, n)?))
        }
        None => None,
    };
    let (s, t) = match subsets {
        Some((s, t)) => (Some(s), Some(t)),
        None => (None, None),
    };
    let mut draw = Draw { s, t, x: None, y: None };
    if let DistributionSpec::ConditionedNoisy { t_hat, eps } = dist {
        let u = BitVector::random(k, rng);
        let v = BitVector::random(k, rng);
        let (_, x, y) = sample_conditioned(t_hat, *eps, &u, &v, rng)?;
        draw.t = Some(t_hat.clone());
        draw.x = Some(x);
        draw.y = Some(y);
    } else if dist.input_len().is_some() {
        let (x, y) = sample_pair(dist, rng);
        draw.x = Some(x);
        draw.y = Some(y);
    }
    Ok(draw)
}

/// Fast path for the `(x, y)` component; the distribution must be valid and draw inputs.
pub fn sample_pair<R: RngCore + ?Sized>(dist: &DistributionSpec, rng: &mut R) -> (BitVector, BitVector) {
    let len = dist.input_len().expect("law without inputs");
    if let DistributionSpec::ConditionedNoisy { t_hat, eps } = dist {
        let k = t_hat.block_count();
        let u = BitVector::random(k, rng);
        let v = BitVector::random(k, rng);
        let (_, x, y) = sample_conditioned(t_hat, *eps, &u, &v, rng).expect("validated law");
        return (x, y);
    }
    let eta = dist.pair_eta().expect("product-noise law");
    let x = BitVector::random(len, rng);
    let y = if eta == 0.5 { BitVector::random(len, rng) } else { noisy_copy(&x, eta, rng).expect("validated rate") };
    (x, y)
}

/// Probability that an eps-noisy copy of a block keeps parity `target` on
/// `t`, given the block's own parity `base`.
fn parity_acceptance(eps: f64, t_size: usize, base: bool, target: bool) -> f64 {
    let c = (1.0 - 2.0 * eps).powi(t_size as i32);
    if base == target {
        (1.0 + c) / 2.0
    } else {
        (1.0 - c) / 2.0
    }
}

/// One party's side: an eps-noisy copy of `z` conditioned blockwise on
/// `<T_i, X_i> = parities_i`, by per-block rejection.
pub fn conditioned_noisy_copy<R: RngCore + ?Sized>(
    z: &BitVector,
    t_hat: &SubsetFamily,
    eps: f64,
    parities: &BitVector,
    rng: &mut R,
) -> Result<BitVector> {
    let (k, n) = (t_hat.block_count(), t_hat.block_size());
    if parities.len() != k {
        return Err(Error::LengthMismatch { left: parities.len(), right: k });
    }
    if z.len() != k * n {
        return Err(Error::LengthMismatch { left: z.len(), right: k * n });
    }
    unit("eps", eps)?;
    let noise = BernoulliWords::new(eps)?;
    let mut blocks = Vec::with_capacity(k);
    for i in 0..k {
        let mask = t_hat.block(i).indicator();
        let zb = z.gather_runs(&[(i * n, n)]);
        let want = parities.get(i);
        let base = f2_inner_bits(&mask, &zb)?;
        if parity_acceptance(eps, t_hat.block(i).len(), base, want) <= 0.0 {
            return Err(Error::Unsatisfiable(format!("block {} cannot reach parity {}", i + 1, u8::from(want))));
        }
        loop {
            let cand = zb.xor(&noise.vector(n, rng))?;
            if f2_inner_bits(&mask, &cand)? == want {
                blocks.push(cand);
                break;
            }
        }
    }
    Ok(BitVector::concat(&blocks))
}

/// Shared uniform `Z` with both parties' conditioned noisy copies.
pub fn sample_conditioned<R: RngCore + ?Sized>(
    t_hat: &SubsetFamily,
    eps: f64,
    u: &BitVector,
    v: &BitVector,
    rng: &mut R,
) -> Result<(BitVector, BitVector, BitVector)> {
    let (k, n) = (t_hat.block_count(), t_hat.block_size());
    if u.len() != k || v.len() != k {
        return Err(Error::LengthMismatch { left: u.len().max(v.len()), right: k });
    }
    let z = BitVector::random(k * n, rng);
    let x = conditioned_noisy_copy(&z, t_hat, eps, u, rng)?;
    let y = conditioned_noisy_copy(&z, t_hat, eps, v, rng)?;
    Ok((z, x, y))
}

/// `r` uniform and `r'` with each bit of `r` flipped with probability
/// `(1 - rho) / 2`.
pub fn isr_streams(rho: f64, length: usize, shared_seed: u64) -> Result<(BitVector, BitVector)> {
    unit("rho", rho)?;
    let r = BitVector::random(length, &mut substream_path(shared_seed, &[0]));
    let noise = BernoulliWords::new((1.0 - rho) / 2.0)?.vector(length, &mut substream_path(shared_seed, &[1]));
    let r2 = r.xor(&noise)?;
    Ok((r, r2))
}

/// Every block size within `[n/3, 2n/3]`, both ends inclusive.
pub fn is_typical(t_hat: &SubsetFamily) -> bool {
    let n = t_hat.block_size();
    t_hat.subsets().iter().all(|s| 3 * s.len() >= n && 3 * s.len() <= 2 * n)
}

/// Uniform block subsets redrawn until typical.
pub fn random_typical_family(k: usize, n: usize, rng: &mut StreamRng) -> Result<SubsetFamily> {
    for _ in 0..10_000 {
        let f = SubsetFamily::from_indicator(&BitVector::random(k * n, rng), k, n)?;
        if is_typical(&f) {
            return Ok(f);
        }
    }
    Err(Error::Unsatisfiable("no typical family found".into()))
}

/// A probability vector over integer-coded outcomes.
///
/// Pair laws code `(x, y)` as `x | y << side_bits`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteLaw {
    probs: Vec<f64>,
    side_bits: usize,
}

impl DiscreteLaw {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(invalid("probabilities must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("probabilities sum to {total}")));
        }
        Ok(DiscreteLaw { probs, side_bits: 0 })
    }

    fn pair(probs: Vec<f64>, side_bits: usize) -> Self {
        DiscreteLaw { probs, side_bits }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn side_bits(&self) -> usize {
        self.side_bits
    }

    pub fn decode_pair(&self, code: u64) -> (BitVector, BitVector) {
        let b = self.side_bits;
        (BitVector::from_u64(code & ((1u64 << b) - 1), b), BitVector::from_u64(code >> b, b))
    }
}

fn noise_weight(eta: f64, flips: u32, len: usize) -> f64 {
    eta.powi(flips as i32) * (1.0 - eta).powi(len as i32 - flips as i32)
}

/// Law of `x xor y` within one conditioned block, `(1/4) sum_w g(w) g(w xor d)`
/// with `g(w) = N_eps(w) / Pr[parity of an eps-noisy copy = <T, w>]`.
fn conditioned_block_difference_law(mask: u64, n: usize, t_size: usize, eps: f64) -> Vec<f64> {
    let size = 1usize << n;
    let g: Vec<f64> = (0..size as u64)
        .map(|w| {
            let par = (w & mask).count_ones() % 2 == 1;
            noise_weight(eps, w.count_ones(), n) / parity_acceptance(eps, t_size, false, par)
        })
        .collect();
    (0..size).map(|d| 0.25 * (0..size).map(|w| g[w] * g[w ^ d]).sum::<f64>()).collect()
}

/// Exact law of the `(x, y)` component.
pub fn pair_law(dist: &DistributionSpec, budget: u128) -> Result<DiscreteLaw> {
    dist.validate()?;
    let len = dist.input_len().ok_or_else(|| Error::DomainMismatch("law has no (x, y) component".into()))?;
    check_budget(1u128 << (2 * len.min(63)), budget)?;
    let size = 1u64 << (2 * len);
    let side = (1u64 << len) - 1;
    let scale = 0.5f64.powi(len as i32);
    let probs: Vec<f64> = if let DistributionSpec::ConditionedNoisy { t_hat, eps } = dist {
        let n = t_hat.block_size();
        let tables: Vec<Vec<f64>> = t_hat
            .subsets()
            .iter()
            .map(|s| conditioned_block_difference_law(s.indicator().to_u64(), n, s.len(), *eps))
            .collect();
        let block = (1u64 << n) - 1;
        (0..size)
            .map(|code| {
                let d = (code & side) ^ (code >> len);
                tables.iter().enumerate().map(|(i, t)| t[((d >> (i * n)) & block) as usize]).product::<f64>() * scale
            })
            .collect()
    } else {
        let eta = dist.pair_eta().expect("pair law");
        (0..size)
            .map(|code| {
                let d = (code & side) ^ (code >> len);
                scale * noise_weight(eta, d.count_ones(), len)
            })
            .collect()
    };
    Ok(DiscreteLaw::pair(probs, len))
}

/// Exact law of `(S, T)` coded as `S | T << kn` over block indicators.
pub fn subset_pair_law(dist: &DistributionSpec, budget: u128) -> Result<DiscreteLaw> {
    dist.validate()?;
    let q = dist.subset_noise().ok_or_else(|| Error::DomainMismatch("law has no subset component".into()))?;
    let (k, n) = dist.shape();
    let len = k * n;
    check_budget(1u128 << (2 * len.min(63)), budget)?;
    let side = (1u64 << len) - 1;
    let scale = 0.5f64.powi(len as i32);
    let probs = (0..1u64 << (2 * len))
        .map(|code| scale * noise_weight(q, ((code & side) ^ (code >> len)).count_ones(), len))
        .collect();
    Ok(DiscreteLaw::pair(probs, len))
}

/// Complete support with exact probabilities.
pub fn enumerate_support(dist: &DistributionSpec, budget: u128) -> Result<Vec<(Draw, f64)>> {
    dist.validate()?;
    let (k, n) = dist.shape();
    let pairs = dist.input_len().map(|_| pair_law(dist, budget)).transpose()?;
    let subsets = dist.subset_noise().map(|_| subset_pair_law(dist, budget)).transpose()?;
    let count = pairs.as_ref().map_or(1, |l| l.len() as u128) * subsets.as_ref().map_or(1, |l| l.len() as u128);
    check_budget(count, budget)?;
    let fixed_t = match dist {
        DistributionSpec::ConditionedNoisy { t_hat, .. } => Some(t_hat.clone()),
        _ => None,
    };
    let support = |law: &Option<DiscreteLaw>| -> Vec<(Option<(BitVector, BitVector)>, f64)> {
        match law {
            Some(l) => l
                .probs()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(c, &p)| (Some(l.decode_pair(c as u64)), p))
                .collect(),
            None => vec![(None, 1.0)],
        }
    };
    let (sp, pp) = (support(&subsets), support(&pairs));
    let mut out = Vec::with_capacity(sp.len() * pp.len());
    for (st, ps) in &sp {
        let (s, t) = match st {
            Some((s, t)) => {
                (Some(SubsetFamily::from_indicator(s, k, n)?), Some(SubsetFamily::from_indicator(t, k, n)?))
            }
            None => (None, fixed_t.clone()),
        };
        for (xy, px) in &pp {
            let (x, y) = match xy {
                Some((x, y)) => (Some(x.clone()), Some(y.clone())),
                None => (None, None),
            };
            out.push((Draw { s: s.clone(), t: t.clone(), x, y }, ps * px));
        }
    }
    Ok(out)
}

/// Uniform bit helper for callers holding a generic rng.
pub fn coin<R: RngCore + ?Sized>(rng: &mut R) -> bool {
    rng.random()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::IndexSubset;
    use crate::rng::substream;
    use crate::verifiers::chi_square_p_value;

    const BUDGET: u128 = 1 << 26;

    fn family(k: usize, n: usize, t: &[usize]) -> SubsetFamily {
        SubsetFamily::repeated(IndexSubset::new(t.to_vec(), n).unwrap(), k).unwrap()
    }

    #[test]
    fn noisy_pairs_extremes() {
        let mut rng = substream(1, 0);
        for _ in 0..50 {
            let d = sample(&DistributionSpec::NoisyPairs { k: 2, n: 40, eta: 0.0 }, &mut rng).unwrap();
            assert_eq!(d.x, d.y);
            let d = sample(&DistributionSpec::NoisyPairs { k: 2, n: 40, eta: 1.0 }, &mut rng).unwrap();
            assert_eq!(d.x.unwrap().not(), d.y.unwrap());
        }
    }

    #[test]
    fn subset_noise_flip_rate() {
        let mut rng = substream(2, 0);
        let dist = DistributionSpec::SubsetNoise { k: 10, n: 100, q: 0.3 };
        let mut flips = 0usize;
        let draws = 100;
        for _ in 0..draws {
            let d = sample(&dist, &mut rng).unwrap();
            flips += d.s.unwrap().indicator().xor(&d.t.unwrap().indicator()).unwrap().count_ones();
        }
        let rate = flips as f64 / (draws * 1000) as f64;
        assert!((rate - 0.3).abs() < 0.005, "{rate}");
    }

    #[test]
    fn nu_epsilon_draw_has_all_parts() {
        let mut rng = substream(3, 0);
        let d = sample(&DistributionSpec::NuEpsilon { k: 3, n: 4, eps: 0.1 }, &mut rng).unwrap();
        assert_eq!(d.s.unwrap().block_count(), 3);
        assert_eq!(d.x.unwrap().len(), 12);
    }

    #[test]
    fn conditioned_sampling_hits_parities() {
        let mut rng = substream(4, 0);
        let t = family(3, 6, &[1, 2, 5]);
        for _ in 0..200 {
            let u = BitVector::random(3, &mut rng);
            let v = BitVector::random(3, &mut rng);
            let (_, x, y) = sample_conditioned(&t, 0.25, &u, &v, &mut rng).unwrap();
            for i in 0..3 {
                let m = t.block(i).indicator();
                assert_eq!(f2_inner_bits(&m, &x.gather_runs(&[(i * 6, 6)])).unwrap(), u.get(i));
                assert_eq!(f2_inner_bits(&m, &y.gather_runs(&[(i * 6, 6)])).unwrap(), v.get(i));
            }
        }
    }

    #[test]
    fn conditioned_sampling_rejects_impossible_parity() {
        let mut rng = substream(5, 0);
        let empty = SubsetFamily::new(vec![IndexSubset::empty(4)], 4).unwrap();
        let one = BitVector::parse("1").unwrap();
        assert!(matches!(sample_conditioned(&empty, 0.25, &one, &one, &mut rng), Err(Error::Unsatisfiable(_))));
        let zero = BitVector::parse("0").unwrap();
        assert!(sample_conditioned(&empty, 0.25, &zero, &zero, &mut rng).is_ok());
        let t = family(1, 4, &[1]);
        let z = BitVector::parse("0000").unwrap();
        assert!(conditioned_noisy_copy(&z, &t, 0.0, &one, &mut rng).is_err());
    }

    #[test]
    fn half_noise_accepts_half_the_time() {
        assert_eq!(parity_acceptance(0.5, 3, false, true), 0.5);
        assert_eq!(parity_acceptance(0.5, 3, true, true), 0.5);
    }

    fn exact_conditional_law(z: u64, mask: u64, n: usize, eps: f64, want: bool) -> Vec<f64> {
        let w: Vec<f64> = (0..1u64 << n)
            .map(|x| {
                let par = (x & mask).count_ones() % 2 == 1;
                if par != want {
                    return 0.0;
                }
                let d = (x ^ z).count_ones() as i32;
                eps.powi(d) * (1.0 - eps).powi(n as i32 - d)
            })
            .collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|p| p / total).collect()
    }

    #[test]
    fn conditioned_copy_matches_exact_law_chi_square() {
        let n = 6;
        let t = family(1, n, &[1, 3, 4]);
        let z = BitVector::parse("101100").unwrap();
        let want = BitVector::parse("1").unwrap();
        let expected = exact_conditional_law(z.to_u64(), t.block(0).indicator().to_u64(), n, 0.25, true);
        let draws = 1_000_000u64;
        let mut counts = vec![0u64; 1 << n];
        let mut rng = substream(6, 0);
        for _ in 0..draws {
            let x = conditioned_noisy_copy(&z, &t, 0.25, &want, &mut rng).unwrap();
            counts[x.to_u64() as usize] += 1;
        }
        let p = chi_square_p_value(&counts, &expected).unwrap();
        assert!(p > 0.01, "p = {p}");
    }

    #[test]
    fn isr_stream_correlations() {
        let (r, r2) = isr_streams(1.0, 1000, 9).unwrap();
        assert_eq!(r, r2);
        let corr = |rho: f64| {
            let (r, r2) = isr_streams(rho, 100_000, 10).unwrap();
            1.0 - 2.0 * r.xor(&r2).unwrap().count_ones() as f64 / 100_000.0
        };
        assert!(corr(0.0).abs() < 0.01);
        assert!((corr(0.5) - 0.5).abs() < 0.01);
        assert_eq!(isr_streams(0.3, 64, 4).unwrap(), isr_streams(0.3, 64, 4).unwrap());
        assert!(isr_streams(1.2, 8, 1).is_err());
    }

    #[test]
    fn typicality_examples() {
        assert!(is_typical(&family(2, 6, &[1, 2, 3])));
        assert!(!is_typical(&SubsetFamily::new(vec![IndexSubset::empty(6)], 6).unwrap()));
        assert!(is_typical(&family(1, 6, &[2, 5])));
        assert!(is_typical(&family(1, 6, &[1, 2, 3, 4])));
        assert!(!is_typical(&family(1, 6, &[1, 2, 3, 4, 5])));
        let mut rng = substream(7, 0);
        assert!(is_typical(&random_typical_family(4, 9, &mut rng).unwrap()));
    }

    #[test]
    fn enumerate_support_examples() {
        let s = enumerate_support(&DistributionSpec::UniformPairs { n: 2 }, BUDGET).unwrap();
        assert_eq!(s.len(), 16);
        assert!(s.iter().all(|(_, p)| (p - 1.0 / 16.0).abs() < 1e-15));
        let s = enumerate_support(&DistributionSpec::NoisyPairs { k: 1, n: 1, eta: 0.25 }, BUDGET).unwrap();
        let mut ps: Vec<f64> = s.iter().map(|(_, p)| *p).collect();
        ps.sort_by(f64::total_cmp);
        assert_eq!(ps, vec![0.125, 0.125, 0.375, 0.375]);
        for dist in [
            DistributionSpec::SubsetNoise { k: 1, n: 3, q: 0.2 },
            DistributionSpec::NuEpsilon { k: 1, n: 2, eps: 0.1 },
            DistributionSpec::KappaEpsilon { k: 2, n: 1, eps: 0.3 },
            DistributionSpec::ConditionedNoisy { t_hat: family(2, 2, &[1]), eps: 0.2 },
        ] {
            let total: f64 = enumerate_support(&dist, BUDGET).unwrap().iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12, "{dist:?}");
        }
        assert!(enumerate_support(&DistributionSpec::UniformPairs { n: 8 }, 100).is_err());
    }

    fn brute_conditioned_law(t: &SubsetFamily, eps: f64) -> Vec<f64> {
        // sums over z, U, V with explicit per-block conditioning
        let (k, n) = (t.block_count(), t.block_size());
        let len = k * n;
        let mut out = vec![0.0; 1 << (2 * len)];
        let block = (1u64 << n) - 1;
        let masks: Vec<u64> = t.subsets().iter().map(|s| s.indicator().to_u64()).collect();
        for z in 0..1u64 << len {
            for u in 0..1u64 << k {
                for v in 0..1u64 << k {
                    let cond = |target: u64| -> Vec<f64> {
                        (0..1u64 << len)
                            .map(|x| {
                                let mut p = 1.0;
                                for (i, &mask) in masks.iter().enumerate().take(k) {
                                    let xb = (x >> (i * n)) & block;
                                    let zb = (z >> (i * n)) & block;
                                    let want = (target >> i) & 1;
                                    let norm: f64 = (0..1u64 << n)
                                        .filter(|w| u64::from((w & mask).count_ones() % 2) == want)
                                        .map(|w| noise_weight(eps, (w ^ zb).count_ones(), n))
                                        .sum();
                                    if u64::from((xb & mask).count_ones() % 2) != want {
                                        return 0.0;
                                    }
                                    p *= noise_weight(eps, (xb ^ zb).count_ones(), n) / norm;
                                }
                                p
                            })
                            .collect()
                    };
                    let (px, py) = (cond(u), cond(v));
                    let w = 0.5f64.powi((len + 2 * k) as i32);
                    for x in 0..1u64 << len {
                        if px[x as usize] == 0.0 {
                            continue;
                        }
                        for y in 0..1u64 << len {
                            out[(x | y << len) as usize] += w * px[x as usize] * py[y as usize];
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn conditioned_closed_form_matches_brute_force() {
        for (t, eps) in [(family(1, 4, &[1, 2]), 0.25), (family(1, 3, &[2]), 0.1), (family(2, 2, &[1, 2]), 0.3)] {
            let law = pair_law(&DistributionSpec::ConditionedNoisy { t_hat: t.clone(), eps }, BUDGET).unwrap();
            let brute = brute_conditioned_law(&t, eps);
            for (a, b) in law.probs().iter().zip(&brute) {
                assert!((a - b).abs() < 1e-14, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn two_noisy_copies_of_common_source_match_combined_noise() {
        for (len, eps) in [(2usize, 0.25), (4, 0.1), (6, 0.3), (8, 0.2)] {
            let direct =
                pair_law(&DistributionSpec::NoisyPairs { k: 1, n: len, eta: nu_pair_noise(eps) }, BUDGET).unwrap();
            let mut via_z = vec![0.0; 1 << (2 * len)];
            for z in 0..1u64 << len {
                for x in 0..1u64 << len {
                    let px = noise_weight(eps, (x ^ z).count_ones(), len);
                    for y in 0..1u64 << len {
                        via_z[(x | y << len) as usize] +=
                            0.5f64.powi(len as i32) * px * noise_weight(eps, (y ^ z).count_ones(), len);
                    }
                }
            }
            let tv: f64 = direct.probs().iter().zip(&via_z).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
            assert!(tv < 1e-13, "tv = {tv}");
        }
    }

    #[test]
    fn empirical_frequencies_pass_chi_square() {
        let t = family(1, 3, &[1, 2]);
        for (i, dist) in [
            DistributionSpec::UniformPairs { n: 2 },
            DistributionSpec::NoisyPairs { k: 1, n: 3, eta: 0.2 },
            DistributionSpec::KappaEpsilon { k: 1, n: 2, eps: 0.3 },
            DistributionSpec::ConditionedNoisy { t_hat: t, eps: 0.25 },
        ]
        .into_iter()
        .enumerate()
        {
            let law = pair_law(&dist, BUDGET).unwrap();
            let mut counts = vec![0u64; law.len()];
            let mut rng = substream(20, i as u64);
            for _ in 0..1_000_000 {
                let (x, y) = sample_pair(&dist, &mut rng);
                counts[(x.to_u64() | y.to_u64() << law.side_bits()) as usize] += 1;
            }
            let p = chi_square_p_value(&counts, law.probs()).unwrap();
            assert!(p > 0.01, "{dist:?}: p = {p}");
        }
    }

    #[test]
    fn sampling_is_a_function_of_the_seed() {
        let dist = DistributionSpec::NuEpsilon { k: 2, n: 5, eps: 0.2 };
        let a = sample(&dist, &mut substream(8, 1)).unwrap();
        let b = sample(&dist, &mut substream(8, 1)).unwrap();
        assert_eq!(a, b);
    }
}
