//! Function families and the distance `Pr[f != g]` under an input law.
//!
//! Every [`FunctionSpec`] evaluates on a pair of flat bit strings `(x, y)`.
//! Sign-valued families read bit 0 as +1 and bit 1 as -1; block families
//! read `x` as `k` consecutive blocks of `n` bits.

use crate::error::{invalid, Error, Result};
use rand::RngCore;

use crate::primitives::{f2_inner, hamming_distance, sign, BernoulliWords, BitVector, IndexSubset, SignVector};
use crate::samplers::{pair_law, sample_pair, DistributionSpec};
use crate::stats::{run_trials, ExperimentReport};

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetFamily {
    subsets: Vec<IndexSubset>,
    block_size: usize,
}

impl SubsetFamily {
    pub fn new(subsets: Vec<IndexSubset>, block_size: usize) -> Result<Self> {
        if subsets.is_empty() {
            return Err(invalid("subset family needs at least one block"));
        }
        if let Some(s) = subsets.iter().find(|s| s.universe() != block_size) {
            return Err(invalid(format!("block universe {} != {block_size}", s.universe())));
        }
        Ok(SubsetFamily { subsets, block_size })
    }

    /// `k` copies of the same block subset.
    pub fn repeated(block: IndexSubset, k: usize) -> Result<Self> {
        let n = block.universe();
        Self::new(vec![block; k], n)
    }

    pub fn subsets(&self) -> &[IndexSubset] {
        &self.subsets
    }

    pub fn block(&self, i: usize) -> &IndexSubset {
        &self.subsets[i]
    }

    pub fn block_count(&self) -> usize {
        self.subsets.len()
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// Concatenated block indicators, `k * n` bits.
    pub fn indicator(&self) -> BitVector {
        let parts: Vec<BitVector> = self.subsets.iter().map(IndexSubset::indicator).collect();
        BitVector::concat(&parts)
    }

    pub fn from_indicator(v: &BitVector, k: usize, n: usize) -> Result<Self> {
        if v.len() != k * n {
            return Err(Error::LengthMismatch { left: v.len(), right: k * n });
        }
        let subsets = (0..k).map(|i| IndexSubset::from_indicator(&v.gather_runs(&[(i * n, n)]))).collect();
        Self::new(subsets, n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitBlockString {
    blocks: Vec<BitVector>,
}

impl BitBlockString {
    pub fn new(blocks: Vec<BitVector>) -> Result<Self> {
        let n = blocks.first().map(BitVector::len).ok_or_else(|| invalid("no blocks"))?;
        if let Some(b) = blocks.iter().find(|b| b.len() != n) {
            return Err(Error::LengthMismatch { left: b.len(), right: n });
        }
        Ok(BitBlockString { blocks })
    }

    pub fn from_flat(x: &BitVector, k: usize, n: usize) -> Result<Self> {
        if x.len() != k * n || k == 0 {
            return Err(Error::LengthMismatch { left: x.len(), right: k * n });
        }
        let blocks = (0..k).map(|i| x.gather_runs(&[(i * n, n)])).collect();
        Ok(BitBlockString { blocks })
    }

    pub fn flat(&self) -> BitVector {
        BitVector::concat(&self.blocks)
    }

    pub fn blocks(&self) -> &[BitVector] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    SubsetMajority(IndexSubset),
    XorParity(IndexSubset),
    MajOfSubsetParity(SubsetFamily),
    HammingThreshold(usize),
    /// Total extension of the gap problem: 1 iff the average agreement is at
    /// least `(c + s) / 2`.
    GapInnerProduct {
        c: f64,
        s: f64,
        d: usize,
    },
    Constant(bool),
    /// Alice's bit at 1-based position `i`, ignoring `y`.
    AliceBit(usize),
}

impl FunctionSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::GapInnerProduct { c, s, d } => {
                if !(-1.0..=1.0).contains(s) || !(-1.0..=1.0).contains(c) || c <= s || *d == 0 {
                    return Err(invalid("gap inner product needs -1 <= s < c <= 1 and d >= 1"));
                }
            }
            FunctionSpec::HammingThreshold(k) if *k == 0 => return Err(invalid("k must be positive")),
            FunctionSpec::AliceBit(0) => return Err(invalid("positions are 1-based")),
            _ => {}
        }
        Ok(())
    }

    /// Required input length, if fixed.
    pub fn input_len(&self) -> Option<usize> {
        match self {
            FunctionSpec::SubsetMajority(s) | FunctionSpec::XorParity(s) => Some(s.universe()),
            FunctionSpec::MajOfSubsetParity(t) => Some(t.block_count() * t.block_size()),
            FunctionSpec::HammingThreshold(k) => Some(*k),
            FunctionSpec::GapInnerProduct { d, .. } => Some(*d),
            FunctionSpec::Constant(_) | FunctionSpec::AliceBit(_) => None,
        }
    }

    pub fn eval(&self, x: &BitVector, y: &BitVector) -> Result<bool> {
        self.validate()?;
        if x.len() != y.len() {
            return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
        }
        match self {
            FunctionSpec::SubsetMajority(s) => subset_majority(s, &x.to_sign_vector(), &y.to_sign_vector()),
            FunctionSpec::XorParity(s) => xor_parity(s, x, y),
            FunctionSpec::MajOfSubsetParity(t) => {
                let (k, n) = (t.block_count(), t.block_size());
                maj_subset_parity(t, &BitBlockString::from_flat(x, k, n)?, &BitBlockString::from_flat(y, k, n)?)
            }
            FunctionSpec::HammingThreshold(k) => hd_threshold(*k, x, y),
            FunctionSpec::GapInnerProduct { c, s, d } => {
                if x.len() != *d {
                    return Err(Error::LengthMismatch { left: x.len(), right: *d });
                }
                let agreement = 1.0 - 2.0 * hamming_distance(x, y)? as f64 / *d as f64;
                Ok(agreement >= (c + s) / 2.0)
            }
            FunctionSpec::Constant(b) => Ok(*b),
            FunctionSpec::AliceBit(i) => {
                if *i > x.len() {
                    return Err(invalid(format!("position {i} beyond input length {}", x.len())));
                }
                Ok(x.get(i - 1))
            }
        }
    }

    /// Precomputes masks for fast repeated evaluation on inputs of length `len`.
    pub fn compile(&self, len: usize) -> Result<CompiledFunction> {
        self.validate()?;
        if let Some(l) = self.input_len() {
            if l != len {
                return Err(Error::DomainMismatch(format!("function expects {l} bits, domain has {len}")));
            }
        }
        let kind = match self {
            FunctionSpec::SubsetMajority(s) => Compiled::Majority { mask: s.indicator(), size: s.len() },
            FunctionSpec::XorParity(s) => Compiled::Parity(s.indicator()),
            FunctionSpec::MajOfSubsetParity(t) => {
                Compiled::MajParity { masks: t.subsets().iter().map(|s| s.indicator()).collect(), n: t.block_size() }
            }
            FunctionSpec::HammingThreshold(k) => Compiled::Hd(*k),
            FunctionSpec::GapInnerProduct { c, s, d } => Compiled::Gip { threshold: (c + s) / 2.0, d: *d },
            FunctionSpec::Constant(b) => Compiled::Constant(*b),
            FunctionSpec::AliceBit(i) => {
                if *i > len {
                    return Err(Error::DomainMismatch(format!("position {i} beyond {len}")));
                }
                Compiled::AliceBit(*i - 1)
            }
        };
        Ok(CompiledFunction { kind })
    }
}

#[derive(Clone, Debug)]
enum Compiled {
    Majority { mask: BitVector, size: usize },
    Parity(BitVector),
    MajParity { masks: Vec<BitVector>, n: usize },
    Hd(usize),
    Gip { threshold: f64, d: usize },
    Constant(bool),
    AliceBit(usize),
}

#[derive(Clone, Debug)]
pub struct CompiledFunction {
    kind: Compiled,
}

impl CompiledFunction {
    /// Inputs must have the compiled length.
    pub fn eval(&self, x: &BitVector, y: &BitVector) -> bool {
        match &self.kind {
            Compiled::Majority { mask, size } => *size >= 2 * x.masked_xor_count(y, mask),
            Compiled::Parity(mask) => x.masked_xor_count(y, mask) % 2 == 1,
            Compiled::MajParity { masks, n } => {
                let mut sum = 0i64;
                for (i, m) in masks.iter().enumerate() {
                    let mut odd = 0u32;
                    let mut p = 0;
                    while p < *n {
                        let c = (*n - p).min(64);
                        let s = i * n + p;
                        odd ^= ((x.read_bits(s, c) ^ y.read_bits(s, c)) & m.read_bits(p, c)).count_ones() & 1;
                        p += c;
                    }
                    sum += if odd == 1 { -1 } else { 1 };
                }
                sum >= 0
            }
            Compiled::Hd(k) => 2 * x.masked_xor_count(y, &BitVector::ones(x.len())) >= 2 * (k / 2),
            Compiled::Gip { threshold, d } => {
                let hd = x.masked_xor_count(y, &BitVector::ones(x.len()));
                1.0 - 2.0 * hd as f64 / *d as f64 >= *threshold
            }
            Compiled::Constant(b) => *b,
            Compiled::AliceBit(i) => x.get(*i),
        }
    }
}

/// `Sign(sum_{i in S} X_i Y_i)`.
pub fn subset_majority(s: &IndexSubset, x: &SignVector, y: &SignVector) -> Result<bool> {
    if x.len() != y.len() || x.len() != s.universe() {
        return Err(Error::LengthMismatch { left: x.len(), right: s.universe().max(y.len()) });
    }
    let sum: i64 = s.indices().iter().map(|&i| i64::from(x.get(i - 1) * y.get(i - 1))).sum();
    Ok(sign(sum as f64))
}

/// `<S, x xor y>` over F2.
pub fn xor_parity(s: &IndexSubset, x: &BitVector, y: &BitVector) -> Result<bool> {
    f2_inner(s, &x.xor(y)?)
}

/// `Sign(sum_i (-1)^{<T_i, x_i xor y_i>})`.
pub fn maj_subset_parity(t: &SubsetFamily, x: &BitBlockString, y: &BitBlockString) -> Result<bool> {
    if x.block_count() != t.block_count() || y.block_count() != t.block_count() {
        return Err(Error::LengthMismatch { left: x.block_count(), right: t.block_count() });
    }
    let mut sum = 0i64;
    for (i, s) in t.subsets().iter().enumerate() {
        sum += if xor_parity(s, &x.blocks()[i], &y.blocks()[i])? { -1 } else { 1 };
    }
    Ok(sign(sum as f64))
}

/// 1 iff the Hamming distance is at least `floor(k/2)`.
pub fn hd_threshold(k: usize, u: &BitVector, v: &BitVector) -> Result<bool> {
    if u.len() != k || v.len() != k {
        return Err(Error::LengthMismatch { left: u.len().max(v.len()), right: k });
    }
    Ok(hamming_distance(u, v)? >= k / 2)
}

/// The gap problem as a partial function: `Some(true)` when the average
/// agreement is at least `c`, `Some(false)` when at most `s`, else `None`.
pub fn gap_inner_product(c: f64, s: f64, u: &SignVector, v: &SignVector) -> Result<Option<bool>> {
    let ip = crate::primitives::real_inner(u, v)? as f64 / u.len().max(1) as f64;
    Ok(if ip >= c {
        Some(true)
    } else if ip <= s {
        Some(false)
    } else {
        None
    })
}

fn domain_len(f: &FunctionSpec, g: &FunctionSpec, dist: &DistributionSpec) -> Result<usize> {
    let n = dist.input_len().ok_or_else(|| Error::DomainMismatch("distribution has no (x, y) component".into()))?;
    for h in [f, g] {
        if let Some(l) = h.input_len() {
            if l != n {
                return Err(Error::DomainMismatch(format!("function expects {l} bits, distribution draws {n}")));
            }
        }
    }
    Ok(n)
}

/// Exact `Pr[f != g]` by enumerating the `(x, y)` law of `dist`.
pub fn distance_exact(f: &FunctionSpec, g: &FunctionSpec, dist: &DistributionSpec, budget: u128) -> Result<f64> {
    let n = domain_len(f, g, dist)?;
    let (cf, cg) = (f.compile(n)?, g.compile(n)?);
    let law = pair_law(dist, budget)?;
    let mut total = 0.0;
    for (code, &p) in law.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let (x, y) = law.decode_pair(code as u64);
        if cf.eval(&x, &y) != cg.eval(&x, &y) {
            total += p;
        }
    }
    Ok(total)
}

/// Monte Carlo estimate of `Pr[f != g]`.
pub fn distance_monte_carlo(
    f: &FunctionSpec,
    g: &FunctionSpec,
    dist: &DistributionSpec,
    trials: u64,
    seed: u64,
) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    dist.validate()?;
    let n = domain_len(f, g, dist)?;
    let (cf, cg) = (f.compile(n)?, g.compile(n)?);
    let m = run_trials(trials, seed, |rng| {
        let (x, y) = sample_pair(dist, rng);
        f64::from(u8::from(cf.eval(&x, &y) != cg.eval(&x, &y)))
    });
    Ok(m.report("distance", seed))
}

/// The block-parity pair with per-block parity correlation `1 - 2 delta'`:
/// blocks of two bits, `S_i = {1}`, `T_i = {1, 2}`, with `x` uniform and
/// `y = x xor e` where `e` is uniform on first bits and `delta'`-biased on
/// second bits.
pub fn block_parity_pair(k: usize) -> Result<(FunctionSpec, FunctionSpec)> {
    let s = SubsetFamily::repeated(IndexSubset::new(vec![1], 2)?, k)?;
    let t = SubsetFamily::repeated(IndexSubset::full(2), k)?;
    Ok((FunctionSpec::MajOfSubsetParity(s), FunctionSpec::MajOfSubsetParity(t)))
}

pub fn block_parity_distance_mc(k: usize, delta_prime: f64, trials: u64, seed: u64) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let (f, g) = block_parity_pair(k)?;
    let (cf, cg) = (f.compile(2 * k)?, g.compile(2 * k)?);
    let biased = BernoulliWords::new(delta_prime)?;
    const EVEN: u64 = 0x5555_5555_5555_5555;
    let m = run_trials(trials, seed, |rng| {
        let x = BitVector::random(2 * k, rng);
        let words: Vec<u64> =
            (0..(2 * k).div_ceil(64)).map(|_| (rng.next_u64() & EVEN) | (biased.word(rng) & !EVEN)).collect();
        let y = x.xor(&BitVector::from_words(words, 2 * k)).expect("same length");
        f64::from(u8::from(cf.eval(&x, &y) != cg.eval(&x, &y)))
    });
    Ok(m.report("block-parity-distance", seed).with_param("k", k).with_param("delta_prime", delta_prime))
}

/// Exact `Pr[Maj(a) != Maj(b)]` for uniform `a` on `k` signs and `b` a
/// `delta'`-noisy copy, by summing over the number of minus signs.
pub fn block_parity_distance_exact(k: usize, delta_prime: f64) -> f64 {
    let binom = |n: usize, j: usize, p: f64| -> f64 {
        let mut c = 1.0f64;
        for i in 0..j {
            c = c * (n - i) as f64 / (i + 1) as f64;
        }
        c * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32)
    };
    let plus_wins = |minus: usize| 2 * minus <= k;
    let mut total = 0.0;
    for j in 0..=k {
        let pj = binom(k, j, 0.5);
        for lost in 0..=j {
            let pl = binom(j, lost, delta_prime);
            for gained in 0..=k - j {
                if plus_wins(j) != plus_wins(j - lost + gained) {
                    total += pj * pl * binom(k - j, gained, delta_prime);
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    fn sv(v: &[i8]) -> SignVector {
        SignVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn subset_majority_examples() {
        assert!(subset_majority(&IndexSubset::empty(3), &sv(&[1, -1, 1]), &sv(&[-1, 1, 1])).unwrap());
        let full = IndexSubset::full(4);
        assert!(subset_majority(&full, &SignVector::all_plus(4), &SignVector::all_plus(4)).unwrap());
        let one = IndexSubset::new(vec![1], 2).unwrap();
        assert!(!subset_majority(&one, &sv(&[1, 1]), &sv(&[-1, 1])).unwrap());
        assert!(subset_majority(&one, &sv(&[1]), &sv(&[1, 1])).is_err());
    }

    #[test]
    fn xor_parity_examples() {
        let s = IndexSubset::new(vec![1, 2], 2).unwrap();
        assert!(!xor_parity(&s, &bv("10"), &bv("10")).unwrap());
        assert!(!xor_parity(&s, &bv("10"), &bv("01")).unwrap());
        let s1 = IndexSubset::new(vec![1], 2).unwrap();
        assert!(xor_parity(&s1, &bv("10"), &bv("01")).unwrap());
    }

    #[test]
    fn maj_subset_parity_examples() {
        let empty = SubsetFamily::repeated(IndexSubset::empty(2), 3).unwrap();
        let x = BitBlockString::from_flat(&bv("101100"), 3, 2).unwrap();
        let y = BitBlockString::from_flat(&bv("011011"), 3, 2).unwrap();
        assert!(maj_subset_parity(&empty, &x, &y).unwrap());
        let t = SubsetFamily::repeated(IndexSubset::full(2), 3).unwrap();
        assert!(maj_subset_parity(&t, &x, &x).unwrap());
    }

    #[test]
    fn maj_subset_parity_single_block_is_negated_parity() {
        for n in 1..=3usize {
            for smask in 0..(1u64 << n) {
                let s = IndexSubset::from_indicator(&BitVector::from_u64(smask, n));
                let fam = SubsetFamily::new(vec![s.clone()], n).unwrap();
                for xc in 0..(1u64 << n) {
                    for yc in 0..(1u64 << n) {
                        let (x, y) = (BitVector::from_u64(xc, n), BitVector::from_u64(yc, n));
                        let bx = BitBlockString::new(vec![x.clone()]).unwrap();
                        let by = BitBlockString::new(vec![y.clone()]).unwrap();
                        assert_eq!(maj_subset_parity(&fam, &bx, &by).unwrap(), !xor_parity(&s, &x, &y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn hd_threshold_examples() {
        assert!(hd_threshold(3, &bv("000"), &bv("011")).unwrap());
        assert!(!hd_threshold(2, &bv("01"), &bv("01")).unwrap());
        assert!(!hd_threshold(4, &bv("0110"), &bv("0110")).unwrap());
        assert!(hd_threshold(2, &bv("00"), &bv("01")).unwrap());
        assert!(hd_threshold(2, &bv("00"), &bv("011")).is_err());
    }

    #[test]
    fn gap_inner_product_is_partial() {
        let u = sv(&[1, 1, 1, 1]);
        assert_eq!(gap_inner_product(0.5, -0.5, &u, &u).unwrap(), Some(true));
        assert_eq!(gap_inner_product(0.5, -0.5, &u, &u.negate()).unwrap(), Some(false));
        assert_eq!(gap_inner_product(0.5, -0.5, &u, &sv(&[1, 1, -1, -1])).unwrap(), None);
        assert!(FunctionSpec::GapInnerProduct { c: 0.1, s: 0.2, d: 4 }.validate().is_err());
    }

    #[test]
    fn compiled_matches_direct_evaluation() {
        let mut rng = substream(11, 0);
        let specs = vec![
            FunctionSpec::SubsetMajority(IndexSubset::new(vec![1, 3, 4, 7], 7).unwrap()),
            FunctionSpec::XorParity(IndexSubset::new(vec![2, 5, 6], 7).unwrap()),
            FunctionSpec::HammingThreshold(7),
            FunctionSpec::GapInnerProduct { c: 0.5, s: -0.2, d: 7 },
            FunctionSpec::Constant(false),
            FunctionSpec::AliceBit(3),
        ];
        for f in &specs {
            let cf = f.compile(7).unwrap();
            for _ in 0..200 {
                let x = BitVector::random(7, &mut rng);
                let y = BitVector::random(7, &mut rng);
                assert_eq!(cf.eval(&x, &y), f.eval(&x, &y).unwrap(), "{f:?}");
            }
        }
        let fam =
            SubsetFamily::new(vec![IndexSubset::new(vec![1, 2], 3).unwrap(), IndexSubset::new(vec![3], 3).unwrap()], 3)
                .unwrap();
        let f = FunctionSpec::MajOfSubsetParity(fam);
        let cf = f.compile(6).unwrap();
        for _ in 0..200 {
            let x = BitVector::random(6, &mut rng);
            let y = BitVector::random(6, &mut rng);
            assert_eq!(cf.eval(&x, &y), f.eval(&x, &y).unwrap());
        }
    }

    #[test]
    fn distance_exact_examples() {
        let dist = DistributionSpec::UniformPairs { n: 3 };
        let f = FunctionSpec::SubsetMajority(IndexSubset::new(vec![1, 2], 3).unwrap());
        assert_eq!(distance_exact(&f, &f, &dist, DEFAULT_ENUMERATION_BUDGET).unwrap(), 0.0);
        let one = FunctionSpec::Constant(true);
        let zero = FunctionSpec::Constant(false);
        assert_eq!(distance_exact(&one, &zero, &dist, DEFAULT_ENUMERATION_BUDGET).unwrap(), 1.0);
        let g = FunctionSpec::SubsetMajority(IndexSubset::full(3));
        // independent brute force over the 64 sign pairs
        let mut disagree = 0;
        for xc in 0..8u64 {
            for yc in 0..8u64 {
                let s = |c: u64, i: u32| if (c >> i) & 1 == 1 { -1i32 } else { 1 };
                let p: Vec<i32> = (0..3).map(|i| s(xc, i) * s(yc, i)).collect();
                let fs = p[0] + p[1] >= 0;
                let ft = p[0] + p[1] + p[2] >= 0;
                disagree += i32::from(fs != ft);
            }
        }
        let got = distance_exact(&f, &g, &dist, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!((got - f64::from(disagree) / 64.0).abs() < 1e-15);
        assert!(distance_exact(&f, &g, &DistributionSpec::UniformPairs { n: 4 }, 1 << 26).is_err());
        assert!(matches!(
            distance_exact(&f, &g, &DistributionSpec::UniformPairs { n: 3 }, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn distance_mc_of_identical_functions_is_zero() {
        let dist = DistributionSpec::UniformPairs { n: 10 };
        let f = FunctionSpec::SubsetMajority(IndexSubset::full(10));
        let r = distance_monte_carlo(&f, &f, &dist, 5000, 3).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn section4_distance_decreases_with_smaller_difference() {
        let ell = 200;
        let t = FunctionSpec::SubsetMajority(IndexSubset::full(ell));
        let dist = DistributionSpec::UniformPairs { n: ell };
        let est = |missing: usize| {
            let s = FunctionSpec::SubsetMajority(IndexSubset::new((1..=ell - missing).collect(), ell).unwrap());
            distance_monte_carlo(&s, &t, &dist, 100_000, 5).unwrap()
        };
        let (big, small) = (est(20), est(4));
        assert!(big.estimate - small.estimate > 4.0 * (big.stderr.hypot(small.stderr)));
    }

    proptest! {
        #[test]
        fn subset_majority_invariant_under_joint_flip(seed in any::<u64>(), n in 1usize..40, i in 0usize..40) {
            let i = i % n;
            let mut rng = substream(seed, 0);
            let x = BitVector::random(n, &mut rng);
            let y = BitVector::random(n, &mut rng);
            let s = IndexSubset::from_indicator(&BitVector::random(n, &mut rng));
            let (mut x2, mut y2) = (x.clone(), y.clone());
            x2.flip(i);
            y2.flip(i);
            let f = |a: &BitVector, b: &BitVector| subset_majority(&s, &a.to_sign_vector(), &b.to_sign_vector()).unwrap();
            prop_assert_eq!(f(&x, &y), f(&x2, &y2));
        }

        #[test]
        fn xor_parity_splits(seed in any::<u64>(), n in 1usize..70) {
            let mut rng = substream(seed, 1);
            let x = BitVector::random(n, &mut rng);
            let y = BitVector::random(n, &mut rng);
            let s = IndexSubset::from_indicator(&BitVector::random(n, &mut rng));
            prop_assert_eq!(xor_parity(&s, &x, &y).unwrap(), f2_inner(&s, &x).unwrap() ^ f2_inner(&s, &y).unwrap());
        }

        #[test]
        fn maj_subset_parity_symmetric_and_xor_determined(seed in any::<u64>(), k in 1usize..6, n in 1usize..6) {
            let mut rng = substream(seed, 2);
            let t = SubsetFamily::from_indicator(&BitVector::random(k * n, &mut rng), k, n).unwrap();
            let f = FunctionSpec::MajOfSubsetParity(t);
            let x = BitVector::random(k * n, &mut rng);
            let y = BitVector::random(k * n, &mut rng);
            let z = BitVector::random(k * n, &mut rng);
            let v = f.eval(&x, &y).unwrap();
            prop_assert_eq!(v, f.eval(&y, &x).unwrap());
            let (xz, yz) = (x.xor(&z).unwrap(), y.xor(&z).unwrap());
            prop_assert_eq!(v, f.eval(&xz, &yz).unwrap());
        }

        #[test]
        fn hd_threshold_symmetric_and_complement_invariant(seed in any::<u64>(), k in 1usize..20) {
            let mut rng = substream(seed, 3);
            let u = BitVector::random(k, &mut rng);
            let v = BitVector::random(k, &mut rng);
            let h = hd_threshold(k, &u, &v).unwrap();
            prop_assert_eq!(h, hd_threshold(k, &v, &u).unwrap());
            prop_assert_eq!(h, hd_threshold(k, &u.not(), &v.not()).unwrap());
        }
    }

    #[test]
    fn block_parity_monte_carlo_matches_binomial_sum() {
        let exact = block_parity_distance_exact(9, 0.1);
        let r = block_parity_distance_mc(9, 0.1, 200_000, 3).unwrap();
        assert!((r.estimate - exact).abs() <= 4.0 * r.stderr, "{} vs {exact}", r.estimate);
        // one block: disagreement is the flip probability
        assert!((block_parity_distance_exact(1, 0.3) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn block_parity_exact_agrees_with_enumeration() {
        let (f, g) = block_parity_pair(3).unwrap();
        let mut total = 0.0;
        let dp = 0.2f64;
        for x in 0..64u64 {
            for e in 0..64u64 {
                let mut p = 1.0 / 64.0;
                for i in 0..3 {
                    p *= 0.5 * if e >> (2 * i + 1) & 1 == 1 { dp } else { 1.0 - dp };
                }
                let (xv, yv) = (BitVector::from_u64(x, 6), BitVector::from_u64(x ^ e, 6));
                if f.eval(&xv, &yv).unwrap() != g.eval(&xv, &yv).unwrap() {
                    total += p;
                }
            }
        }
        assert!((total - block_parity_distance_exact(3, dp)).abs() < 1e-12);
    }
}
