//! Bit vectors, sign vectors, index sets and the scalar helpers every other
//! module leans on.
//!
//! Conventions: logarithms are base 2. [`BitVector`] positions are 0-based,
//! while [`IndexSubset`] and [`SortedTuple`] hold 1-based values as in
//! `[n] = {1, ..., n}`. The bit/sign bridge maps bit 0 to +1 and bit 1 to -1,
//! so `x_i * y_i = +1` exactly when the bits agree.

use std::fmt;

use rand::{Rng, RngCore};

use crate::error::{invalid, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector { words: vec![u64::MAX; len.div_ceil(64)], len };
        v.clear_tail();
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds from packed words; bits beyond `len` are discarded.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        let mut v = BitVector { words, len };
        v.clear_tail();
        v
    }

    /// Low `len` bits of `code`, bit `j` of the code at position `j`.
    pub fn from_u64(code: u64, len: usize) -> Self {
        assert!(len <= 64);
        Self::from_words(vec![code], len)
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let words = (0..len.div_ceil(64)).map(|_| rng.next_u64()).collect();
        Self::from_words(words, len)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("not a bit: {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The vector as an integer code; requires `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok(())
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Ok(BitVector { words, len: self.len })
    }

    pub fn and(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(BitVector { words, len: self.len })
    }

    pub fn not(&self) -> BitVector {
        let mut v = BitVector { words: self.words.iter().map(|w| !w).collect(), len: self.len };
        v.clear_tail();
        v
    }

    /// popcount(self ^ other) restricted to `mask`, without allocating.
    #[inline]
    pub fn masked_xor_count(&self, other: &BitVector, mask: &BitVector) -> usize {
        debug_assert!(self.len == other.len && self.len == mask.len);
        let mut c = 0u32;
        for ((a, b), m) in self.words.iter().zip(&other.words).zip(&mask.words) {
            c += ((a ^ b) & m).count_ones();
        }
        c as usize
    }

    /// Up to 64 bits starting at `start`, bit `j` of the result being
    /// position `start + j`.
    #[inline]
    pub fn read_bits(&self, start: usize, count: usize) -> u64 {
        debug_assert!(count <= 64 && start + count <= self.len);
        if count == 0 {
            return 0;
        }
        let w = start / 64;
        let off = start % 64;
        let mut v = self.words[w] >> off;
        if off != 0 && off + count > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        if count < 64 {
            v &= (1u64 << count) - 1;
        }
        v
    }

    /// Appends the low `count` bits of `value`.
    #[inline]
    pub fn push_bits(&mut self, value: u64, count: usize) {
        debug_assert!(count <= 64);
        if count == 0 {
            return;
        }
        let value = if count < 64 { value & ((1u64 << count) - 1) } else { value };
        let off = self.len % 64;
        if off == 0 {
            self.words.push(value);
        } else {
            *self.words.last_mut().unwrap() |= value << off;
            if off + count > 64 {
                self.words.push(value >> (64 - off));
            }
        }
        self.len += count;
    }

    pub fn append(&mut self, other: &BitVector) {
        for (w, &word) in other.words.iter().enumerate() {
            self.push_bits(word, (other.len - w * 64).min(64));
        }
    }

    pub fn concat(parts: &[BitVector]) -> BitVector {
        let mut v = BitVector::zeros(0);
        for p in parts {
            v.append(p);
        }
        v
    }

    pub fn push(&mut self, b: bool) {
        self.push_bits(b as u64, 1);
    }

    /// Concatenation of the given `(start, len)` ranges of `self`.
    pub fn gather_runs(&self, runs: &[(usize, usize)]) -> BitVector {
        let total: usize = runs.iter().map(|r| r.1).sum();
        let mut out = BitVector { words: Vec::with_capacity(total.div_ceil(64)), len: 0 };
        for &(start, len) in runs {
            let mut p = 0;
            while p < len {
                let c = (len - p).min(64);
                out.push_bits(self.read_bits(start + p, c), c);
                p += c;
            }
        }
        out
    }

    pub fn to_sign_vector(&self) -> SignVector {
        SignVector { entries: self.iter().map(|b| if b { -1 } else { 1 }).collect() }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    entries: Vec<i8>,
}

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(e) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(invalid(format!("sign entry {e} is not +-1")));
        }
        Ok(SignVector { entries })
    }

    pub fn all_plus(len: usize) -> Self {
        SignVector { entries: vec![1; len] }
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        BitVector::random(len, rng).to_sign_vector()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> i8 {
        self.entries[i]
    }

    pub fn negate(&self) -> SignVector {
        SignVector { entries: self.entries.iter().map(|e| -e).collect() }
    }

    pub fn to_bit_vector(&self) -> BitVector {
        let bits: Vec<bool> = self.entries.iter().map(|&e| e < 0).collect();
        BitVector::from_bits(&bits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSubset {
    indices: Vec<usize>,
    universe: usize,
}

impl IndexSubset {
    pub fn new(indices: Vec<usize>, universe: usize) -> Result<Self> {
        check_strict(&indices, universe)?;
        Ok(IndexSubset { indices, universe })
    }

    pub fn empty(universe: usize) -> Self {
        IndexSubset { indices: Vec::new(), universe }
    }

    pub fn full(universe: usize) -> Self {
        IndexSubset { indices: (1..=universe).collect(), universe }
    }

    /// Support of an indicator vector; position `j` becomes index `j + 1`.
    pub fn from_indicator(v: &BitVector) -> Self {
        let indices = (0..v.len()).filter(|&j| v.get(j)).map(|j| j + 1).collect();
        IndexSubset { indices, universe: v.len() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &IndexSubset) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    pub fn difference_len(&self, other: &IndexSubset) -> usize {
        self.indices.iter().filter(|&&i| !other.contains(i)).count()
    }

    pub fn indicator(&self) -> BitVector {
        let mut v = BitVector::zeros(self.universe);
        for &i in &self.indices {
            v.set(i - 1, true);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortedTuple {
    values: Vec<usize>,
    bound: usize,
}

impl SortedTuple {
    pub fn new(values: Vec<usize>, bound: usize) -> Result<Self> {
        check_strict(&values, bound)?;
        Ok(SortedTuple { values, bound })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All but the last value.
    pub fn prefix(&self) -> SortedTuple {
        let n = self.values.len().saturating_sub(1);
        SortedTuple { values: self.values[..n].to_vec(), bound: self.bound }
    }

    /// All but the first value.
    pub fn suffix(&self) -> SortedTuple {
        let n = self.values.len().min(1);
        SortedTuple { values: self.values[n..].to_vec(), bound: self.bound }
    }

    /// Maximal runs of consecutive values as 0-based `(start, len)` pairs.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((s, l)) if *s + *l == v - 1 => *l += 1,
                _ => out.push((v - 1, 1)),
            }
        }
        out
    }
}

impl fmt::Display for SortedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_strict(values: &[usize], bound: usize) -> Result<()> {
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("values must be strictly increasing"));
    }
    if let Some(&v) = values.iter().find(|&&v| v == 0 || v > bound) {
        return Err(invalid(format!("value {v} outside [1, {bound}]")));
    }
    Ok(())
}

/// 1 when `x >= 0`.
pub fn sign(x: f64) -> bool {
    x >= 0.0
}

/// `log^(t)(n)`: `log2 n` for `t = 1`, then `max(log2 previous, 1)`.
pub fn iterated_log(t: u32, n: u64) -> Result<f64> {
    if t == 0 || n == 0 {
        return Err(invalid("iterated_log needs t >= 1 and n >= 1"));
    }
    let mut v = (n as f64).log2();
    for _ in 1..t {
        v = v.log2().max(1.0);
    }
    Ok(v)
}

pub fn hamming_distance(u: &BitVector, v: &BitVector) -> Result<usize> {
    Ok(u.xor(v)?.count_ones())
}

/// Parity of `w` restricted to `s`.
pub fn f2_inner(s: &IndexSubset, w: &BitVector) -> Result<bool> {
    if s.universe() != w.len() {
        return Err(Error::LengthMismatch { left: s.universe(), right: w.len() });
    }
    Ok(s.indices().iter().filter(|&&i| w.get(i - 1)).count() % 2 == 1)
}

/// Parity of `s & w` for two bit vectors.
pub fn f2_inner_bits(s: &BitVector, w: &BitVector) -> Result<bool> {
    Ok(s.and(w)?.count_ones() % 2 == 1)
}

/// Real inner product of two sign vectors.
pub fn real_inner(u: &SignVector, v: &SignVector) -> Result<i64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch { left: u.len(), right: v.len() });
    }
    Ok(u.entries().iter().zip(v.entries()).map(|(&a, &b)| (a * b) as i64).sum())
}

fn check_rho(rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho.abs() > 1.0 + 1e-12 {
        return Err(invalid(format!("correlation {rho} outside [-1, 1]")));
    }
    Ok(rho.clamp(-1.0, 1.0))
}

/// Sign-disagreement probability `arccos(rho) / pi` of rho-correlated
/// standard Gaussians.
pub fn sheppard(rho: f64) -> Result<f64> {
    Ok(check_rho(rho)?.acos() / std::f64::consts::PI)
}

/// Smallest `k` with `2 exp(-2 a^2 k) <= failure_prob`.
pub fn hoeffding_trials(accuracy: f64, failure_prob: f64) -> Result<u64> {
    let open = |v: f64| v > 0.0 && v < 1.0;
    if !open(accuracy) || !open(failure_prob) {
        return Err(invalid("hoeffding_trials needs accuracy and failure_prob in (0, 1)"));
    }
    let holds = |k: u64| 2.0 * (-2.0 * accuracy * accuracy * k as f64).exp() <= failure_prob;
    let mut k = ((2.0 / failure_prob).ln() / (2.0 * accuracy * accuracy)).ceil().max(1.0) as u64;
    while k > 1 && holds(k - 1) {
        k -= 1;
    }
    while !holds(k) {
        k += 1;
    }
    Ok(k)
}

/// `1 - (2/pi) arccos(rho)`.
pub fn majority_stability_bound(rho: f64) -> Result<f64> {
    Ok(1.0 - 2.0 * sheppard(rho)?)
}

/// Probability-`p` Bernoulli bits, 64 at a time.
///
/// Dyadic rates with few binary digits are built exactly from fair words by
/// folding the binary expansion (`p = 1/4` costs two words); other rates
/// compare one uniform word per bit against `floor(p * 2^64)`.
#[derive(Clone, Debug, PartialEq)]
pub enum BernoulliWords {
    Zero,
    One,
    Dyadic(Vec<bool>),
    Threshold(u64),
}

impl BernoulliWords {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("probability {p} outside [0, 1]")));
        }
        if p == 0.0 {
            return Ok(BernoulliWords::Zero);
        }
        if p == 1.0 {
            return Ok(BernoulliWords::One);
        }
        for digits in 1..=12u32 {
            let scaled = p * f64::from(1u32 << digits);
            if scaled.fract() == 0.0 {
                let num = scaled as u64;
                let bits = (0..digits).map(|i| (num >> (digits - 1 - i)) & 1 == 1).collect();
                return Ok(BernoulliWords::Dyadic(bits));
            }
        }
        Ok(BernoulliWords::Threshold((p * 18_446_744_073_709_551_616.0) as u64))
    }

    /// Fresh random words consumed per output word.
    pub fn cost(&self) -> usize {
        match self {
            BernoulliWords::Zero | BernoulliWords::One => 0,
            BernoulliWords::Dyadic(d) => d.len(),
            BernoulliWords::Threshold(_) => 64,
        }
    }

    #[inline]
    pub fn word<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            BernoulliWords::Zero => 0,
            BernoulliWords::One => u64::MAX,
            BernoulliWords::Dyadic(digits) => {
                // 0.b1 b2 ... bk: fold from the least significant digit.
                let mut m = 0u64;
                for &d in digits.iter().rev() {
                    let r = rng.next_u64();
                    m = if d { m | r } else { m & r };
                }
                m
            }
            BernoulliWords::Threshold(t) => {
                let mut m = 0u64;
                for j in 0..64 {
                    if rng.next_u64() < *t {
                        m |= 1 << j;
                    }
                }
                m
            }
        }
    }

    pub fn vector<R: RngCore + ?Sized>(&self, len: usize, rng: &mut R) -> BitVector {
        let words = (0..len.div_ceil(64)).map(|_| self.word(rng)).collect();
        BitVector::from_words(words, len)
    }
}

/// Independent copy of `x` with each bit flipped with probability `eta`.
pub fn noisy_copy<R: RngCore + ?Sized>(x: &BitVector, eta: f64, rng: &mut R) -> Result<BitVector> {
    let noise = BernoulliWords::new(eta)?.vector(x.len(), rng);
    x.xor(&noise)
}

/// Uniform random sorted `t`-subset of `[m]`.
pub fn random_tuple<R: RngCore + ?Sized>(m: usize, t: usize, rng: &mut R) -> Result<SortedTuple> {
    if t > m {
        return Err(invalid("tuple longer than its bound"));
    }
    let mut v = rand::seq::index::sample(rng, m, t).into_vec();
    v.sort_unstable();
    SortedTuple::new(v.into_iter().map(|i| i + 1).collect(), m)
}

pub fn random_bool<R: RngCore + ?Sized>(p: f64, rng: &mut R) -> bool {
    rng.random_bool(p)
}

/// `n choose k`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Every sorted `t`-tuple over `[m]` in lexicographic order.
pub fn all_tuples(m: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=t).collect();
    if t > m {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = t;
        while i > 0 && cur[i - 1] == m - t + i {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..t {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use proptest::prelude::*;
    use rand::RngCore;

    fn bv(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    #[test]
    fn sign_examples() {
        assert!(sign(0.0));
        assert!(sign(3.5));
        assert!(!sign(-2.0));
    }

    #[test]
    fn iterated_log_examples() {
        assert_eq!(iterated_log(1, 256).unwrap(), 8.0);
        assert_eq!(iterated_log(2, 256).unwrap(), 3.0);
        assert_eq!(iterated_log(3, 4).unwrap(), 1.0);
        assert!(iterated_log(0, 4).is_err());
        assert!(iterated_log(2, 0).is_err());
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&bv("000"), &bv("011")).unwrap(), 2);
        assert_eq!(hamming_distance(&bv("0110"), &bv("0110")).unwrap(), 0);
        assert_eq!(hamming_distance(&bv("0101"), &bv("1010")).unwrap(), 4);
        assert!(hamming_distance(&bv("01"), &bv("010")).is_err());
    }

    #[test]
    fn f2_inner_examples() {
        let s = IndexSubset::new(vec![1, 3], 3).unwrap();
        assert!(!f2_inner(&s, &bv("101")).unwrap());
        assert!(!f2_inner(&IndexSubset::empty(3), &bv("111")).unwrap());
        let s2 = IndexSubset::new(vec![2], 3).unwrap();
        assert!(f2_inner(&s2, &bv("010")).unwrap());
        assert!(f2_inner(&s2, &bv("01")).is_err());
        assert!(f2_inner_bits(&bv("011"), &bv("010")).unwrap());
    }

    #[test]
    fn sheppard_examples() {
        assert!((sheppard(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(sheppard(1.0).unwrap(), 0.0);
        assert!((sheppard(-1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(sheppard(1.5).is_err());
        // rounding slack just above 1 is clamped
        assert_eq!(sheppard(1.0 + 1e-16).unwrap(), 0.0);
    }

    #[test]
    fn hoeffding_examples() {
        assert_eq!(hoeffding_trials(0.1, 0.05).unwrap(), 185);
        assert_eq!(hoeffding_trials(0.5, 2.0 * (-1.0f64).exp()).unwrap(), 2);
        assert!(hoeffding_trials(0.0, 0.1).is_err());
        assert!(hoeffding_trials(0.1, 1.0).is_err());
    }

    #[test]
    fn majority_bound_examples() {
        assert_eq!(majority_stability_bound(1.0).unwrap(), 1.0);
        assert!(majority_stability_bound(0.0).unwrap().abs() < 1e-15);
        assert!((majority_stability_bound(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sign_bit_bridge_round_trips() {
        let x = bv("0110");
        let s = x.to_sign_vector();
        assert_eq!(s.entries(), &[1, -1, -1, 1]);
        assert_eq!(s.to_bit_vector(), x);
        assert!(SignVector::new(vec![1, 0]).is_err());
    }

    #[test]
    fn subset_and_tuple_validation() {
        assert!(IndexSubset::new(vec![2, 1], 3).is_err());
        assert!(IndexSubset::new(vec![0], 3).is_err());
        assert!(IndexSubset::new(vec![4], 3).is_err());
        let t = SortedTuple::new(vec![2, 3, 4, 7, 9], 9).unwrap();
        assert_eq!(t.runs(), vec![(1, 3), (6, 1), (8, 1)]);
        assert_eq!(t.prefix().values(), &[2, 3, 4, 7]);
        assert_eq!(t.suffix().values(), &[3, 4, 7, 9]);
        assert_eq!(t.to_string(), "(2,3,4,7,9)");
    }

    #[test]
    fn dyadic_bernoulli_rate() {
        let b = BernoulliWords::new(0.25).unwrap();
        assert_eq!(b, BernoulliWords::Dyadic(vec![false, true]));
        let b3 = BernoulliWords::new(0.375).unwrap();
        assert_eq!(b3.cost(), 3);
        let mut rng = substream(1, 0);
        let ones: u32 = (0..4000).map(|_| b.word(&mut rng).count_ones()).sum();
        let rate = f64::from(ones) / (4000.0 * 64.0);
        assert!((rate - 0.25).abs() < 0.005, "{rate}");
        let t = BernoulliWords::new(0.02).unwrap();
        let ones: u32 = (0..400).map(|_| t.word(&mut rng).count_ones()).sum();
        let rate = f64::from(ones) / (400.0 * 64.0);
        assert!((rate - 0.02).abs() < 0.004, "{rate}");
    }

    #[test]
    fn gather_runs_matches_bitwise_gather() {
        let mut rng = substream(3, 0);
        let x = BitVector::random(300, &mut rng);
        let runs = [(3usize, 70usize), (100, 1), (130, 129), (299, 1)];
        let g = x.gather_runs(&runs);
        let expect: Vec<bool> = runs.iter().flat_map(|&(s, l)| (s..s + l).map(|i| x.get(i))).collect();
        assert_eq!(g, BitVector::from_bits(&expect));
    }

    proptest! {
        #[test]
        fn sign_is_antisymmetric(x in -1e6f64..1e6) {
            prop_assume!(x != 0.0);
            prop_assert_eq!(sign(-x), !sign(x));
        }

        #[test]
        fn iterated_log_monotone(t in 1u32..6, n in 1u64..1_000_000) {
            let a = iterated_log(t, n).unwrap();
            prop_assert!(iterated_log(t + 1, n).unwrap() <= a);
            prop_assert!(iterated_log(t, n + 1).unwrap() >= a);
            if t >= 2 {
                prop_assert!(a >= 1.0);
            }
        }

        #[test]
        fn sheppard_is_complementary(rho in -1.0f64..=1.0) {
            let s = sheppard(rho).unwrap() + sheppard(-rho).unwrap();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn f2_inner_is_linear(seed in any::<u64>(), n in 1usize..80) {
            let mut rng = substream(seed, 0);
            let w1 = BitVector::random(n, &mut rng);
            let w2 = BitVector::random(n, &mut rng);
            let s = IndexSubset::from_indicator(&BitVector::random(n, &mut rng));
            let lhs = f2_inner(&s, &w1.xor(&w2).unwrap()).unwrap();
            prop_assert_eq!(lhs, f2_inner(&s, &w1).unwrap() ^ f2_inner(&s, &w2).unwrap());
        }

        #[test]
        fn hoeffding_is_tight(a in 0.01f64..0.99, f in 0.001f64..0.99) {
            let k = hoeffding_trials(a, f).unwrap();
            let holds = |k: u64| 2.0 * (-2.0 * a * a * k as f64).exp() <= f;
            prop_assert!(holds(k));
            prop_assert!(k == 1 || !holds(k - 1));
        }

        #[test]
        fn hoeffding_nonincreasing_in_accuracy(a in 0.01f64..0.9, f in 0.001f64..0.99) {
            let b = (a + 0.05).min(0.99);
            prop_assert!(hoeffding_trials(b, f).unwrap() <= hoeffding_trials(a, f).unwrap());
        }

        #[test]
        fn push_and_read_bits_round_trip(seed in any::<u64>(), chunks in proptest::collection::vec(1usize..=64, 1..10)) {
            let mut rng = substream(seed, 1);
            let mut v = BitVector::zeros(0);
            let mut expect = Vec::new();
            for c in chunks {
                let val = rng.next_u64();
                v.push_bits(val, c);
                expect.extend((0..c).map(|j| (val >> j) & 1 == 1));
            }
            prop_assert_eq!(v, BitVector::from_bits(&expect));
        }
    }
}
