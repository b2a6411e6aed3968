//! The simulation protocol for the composed function, exact total
//! variation on enumerated laws, exact information costs of tiny
//! protocols and the posterior-argmax estimator.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, invalid, Error, Result};
use crate::functions::{maj_subset_parity, BitBlockString, SubsetFamily};
use crate::primitives::{f2_inner_bits, noisy_copy, BitVector, IndexSubset};
use crate::samplers::{
    enumerate_support, is_typical, nu_pair_noise, pair_law, sample_conditioned, DiscreteLaw, DistributionSpec,
};

/// Inner protocol of the simulation: Alice holds `(S, X)`, Bob `(T, Y)`.
pub trait InnerProtocol {
    fn run(&self, alice: (&SubsetFamily, &BitVector), bob: (&SubsetFamily, &BitVector), rng: &mut dyn RngCore) -> bool;
}

/// Bob evaluates the composed majority of parities on his own subsets.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactComposed;

impl InnerProtocol for ExactComposed {
    fn run(
        &self,
        alice: (&SubsetFamily, &BitVector),
        bob: (&SubsetFamily, &BitVector),
        _rng: &mut dyn RngCore,
    ) -> bool {
        let (t, y) = bob;
        let (k, n) = (t.block_count(), t.block_size());
        let xb = BitBlockString::from_flat(alice.1, k, n).expect("input shape");
        let yb = BitBlockString::from_flat(y, k, n).expect("input shape");
        maj_subset_parity(t, &xb, &yb).expect("input shape")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationInputs {
    pub z: BitVector,
    pub s: SubsetFamily,
    pub x: BitVector,
    pub y: BitVector,
}

/// Shared `Z`, conditioned inputs with parities `u` and `v`, and Alice's
/// `q`-noisy copy of `t_hat`.
pub fn simulation_inputs<R: RngCore + ?Sized>(
    u: &BitVector,
    v: &BitVector,
    t_hat: &SubsetFamily,
    eps: f64,
    q: f64,
    rng: &mut R,
) -> Result<SimulationInputs> {
    if !is_typical(t_hat) {
        return Err(invalid("subset family is not typical"));
    }
    let (k, n) = (t_hat.block_count(), t_hat.block_size());
    let (z, x, y) = sample_conditioned(t_hat, eps, u, v, rng)?;
    let s = SubsetFamily::from_indicator(&noisy_copy(&t_hat.indicator(), q, rng)?, k, n)?;
    Ok(SimulationInputs { z, s, x, y })
}

pub fn simulation_protocol<R: RngCore>(
    u: &BitVector,
    v: &BitVector,
    t_hat: &SubsetFamily,
    eps: f64,
    q: f64,
    inner: &dyn InnerProtocol,
    rng: &mut R,
) -> Result<bool> {
    let inp = simulation_inputs(u, v, t_hat, eps, q, rng)?;
    Ok(inner.run((&inp.s, &inp.x), (t_hat, &inp.y), rng))
}

/// Half the L1 distance between two laws on the same coded support.
pub fn tv_distance_exact(p: &DiscreteLaw, q: &DiscreteLaw) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { left: p.len(), right: q.len() });
    }
    Ok(0.5 * p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Block subsets `{1..floor(n/2)}` repeated `k` times.
pub fn half_density_family(k: usize, n: usize) -> Result<SubsetFamily> {
    SubsetFamily::repeated(IndexSubset::new((1..=n / 2).collect(), n)?, k)
}

/// Exact TV between the product-noise input law and the conditioned law.
pub fn closeness_tv(t_hat: &SubsetFamily, eps: f64, budget: u128) -> Result<f64> {
    let (k, n) = (t_hat.block_count(), t_hat.block_size());
    let product = pair_law(&DistributionSpec::NoisyPairs { k, n, eta: nu_pair_noise(eps) }, budget)?;
    let conditioned = pair_law(&DistributionSpec::ConditionedNoisy { t_hat: t_hat.clone(), eps }, budget)?;
    tv_distance_exact(&product, &conditioned)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosenessFit {
    pub k: usize,
    pub eps: f64,
    pub ns: Vec<usize>,
    pub tv: Vec<f64>,
    /// Envelope constant: smallest `C` with `tv <= C 2^(-beta eps n)` at every point.
    pub c: f64,
    pub beta: f64,
}

impl ClosenessFit {
    pub fn bound(&self, n: usize) -> f64 {
        self.c * 2f64.powf(-self.beta * self.eps * n as f64)
    }

    pub fn nonincreasing(&self) -> bool {
        self.tv.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Least-squares slope of `log2 tv` against `eps n`, with `C` raised until
/// the curve bounds every point.
pub fn closeness_fit(k: usize, eps: f64, ns: &[usize], budget: u128) -> Result<ClosenessFit> {
    if ns.len() < 2 {
        return Err(invalid("the fit needs at least two sizes"));
    }
    let tv =
        ns.iter().map(|&n| closeness_tv(&half_density_family(k, n)?, eps, budget)).collect::<Result<Vec<f64>>>()?;
    if tv.iter().any(|&v| v <= 0.0) {
        return Err(Error::Unsatisfiable("zero distance cannot be fitted on a log scale".into()));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| eps * n as f64).collect();
    let ys: Vec<f64> = tv.iter().map(|v| v.log2()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let beta = -sxy / sxx;
    let c = xs.iter().zip(&tv).map(|(x, v)| v * 2f64.powf(beta * x)).fold(0.0, f64::max);
    Ok(ClosenessFit { k, eps, ns: ns.to_vec(), tv, c, beta })
}

/// Exact joint law of three coded variables `(q, w, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    atoms: BTreeMap<(u64, u64, u64), f64>,
}

fn parse_prob(tok: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("bad probability `{tok}`"));
    match tok.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if b == 0.0 {
                return Err(bad());
            }
            Ok(a / b)
        }
        None => tok.parse().map_err(|_| bad()),
    }
}

impl JointTable {
    /// Repeated atoms accumulate.
    pub fn new(atoms: impl IntoIterator<Item = ((u64, u64, u64), f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, p) in atoms {
            if !p.is_finite() || p < 0.0 {
                return Err(invalid(format!("bad probability {p}")));
            }
            *map.entry(k).or_insert(0.0) += p;
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("probabilities sum to {total}")));
        }
        Ok(JointTable { atoms: map })
    }

    pub fn atoms(&self) -> &BTreeMap<(u64, u64, u64), f64> {
        &self.atoms
    }

    pub fn alphabets(&self) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let mut q: Vec<u64> = self.atoms.keys().map(|k| k.0).collect();
        let mut w: Vec<u64> = self.atoms.keys().map(|k| k.1).collect();
        let mut b: Vec<u64> = self.atoms.keys().map(|k| k.2).collect();
        for v in [&mut q, &mut w, &mut b] {
            v.sort_unstable();
            v.dedup();
        }
        (q, w, b)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# q w b probability\n");
        for (&(q, w, b), p) in &self.atoms {
            writeln!(s, "{q} {w} {b} {p:e}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(Error::Parse(format!("expected `q w b probability`: `{line}`")));
            }
            let sym = |t: &str| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad symbol `{t}`")));
            atoms.push(((sym(toks[0])?, sym(toks[1])?, sym(toks[2])?), parse_prob(toks[3])?));
        }
        JointTable::new(atoms)
    }

    /// `I(B; W | Q)` in bits.
    pub fn conditional_mutual_information(&self) -> f64 {
        let mut pq: BTreeMap<u64, f64> = BTreeMap::new();
        let mut pqw: BTreeMap<(u64, u64), f64> = BTreeMap::new();
        let mut pqb: BTreeMap<(u64, u64), f64> = BTreeMap::new();
        for (&(q, w, b), &p) in &self.atoms {
            *pq.entry(q).or_default() += p;
            *pqw.entry((q, w)).or_default() += p;
            *pqb.entry((q, b)).or_default() += p;
        }
        let nats: f64 = self
            .atoms
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|(&(q, w, b), &p)| p * (p * pq[&q] / (pqw[&(q, w)] * pqb[&(q, b)])).ln())
            .sum();
        (nats / std::f64::consts::LN_2).max(0.0)
    }

    /// Success probability of a guessing rule for `B` from `(Q, W)`.
    pub fn success_of(&self, rule: impl Fn(u64, u64) -> u64) -> f64 {
        self.atoms.iter().filter(|(&(q, w, b), _)| rule(q, w) == b).map(|(_, p)| p).sum()
    }
}

/// Maximum-posterior guess of `B` for every `(q, w)`, ties to the smallest
/// symbol, with its exact success probability.
pub fn posterior_argmax_estimator(table: &JointTable) -> (BTreeMap<(u64, u64), u64>, f64) {
    let mut best: BTreeMap<(u64, u64), (u64, f64)> = BTreeMap::new();
    for (&(q, w, b), &p) in table.atoms() {
        let e = best.entry((q, w)).or_insert((b, p));
        if p > e.1 {
            *e = (b, p);
        }
    }
    let success = best.values().map(|v| v.1).sum();
    (best.into_iter().map(|(k, (b, _))| (k, b)).collect(), success)
}

fn parity_code(t: &SubsetFamily, x: &BitVector) -> Result<u64> {
    let n = t.block_size();
    let mut code = 0;
    for (i, s) in t.subsets().iter().enumerate() {
        let xb = x.gather_runs(&[(i * n, n)]);
        code |= u64::from(f2_inner_bits(&s.indicator(), &xb)?) << i;
    }
    Ok(code)
}

/// Joint law of `(Q = (Y, T), W = M, B = parities <T_i, X_i>)` where Alice's
/// message is `message(S, X)` on block indicators. Laws without a subset
/// pair give Alice an `s_noise`-noisy copy of Bob's family.
pub fn info_cost_table(
    message: &dyn Fn(&BitVector, &BitVector) -> u64,
    dist: &DistributionSpec,
    s_noise: f64,
    budget: u128,
) -> Result<JointTable> {
    let support = enumerate_support(dist, budget)?;
    let (k, n) = dist.shape();
    let len = k * n;
    if 2 * len > 64 || k > 64 {
        return Err(Error::BudgetExceeded { needed: 1 << 64, budget });
    }
    let mut atoms = Vec::new();
    for (draw, p) in support {
        let (t, x, y) = match (&draw.t, &draw.x, &draw.y) {
            (Some(t), Some(x), Some(y)) => (t, x, y),
            _ => return Err(Error::DomainMismatch("law must draw T, X and Y".into())),
        };
        let cond = y.to_u64() | t.indicator().to_u64() << len;
        let b = parity_code(t, x)?;
        match &draw.s {
            Some(s) => atoms.push(((cond, message(&s.indicator(), x), b), p)),
            None => {
                let base = t.indicator().to_u64();
                check_budget(1u128 << len, budget)?;
                for flips in 0..1u64 << len {
                    let w = flips.count_ones() as i32;
                    let ps = s_noise.powi(w) * (1.0 - s_noise).powi(len as i32 - w);
                    if ps > 0.0 {
                        let s = BitVector::from_u64(base ^ flips, len);
                        atoms.push(((cond, message(&s, x), b), p * ps));
                    }
                }
            }
        }
    }
    JointTable::new(atoms)
}

/// `I(parities; M | Y, T)` in bits, computed exactly.
pub fn intermediate_info_cost(
    message: &dyn Fn(&BitVector, &BitVector) -> u64,
    dist: &DistributionSpec,
    s_noise: f64,
    budget: u128,
) -> Result<f64> {
    Ok(info_cost_table(message, dist, s_noise, budget)?.conditional_mutual_information())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::DEFAULT_ENUMERATION_BUDGET as BUDGET;
    use crate::primitives::hamming_distance;
    use crate::rng::substream;
    use crate::verifiers::chi_square_p_value;
    use proptest::prelude::*;
    use rand::Rng;

    fn typical_families(k: usize, n: usize) -> Vec<SubsetFamily> {
        (0..1u64 << (k * n))
            .filter_map(|c| SubsetFamily::from_indicator(&BitVector::from_u64(c, k * n), k, n).ok())
            .filter(is_typical)
            .collect()
    }

    #[test]
    fn exact_evaluator_tracks_distance_of_parities() {
        // the composed value equals Sign(k - 2 dist(U, V))
        let mut rng = substream(11, 0);
        for k in 1..=2 {
            for n in 1..=4 {
                for t_hat in typical_families(k, n) {
                    for u in 0..1u64 << k {
                        for v in 0..1u64 << k {
                            let (u, v) = (BitVector::from_u64(u, k), BitVector::from_u64(v, k));
                            let out =
                                simulation_protocol(&u, &v, &t_hat, 0.25, 0.25, &ExactComposed, &mut rng).unwrap();
                            assert_eq!(out, 2 * hamming_distance(&u, &v).unwrap() <= k);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn simulation_rejects_untypical_family() {
        let t_hat = SubsetFamily::repeated(IndexSubset::new(vec![1], 4).unwrap(), 2).unwrap();
        let u = BitVector::zeros(2);
        let mut rng = substream(1, 0);
        assert!(simulation_protocol(&u, &u, &t_hat, 0.25, 0.25, &ExactComposed, &mut rng).is_err());
    }

    #[test]
    fn zero_noise_copies_the_family() {
        let t_hat = half_density_family(2, 4).unwrap();
        let u = BitVector::zeros(2);
        let mut rng = substream(2, 0);
        for _ in 0..100 {
            assert_eq!(simulation_inputs(&u, &u, &t_hat, 0.25, 0.0, &mut rng).unwrap().s, t_hat);
        }
    }

    #[test]
    fn simulated_inputs_follow_conditioned_law() {
        for (k, n) in [(1, 3), (2, 2)] {
            let t_hat = half_density_family(k, n).unwrap();
            let law = pair_law(&DistributionSpec::ConditionedNoisy { t_hat: t_hat.clone(), eps: 0.2 }, BUDGET).unwrap();
            let draws = 200_000u64;
            let mut counts = vec![0u64; law.len()];
            let mut rng = substream(3, k as u64);
            for _ in 0..draws {
                let u = BitVector::from_u64(rng.random::<u64>() & ((1 << k) - 1), k);
                let v = BitVector::from_u64(rng.random::<u64>() & ((1 << k) - 1), k);
                let inp = simulation_inputs(&u, &v, &t_hat, 0.2, 0.2, &mut rng).unwrap();
                counts[(inp.x.to_u64() | inp.y.to_u64() << (k * n)) as usize] += 1;
            }
            assert!(chi_square_p_value(&counts, law.probs()).unwrap() > 1e-3);
        }
    }

    fn random_law(len: usize, rng: &mut impl Rng) -> DiscreteLaw {
        let raw: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        DiscreteLaw::new(raw.iter().map(|p| p / total).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn tv_is_a_metric(seed: u64, len in 1usize..12) {
            let mut rng = substream(seed, 0);
            let (p, q, r) = (random_law(len, &mut rng), random_law(len, &mut rng), random_law(len, &mut rng));
            let pq = tv_distance_exact(&p, &q).unwrap();
            prop_assert!((pq - tv_distance_exact(&q, &p).unwrap()).abs() < 1e-15);
            prop_assert_eq!(tv_distance_exact(&p, &p).unwrap(), 0.0);
            prop_assert!(pq <= tv_distance_exact(&p, &r).unwrap() + tv_distance_exact(&r, &q).unwrap() + 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&pq));
        }
    }

    #[test]
    fn tv_extremes() {
        let p = DiscreteLaw::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let q = DiscreteLaw::new(vec![0.0, 0.0, 0.25, 0.75]).unwrap();
        assert_eq!(tv_distance_exact(&p, &q).unwrap(), 1.0);
        assert!(tv_distance_exact(&p, &DiscreteLaw::new(vec![1.0]).unwrap()).is_err());
    }

    #[test]
    fn closeness_decays_with_block_length() {
        let fit = closeness_fit(1, 0.25, &[4, 6, 8, 10], BUDGET).unwrap();
        assert!(fit.tv.iter().all(|&v| v > 0.0));
        assert!(fit.nonincreasing(), "{:?}", fit.tv);
        assert!(fit.beta > 0.0);
        for (i, &n) in fit.ns.iter().enumerate() {
            assert!(fit.tv[i] <= fit.bound(n) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn joint_table_text_round_trip() {
        let t = JointTable::parse("# demo\n0 0 0 1/4\n0 1 1 0.25\n1 0 1 1/2\n").unwrap();
        assert_eq!(JointTable::parse(&t.to_text()).unwrap(), t);
        assert_eq!(t.alphabets(), (vec![0, 1], vec![0, 1], vec![0, 1]));
        assert!(JointTable::parse("0 0 0 0.3\n").is_err());
        assert!(JointTable::parse("0 0 0.5\n").is_err());
        assert!(JointTable::parse("0 0 0 1/0\n").is_err());
    }

    fn uniform_table(k: u32, deterministic: bool) -> JointTable {
        let size = 1u64 << k;
        let atoms: Vec<_> = if deterministic {
            (0..size).map(|b| ((0, b, b), 1.0 / size as f64)).collect()
        } else {
            (0..size).flat_map(|w| (0..size).map(move |b| ((0, w, b), 1.0 / (size * size) as f64))).collect()
        };
        JointTable::new(atoms).unwrap()
    }

    #[test]
    fn estimator_extremes() {
        let (_, s) = posterior_argmax_estimator(&uniform_table(3, true));
        assert!((s - 1.0).abs() < 1e-12);
        assert!((uniform_table(3, true).conditional_mutual_information() - 3.0).abs() < 1e-12);
        let (_, s) = posterior_argmax_estimator(&uniform_table(3, false));
        assert!((s - 0.125).abs() < 1e-12);
        assert!(uniform_table(3, false).conditional_mutual_information().abs() < 1e-12);
    }

    fn random_table(seed: u64, k: u32) -> JointTable {
        let mut rng = substream(seed, 9);
        let mut atoms = Vec::new();
        for q in 0..2 {
            for w in 0..3 {
                for b in 0..1u64 << k {
                    atoms.push(((q, w, b), rng.random::<f64>()));
                }
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        JointTable::new(atoms.into_iter().map(|(a, p)| (a, p / total))).unwrap()
    }

    proptest! {
        #[test]
        fn estimator_beats_every_challenger(seed: u64, rule: Vec<u8>) {
            let table = random_table(seed, 2);
            let (map, s) = posterior_argmax_estimator(&table);
            prop_assert!((table.success_of(|q, w| map[&(q, w)]) - s).abs() < 1e-12);
            let challenger = |q: u64, w: u64| u64::from(rule.get((q * 3 + w) as usize).copied().unwrap_or(0) % 4);
            prop_assert!(table.success_of(challenger) <= s + 1e-12);
        }

        #[test]
        fn positive_information_beats_guessing(seed: u64) {
            // B uniform given Q keeps the blind baseline at 2^-k
            let raw = random_table(seed, 2);
            let mut atoms = Vec::new();
            for q in 0..2u64 {
                for b in 0..4u64 {
                    let pb: f64 = raw.atoms().iter().filter(|(a, _)| a.0 == q && a.2 == b).map(|(_, p)| p).sum();
                    for w in 0..3u64 {
                        let p = raw.atoms()[&(q, w, b)];
                        atoms.push(((q, w, b), p / pb * 0.125));
                    }
                }
            }
            let table = JointTable::new(atoms).unwrap();
            let (_, s) = posterior_argmax_estimator(&table);
            if table.conditional_mutual_information() > 1e-9 {
                prop_assert!(s > 0.25 + 1e-12);
            }
        }
    }

    fn parity_message(t_hat: &SubsetFamily, blocks: usize) -> impl Fn(&BitVector, &BitVector) -> u64 + '_ {
        move |s, x| {
            let (k, n) = (t_hat.block_count(), t_hat.block_size());
            let fam = SubsetFamily::from_indicator(s, k, n).unwrap();
            parity_code(&fam, x).unwrap() & ((1 << blocks) - 1)
        }
    }

    #[test]
    fn info_cost_examples() {
        let t_hat = half_density_family(2, 2).unwrap();
        let dist = DistributionSpec::ConditionedNoisy { t_hat: t_hat.clone(), eps: 0.25 };
        let zero = intermediate_info_cost(&|_, _| 0, &dist, 0.25, BUDGET).unwrap();
        assert!(zero.abs() < 1e-12);
        let all = intermediate_info_cost(&parity_message(&t_hat, 2), &dist, 0.0, BUDGET).unwrap();
        assert!((all - 2.0).abs() < 1e-9, "{all}");
        let first = intermediate_info_cost(&parity_message(&t_hat, 1), &dist, 0.0, BUDGET).unwrap();
        assert!((first - 1.0).abs() < 1e-9, "{first}");
        // Alice's noisy subsets blur the parities
        let noisy = intermediate_info_cost(&parity_message(&t_hat, 2), &dist, 0.25, BUDGET).unwrap();
        assert!(noisy > 0.0 && noisy < 2.0);
    }

    #[test]
    fn info_cost_under_noisy_subsets_is_bounded() {
        let dist = DistributionSpec::KappaEpsilon { k: 2, n: 1, eps: 0.25 };
        let t_hat = half_density_family(2, 1).unwrap();
        let v = intermediate_info_cost(&parity_message(&t_hat, 2), &dist, 0.0, BUDGET).unwrap();
        assert!(v > 0.0 && v <= 2.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn info_cost_obeys_data_processing(table in proptest::collection::vec(0u64..8, 256), post in proptest::collection::vec(0u64..3, 8)) {
            let t_hat = half_density_family(2, 2).unwrap();
            let dist = DistributionSpec::ConditionedNoisy { t_hat, eps: 0.25 };
            let m = |s: &BitVector, x: &BitVector| table[(s.to_u64() | x.to_u64() << 4) as usize];
            let base = intermediate_info_cost(&m, &dist, 0.25, BUDGET).unwrap();
            let composed = intermediate_info_cost(&|s, x| post[m(s, x) as usize], &dist, 0.25, BUDGET).unwrap();
            prop_assert!((-1e-12..=2.0 + 1e-9).contains(&base));
            prop_assert!(composed <= base + 1e-9);
        }
    }
}
