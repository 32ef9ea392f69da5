//! Exponent combinatorics of orbifold symmetric differentials.
//!
//! In adapted coordinates `z_1..z_p`, a multi-index `(J) = (J_1, ..., J_N)`
//! of `q`-subsets of `{1..p}` has occupancy `k_j = #{ℓ : j ∈ J_ℓ}`. The local
//! generator attached to `(J)` carries the factor `z_j^⌈k_j/m_j⌉`, and the
//! exponent left over is `⌊k_j (1 - 1/m_j)⌋`. Only these integers are
//! computed here; no sheaf is ever built.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multiplicity::{ceil, floor, Multiplicity};

/// `N` subsets of `{1..p}` of cardinality `q`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndexJ {
    p: u32,
    q: u32,
    subsets: Vec<Vec<u32>>,
}

impl MultiIndexJ {
    pub fn new(p: u32, q: u32, subsets: Vec<Vec<u32>>) -> Result<Self> {
        if q == 0 || q > p {
            return Err(Error::InvalidInput(format!("need 1 <= q <= p, got p={p} q={q}")));
        }
        let mut subsets: Vec<Vec<u32>> = subsets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        for s in &subsets {
            let distinct = s.windows(2).all(|w| w[0] < w[1]);
            if s.len() != q as usize || !distinct || s.iter().any(|&j| j == 0 || j > p) {
                return Err(Error::InvalidInput(format!(
                    "{s:?} is not a {q}-subset of 1..={p}"
                )));
            }
        }
        subsets.sort();
        Ok(MultiIndexJ { p, q, subsets })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.subsets.len()
    }

    pub fn subsets(&self) -> &[Vec<u32>] {
        &self.subsets
    }

    pub fn occupancy(&self) -> Vec<u64> {
        let mut k = vec![0u64; self.p as usize];
        for s in &self.subsets {
            for &j in s {
                k[j as usize - 1] += 1;
            }
        }
        k
    }
}

pub fn occupancy(j: &MultiIndexJ) -> Vec<u64> {
    j.occupancy()
}

/// `⌊k (1 - 1/m)⌋`
pub fn floor_exponent(k: u64, m: &Multiplicity) -> BigInt {
    let small = m
        .finite_value()
        .filter(|v| v.is_integer())
        .and_then(|v| v.numer().to_u64());
    match small {
        Some(mi) => BigInt::from(u128::from(k) * u128::from(mi - 1) / u128::from(mi)),
        None => floor(&(m.coefficient() * BigInt::from(k))),
    }
}

/// `⌈k / m⌉`, with `⌈k/∞⌉ = 0`.
pub fn ceil_exponent(k: u64, m: &Multiplicity) -> BigInt {
    match m.finite_value() {
        Some(v) => ceil(&(BigRational::from_integer(k.into()) / v)),
        None => BigInt::zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentProfile {
    pub occupancy: Vec<u64>,
    pub ceil_exp: Vec<BigInt>,
    pub floor_exp: Vec<BigInt>,
    /// `floor_exp_j == k_j - ceil_exp_j` for every `j`; `None` unless all
    /// multiplicities are integral.
    pub identity_holds: Option<bool>,
}

pub fn generator_exponents(k: &[u64], mults: &[Multiplicity]) -> Result<ExponentProfile> {
    if k.len() != mults.len() {
        return Err(Error::InvalidInput(format!(
            "{} occupancies but {} multiplicities",
            k.len(),
            mults.len()
        )));
    }
    let ceil_exp: Vec<BigInt> = k.iter().zip(mults).map(|(&kj, m)| ceil_exponent(kj, m)).collect();
    let floor_exp: Vec<BigInt> = k.iter().zip(mults).map(|(&kj, m)| floor_exponent(kj, m)).collect();
    let identity_holds = mults.iter().all(Multiplicity::is_integral).then(|| {
        k.iter()
            .zip(&ceil_exp)
            .zip(&floor_exp)
            .all(|((&kj, c), f)| *f == BigInt::from(kj) - c)
    });
    Ok(ExponentProfile { occupancy: k.to_vec(), ceil_exp, floor_exp, identity_holds })
}

/// Bounds on exhaustive enumeration; exceeding them is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_multi_indices: u128,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_multi_indices: 20_000_000 }
    }
}

/// `⌈p / (q (1 - 1/m))⌉` with `m = min_j m_j`.
pub fn positive_floor_threshold(p: u32, q: u32, mults: &[Multiplicity]) -> Result<u64> {
    let m = mults
        .iter()
        .min()
        .ok_or_else(|| Error::InvalidInput("no multiplicities".into()))?;
    if m.is_one() {
        return Err(Error::InvalidInput("all multiplicities must exceed 1".into()));
    }
    let bound = BigRational::from_integer(p.into())
        / (BigRational::from_integer(q.into()) * m.coefficient());
    Ok(ceil(&bound).try_into().expect("threshold fits in u64"))
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn q_subsets(p: u32, q: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (1..=q).collect();
    loop {
        out.push(cur.clone());
        let mut i = q as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < p - (q - 1 - i as u32) {
                cur[i] += 1;
                for j in i + 1..q as usize {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveFloorReport {
    pub p: u32,
    pub q: u32,
    pub mults: Vec<Multiplicity>,
    pub threshold: u64,
    pub n_values: Vec<u64>,
    pub multi_indices: u128,
    pub counterexamples: Vec<MultiIndexJ>,
}

impl PositiveFloorReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Enumerates every multi-index with `N` from the threshold up to
/// `threshold + extra` and collects those where no `⌊k_j (1 - 1/m_j)⌋` is positive.
pub fn check_positive_floor(
    p: u32,
    q: u32,
    mults: &[Multiplicity],
    extra: u32,
    limits: EnumerationLimits,
) -> Result<PositiveFloorReport> {
    if q == 0 || q > p {
        return Err(Error::InvalidInput(format!("need 1 <= q <= p, got p={p} q={q}")));
    }
    if mults.len() != p as usize {
        return Err(Error::InvalidInput(format!("expected {p} multiplicities, got {}", mults.len())));
    }
    if mults.iter().any(Multiplicity::is_one) {
        return Err(Error::InvalidInput("all multiplicities must exceed 1".into()));
    }
    let threshold = positive_floor_threshold(p, q, mults)?;
    let subsets = q_subsets(p, q);
    let n_values: Vec<u64> = (threshold..=threshold + u64::from(extra)).collect();
    let needed: u128 = n_values
        .iter()
        .map(|&n| binomial(subsets.len() as u128 + n as u128 - 1, n as u128))
        .sum();
    if needed > limits.max_multi_indices {
        return Err(Error::LimitExceeded { needed, limit: limits.max_multi_indices });
    }

    let mut counterexamples = Vec::new();
    for &n in &n_values {
        counterexamples.extend(zero_floor_multi_indices(p, q, mults, n)?);
    }
    Ok(PositiveFloorReport {
        p,
        q,
        mults: mults.to_vec(),
        threshold,
        n_values,
        multi_indices: needed,
        counterexamples,
    })
}

/// Every multi-index of length `n` for which all `⌊k_j (1 - 1/m_j)⌋` vanish.
/// The search is sharded by the first subset and merged in shard order.
pub fn zero_floor_multi_indices(
    p: u32,
    q: u32,
    mults: &[Multiplicity],
    n: u64,
) -> Result<Vec<MultiIndexJ>> {
    if q == 0 || q > p || mults.len() != p as usize || n == 0 {
        return Err(Error::InvalidInput(format!(
            "need 1 <= q <= p, p multiplicities and n >= 1 (p={p} q={q} n={n})"
        )));
    }
    let subsets = q_subsets(p, q);
    let shards: Vec<Vec<Vec<usize>>> = (0..subsets.len())
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            let mut path = vec![first];
            let mut k = vec![0u64; p as usize];
            for &j in &subsets[first] {
                k[j as usize - 1] += 1;
            }
            search(&subsets, mults, n as usize, &mut path, &mut k, &mut found);
            found
        })
        .collect();
    shards
        .into_iter()
        .flatten()
        .map(|path| MultiIndexJ::new(p, q, path.iter().map(|&i| subsets[i].clone()).collect()))
        .collect()
}

fn search(
    subsets: &[Vec<u32>],
    mults: &[Multiplicity],
    n: usize,
    path: &mut Vec<usize>,
    k: &mut [u64],
    found: &mut Vec<Vec<usize>>,
) {
    if path.len() == n {
        let positive = k
            .iter()
            .zip(mults)
            .any(|(&kj, m)| floor_exponent(kj, m) > BigInt::zero());
        if !positive {
            found.push(path.clone());
        }
        return;
    }
    let last = *path.last().unwrap();
    for next in last..subsets.len() {
        for &j in &subsets[next] {
            k[j as usize - 1] += 1;
        }
        path.push(next);
        search(subsets, mults, n, path, k, found);
        path.pop();
        for &j in &subsets[next] {
            k[j as usize - 1] -= 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeExponent {
    /// `⌊k_j c⌋ - Σ_{r≥1} ⌊k_j(r) c⌋` with `c = 1 - 1/m`.
    pub value: BigInt,
    /// `⌊k_j(0) c⌋`
    pub lower: BigInt,
    /// `q + ⌊k_j(0) c⌋`
    pub upper: BigInt,
}

impl RelativeExponent {
    pub fn within_bounds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }
}

/// Exponent of `z_j` in the relative generator for the splitting
/// `k_j = k_j(0) + k_j(1) + ... + k_j(q)`.
pub fn relative_exponent(
    kj: u64,
    decomposition: &[u64],
    m: &Multiplicity,
    q: u32,
) -> Result<RelativeExponent> {
    if decomposition.len() != q as usize + 1 {
        return Err(Error::InvalidInput(format!(
            "decomposition has {} parts, expected q + 1 = {}",
            decomposition.len(),
            q + 1
        )));
    }
    let total: u64 = decomposition.iter().sum();
    if total != kj {
        return Err(Error::InvalidInput(format!(
            "decomposition sums to {total}, expected {kj}"
        )));
    }
    let value = decomposition[1..]
        .iter()
        .fold(floor_exponent(kj, m), |acc, &part| acc - floor_exponent(part, m));
    let lower = floor_exponent(decomposition[0], m);
    let upper = &lower + BigInt::from(q);
    Ok(RelativeExponent { value, lower, upper })
}

/// `⌊Σ x_r⌋ - Σ ⌊x_r⌋`
pub fn floor_sum_defect(xs: &[BigRational]) -> BigInt {
    let sum: BigRational = xs.iter().sum();
    xs.iter().fold(floor(&sum), |acc, x| acc - floor(x))
}

/// `(k, m)` pairs with `0 ≤ k ≤ max_k`, `1 ≤ m ≤ max_m` violating
/// `⌊k (1 - 1/m)⌋ = k - ⌈k/m⌉`.
pub fn sweep_floor_ceil_identity(max_k: u64, max_m: u64) -> Vec<(u64, u64)> {
    let mut failures = Vec::new();
    for m in 1..=max_m {
        let mult = Multiplicity::integer(m).expect("m >= 1");
        for k in 0..=max_k {
            if floor_exponent(k, &mult) != BigInt::from(k) - ceil_exponent(k, &mult) {
                failures.push((k, m));
            }
        }
    }
    failures
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub configurations: u64,
    pub cases: u128,
    pub violations: Vec<String>,
}

/// Runs [`check_positive_floor`] for every `p ≤ max_p`, `q ≤ p`, and every
/// assignment of multiplicities from `choices`.
pub fn sweep_positive_floor(
    max_p: u32,
    choices: &[u64],
    extra: u32,
    limits: EnumerationLimits,
) -> Result<SweepReport> {
    let mut report = SweepReport::default();
    for p in 1..=max_p {
        let assignments = cartesian(choices, p as usize);
        for q in 1..=p {
            for ms in &assignments {
                let mults: Vec<Multiplicity> =
                    ms.iter().map(|&m| Multiplicity::integer(m)).collect::<Result<_>>()?;
                let r = check_positive_floor(p, q, &mults, extra, limits)?;
                report.configurations += 1;
                report.cases += r.multi_indices;
                for c in r.counterexamples {
                    report
                        .violations
                        .push(format!("p={p} q={q} m={ms:?} J={:?}", c.subsets()));
                }
            }
        }
    }
    Ok(report)
}

fn cartesian(choices: &[u64], len: usize) -> Vec<Vec<u64>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect()
    })
}

/// Every decomposition of every `k_j ≤ max_kj` into `q + 1` parts, `q ≤ max_q`,
/// integral `m ≤ max_m`, checked against the two-sided bound.
pub fn sweep_relative_bounds(max_kj: u64, max_q: u32, max_m: u64) -> Result<SweepReport> {
    let jobs: Vec<(u64, u32, u64)> = (0..=max_kj)
        .flat_map(|kj| (1..=max_q).flat_map(move |q| (1..=max_m).map(move |m| (kj, q, m))))
        .collect();
    let results: Vec<(u128, Vec<String>)> = jobs
        .par_iter()
        .map(|&(kj, q, m)| {
            let mult = Multiplicity::integer(m).expect("m >= 1");
            let mut cases = 0u128;
            let mut bad = Vec::new();
            for parts in compositions(kj, q as usize + 1) {
                cases += 1;
                match relative_exponent(kj, &parts, &mult, q) {
                    Ok(r) if r.within_bounds() => {}
                    Ok(r) => bad.push(format!(
                        "kj={kj} m={m} parts={parts:?}: {} not in [{}, {}]",
                        r.value, r.lower, r.upper
                    )),
                    Err(e) => bad.push(format!("kj={kj} m={m} parts={parts:?}: {e}")),
                }
            }
            (cases, bad)
        })
        .collect();
    let mut report = SweepReport { configurations: jobs.len() as u64, ..Default::default() };
    for (cases, bad) in results {
        report.cases += cases;
        report.violations.extend(bad);
    }
    Ok(report)
}

/// All ordered ways to write `total` as a sum of `parts` nonnegative integers.
pub fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
