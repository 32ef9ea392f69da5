//! p-full integers and rational points on `(P¹ | (p, q, r))`.
//!
//! The orbifold has multiplicity `p` at `0`, `q` at `1` and `r` at `∞`. A
//! rational `x = a/b` (coprime, `a ≠ b`) is a non-classical orbifold point
//! when `a` is p-full, `b` is r-full and `a - b` is q-full. Classical points
//! come from coprime solutions of `α^p + β^r = γ^q`.

use std::fmt;
use std::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::curve::{CurveOrbifold, Kappa};
use crate::error::{Error, Result};
use crate::multiplicity::Multiplicity;

/// Above this limit [`enumerate_p_full`] generates instead of filtering.
pub const GENERATION_THRESHOLD: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrbifoldP1Triple {
    p: u32,
    q: u32,
    r: u32,
}

impl OrbifoldP1Triple {
    pub fn new(p: u32, q: u32, r: u32) -> Result<Self> {
        if p < 2 || q < 2 || r < 2 {
            return Err(Error::InvalidInput(format!(
                "multiplicities must be at least 2, got ({p},{q},{r})"
            )));
        }
        Ok(OrbifoldP1Triple { p, q, r })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// The curve orbifold with marks `0`, `1`, `inf`.
    pub fn curve(&self) -> CurveOrbifold {
        crate::curve::genus_zero([
            ("0".to_string(), Multiplicity::integer(self.p.into()).expect("p >= 2")),
            ("1".to_string(), Multiplicity::integer(self.q.into()).expect("q >= 2")),
            ("inf".to_string(), Multiplicity::integer(self.r.into()).expect("r >= 2")),
        ])
    }
}

impl fmt::Display for OrbifoldP1Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

pub fn is_general_type_triple(t: &OrbifoldP1Triple) -> bool {
    t.curve().kappa() == Kappa::One
}

/// Whether the point is tested against `a - b` or `a + b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Sign {
    #[default]
    Minus,
    Plus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(Sign::Minus),
            "plus" => Ok(Sign::Plus),
            other => Err(Error::InvalidInput(format!("unknown sign {other:?}"))),
        }
    }
}

/// `x = a/b` in lowest terms with `a, b ≥ 1` and `a ≠ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    a: BigUint,
    b: BigUint,
}

impl RationalPoint {
    pub fn new(a: BigUint, b: BigUint) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidInput("a and b must be positive".into()));
        }
        if a == b {
            return Err(Error::InvalidInput("x = 1 is excluded".into()));
        }
        if !a.gcd(&b).is_one() {
            return Err(Error::InvalidInput(format!("{a}/{b} is not in lowest terms")));
        }
        Ok(RationalPoint { a, b })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    /// `a - b` or `a + b`.
    pub fn c(&self, sign: Sign) -> BigInt {
        let (a, b) = (BigInt::from(self.a.clone()), BigInt::from(self.b.clone()));
        match sign {
            Sign::Minus => a - b,
            Sign::Plus => a + b,
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

/// `α^p + β^r = γ^q` with `gcd(α, β) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassicalWitness {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
}

impl ClassicalWitness {
    pub fn new(t: &OrbifoldP1Triple, alpha: BigInt, beta: BigInt, gamma: BigInt) -> Result<Self> {
        if !alpha.gcd(&beta).is_one() {
            return Err(Error::InvalidInput(format!("gcd({alpha}, {beta}) != 1")));
        }
        let w = ClassicalWitness { alpha, beta, gamma };
        if !w.holds(t) {
            return Err(Error::InvalidInput(format!(
                "{}^{} + {}^{} != {}^{}",
                w.alpha, t.p, w.beta, t.r, w.gamma, t.q
            )));
        }
        Ok(w)
    }

    pub fn holds(&self, t: &OrbifoldP1Triple) -> bool {
        self.alpha.pow(t.p) + self.beta.pow(t.r) == self.gamma.pow(t.q)
    }

    /// The non-classical point `α^p / β^r`, if `α, β > 0`.
    pub fn point(&self, t: &OrbifoldP1Triple) -> Option<RationalPoint> {
        if !self.alpha.is_positive() || !self.beta.is_positive() {
            return None;
        }
        let a = self.alpha.magnitude().pow(t.p);
        let b = self.beta.magnitude().pow(t.r);
        RationalPoint::new(a, b).ok()
    }
}

/// Prime factorization by trial division, ascending.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_p_full_u64(n: u64, p: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidInput("0 has no p-full status".into()));
    }
    check_p(p)?;
    let mut m = n;
    let bound = n.nth_root(p + 1);
    let mut d = 2u64;
    while d <= bound && m > 1 {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            if e < p {
                return Ok(false);
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    Ok(m == 1 || m.nth_root(p).checked_pow(p) == Some(m))
}

/// Every prime dividing `n` divides it at least `p` times.
///
/// Primes up to `|n|^(1/(p+1))` are removed by trial division; any cofactor
/// left over is p-full exactly when it is a perfect p-th power.
///
/// Trial division costs about `|n|^(1/(p+1))` steps, so inputs of
/// 30 or more digits with `p = 2` are slow.
pub fn is_p_full(n: &BigInt, p: u32) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::InvalidInput("0 has no p-full status".into()));
    }
    check_p(p)?;
    if let Some(small) = n.magnitude().to_u64() {
        return is_p_full_u64(small, p);
    }
    let mut m = n.magnitude().clone();
    let bound = m.nth_root(p + 1);
    let mut d = BigUint::from(2u32);
    while d <= bound && !m.is_one() {
        if (&m % &d).is_zero() {
            let mut e = 0;
            while (&m % &d).is_zero() {
                m /= &d;
                e += 1;
            }
            if e < p {
                return Ok(false);
            }
        }
        d += if d == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    Ok(m.is_one() || exact_root(&m, p).is_some())
}

/// `y` with `y^k = n`, if it exists.
pub fn exact_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let y = n.nth_root(k);
    (y.pow(k) == *n).then_some(y)
}

fn check_p(p: u32) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidInput("p must be positive".into()));
    }
    Ok(())
}

/// p-full integers in `[1, limit]`, ascending, starting with `1`.
pub fn enumerate_p_full(limit: u64, p: u32) -> Result<Vec<u64>> {
    if limit > GENERATION_THRESHOLD {
        enumerate_p_full_generated(limit, p)
    } else {
        enumerate_p_full_filtered(limit, p)
    }
}

/// Sieves smallest prime factors and tests every integer up to `limit`.
pub fn enumerate_p_full_filtered(limit: u64, p: u32) -> Result<Vec<u64>> {
    check_p(p)?;
    let n = usize::try_from(limit)
        .map_err(|_| Error::InvalidInput(format!("limit {limit} too large to sieve")))?;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut out = Vec::new();
    for i in 1..=n {
        let mut x = i;
        let mut full = true;
        while x > 1 {
            let q = spf[x] as usize;
            let mut e = 0;
            while x % q == 0 {
                x /= q;
                e += 1;
            }
            if e < p {
                full = false;
                break;
            }
        }
        if full {
            out.push(i as u64);
        }
    }
    Ok(out)
}

/// Builds products of prime powers `ℓ^e` with `e ≥ p` up to `limit`.
pub fn enumerate_p_full_generated(limit: u64, p: u32) -> Result<Vec<u64>> {
    check_p(p)?;
    if limit == 0 {
        return Ok(Vec::new());
    }
    let max_prime = limit.nth_root(p);
    let primes = primes_up_to(max_prime);
    let mut out = Vec::new();
    extend_products(&primes, 0, 1, limit, p, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn extend_products(primes: &[u64], from: usize, acc: u64, limit: u64, p: u32, out: &mut Vec<u64>) {
    out.push(acc);
    for (i, &ell) in primes.iter().enumerate().skip(from) {
        let Some(mut power) = ell.checked_pow(p).and_then(|x| x.checked_mul(acc)) else {
            break;
        };
        if power > limit {
            break;
        }
        while power <= limit {
            extend_products(primes, i + 1, power, limit, p, out);
            match power.checked_mul(ell) {
                Some(next) => power = next,
                None => break,
            }
        }
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub limit: u64,
    pub p: u32,
    pub count: u64,
    /// `count / limit^(1/p)`
    pub ratio: f64,
    /// Least-squares slope of `log count` against `log X` over the checkpoints.
    pub slope: f64,
    /// `(X, count up to X)` for `X = limit / 2^k`, ascending in `X`.
    pub checkpoints: Vec<(u64, u64)>,
}

/// Number of dyadic checkpoints `limit / 2^k`, `k = 0..DENSITY_CHECKPOINTS`.
pub const DENSITY_CHECKPOINTS: u32 = 11;

pub fn density_report(limit: u64, p: u32) -> Result<DensityReport> {
    if limit < 1000 {
        return Err(Error::InvalidInput(format!("density needs limit >= 1000, got {limit}")));
    }
    let values = enumerate_p_full(limit, p)?;
    let mut checkpoints: Vec<(u64, u64)> = (0..DENSITY_CHECKPOINTS)
        .map(|k| limit >> k)
        .filter(|&x| x >= 1)
        .map(|x| (x, values.partition_point(|&v| v <= x) as u64))
        .collect();
    checkpoints.reverse();
    checkpoints.dedup();
    let pts: Vec<(f64, f64)> = checkpoints
        .iter()
        .map(|&(x, c)| ((x as f64).ln(), (c as f64).ln()))
        .collect();
    let count = values.len() as u64;
    Ok(DensityReport {
        limit,
        p,
        count,
        ratio: count as f64 / (limit as f64).powf(1.0 / f64::from(p)),
        slope: least_squares_slope(&pts),
        checkpoints,
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn check_bounds(bounds: &[u64]) -> Result<()> {
    if bounds.contains(&0) {
        return Err(Error::InvalidInput("search bounds must be at least 1".into()));
    }
    Ok(())
}

/// All non-classical points with `a ≤ max_a`, `b ≤ max_b`, ordered by `(b, a)`.
pub fn search_points(
    t: &OrbifoldP1Triple,
    max_a: u64,
    max_b: u64,
    sign: Sign,
) -> Result<Vec<RationalPoint>> {
    check_bounds(&[max_a, max_b])?;
    search_points_in(t, max_a, 1..max_b + 1, sign)
}

/// The part of [`search_points`] with `b` in the given range.
pub fn search_points_in(
    t: &OrbifoldP1Triple,
    max_a: u64,
    b_range: Range<u64>,
    sign: Sign,
) -> Result<Vec<RationalPoint>> {
    check_bounds(&[max_a])?;
    let b_end = b_range.end.saturating_sub(1);
    if b_range.is_empty() {
        return Ok(Vec::new());
    }
    let a_values = enumerate_p_full(max_a, t.p)?;
    let b_values = enumerate_p_full(b_end, t.r)?;
    let mut out = Vec::new();
    for &b in b_values.iter().filter(|&&b| b >= b_range.start) {
        for &a in &a_values {
            if a == b || a.gcd(&b) != 1 {
                continue;
            }
            let c = match sign {
                Sign::Minus => a.abs_diff(b),
                Sign::Plus => a + b,
            };
            if is_p_full_u64(c, t.q)? {
                out.push(RationalPoint { a: a.into(), b: b.into() });
            }
        }
    }
    Ok(out)
}

/// Splits `[1, max_b]` into `shards` contiguous ranges, searches them in
/// parallel, and merges the results into `(b, a)` order.
pub fn search_points_sharded(
    t: &OrbifoldP1Triple,
    max_a: u64,
    max_b: u64,
    sign: Sign,
    shards: u32,
) -> Result<Vec<RationalPoint>> {
    check_bounds(&[max_a, max_b, shards.into()])?;
    let ranges = split_range(1..max_b + 1, shards);
    let parts: Vec<Vec<RationalPoint>> = ranges
        .into_par_iter()
        .map(|r| search_points_in(t, max_a, r, sign))
        .collect::<Result<_>>()?;
    Ok(merge_points(parts))
}

/// Concatenates shard outputs and restores `(b, a)` order.
pub fn merge_points(parts: Vec<Vec<RationalPoint>>) -> Vec<RationalPoint> {
    let mut all: Vec<RationalPoint> = parts.into_iter().flatten().collect();
    all.sort_by(|x, y| (&x.b, &x.a).cmp(&(&y.b, &y.a)));
    all.dedup();
    all
}

/// `shards` contiguous, disjoint ranges covering `range`.
pub fn split_range(range: Range<u64>, shards: u32) -> Vec<Range<u64>> {
    let len = range.end.saturating_sub(range.start);
    let shards = u64::from(shards.max(1));
    (0..shards)
        .map(|i| range.start + len * i / shards..range.start + len * (i + 1) / shards)
        .collect()
}

/// Coprime `1 ≤ α ≤ max_alpha`, `1 ≤ β ≤ max_beta` with `α^p + β^r` a q-th power.
pub fn search_classical(
    t: &OrbifoldP1Triple,
    max_alpha: u64,
    max_beta: u64,
) -> Result<Vec<ClassicalWitness>> {
    check_bounds(&[max_alpha, max_beta])?;
    let rows: Vec<Vec<ClassicalWitness>> = (1..=max_alpha)
        .into_par_iter()
        .map(|alpha| {
            let ap = BigUint::from(alpha).pow(t.p);
            (1..=max_beta)
                .filter(|beta| alpha.gcd(beta) == 1)
                .filter_map(|beta| {
                    let sum = &ap + BigUint::from(beta).pow(t.r);
                    exact_root(&sum, t.q).map(|gamma| ClassicalWitness {
                        alpha: alpha.into(),
                        beta: beta.into(),
                        gamma: gamma.into(),
                    })
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(p: u32, q: u32, r: u32) -> OrbifoldP1Triple {
        OrbifoldP1Triple::new(p, q, r).unwrap()
    }

    fn pt(a: u64, b: u64) -> RationalPoint {
        RationalPoint::new(a.into(), b.into()).unwrap()
    }

    #[test]
    fn p_full_examples() {
        assert!(is_p_full(&BigInt::from(8), 3).unwrap());
        assert!(!is_p_full(&BigInt::from(12), 2).unwrap());
        assert!(is_p_full(&BigInt::from(72), 2).unwrap());
        assert!(is_p_full(&BigInt::from(-72), 2).unwrap());
        assert!(is_p_full(&BigInt::one(), 7).unwrap());
        assert!(is_p_full(&BigInt::zero(), 2).is_err());
    }

    #[test]
    fn big_p_full() {
        let big_prime = BigInt::from(1_000_000_007u64);
        let sq = &big_prime * &big_prime * BigInt::from(8);
        assert!(is_p_full(&sq, 2).unwrap());
        assert!(!is_p_full(&sq, 3).unwrap());
        assert!(!is_p_full(&(&sq * BigInt::from(5)), 2).unwrap());
        // Beyond u64: the trial bound for 10007^3 * 10009^3 * 2^30 stays below 2^17.
        let n = BigInt::from(10_007u64).pow(3) * BigInt::from(10_009u64).pow(3) * BigInt::from(2).pow(30);
        assert!(n.magnitude().to_u64().is_none());
        assert!(is_p_full(&n, 3).unwrap());
        assert!(!is_p_full(&n, 4).unwrap());
        assert!(!is_p_full(&(&n * BigInt::from(3)), 2).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_p_full(100, 2).unwrap(),
            vec![1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72, 81, 100]
        );
        assert_eq!(enumerate_p_full(7, 3).unwrap(), vec![1]);
        assert_eq!(enumerate_p_full(1, 5).unwrap(), vec![1]);
        assert_eq!(enumerate_p_full_generated(100, 2).unwrap(), enumerate_p_full_filtered(100, 2).unwrap());
    }

    #[test]
    fn density_small() {
        let r = density_report(1000, 2).unwrap();
        assert_eq!(r.count, enumerate_p_full(1000, 2).unwrap().len() as u64);
        assert_eq!(r.checkpoints.last().unwrap(), &(1000, r.count));
        assert!(density_report(999, 2).is_err());
    }

    #[test]
    fn search_examples() {
        let hits = search_points(&triple(2, 7, 3), 100, 100, Sign::Minus).unwrap();
        assert!(hits.contains(&pt(9, 8)));
        let hits = search_points(&triple(2, 3, 7), 100, 100, Sign::Minus).unwrap();
        assert!(hits.contains(&pt(9, 1)));
        assert!(hits.windows(2).all(|w| (&w[0].b, &w[0].a) < (&w[1].b, &w[1].a)));
        assert!(search_points(&triple(2, 3, 7), 0, 5, Sign::Minus).is_err());
    }

    #[test]
    fn tiny_grid() {
        // a ∈ {1}, b ∈ {1}: only a = b, which is excluded.
        assert!(search_points(&triple(2, 3, 7), 3, 3, Sign::Minus).unwrap().is_empty());
        assert_eq!(search_points(&triple(2, 2, 2), 4, 1, Sign::Minus).unwrap(), vec![]);
        assert_eq!(search_points(&triple(2, 2, 2), 9, 1, Sign::Plus).unwrap(), vec![pt(8, 1)]);
        assert_eq!(search_points(&triple(2, 3, 2), 9, 1, Sign::Minus).unwrap(), vec![pt(9, 1)]);
    }

    #[test]
    fn classical_examples() {
        let t = triple(3, 2, 3);
        let ws = search_classical(&t, 10, 10).unwrap();
        assert!(ws.iter().any(|w| w.alpha == 1.into() && w.beta == 2.into() && w.gamma == 3.into()));
        assert!(ws.iter().all(|w| w.holds(&t)));
        assert!(search_classical(&t, 1, 0).is_err());
        assert!(search_classical(&triple(2, 3, 7), 3, 3).unwrap().is_empty());
        assert!(ClassicalWitness::new(&t, 1.into(), 2.into(), 4.into()).is_err());
        assert!(ClassicalWitness::new(&t, 2.into(), 4.into(), 24.into()).is_err());
    }

    #[test]
    fn general_type_triples() {
        assert!(is_general_type_triple(&triple(2, 3, 7)));
        assert!(!is_general_type_triple(&triple(2, 3, 5)));
        assert!(!is_general_type_triple(&triple(2, 3, 6)));
        assert!(OrbifoldP1Triple::new(1, 3, 7).is_err());
    }

    #[test]
    fn split_range_covers() {
        let rs = split_range(1..101, 4);
        assert_eq!(rs.len(), 4);
        assert_eq!(rs[0].start, 1);
        assert_eq!(rs[3].end, 101);
        assert!(rs.windows(2).all(|w| w[0].end == w[1].start));
    }

    #[test]
    fn point_validation() {
        assert!(RationalPoint::new(2u32.into(), 4u32.into()).is_err());
        assert!(RationalPoint::new(3u32.into(), 3u32.into()).is_err());
        assert!(RationalPoint::new(0u32.into(), 1u32.into()).is_err());
        assert_eq!(pt(9, 8).c(Sign::Minus), BigInt::one());
        assert_eq!(pt(9, 8).c(Sign::Plus), BigInt::from(17));
    }
}
