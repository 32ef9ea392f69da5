//! Irreducible factorization over `Q` (Zassenhaus: factor modulo a prime,
//! Hensel-lift, recombine).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::intpoly::{squarefree_decomposition, IntPoly};
use super::modp::{self, Field};

/// `f = content · Π factor^exp`, factors primitive with positive leading
/// coefficient, irreducible over `Q`, sorted by `(degree, coefficients)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigRational,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Vec<BigRational> {
        let prod = self
            .factors
            .iter()
            .fold(IntPoly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)));
        prod.coeffs()
            .iter()
            .map(|c| &self.content * BigRational::from_integer(c.clone()))
            .collect()
    }
}

/// Factors a nonzero integer polynomial over `Q`.
pub fn factor(f: &IntPoly) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let prim = f.primitive_part();
    let content = BigRational::from_integer(f.lc()) / BigRational::from_integer(prim.lc());
    let mut factors = Vec::new();
    for (part, e) in squarefree_decomposition(&prim) {
        for g in factor_squarefree(&part) {
            factors.push((g, e));
        }
    }
    factors.sort_by(|(a, _), (b, _)| (a.deg(), a).cmp(&(b.deg(), b)));
    Factorization { content, factors }
}

/// Irreducible factors of a primitive squarefree polynomial of positive degree.
pub fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive_part();
    let n = f.deg();
    if n <= 1 {
        return vec![f];
    }
    // x divides f at most once; splitting it off keeps the constant term nonzero.
    if f.coeffs()[0].is_zero() {
        let x = IntPoly::from_i64s(&[0, 1]);
        let mut out = vec![x.clone()];
        out.extend(factor_squarefree(&f.div_exact(&x).expect("x divides f")));
        return out;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (field, modular) = choose_prime(&f, &mut rng);
    if modular.len() == 1 {
        return vec![f];
    }

    let p = BigInt::from(field.p);
    let bound = coefficient_bound(&f);
    let mut k = 1u32;
    let mut modulus = p.clone();
    while modulus <= &bound * 2 {
        modulus *= &p;
        k += 1;
    }

    let lc_inv = mod_inverse(&f.lc(), &modulus);
    let monic: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * &lc_inv).mod_floor(&modulus))
        .collect();
    let lifted = lift_all(&field, &monic, &modular, k);
    recombine(f, lifted, &modulus)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| {
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}

fn reduce(f: &IntPoly, field: &Field) -> modp::Poly {
    let p = BigInt::from(field.p);
    field.trim(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&p).to_u64().unwrap())
            .collect(),
    )
}

/// Picks, among a handful of good primes, the one giving the fewest modular factors.
fn choose_prime(f: &IntPoly, rng: &mut ChaCha8Rng) -> (Field, Vec<modp::Poly>) {
    let mut best: Option<(Field, Vec<modp::Poly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        let field = Field::new(p);
        if (f.lc() % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce(f, &field);
        if !field.is_squarefree(&fp) {
            continue;
        }
        let factors = field.factor_squarefree(&fp, rng);
        let better = best.as_ref().is_none_or(|(_, b)| factors.len() < b.len());
        if better {
            best = Some((field, factors));
        }
        tried += 1;
        if tried == 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.expect("some prime keeps f squarefree")
}

/// Bound on the coefficients of `lc(f) · g / lc(g)` for any factor `g` of `f`.
fn coefficient_bound(f: &IntPoly) -> BigInt {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + BigInt::one();
    (BigInt::one() << f.deg()) * norm * f.lc().abs()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient not invertible");
    e.x.mod_floor(m)
}

fn to_big(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn big_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.iter().map(|c| c.mod_floor(m)).collect()
}

fn big_add_shifted(a: &[BigInt], delta: &[u64], scale: &BigInt, m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(delta.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let d = delta.get(i).copied().unwrap_or(0);
            (x + scale * BigInt::from(d)).mod_floor(m)
        })
        .collect()
}

/// Lifts `F ≡ g·h (mod p)` to `F ≡ G·H (mod p^k)` with `G`, `H` monic.
fn lift_pair(
    field: &Field,
    target: &[BigInt],
    g0: &modp::Poly,
    h0: &modp::Poly,
    k: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = BigInt::from(field.p);
    let modulus = p.pow(k);
    let (one, s, t) = field.ext_gcd(g0, h0);
    debug_assert_eq!(one, vec![1]);
    let mut g = to_big(g0);
    let mut h = to_big(h0);
    let mut pj = p.clone();
    for _ in 1..k {
        let gh = big_mul(&g, &h, &modulus);
        let err: Vec<u64> = (0..target.len())
            .map(|i| {
                let diff = (&target[i] - gh.get(i).cloned().unwrap_or_default()).mod_floor(&modulus);
                debug_assert!((&diff % &pj).is_zero());
                (diff / &pj).mod_floor(&p).to_u64().unwrap()
            })
            .collect();
        let err = field.trim(err);
        let (q, dh) = field.divrem(&field.mul(&s, &err), h0);
        let dg = field.add(&field.mul(&t, &err), &field.mul(&q, g0));
        g = big_add_shifted(&g, &dg, &pj, &modulus);
        h = big_add_shifted(&h, &dh, &pj, &modulus);
        pj *= &p;
    }
    (g, h)
}

fn lift_all(field: &Field, target: &[BigInt], factors: &[modp::Poly], k: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![target.to_vec()];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let prod = |fs: &[modp::Poly]| fs.iter().fold(vec![1u64], |acc, f| field.mul(&acc, f));
    let (g, h) = lift_pair(field, target, &prod(left), &prod(right), k);
    let mut out = lift_all(field, &g, left, k);
    out.extend(lift_all(field, &h, right, k));
    out
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn recombine(mut f: IntPoly, lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut remaining = lifted;
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let lc = f.lc();
            let mut cand = vec![lc.mod_floor(modulus)];
            for &i in &subset {
                cand = big_mul(&cand, &remaining[i], modulus);
            }
            let cand = IntPoly::new(cand.iter().map(|c| symmetric(c, modulus)).collect());
            let g = cand.primitive_part();
            if let Some(q) = f.div_exact(&g) {
                found.push(g);
                f = q;
                for &i in subset.iter().rev() {
                    remaining.remove(i);
                }
                continue 'outer;
            }
            if !next_combination(&mut subset, remaining.len()) {
                break;
            }
        }
        size += 1;
    }
    if f.deg() > 0 {
        found.push(f.primitive_part());
    }
    found
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
