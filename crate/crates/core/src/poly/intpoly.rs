//! Dense univariate polynomials over `Z`, with the rational gcd and Yun's
//! squarefree decomposition built on top.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients low to high; no trailing zeros, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Exact quotient over `Z`, or `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let (n, m) = (self.coeffs.len(), divisor.coeffs.len());
        if n < m {
            return None;
        }
        let lc = divisor.lc();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - m + 1];
        for k in (0..=n - m).rev() {
            let top = &rem[k + m - 1];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    pub(crate) fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Clears denominators and returns the primitive part.
    pub(crate) fn from_rational(coeffs: &[BigRational]) -> IntPoly {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(coeffs.iter().map(|c| (c * &den).to_integer()).collect()).primitive_part()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    f.write_str("x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

type RatPoly = Vec<BigRational>;

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rat_divrem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lc = b.last().unwrap();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let q = &rem[k + b.len() - 1] / lc;
        if q.is_zero() {
            continue;
        }
        for (j, d) in b.iter().enumerate() {
            rem[k + j] -= &q * d;
        }
        quot[k] = q;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn rat_monic(mut p: RatPoly) -> RatPoly {
    trim(&mut p);
    if let Some(lc) = p.last().cloned() {
        for c in &mut p {
            *c /= &lc;
        }
    }
    p
}

fn rat_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = rat_divrem(&x, &y);
        x = y;
        y = rat_monic(r);
    }
    rat_monic(x)
}

fn rat_derivative(p: &RatPoly) -> RatPoly {
    let mut out: RatPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    trim(&mut out);
    out
}

fn rat_sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out: RatPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn rat_div_exact(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (q, r) = rat_divrem(a, b);
    debug_assert!(r.is_empty(), "inexact division in squarefree decomposition");
    q
}

/// Gcd over `Q`, returned as a primitive integer polynomial with positive
/// leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    IntPoly::from_rational(&rat_gcd(&a.to_rational(), &b.to_rational()))
}

/// Yun's algorithm over `Q`: `f = c · Π a_i^i` with each `a_i` squarefree,
/// pairwise coprime, primitive, positive leading coefficient. Only
/// non-constant `a_i` are returned.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let fr = f.to_rational();
    let fd = rat_derivative(&fr);
    let a0 = rat_gcd(&fr, &fd);
    let mut b = rat_div_exact(&fr, &a0);
    let c = rat_div_exact(&fd, &a0);
    let mut d = rat_sub(&c, &rat_derivative(&b));
    let mut i = 1u32;
    while b.len() > 1 {
        let a = rat_gcd(&b, &d);
        if a.len() > 1 {
            out.push((IntPoly::from_rational(&a), i));
        }
        b = rat_div_exact(&b, &a);
        let c = rat_div_exact(&d, &a);
        d = rat_sub(&c, &rat_derivative(&b));
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn primitive_and_content() {
        let f = p(&[-4, 0, -6]);
        assert_eq!(f.content(), BigInt::from(2));
        assert_eq!(f.primitive_part(), p(&[2, 0, 3]));
    }

    #[test]
    fn exact_division() {
        let f = p(&[-1, 0, 1]);
        assert_eq!(f.div_exact(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(f.div_exact(&p(&[2, 1])), None);
        assert_eq!(p(&[2, 4]).div_exact(&p(&[1, 3])), None);
        assert_eq!(p(&[3, 6]).div_exact(&p(&[1, 2])), Some(p(&[3])));
    }

    #[test]
    fn rational_gcd() {
        let a = p(&[-1, 0, 1]).mul(&p(&[3, 2]));
        let b = p(&[1, 1]).mul(&p(&[5, 0, 1]));
        assert_eq!(gcd(&a, &b), p(&[1, 1]));
        assert_eq!(gcd(&p(&[2, 4]), &p(&[3, 6])), p(&[1, 2]));
    }

    #[test]
    fn yun_decomposition() {
        // 3 (x-1) (x+2)^2 (2x+1)^3
        let f = p(&[-1, 1])
            .mul(&p(&[2, 1]).pow(2))
            .mul(&p(&[1, 2]).pow(3))
            .scale(&BigInt::from(3));
        let sqf = squarefree_decomposition(&f);
        assert_eq!(
            sqf,
            vec![(p(&[-1, 1]), 1), (p(&[2, 1]), 2), (p(&[1, 2]), 3)]
        );
        assert!(squarefree_decomposition(&p(&[7])).is_empty());
        assert_eq!(squarefree_decomposition(&p(&[0, 0, 0, 5])), vec![(p(&[0, 1]), 3)]);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 0, 2]).to_string(), "2*x^3 - 3*x + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }
}
