//! Binary forms `Σ c_i s^i u^(d-i)` on the parameter line `P¹`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factor::factor;
use super::form::{write_terms, Form};
use super::intpoly::{gcd, IntPoly};
use crate::error::{Error, Result};

/// A homogeneous polynomial in `(s, u)` of declared degree `d`.
///
/// `coeffs[i]` is the coefficient of `s^i u^(d-i)`. The zero form keeps its
/// declared degree so that it can be summed with other degree-`d` forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm {
    degree: u32,
    coeffs: Vec<BigRational>,
}

impl BinaryForm {
    pub fn new(degree: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != degree as usize + 1 {
            return Err(Error::InvalidInput(format!(
                "a binary form of degree {degree} needs {} coefficients",
                degree + 1
            )));
        }
        Ok(BinaryForm { degree, coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty());
        BinaryForm {
            degree: coeffs.len() as u32 - 1,
            coeffs: coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    pub fn zero(degree: u32) -> Self {
        BinaryForm { degree, coeffs: vec![BigRational::zero(); degree as usize + 1] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        BinaryForm { degree: 0, coeffs: vec![c] }
    }

    pub fn s() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn u() -> Self {
        Self::from_i64s(&[1, 0])
    }

    /// Converts a homogeneous [`Form`] in two variables `(s, u)`.
    /// The zero form has degree `default_degree`.
    pub fn from_form(form: &Form, default_degree: u32) -> Result<Self> {
        if form.vars().len() != 2 {
            return Err(Error::InvalidInput("binary forms have two variables".into()));
        }
        if form.is_zero() {
            return Ok(Self::zero(default_degree));
        }
        let d = form.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        let mut out = Self::zero(d);
        for (exps, c) in form.terms() {
            out.coeffs[exps[0] as usize] += c;
        }
        Ok(out)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Same coefficients reinterpreted in another degree; only valid for the
    /// zero form or when the degree is unchanged.
    pub fn with_degree(&self, degree: u32) -> Self {
        if self.degree == degree {
            return self.clone();
        }
        assert!(self.is_zero(), "cannot change the degree of a nonzero form");
        Self::zero(degree)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Power of `u` dividing the form (the order at the point `s:u = 1:0`).
    fn u_order(&self) -> u32 {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count() as u32
    }

    /// `f(s, 1)` as a primitive integer polynomial.
    fn dehomogenized(&self) -> IntPoly {
        IntPoly::from_rational(&self.coeffs)
    }

    fn homogenize(p: &IntPoly) -> Self {
        BinaryForm {
            degree: p.deg() as u32,
            coeffs: p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect(),
        }
    }

    /// Factors into irreducible forms over `Q`, each primitive with integer
    /// coefficients and positive leading coefficient (`u` for the point at infinity).
    pub fn factor(&self) -> Result<BinaryFactorization> {
        if self.is_zero() {
            return Err(Error::InvalidInput("cannot factor the zero form".into()));
        }
        let e = self.u_order();
        let top = self.degree - e;
        let affine: Vec<BigRational> = self.coeffs[..=top as usize].to_vec();
        let affine_int = IntPoly::from_rational(&affine);
        let content = affine.last().unwrap() / BigRational::from_integer(affine_int.lc());
        let fact = factor(&affine_int);
        let mut factors: BTreeMap<BinaryForm, u32> = fact
            .factors
            .iter()
            .map(|(g, k)| (Self::homogenize(g), *k))
            .collect();
        if e > 0 {
            factors.insert(Self::u(), e);
        }
        Ok(BinaryFactorization { content, factors })
    }

    /// Gcd of binary forms, normalized like factors; `1` if coprime.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let e = self.u_order().min(other.u_order());
        let g = gcd(&self.dehomogenized(), &other.dehomogenized());
        Self::homogenize(&g).mul(&Self::u().pow(e))
    }

    fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let e = self.u_order();
        Self::homogenize(&self.dehomogenized()).mul(&Self::u().pow(e))
    }

    /// `true` for a nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.degree == 0 && !self.is_zero()
    }

    /// The order of vanishing at a rational point `(s : u) = (a : b)`.
    pub fn order_at(&self, a: &BigInt, b: &BigInt) -> u32 {
        assert!(!(a.is_zero() && b.is_zero()));
        if self.is_zero() {
            return u32::MAX;
        }
        // In the chart u = 1 the order is the vanishing order of f(s, 1) at a/b.
        if b.is_zero() {
            return self.u_order();
        }
        let x = BigRational::new(a.clone(), b.clone());
        let mut poly = self.coeffs.clone();
        let mut order = 0;
        loop {
            let value = poly
                .iter()
                .rev()
                .fold(BigRational::zero(), |acc, c| acc * &x + c);
            if !value.is_zero() {
                return order;
            }
            order += 1;
            poly = poly
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect();
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (c, vec![("s", i as u32), ("u", d - i as u32)])),
        )
    }
}

/// `content · Π factor^exp` with canonical factors as keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryFactorization {
    pub content: BigRational,
    pub factors: BTreeMap<BinaryForm, u32>,
}

impl BinaryFactorization {
    pub fn expand(&self) -> BinaryForm {
        self.factors
            .iter()
            .fold(BinaryForm::constant(self.content.clone()), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }
}
