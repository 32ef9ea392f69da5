//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::binary::BinaryForm;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Form {
    pub fn zero(vars: &[&str]) -> Self {
        Form {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: BigRational) -> Self {
        let mut f = Self::zero(vars);
        if !c.is_zero() {
            f.terms.insert(vec![0; vars.len()], c);
        }
        f
    }

    pub fn var(vars: &[&str], index: usize) -> Self {
        let mut f = Self::zero(vars);
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        f.terms.insert(exps, BigRational::one());
        f
    }

    /// Builds a form from `(exponents, coefficient)` terms, summing repeats.
    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let mut f = Self::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent vector length");
            f.add_term(exps, c);
        }
        f
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree if every term has the same degree; `None` otherwise or for zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    fn check_vars(&self, other: &Form) {
        assert_eq!(self.vars, other.vars, "forms over different variables");
    }

    pub fn add(&self, other: &Form) -> Form {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Form {
        Form {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Form) -> Form {
        self.check_vars(other);
        let mut out = Form { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Form {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        (0..n).fold(Form::constant(&vars, BigRational::one()), |acc, _| acc.mul(self))
    }

    /// Substitutes a binary form for each variable.
    pub fn substitute(&self, images: &[BinaryForm]) -> BinaryForm {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let d = images.iter().map(BinaryForm::degree).max().unwrap_or(0);
        let target = self.homogeneous_degree().unwrap_or(0) * d;
        let mut powers: Vec<Vec<BinaryForm>> = images.iter().map(|img| vec![BinaryForm::one().with_degree(0), img.clone()]).collect();
        let mut acc = BinaryForm::zero(target);
        for (exps, c) in &self.terms {
            let mut term = BinaryForm::constant(c.clone());
            for (v, &e) in exps.iter().enumerate() {
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap().mul(&images[v]);
                    powers[v].push(next);
                }
                term = term.mul(&powers[v][e as usize]);
            }
            acc = acc.add(&term.with_degree(target));
        }
        acc
    }
}

/// Writes `Σ c · Π var^e` with terms in the given order.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a BigRational, Vec<(&'a str, u32)>)>,
) -> fmt::Result {
    let mut first = true;
    for (c, monomial) in terms {
        let monomial: Vec<_> = monomial.into_iter().filter(|(_, e)| *e > 0).collect();
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else if c.is_negative() {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        first = false;
        let a = c.abs();
        if monomial.is_empty() {
            write!(f, "{a}")?;
            continue;
        }
        if !a.is_one() {
            write!(f, "{a}*")?;
        }
        for (i, (name, e)) in monomial.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(name)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().rev().map(|(exps, c)| {
                let mono = self.vars.iter().map(String::as_str).zip(exps.iter().copied()).collect();
                (c, mono)
            }),
        )
    }
}
