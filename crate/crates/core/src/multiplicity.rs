//! Orbifold multiplicities: exact rationals `m >= 1` together with `+inf`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    // Variant order matters: the derived `Ord` puts every finite value below infinity.
    Finite(BigRational),
    Infinite,
}

/// A multiplicity `m` in `(Q ∩ [1, ∞)) ∪ {∞}`.
///
/// The orbifold coefficient of a divisor with multiplicity `m` is `1 - 1/m`,
/// so `m = 1` is the trivial weight and `m = ∞` is the logarithmic one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiplicity(Repr);

impl Multiplicity {
    pub fn new(value: BigRational) -> Result<Self> {
        if value < BigRational::one() {
            return Err(Error::MultiplicityBelowOne(value));
        }
        Ok(Multiplicity(Repr::Finite(value)))
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(BigRational::from_integer(n.into()))
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn one() -> Self {
        Multiplicity(Repr::Finite(BigRational::one()))
    }

    pub fn infinity() -> Self {
        Multiplicity(Repr::Infinite)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.0, Repr::Infinite)
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Finite(v) if v.is_one())
    }

    pub fn finite_value(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Finite(v) => Some(v),
            Repr::Infinite => None,
        }
    }

    /// Infinity counts as integral.
    pub fn is_integral(&self) -> bool {
        match &self.0 {
            Repr::Finite(v) => v.is_integer(),
            Repr::Infinite => true,
        }
    }

    /// The value as an integer, if finite and integral.
    pub fn as_integer(&self) -> Option<BigInt> {
        match &self.0 {
            Repr::Finite(v) if v.is_integer() => Some(v.to_integer()),
            _ => None,
        }
    }

    /// `1 - 1/m`, with `∞ ↦ 1`.
    pub fn coefficient(&self) -> BigRational {
        match &self.0 {
            Repr::Finite(v) => BigRational::one() - v.recip(),
            Repr::Infinite => BigRational::one(),
        }
    }

    /// Inverse of [`Multiplicity::coefficient`].
    pub fn from_coefficient(c: &BigRational) -> Result<Self> {
        if c.is_negative() || *c > BigRational::one() {
            return Err(Error::CoefficientOutOfRange(c.clone()));
        }
        if c.is_one() {
            return Ok(Self::infinity());
        }
        Self::new((BigRational::one() - c).recip())
    }

    /// `t·m` for a positive integer `t`; `t·∞ = ∞`.
    pub fn scale(&self, t: u64) -> Self {
        assert!(t >= 1, "scale factor must be positive");
        match &self.0 {
            Repr::Finite(v) => Multiplicity(Repr::Finite(v * BigInt::from(t))),
            Repr::Infinite => Self::infinity(),
        }
    }

    /// `m/t`, clamped below at 1; `∞/t = ∞`.
    pub fn divide_clamped(&self, t: u64) -> Self {
        assert!(t >= 1, "divisor must be positive");
        match &self.0 {
            Repr::Finite(v) => {
                let q = v / BigInt::from(t);
                if q < BigRational::one() {
                    Self::one()
                } else {
                    Multiplicity(Repr::Finite(q))
                }
            }
            Repr::Infinite => Self::infinity(),
        }
    }

    /// Least common multiple of integral multiplicities. The only multiple of
    /// `∞` is `∞` itself.
    pub fn lcm(&self, other: &Self) -> Result<Self> {
        match (self.as_integer(), other.as_integer()) {
            _ if self.is_infinite() || other.is_infinite() => {
                if !self.is_integral() || !other.is_integral() {
                    return Err(non_integral(self, other));
                }
                Ok(Self::infinity())
            }
            (Some(a), Some(b)) => Ok(Multiplicity(Repr::Finite(BigRational::from_integer(
                a.lcm(&b),
            )))),
            _ => Err(non_integral(self, other)),
        }
    }

    /// Integer gcd; undefined as soon as `∞` is involved.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_infinite() || other.is_infinite() {
            return Err(Error::GcdWithInfinity(format!("gcd({self}, {other})")));
        }
        match (self.as_integer(), other.as_integer()) {
            (Some(a), Some(b)) => Ok(Multiplicity(Repr::Finite(BigRational::from_integer(
                a.gcd(&b),
            )))),
            _ => Err(non_integral(self, other)),
        }
    }

    /// Does `self` divide `other`? Both must be integral. Every finite value
    /// divides `∞`, and `∞` divides only `∞`.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        if !self.is_integral() || !other.is_integral() {
            return Err(non_integral(self, other));
        }
        Ok(match (&self.0, &other.0) {
            (_, Repr::Infinite) => true,
            (Repr::Infinite, Repr::Finite(_)) => false,
            (Repr::Finite(a), Repr::Finite(b)) => b.to_integer().is_multiple_of(&a.to_integer()),
        })
    }
}

fn non_integral(a: &Multiplicity, b: &Multiplicity) -> Error {
    let bad = if a.is_integral() { b } else { a };
    Error::NonIntegral {
        label: String::new(),
        value: bad.to_string(),
    }
}

impl Default for Multiplicity {
    fn default() -> Self {
        Self::one()
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Finite(v) => write!(f, "{v}"),
            Repr::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Multiplicity {
    type Err = Error;

    /// Accepts `inf`, integers, and `a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Self::infinity());
        }
        let value: BigRational = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("`{s}` is not a multiplicity")))?;
        Self::new(value)
    }
}

impl PartialEq<u64> for Multiplicity {
    fn eq(&self, other: &u64) -> bool {
        matches!(&self.0, Repr::Finite(v) if *v == BigRational::from_integer((*other).into()))
    }
}

impl PartialOrd<u64> for Multiplicity {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(match &self.0 {
            Repr::Finite(v) => v.cmp(&BigRational::from_integer((*other).into())),
            Repr::Infinite => Ordering::Greater,
        })
    }
}

/// `⌊x⌋` for an exact rational.
pub fn floor(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// `⌈x⌉` for an exact rational.
pub fn ceil(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(Multiplicity::integer(2).unwrap().coefficient(), q(1, 2));
        assert_eq!(Multiplicity::infinity().coefficient(), q(1, 1));
        assert_eq!(Multiplicity::ratio(3, 2).unwrap().coefficient(), q(1, 3));
    }

    #[test]
    fn from_coefficient_examples() {
        assert_eq!(Multiplicity::from_coefficient(&q(1, 2)).unwrap(), 2);
        assert!(Multiplicity::from_coefficient(&q(1, 1)).unwrap().is_infinite());
        assert!(Multiplicity::from_coefficient(&q(0, 1)).unwrap().is_one());
        assert!(Multiplicity::from_coefficient(&q(-1, 3)).is_err());
        assert!(Multiplicity::from_coefficient(&q(4, 3)).is_err());
    }

    #[test]
    fn coefficient_round_trip_on_grid() {
        for d in 1..=40i64 {
            for n in 0..=d {
                let c = q(n, d);
                let m = Multiplicity::from_coefficient(&c).unwrap();
                assert_eq!(m.coefficient(), c);
            }
        }
    }

    #[test]
    fn rejects_below_one() {
        assert_eq!(
            Multiplicity::ratio(1, 2),
            Err(Error::MultiplicityBelowOne(q(1, 2)))
        );
        assert!("0".parse::<Multiplicity>().is_err());
        assert!("3/2".parse::<Multiplicity>().is_ok());
    }

    #[test]
    fn integrality() {
        assert!(Multiplicity::infinity().is_integral());
        assert!(Multiplicity::integer(4).unwrap().is_integral());
        assert!(!Multiplicity::ratio(5, 2).unwrap().is_integral());
    }

    #[test]
    fn infinity_rules() {
        let inf = Multiplicity::infinity();
        let three = Multiplicity::integer(3).unwrap();
        assert!(inf.scale(7).is_infinite());
        assert_eq!(std::cmp::min(inf.clone(), three.clone()), three);
        assert!(inf.lcm(&three).unwrap().is_infinite());
        assert!(matches!(inf.gcd(&three), Err(Error::GcdWithInfinity(_))));
        assert!(three.divides(&inf).unwrap());
        assert!(!inf.divides(&three).unwrap());
        assert!(inf.divides(&inf).unwrap());
    }

    #[test]
    fn lcm_and_gcd() {
        let four = Multiplicity::integer(4).unwrap();
        let six = Multiplicity::integer(6).unwrap();
        assert_eq!(four.lcm(&six).unwrap(), 12);
        assert_eq!(four.gcd(&six).unwrap(), 2);
        assert!(four.lcm(&Multiplicity::ratio(3, 2).unwrap()).is_err());
    }

    #[test]
    fn display_and_parse() {
        for s in ["1", "2", "7/3", "inf"] {
            assert_eq!(s.parse::<Multiplicity>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn clamped_division() {
        let two = Multiplicity::integer(2).unwrap();
        assert!(two.divide_clamped(3).is_one());
        assert!(two.divide_clamped(2).is_one());
        assert_eq!(
            Multiplicity::integer(5).unwrap().divide_clamped(2),
            Multiplicity::ratio(5, 2).unwrap()
        );
    }
}
