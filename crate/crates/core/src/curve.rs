//! One-dimensional orbifolds `(C | Δ)` and their classification by the sign
//! of `deg(K_C + Δ)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::divisor::{Label, OrbifoldDivisor};
use crate::error::{Error, Result};
use crate::multiplicity::Multiplicity;

/// Canonical dimension of an orbifold curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kappa {
    NegInfinity,
    Zero,
    One,
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kappa::NegInfinity => "-inf",
            Kappa::Zero => "0",
            Kappa::One => "1",
        })
    }
}

/// A smooth projective curve of given genus with an orbifold divisor of marked points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveOrbifold {
    genus: u32,
    marks: OrbifoldDivisor,
}

impl CurveOrbifold {
    pub fn new(genus: u32, marks: OrbifoldDivisor) -> Self {
        CurveOrbifold { genus, marks }
    }

    /// `P¹` with the given multiplicities at points labelled `P1, P2, ...`.
    pub fn rational_with(mults: impl IntoIterator<Item = Multiplicity>) -> Self {
        let marks = mults
            .into_iter()
            .enumerate()
            .map(|(i, m)| (format!("P{}", i + 1), m))
            .collect();
        CurveOrbifold::new(0, marks)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn marks(&self) -> &OrbifoldDivisor {
        &self.marks
    }

    /// `2g - 2 + Σ (1 - 1/m_i)`.
    pub fn canonical_degree(&self) -> BigRational {
        let base = BigRational::from_integer(BigInt::from(2 * i64::from(self.genus) - 2));
        self.marks
            .iter()
            .fold(base, |acc, (_, m)| acc + m.coefficient())
    }

    pub fn kappa(&self) -> Kappa {
        let deg = self.canonical_degree();
        if deg.is_negative() {
            Kappa::NegInfinity
        } else if deg.is_zero() {
            Kappa::Zero
        } else {
            Kappa::One
        }
    }

    /// Special means `deg(K_C + Δ) ≤ 0`.
    pub fn is_special(&self) -> bool {
        !self.canonical_degree().is_positive()
    }

    /// Genus 0 and `κ = -∞`.
    pub fn is_rational(&self) -> bool {
        self.genus == 0 && self.canonical_degree().is_negative()
    }

    /// Spherical classification of a genus-0 orbifold with finite integral marks.
    pub fn spherical_profile(&self) -> Result<SphericalProfile> {
        if self.genus != 0 {
            return Err(Error::InvalidInput(format!(
                "spherical profile needs genus 0, got {}",
                self.genus
            )));
        }
        let mut mults = Vec::with_capacity(self.marks.len());
        for (label, m) in self.marks.iter() {
            if m.is_infinite() {
                return Err(Error::InfiniteNotAllowed(label.clone()));
            }
            let n = m
                .as_integer()
                .and_then(|n| n.to_u64())
                .ok_or_else(|| Error::NonIntegral {
                    label: label.clone(),
                    value: m.to_string(),
                })?;
            mults.push(n);
        }
        mults.sort_unstable();
        let rational = self.is_rational();
        let family = match (rational, mults.as_slice()) {
            (true, &[2, 2, n]) => Some(SphericalFamily::Dihedral(n)),
            (true, &[2, 3, 3]) => Some(SphericalFamily::Tetrahedral),
            (true, &[2, 3, 4]) => Some(SphericalFamily::Octahedral),
            (true, &[2, 3, 5]) => Some(SphericalFamily::Icosahedral),
            _ => None,
        };
        Ok(SphericalProfile {
            rational,
            support_size: mults.len(),
            multiplicities: mults,
            family,
        })
    }
}

/// The finite triangle groups, keyed by sorted multiplicity triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphericalFamily {
    /// `(2, 2, n)`
    Dihedral(u64),
    /// `(2, 3, 3)`
    Tetrahedral,
    /// `(2, 3, 4)`
    Octahedral,
    /// `(2, 3, 5)`
    Icosahedral,
}

impl fmt::Display for SphericalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphericalFamily::Dihedral(_) => f.write_str("(2,2,n)"),
            SphericalFamily::Tetrahedral => f.write_str("(2,3,3)"),
            SphericalFamily::Octahedral => f.write_str("(2,3,4)"),
            SphericalFamily::Icosahedral => f.write_str("(2,3,5)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalProfile {
    pub rational: bool,
    pub support_size: usize,
    /// Sorted ascending.
    pub multiplicities: Vec<u64>,
    /// Set only for rational orbifolds with exactly three marks.
    pub family: Option<SphericalFamily>,
}

pub fn canonical_degree(c: &CurveOrbifold) -> BigRational {
    c.canonical_degree()
}

pub fn kappa_curve(c: &CurveOrbifold) -> Kappa {
    c.kappa()
}

pub fn is_special_curve(c: &CurveOrbifold) -> bool {
    c.is_special()
}

pub fn is_rational_orbifold_curve(c: &CurveOrbifold) -> bool {
    c.is_rational()
}

pub fn spherical_profile(c: &CurveOrbifold) -> Result<SphericalProfile> {
    c.spherical_profile()
}

/// Convenience for `(P¹ | marks)` keyed by explicit labels.
pub fn genus_zero(marks: impl IntoIterator<Item = (Label, Multiplicity)>) -> CurveOrbifold {
    CurveOrbifold::new(0, marks.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(n: u64) -> Multiplicity {
        Multiplicity::integer(n).unwrap()
    }

    fn p1(ms: &[u64]) -> CurveOrbifold {
        CurveOrbifold::rational_with(ms.iter().map(|&n| m(n)))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_degree_examples() {
        assert_eq!(p1(&[2, 3, 7]).canonical_degree(), q(1, 42));
        assert_eq!(CurveOrbifold::new(1, OrbifoldDivisor::new()).canonical_degree(), q(0, 1));
        let log2 = CurveOrbifold::rational_with([Multiplicity::infinity(), Multiplicity::infinity()]);
        assert_eq!(log2.canonical_degree(), q(0, 1));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(p1(&[2, 3, 7]).kappa(), Kappa::One);
        assert_eq!(p1(&[2, 2, 2, 2]).kappa(), Kappa::Zero);
        assert_eq!(p1(&[2, 3, 5]).kappa(), Kappa::NegInfinity);
        assert_eq!(p1(&[2, 3, 5]).canonical_degree(), q(-1, 30));
    }

    #[test]
    fn specialness() {
        assert!(!p1(&[2, 3, 7]).is_special());
        assert!(CurveOrbifold::new(1, OrbifoldDivisor::new()).is_special());
        assert!(!CurveOrbifold::new(2, OrbifoldDivisor::new()).is_special());
    }

    #[test]
    fn rationality() {
        assert!(CurveOrbifold::rational_with([Multiplicity::infinity()]).is_rational());
        assert!(
            !CurveOrbifold::rational_with([Multiplicity::infinity(), Multiplicity::infinity()])
                .is_rational()
        );
        assert!(p1(&[2, 3, 5]).is_rational());
        assert!(!CurveOrbifold::new(1, OrbifoldDivisor::new()).is_rational());
    }

    #[test]
    fn spherical_profile_examples() {
        let p = p1(&[9, 2, 2]).spherical_profile().unwrap();
        assert_eq!(p.family, Some(SphericalFamily::Dihedral(9)));
        assert_eq!(p.multiplicities, vec![2, 2, 9]);
        assert_eq!(
            p1(&[2, 3, 4]).spherical_profile().unwrap().family,
            Some(SphericalFamily::Octahedral)
        );
        let flat = p1(&[2, 3, 6]).spherical_profile().unwrap();
        assert!(!flat.rational);
        assert_eq!(flat.family, None);
        let two = p1(&[5, 7]).spherical_profile().unwrap();
        assert!(two.rational);
        assert_eq!(two.support_size, 2);
    }

    #[test]
    fn spherical_profile_errors() {
        assert!(CurveOrbifold::rational_with([Multiplicity::infinity()])
            .spherical_profile()
            .is_err());
        assert!(CurveOrbifold::rational_with([Multiplicity::ratio(5, 2).unwrap()])
            .spherical_profile()
            .is_err());
        assert!(CurveOrbifold::new(1, OrbifoldDivisor::new())
            .spherical_profile()
            .is_err());
    }

    #[test]
    fn triangle_trichotomy_matches_brute_force() {
        let flat = [(2, 3, 6), (2, 4, 4), (3, 3, 3)];
        for p in 2..=30u64 {
            for qq in p..=30 {
                for r in qq..=30 {
                    let c = p1(&[p, qq, r]);
                    // 1/p + 1/q + 1/r compared with 1, cross-multiplied.
                    let lhs = qq * r + p * r + p * qq;
                    let rhs = p * qq * r;
                    let expected = match lhs.cmp(&rhs) {
                        std::cmp::Ordering::Greater => Kappa::NegInfinity,
                        std::cmp::Ordering::Equal => Kappa::Zero,
                        std::cmp::Ordering::Less => Kappa::One,
                    };
                    assert_eq!(c.kappa(), expected, "({p},{qq},{r})");
                    assert_eq!(expected == Kappa::Zero, flat.contains(&(p, qq, r)));
                    let spherical = c.spherical_profile().unwrap().family.is_some();
                    assert_eq!(spherical, expected == Kappa::NegInfinity);
                }
            }
        }
    }

    fn mult() -> impl Strategy<Value = Multiplicity> {
        prop_oneof![
            (1u64..20).prop_map(|n| Multiplicity::integer(n).unwrap()),
            (2i64..40, 1i64..5).prop_map(|(n, d)| Multiplicity::ratio(n.max(d), d).unwrap()),
            Just(Multiplicity::infinity()),
        ]
    }

    proptest! {
        #[test]
        fn canonical_degree_is_monotone(
            genus in 0u32..3,
            pairs in proptest::collection::vec((mult(), mult()), 0..6),
        ) {
            let (lo, hi): (Vec<_>, Vec<_>) = pairs
                .into_iter()
                .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
                .unzip();
            let small = CurveOrbifold::new(genus, CurveOrbifold::rational_with(lo).marks().clone());
            let large = CurveOrbifold::new(genus, CurveOrbifold::rational_with(hi).marks().clone());
            prop_assert!(small.marks().leq(large.marks()));
            prop_assert!(small.canonical_degree() <= large.canonical_degree());
        }

        #[test]
        fn at_most_two_finite_marks_is_rational(a in mult(), b in mult()) {
            prop_assume!(!a.is_infinite() && !b.is_infinite());
            prop_assert!(CurveOrbifold::rational_with([a.clone()]).is_rational());
            prop_assert!(CurveOrbifold::rational_with([a, b]).is_rational());
        }
    }
}
