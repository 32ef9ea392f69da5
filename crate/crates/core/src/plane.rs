//! Pairs `(P² | Δ)` given by arrangements of plane curves with multiplicities.
//!
//! Everything here is numerical on `(degree, multiplicity)` data. The
//! arrangement is assumed to be in general position; that is not checked.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::divisor::Label;
use crate::error::{Error, Result};
use crate::multiplicity::Multiplicity;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementComponent {
    pub label: Label,
    pub degree: u32,
    pub mult: Multiplicity,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlaneArrangementPair {
    components: Vec<ArrangementComponent>,
}

impl PlaneArrangementPair {
    /// Components of multiplicity 1 carry no weight and are dropped.
    pub fn new(components: impl IntoIterator<Item = ArrangementComponent>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for c in components {
            if c.degree == 0 {
                return Err(Error::InvalidInput(format!(
                    "component `{}` has degree 0",
                    c.label
                )));
            }
            if !seen.insert(c.label.clone()) {
                return Err(Error::DuplicateLabel(c.label));
            }
            if !c.mult.is_one() {
                kept.push(c);
            }
        }
        Ok(PlaneArrangementPair { components: kept })
    }

    /// Lines `L1, L2, ...` with the given multiplicities.
    pub fn lines(mults: impl IntoIterator<Item = Multiplicity>) -> Self {
        let comps = mults
            .into_iter()
            .enumerate()
            .map(|(i, mult)| ArrangementComponent {
                label: format!("L{}", i + 1),
                degree: 1,
                mult,
            });
        Self::new(comps).expect("generated labels are unique")
    }

    pub fn components(&self) -> &[ArrangementComponent] {
        &self.components
    }

    /// `3 - Σ d_j (1 - 1/m_j)`: the degree of `-(K + Δ)` against a line.
    pub fn anticanonical_degree(&self) -> BigRational {
        let three = BigRational::from_integer(3.into());
        self.components.iter().fold(three, |acc, c| {
            acc - c.mult.coefficient() * BigInt::from(c.degree)
        })
    }

    pub fn is_fano(&self) -> bool {
        self.anticanonical_degree().is_positive()
    }

    fn line_multiplicities_dividing(&self, degree: u64) -> Result<Vec<u64>> {
        if degree == 0 {
            return Err(Error::InvalidInput("curve degree must be positive".into()));
        }
        let mut out = Vec::with_capacity(self.components.len());
        for c in &self.components {
            if c.degree != 1 {
                return Err(Error::NotALine(c.label.clone()));
            }
            if c.mult.is_infinite() {
                return Err(Error::InfiniteNotAllowed(c.label.clone()));
            }
            let m = c
                .mult
                .as_integer()
                .and_then(|m| m.to_u64())
                .ok_or_else(|| Error::NonIntegral {
                    label: c.label.clone(),
                    value: c.mult.to_string(),
                })?;
            if !degree.is_multiple_of(m) {
                return Err(Error::DoesNotDivide {
                    label: c.label.clone(),
                    mult: c.mult.to_string(),
                    degree,
                });
            }
            out.push(m);
        }
        Ok(out)
    }

    /// Expected dimension of the family of degree-`degree` rational curves
    /// meeting each line `L_j` only with contact orders divisible by `m_j`.
    pub fn expected_family_dim(&self, degree: u64) -> Result<i64> {
        Ok(self.family_dimension(degree)?.expected_dim)
    }

    /// Parameter and condition counts behind [`Self::expected_family_dim`].
    pub fn family_dimension(&self, degree: u64) -> Result<FamilyDimension> {
        let mults = self.line_multiplicities_dividing(degree)?;
        let d = degree as i64;
        let parameters = 3 * d - 1;
        // A curve meeting L_j only at points of contact divisible by m_j has
        // d/m_j such points, each imposing m_j - 1 conditions.
        let conditions: i64 = mults.iter().map(|&m| d / m as i64 * (m as i64 - 1)).sum();
        let expected_dim = parameters - conditions;
        let via_degree =
            self.anticanonical_degree() * BigInt::from(degree) - BigRational::one();
        let identity_holds = via_degree == BigRational::from_integer(expected_dim.into());

        let period = mults.iter().fold(1u64, |acc, &m| acc.lcm(&m));
        let periods = degree / period;
        let period_slope = self.anticanonical_degree() * BigInt::from(period);
        // When one period contributes exactly one dimension, the count is n - 1.
        let discrepancy = (period_slope.is_one() && periods >= 1).then(|| PeriodCount {
            period,
            periods,
            computed: periods as i64 - 1,
            alternative_3n_minus_1: 3 * periods as i64 - 1,
        });
        Ok(FamilyDimension {
            degree,
            parameters,
            conditions,
            expected_dim,
            identity_holds,
            period_count: discrepancy,
        })
    }

    /// Checks `expected_family_dim(d) = d · anticanonical_degree - 1` exactly.
    pub fn adjunction_identity_check(&self, degree: u64) -> Result<bool> {
        Ok(self.family_dimension(degree)?.identity_holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDimension {
    pub degree: u64,
    /// `3d - 1`: rational plane curves of degree `d` up to reparametrization.
    pub parameters: i64,
    pub conditions: i64,
    pub expected_dim: i64,
    /// `expected_dim == d · anticanonical_degree - 1`
    pub identity_holds: bool,
    /// Present when the arrangement has `lcm(m_j) · anticanonical_degree = 1`,
    /// e.g. lines `(3,3,5,7)`: the dimension at `d = n · lcm` is `n - 1`, not
    /// the `3n - 1` produced by counting `3d - 3n` conditions.
    pub period_count: Option<PeriodCount>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodCount {
    pub period: u64,
    pub periods: u64,
    pub computed: i64,
    pub alternative_3n_minus_1: i64,
}

impl PeriodCount {
    pub fn differs(&self) -> bool {
        self.computed != self.alternative_3n_minus_1
    }
}

pub fn anticanonical_degree(p: &PlaneArrangementPair) -> BigRational {
    p.anticanonical_degree()
}

pub fn is_fano(p: &PlaneArrangementPair) -> bool {
    p.is_fano()
}

pub fn expected_family_dim(p: &PlaneArrangementPair, degree: u64) -> Result<i64> {
    p.expected_family_dim(degree)
}

pub fn adjunction_identity_check(p: &PlaneArrangementPair, degree: u64) -> Result<bool> {
    p.adjunction_identity_check(degree)
}
