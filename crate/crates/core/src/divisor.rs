//! Formal orbifold divisors `Δ = Σ (1 - 1/m(D)) D` over opaque labels.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::multiplicity::Multiplicity;

/// Opaque prime-divisor label.
pub type Label = String;

/// A finite formal sum of labeled prime divisors with multiplicities.
///
/// Entries of multiplicity 1 are never stored: an absent label has
/// multiplicity 1. Iteration is in label order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrbifoldDivisor {
    entries: BTreeMap<Label, Multiplicity>,
}

impl OrbifoldDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a divisor; later entries for a repeated label win.
    pub fn from_entries<I, L>(entries: I) -> Self
    where
        I: IntoIterator<Item = (L, Multiplicity)>,
        L: Into<Label>,
    {
        let mut d = Self::new();
        for (label, m) in entries {
            d.insert(label, m);
        }
        d
    }

    /// Sets the multiplicity of `label`; multiplicity 1 removes it.
    pub fn insert(&mut self, label: impl Into<Label>, m: Multiplicity) {
        let label = label.into();
        if m.is_one() {
            self.entries.remove(&label);
        } else {
            self.entries.insert(label, m);
        }
    }

    pub fn multiplicity(&self, label: &str) -> Multiplicity {
        self.entries.get(label).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, label: &str) -> BigRational {
        self.multiplicity(label).coefficient()
    }

    pub fn support(&self) -> impl Iterator<Item = &Label> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Multiplicity)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(Multiplicity::is_integral)
    }

    pub fn is_finite(&self) -> bool {
        !self.entries.values().any(Multiplicity::is_infinite)
    }

    pub fn is_logarithmic(&self) -> bool {
        self.entries.values().all(Multiplicity::is_infinite)
    }

    /// `self ≤ other`, i.e. `other - self` is effective.
    pub fn leq(&self, other: &OrbifoldDivisor) -> bool {
        self.entries
            .iter()
            .all(|(label, m)| *m <= other.multiplicity(label))
    }
}

/// `Δ ≤ Δ'` in the coefficientwise order.
pub fn divisor_leq(lower: &OrbifoldDivisor, upper: &OrbifoldDivisor) -> bool {
    lower.leq(upper)
}

impl fmt::Display for OrbifoldDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (label, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{label}: {m}")?;
        }
        f.write_str("}")
    }
}

impl<L: Into<Label>> FromIterator<(L, Multiplicity)> for OrbifoldDivisor {
    fn from_iter<T: IntoIterator<Item = (L, Multiplicity)>>(iter: T) -> Self {
        Self::from_entries(iter)
    }
}
