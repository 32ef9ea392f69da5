//! Orbifold bases of fibrations from multiple-fibre data.
//!
//! A fibration `f: (X | Δ) → Y` is described at the divisor level: for each
//! base divisor `D`, the components `E_k` of `f*(D)` that dominate `D`, with
//! their coefficient `t_k` and their `Δ`-multiplicity `m_k`. Components that
//! are `f`-exceptional are not representable and must be left out.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::divisor::{Label, OrbifoldDivisor};
use crate::error::{Error, Result};
use crate::multiplicity::Multiplicity;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiberComponent {
    t: u64,
    m: Multiplicity,
}

impl FiberComponent {
    pub fn new(t: u64, m: Multiplicity) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidInput("fibre coefficient t must be >= 1".into()));
        }
        Ok(FiberComponent { t, m })
    }

    pub fn integral(t: u64, m: u64) -> Result<Self> {
        Self::new(t, Multiplicity::integer(m)?)
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn m(&self) -> &Multiplicity {
        &self.m
    }

    /// `t · m`
    pub fn weight(&self) -> Multiplicity {
        self.m.scale(self.t)
    }
}

/// Which multiplicity of a fibre to record in the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseMode {
    /// `inf_k t_k · m_k` (non-classical).
    Inf,
    /// `gcd_k t_k · m_k` (classical); integral data only.
    Gcd,
}

impl fmt::Display for BaseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseMode::Inf => "inf",
            BaseMode::Gcd => "gcd",
        })
    }
}

impl FromStr for BaseMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" => Ok(BaseMode::Inf),
            "gcd" => Ok(BaseMode::Gcd),
            other => Err(Error::InvalidInput(format!("unknown base mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FibrationData {
    fibers: BTreeMap<Label, Vec<FiberComponent>>,
}

impl FibrationData {
    pub fn new<I, L>(fibers: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, Vec<FiberComponent>)>,
        L: Into<Label>,
    {
        let mut map = BTreeMap::new();
        for (label, comps) in fibers {
            let label = label.into();
            if comps.is_empty() {
                return Err(Error::EmptyFibre(label));
            }
            if map.insert(label.clone(), comps).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
        }
        Ok(FibrationData { fibers: map })
    }

    pub fn fibers(&self) -> &BTreeMap<Label, Vec<FiberComponent>> {
        &self.fibers
    }

    pub fn contains(&self, label: &str) -> bool {
        self.fibers.contains_key(label)
    }

    pub fn base_multiplicity(&self, label: &str, mode: BaseMode) -> Result<Multiplicity> {
        let comps = self
            .fibers
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        fibre_multiplicity(label, comps.iter().map(FiberComponent::weight), mode)
    }

    pub fn orbifold_base(&self, mode: BaseMode) -> Result<OrbifoldDivisor> {
        let mut base = OrbifoldDivisor::new();
        for label in self.fibers.keys() {
            base.insert(label.clone(), self.base_multiplicity(label, mode)?);
        }
        Ok(base)
    }
}

fn fibre_multiplicity(
    label: &str,
    weights: impl Iterator<Item = Multiplicity>,
    mode: BaseMode,
) -> Result<Multiplicity> {
    match mode {
        BaseMode::Inf => weights
            .min()
            .ok_or_else(|| Error::EmptyFibre(label.to_string())),
        BaseMode::Gcd => {
            let mut acc: Option<BigInt> = None;
            for w in weights {
                if w.is_infinite() {
                    return Err(Error::GcdWithInfinity(label.to_string()));
                }
                let n = w.as_integer().ok_or_else(|| Error::NonIntegral {
                    label: label.to_string(),
                    value: w.to_string(),
                })?;
                acc = Some(match acc {
                    Some(a) => a.gcd(&n),
                    None => n,
                });
            }
            let g = acc.ok_or_else(|| Error::EmptyFibre(label.to_string()))?;
            Multiplicity::new(BigRational::from_integer(g))
        }
    }
}

pub fn base_multiplicity(fd: &FibrationData, label: &str, mode: BaseMode) -> Result<Multiplicity> {
    fd.base_multiplicity(label, mode)
}

pub fn orbifold_base(fd: &FibrationData, mode: BaseMode) -> Result<OrbifoldDivisor> {
    fd.orbifold_base(mode)
}

/// One term `s · D` of `g*(F)` for a divisor `F` on `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LowerTerm {
    pub s: u64,
    pub y_label: Label,
}

/// A tower `X → Y → Z` given by the fibre data of `f` and of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStageData {
    upper: FibrationData,
    lower: BTreeMap<Label, Vec<LowerTerm>>,
}

impl TwoStageData {
    pub fn new<I, L>(upper: FibrationData, lower: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, Vec<LowerTerm>)>,
        L: Into<Label>,
    {
        let mut map = BTreeMap::new();
        for (label, terms) in lower {
            let label = label.into();
            if terms.is_empty() {
                return Err(Error::EmptyFibre(label));
            }
            for term in &terms {
                if term.s == 0 {
                    return Err(Error::InvalidInput(format!(
                        "coefficient s of `{}` over `{label}` must be >= 1",
                        term.y_label
                    )));
                }
                if !upper.contains(&term.y_label) {
                    return Err(Error::UnknownLabel(term.y_label.clone()));
                }
            }
            if map.insert(label.clone(), terms).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
        }
        Ok(TwoStageData { upper, lower: map })
    }

    pub fn upper(&self) -> &FibrationData {
        &self.upper
    }

    pub fn lower(&self) -> &BTreeMap<Label, Vec<LowerTerm>> {
        &self.lower
    }

    /// Orbifold base of `g ∘ f`, read off the flattened fibres: over `F` the
    /// components are all `E_{l,k}` with coefficient `s_l · t_{l,k}`.
    pub fn direct_base(&self) -> Result<OrbifoldDivisor> {
        let mut base = OrbifoldDivisor::new();
        for (label, terms) in &self.lower {
            let mut flat = Vec::new();
            for term in terms {
                for c in &self.upper.fibers[&term.y_label] {
                    flat.push(FiberComponent::new(term.s * c.t, c.m.clone())?);
                }
            }
            base.insert(label.clone(), fibre_multiplicity(label, flat.iter().map(FiberComponent::weight), BaseMode::Inf)?);
        }
        Ok(base)
    }

    /// Orbifold base of `g: (Y | Δ_f) → Z`, where `Δ_f` is the base of `f`.
    pub fn staged_base(&self) -> Result<OrbifoldDivisor> {
        let delta_f = self.upper.orbifold_base(BaseMode::Inf)?;
        let mut lower = Vec::with_capacity(self.lower.len());
        for (label, terms) in &self.lower {
            let comps = terms
                .iter()
                .map(|term| FiberComponent::new(term.s, delta_f.multiplicity(&term.y_label)))
                .collect::<Result<Vec<_>>>()?;
            lower.push((label.clone(), comps));
        }
        FibrationData::new(lower)?.orbifold_base(BaseMode::Inf)
    }

    pub fn compose_base(&self) -> Result<ComposedBase> {
        Ok(ComposedBase {
            direct: self.direct_base()?,
            staged: self.staged_base()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedBase {
    pub direct: OrbifoldDivisor,
    pub staged: OrbifoldDivisor,
}

impl ComposedBase {
    pub fn agree(&self) -> bool {
        self.direct == self.staged
    }
}

pub fn compose_base(ts: &TwoStageData) -> Result<ComposedBase> {
    ts.compose_base()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorphismMode {
    /// `t · m_X(D) ≥ m_Y(E)`
    Inf,
    /// `m_Y(E)` divides `t · m_X(D)`
    Classical,
}

impl fmt::Display for MorphismMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MorphismMode::Inf => "inf",
            MorphismMode::Classical => "classical",
        })
    }
}

impl FromStr for MorphismMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" => Ok(MorphismMode::Inf),
            "classical" => Ok(MorphismMode::Classical),
            other => Err(Error::InvalidInput(format!("unknown morphism mode `{other}`"))),
        }
    }
}

/// `D ⊂ X` appears with coefficient `t` in `f*(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismPair {
    pub y_label: Label,
    pub x_label: Label,
    pub t: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismData {
    pairs: Vec<MorphismPair>,
    delta_x: OrbifoldDivisor,
    delta_y: OrbifoldDivisor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub pair: MorphismPair,
    /// `t · m_X(D)`
    pub pulled_back: Multiplicity,
    pub m_y: Multiplicity,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub mode: MorphismMode,
    pub pairs: Vec<PairCheck>,
}

impl MorphismReport {
    pub fn is_morphism(&self) -> bool {
        self.pairs.iter().all(|p| p.ok)
    }
}

impl MorphismData {
    pub fn new(
        pairs: Vec<MorphismPair>,
        delta_x: OrbifoldDivisor,
        delta_y: OrbifoldDivisor,
    ) -> Result<Self> {
        if let Some(p) = pairs.iter().find(|p| p.t == 0) {
            return Err(Error::InvalidInput(format!(
                "pair ({}, {}) has t = 0",
                p.y_label, p.x_label
            )));
        }
        Ok(MorphismData { pairs, delta_x, delta_y })
    }

    pub fn pairs(&self) -> &[MorphismPair] {
        &self.pairs
    }

    pub fn delta_x(&self) -> &OrbifoldDivisor {
        &self.delta_x
    }

    pub fn delta_y(&self) -> &OrbifoldDivisor {
        &self.delta_y
    }

    pub fn check(&self, mode: MorphismMode) -> Result<MorphismReport> {
        if mode == MorphismMode::Classical {
            for (side, delta) in [("dX", &self.delta_x), ("dY", &self.delta_y)] {
                if let Some((label, m)) = delta.iter().find(|(_, m)| !m.is_integral()) {
                    return Err(Error::NonIntegral {
                        label: format!("{side}.{label}"),
                        value: m.to_string(),
                    });
                }
            }
        }
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for pair in &self.pairs {
            let pulled_back = self.delta_x.multiplicity(&pair.x_label).scale(pair.t);
            let m_y = self.delta_y.multiplicity(&pair.y_label);
            let ok = match mode {
                MorphismMode::Inf => pulled_back >= m_y,
                MorphismMode::Classical => m_y.divides(&pulled_back)?,
            };
            pairs.push(PairCheck { pair: pair.clone(), pulled_back, m_y, ok });
        }
        Ok(MorphismReport { mode, pairs })
    }
}

pub fn check_orbifold_morphism(md: &MorphismData, mode: MorphismMode) -> Result<MorphismReport> {
    md.check(mode)
}
