//! Restriction of a plane orbifold divisor to a rational curve `g: P¹ → P²`.
//!
//! Contact orders are exact: each component's defining form is pulled back
//! to the parameter line and factored over `Q`. A point of the parameter
//! line is represented by a canonical irreducible factor, so a factor of
//! degree `k` stands for a Galois orbit of `k` points sharing the same
//! contact data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::curve::CurveOrbifold;
use crate::divisor::{Label, OrbifoldDivisor};
use crate::error::{Error, Result};
use crate::multiplicity::Multiplicity;
use crate::poly::{BinaryForm, Form};

pub const PLANE_VARS: [&str; 3] = ["x0", "x1", "x2"];
pub const PARAM_VARS: [&str; 2] = ["s", "u"];

/// A base-point-free parametrization `(x0 : x1 : x2) = (f0 : f1 : f2)(s : u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPlaneCurve {
    coords: [BinaryForm; 3],
}

impl ParamPlaneCurve {
    /// Zero coordinates adopt the common degree of the others.
    pub fn new(coords: [BinaryForm; 3]) -> Result<Self> {
        let degrees: BTreeSet<u32> = coords.iter().filter(|c| !c.is_zero()).map(BinaryForm::degree).collect();
        let degree = match degrees.len() {
            0 => return Err(Error::InvalidInput("all coordinates vanish".into())),
            1 => *degrees.iter().next().unwrap(),
            _ => return Err(Error::InvalidInput("coordinates have different degrees".into())),
        };
        if degree == 0 {
            return Err(Error::InvalidInput("a constant map is not a curve".into()));
        }
        let coords = coords.map(|c| c.with_degree(degree));
        let common = coords[0].gcd(&coords[1]).gcd(&coords[2]);
        if !common.is_unit() {
            return Err(Error::BasePoint(common.to_string()));
        }
        Ok(ParamPlaneCurve { coords })
    }

    /// Builds the curve from forms in `(s, u)`.
    pub fn from_forms(forms: [&Form; 3]) -> Result<Self> {
        let coords = [
            BinaryForm::from_form(forms[0], 0)?,
            BinaryForm::from_form(forms[1], 0)?,
            BinaryForm::from_form(forms[2], 0)?,
        ];
        Self::new(coords)
    }

    pub fn coords(&self) -> &[BinaryForm; 3] {
        &self.coords
    }

    pub fn degree(&self) -> u32 {
        self.coords[0].degree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneDivisorComponent {
    label: Label,
    form: Form,
    degree: u32,
    mult: Multiplicity,
}

impl PlaneDivisorComponent {
    pub fn new(label: impl Into<Label>, form: Form, mult: Multiplicity) -> Result<Self> {
        let label = label.into();
        if form.vars() != PLANE_VARS {
            return Err(Error::InvalidInput(format!(
                "form of `{label}` must be in x0, x1, x2"
            )));
        }
        let degree = form.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        if degree == 0 {
            return Err(Error::InvalidInput(format!("form of `{label}` is constant")));
        }
        Ok(PlaneDivisorComponent { label, form, degree, mult })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mult(&self) -> &Multiplicity {
        &self.mult
    }
}

/// Contact data at one orbit of parameter points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactRecord {
    /// Canonical irreducible factor vanishing at the orbit.
    pub point: BinaryForm,
    /// Contact order `t_{j,a}` with each component through the point.
    pub contacts: BTreeMap<Label, u32>,
}

impl ContactRecord {
    pub fn orbit_size(&self) -> u32 {
        self.point.degree()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `lcm_j m_j / gcd(m_j, t_j)`, integral.
    Z,
    /// `max_j m_j / t_j`, clamped below at 1.
    Q,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Z => "Z",
            Variant::Q => "Q",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Variant::Z),
            "Q" | "q" => Ok(Variant::Q),
            other => Err(Error::InvalidInput(format!("unknown variant `{other}`"))),
        }
    }
}

/// `g*(D)` as a binary form of degree `deg(g) · deg(D)`.
pub fn pullback(curve: &ParamPlaneCurve, comp: &PlaneDivisorComponent) -> Result<BinaryForm> {
    let pulled = comp.form.substitute(&curve.coords);
    if pulled.is_zero() {
        return Err(Error::CurveInsideComponent(comp.label.clone()));
    }
    Ok(pulled)
}

pub fn contact_orders(
    curve: &ParamPlaneCurve,
    arrangement: &[PlaneDivisorComponent],
) -> Result<Vec<ContactRecord>> {
    let mut labels = BTreeSet::new();
    for comp in arrangement {
        if !labels.insert(comp.label.as_str()) {
            return Err(Error::DuplicateLabel(comp.label.clone()));
        }
    }
    let mut by_point: BTreeMap<BinaryForm, BTreeMap<Label, u32>> = BTreeMap::new();
    for comp in arrangement {
        let fact = pullback(curve, comp)?.factor()?;
        for (point, t) in fact.factors {
            by_point.entry(point).or_default().insert(comp.label.clone(), t);
        }
    }
    Ok(by_point
        .into_iter()
        .map(|(point, contacts)| ContactRecord { point, contacts })
        .collect())
}

/// Restricted multiplicity at one record.
fn record_multiplicity(
    record: &ContactRecord,
    mults: &BTreeMap<&str, &Multiplicity>,
    variant: Variant,
) -> Result<Multiplicity> {
    let mut acc = Multiplicity::one();
    for (label, &t) in &record.contacts {
        let m = mults[label.as_str()];
        let local = match variant {
            Variant::Z => match m.as_integer() {
                _ if m.is_infinite() => Multiplicity::infinity(),
                Some(n) => {
                    let g = n.gcd(&BigInt::from(t));
                    Multiplicity::new(BigRational::from_integer(n / g))?
                }
                None => return Err(non_integral(label, m)),
            },
            Variant::Q => m.divide_clamped(u64::from(t)),
        };
        acc = match variant {
            Variant::Z => acc.lcm(&local).map_err(|_| non_integral(label, m))?,
            Variant::Q => acc.max(local),
        };
    }
    Ok(acc)
}

fn non_integral(label: &str, m: &Multiplicity) -> Error {
    Error::NonIntegral { label: label.to_string(), value: m.to_string() }
}

/// Per-orbit result of a restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedPoint {
    pub record: ContactRecord,
    pub mult: Multiplicity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub variant: Variant,
    pub points: Vec<RestrictedPoint>,
    pub orbifold: CurveOrbifold,
}

/// Labels the points of an orbit: the factor itself for rational points,
/// `factor#i` for the `k` conjugate points of a degree-`k` factor.
pub fn point_labels(point: &BinaryForm) -> Vec<Label> {
    let k = point.degree();
    if k == 1 {
        vec![point.to_string()]
    } else {
        (1..=k).map(|i| format!("{point}#{i}")).collect()
    }
}

pub fn restriction(
    curve: &ParamPlaneCurve,
    arrangement: &[PlaneDivisorComponent],
    variant: Variant,
) -> Result<Restriction> {
    if variant == Variant::Z {
        if let Some(c) = arrangement.iter().find(|c| !c.mult.is_integral()) {
            return Err(non_integral(&c.label, &c.mult));
        }
    }
    let mults: BTreeMap<&str, &Multiplicity> =
        arrangement.iter().map(|c| (c.label.as_str(), &c.mult)).collect();
    let mut points = Vec::new();
    let mut marks = OrbifoldDivisor::new();
    for record in contact_orders(curve, arrangement)? {
        let mult = record_multiplicity(&record, &mults, variant)?;
        for label in point_labels(&record.point) {
            marks.insert(label, mult.clone());
        }
        points.push(RestrictedPoint { record, mult });
    }
    Ok(Restriction {
        variant,
        points,
        orbifold: CurveOrbifold::new(0, marks),
    })
}

/// `Δ_C`: the smallest integral divisor making `g` a divisible orbifold morphism.
pub fn restrict_z(curve: &ParamPlaneCurve, arrangement: &[PlaneDivisorComponent]) -> Result<CurveOrbifold> {
    Ok(restriction(curve, arrangement, Variant::Z)?.orbifold)
}

/// `Δ_C^Q` with `m(a) = max_j m_j / t_{j,a}`, clamped below at 1.
pub fn restrict_q(curve: &ParamPlaneCurve, arrangement: &[PlaneDivisorComponent]) -> Result<CurveOrbifold> {
    Ok(restriction(curve, arrangement, Variant::Q)?.orbifold)
}

/// `κ(C | Δ_C) = -∞` for the chosen restriction.
pub fn is_delta_rational(
    curve: &ParamPlaneCurve,
    arrangement: &[PlaneDivisorComponent],
    variant: Variant,
) -> Result<bool> {
    Ok(restriction(curve, arrangement, variant)?.orbifold.is_rational())
}
