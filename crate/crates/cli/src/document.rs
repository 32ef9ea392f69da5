//! Parsed spec files: named declarations in source order.

use std::fmt;

use orbicalc_core::poly::Form;
use orbicalc_core::{
    ArrangementComponent, CurveOrbifold, Error, FiberComponent, FibrationData, Label, LowerTerm,
    MorphismData, MorphismPair, Multiplicity, OrbifoldDivisor, OrbifoldP1Triple, ParamPlaneCurve,
    PlaneArrangementPair, PlaneDivisorComponent, Result, TwoStageData,
};

use crate::diagnostic::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveDecl {
    pub name: String,
    pub genus: u32,
    pub points: Vec<(Label, Multiplicity)>,
}

impl CurveDecl {
    pub fn to_curve(&self) -> CurveOrbifold {
        CurveOrbifold::new(self.genus, self.points.iter().cloned().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneComponentDecl {
    pub label: Label,
    pub degree: u32,
    pub mult: Multiplicity,
    /// Defining equation in `x0, x1, x2`, needed only for restrictions.
    pub form: Option<Form>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneDecl {
    pub name: String,
    pub components: Vec<PlaneComponentDecl>,
}

impl PlaneDecl {
    pub fn to_pair(&self) -> Result<PlaneArrangementPair> {
        PlaneArrangementPair::new(self.components.iter().map(|c| ArrangementComponent {
            label: c.label.clone(),
            degree: c.degree,
            mult: c.mult.clone(),
        }))
    }

    /// Components with their equations, for restriction to curves.
    pub fn to_divisor(&self) -> Result<Vec<PlaneDivisorComponent>> {
        self.components
            .iter()
            .map(|c| {
                let form = c.form.clone().ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "component `{}` of plane `{}` has no `form` equation",
                        c.label, self.name
                    ))
                })?;
                PlaneDivisorComponent::new(c.label.clone(), form, c.mult.clone())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationDecl {
    pub name: String,
    /// Fibre label and its `(t, m)` components.
    pub fibers: Vec<(Label, Vec<(u64, Multiplicity)>)>,
}

impl FibrationDecl {
    pub fn to_data(&self) -> Result<FibrationData> {
        let fibers = self
            .fibers
            .iter()
            .map(|(label, parts)| {
                let comps = parts
                    .iter()
                    .map(|(t, m)| FiberComponent::new(*t, m.clone()))
                    .collect::<Result<Vec<_>>>()?;
                Ok((label.clone(), comps))
            })
            .collect::<Result<Vec<_>>>()?;
        FibrationData::new(fibers)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStageDecl {
    pub name: String,
    /// Divisor on the final base and its `(s, Y-label)` terms.
    pub lower: Vec<(Label, Vec<(u64, Label)>)>,
    /// Name of the fibration declaration for the first stage.
    pub upper: String,
}

impl TwoStageDecl {
    pub fn to_data(&self, upper: &FibrationDecl) -> Result<TwoStageData> {
        let lower = self.lower.iter().map(|(label, terms)| {
            let terms = terms
                .iter()
                .map(|(s, y)| LowerTerm { s: *s, y_label: y.clone() })
                .collect();
            (label.clone(), terms)
        });
        TwoStageData::new(upper.to_data()?, lower)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: String,
    pub pairs: Vec<MorphismPair>,
    pub delta_x: Vec<(Label, Multiplicity)>,
    pub delta_y: Vec<(Label, Multiplicity)>,
}

impl MorphismDecl {
    pub fn to_data(&self) -> Result<MorphismData> {
        let dx: OrbifoldDivisor = self.delta_x.iter().cloned().collect();
        let dy: OrbifoldDivisor = self.delta_y.iter().cloned().collect();
        MorphismData::new(self.pairs.clone(), dx, dy)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCurveDecl {
    pub name: String,
    /// `x0, x1, x2` as forms in `s, u`.
    pub coords: [Form; 3],
}

impl ParamCurveDecl {
    pub fn to_curve(&self) -> Result<ParamPlaneCurve> {
        ParamPlaneCurve::from_forms([&self.coords[0], &self.coords[1], &self.coords[2]])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MordellDecl {
    pub name: String,
    pub triple: OrbifoldP1Triple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Curve(CurveDecl),
    Plane(PlaneDecl),
    Fibration(FibrationDecl),
    TwoStage(TwoStageDecl),
    Morphism(MorphismDecl),
    ParamCurve(ParamCurveDecl),
    Mordell(MordellDecl),
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Curve(d) => &d.name,
            Decl::Plane(d) => &d.name,
            Decl::Fibration(d) => &d.name,
            Decl::TwoStage(d) => &d.name,
            Decl::Morphism(d) => &d.name,
            Decl::ParamCurve(d) => &d.name,
            Decl::Mordell(d) => &d.name,
        }
    }

    /// The declaration keyword.
    pub fn kind(&self) -> &'static str {
        match self {
            Decl::Curve(_) => "curve",
            Decl::Plane(_) => "plane",
            Decl::Fibration(_) => "fibration",
            Decl::TwoStage(_) => "twostage",
            Decl::Morphism(_) => "morphism",
            Decl::ParamCurve(_) => "paramcurve",
            Decl::Mordell(_) => "mordell",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecDocument {
    pub decls: Vec<Decl>,
    /// Position of each declaration keyword, parallel to `decls`.
    pub spans: Vec<Span>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LookupError {
    Missing(String),
    WrongKind { name: String, expected: &'static str, found: &'static str },
}

impl fmt::Display for LookupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LookupError::Missing(name) => write!(f, "no declaration named `{name}`"),
            LookupError::WrongKind { name, expected, found } => {
                write!(f, "`{name}` is a {found}, expected a {expected}")
            }
        }
    }
}

macro_rules! getter {
    ($fn:ident, $variant:ident, $ty:ty, $kind:literal) => {
        pub fn $fn(&self, name: &str) -> std::result::Result<&$ty, LookupError> {
            match self.get(name) {
                Some(Decl::$variant(d)) => Ok(d),
                Some(other) => Err(LookupError::WrongKind {
                    name: name.to_string(),
                    expected: $kind,
                    found: other.kind(),
                }),
                None => Err(LookupError::Missing(name.to_string())),
            }
        }
    };
}

impl SpecDocument {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name() == name)
    }

    getter!(curve, Curve, CurveDecl, "curve");
    getter!(plane, Plane, PlaneDecl, "plane");
    getter!(fibration, Fibration, FibrationDecl, "fibration");
    getter!(twostage, TwoStage, TwoStageDecl, "twostage");
    getter!(morphism, Morphism, MorphismDecl, "morphism");
    getter!(paramcurve, ParamCurve, ParamCurveDecl, "paramcurve");
    getter!(mordell, Mordell, MordellDecl, "mordell");
}

fn write_marks(f: &mut fmt::Formatter<'_>, indent: &str, marks: &[(Label, Multiplicity)]) -> fmt::Result {
    for (label, m) in marks {
        writeln!(f, "{indent}{label} mult {m};")?;
    }
    Ok(())
}

/// Canonical spec-file syntax; parsing the output gives back the same declaration.
impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {{", self.kind(), self.name())?;
        match self {
            Decl::Curve(d) => {
                writeln!(f, "  genus {};", d.genus)?;
                for (label, m) in &d.points {
                    writeln!(f, "  point {label} mult {m};")?;
                }
            }
            Decl::Plane(d) => {
                for c in &d.components {
                    write!(f, "  component {} degree {} mult {}", c.label, c.degree, c.mult)?;
                    if let Some(form) = &c.form {
                        write!(f, " form {form}")?;
                    }
                    writeln!(f, ";")?;
                }
            }
            Decl::Fibration(d) => {
                for (label, parts) in &d.fibers {
                    writeln!(f, "  over {label} {{")?;
                    for (t, m) in parts {
                        writeln!(f, "    part t {t} mult {m};")?;
                    }
                    writeln!(f, "  }}")?;
                }
            }
            Decl::TwoStage(d) => {
                for (label, terms) in &d.lower {
                    writeln!(f, "  lower {label} {{")?;
                    for (s, y) in terms {
                        writeln!(f, "    s {s} -> {y};")?;
                    }
                    writeln!(f, "  }}")?;
                }
                writeln!(f, "  upper = {};", d.upper)?;
            }
            Decl::Morphism(d) => {
                for p in &d.pairs {
                    writeln!(f, "  pair {} {} t {};", p.y_label, p.x_label, p.t)?;
                }
                writeln!(f, "  dX {{")?;
                write_marks(f, "    ", &d.delta_x)?;
                writeln!(f, "  }}")?;
                writeln!(f, "  dY {{")?;
                write_marks(f, "    ", &d.delta_y)?;
                writeln!(f, "  }}")?;
            }
            Decl::ParamCurve(d) => {
                for (i, c) in d.coords.iter().enumerate() {
                    writeln!(f, "  x{i} = {c};")?;
                }
            }
            Decl::Mordell(d) => {
                let t = &d.triple;
                writeln!(f, "  p {};", t.p())?;
                writeln!(f, "  q {};", t.q())?;
                writeln!(f, "  r {};", t.r())?;
            }
        }
        writeln!(f, "}}")
    }
}

impl fmt::Display for SpecDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.decls.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}
