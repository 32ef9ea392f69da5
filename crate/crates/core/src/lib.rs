//! Exact calculus for geometric orbifold pairs `(X | Δ)`.
//!
//! All quantities are exact: multiplicities are rationals `≥ 1` or `∞`, and
//! every sign decision (canonical dimension, Fano test, rationality) is made
//! on exact rationals.

pub mod curve;
pub mod divisor;
pub mod error;
pub mod fibration;
pub mod mordell;
pub mod multiplicity;
pub mod plane;
pub mod poly;
pub mod restrict;
pub mod symdiff;

pub use curve::{CurveOrbifold, Kappa, SphericalFamily, SphericalProfile};
pub use divisor::{divisor_leq, Label, OrbifoldDivisor};
pub use error::{Error, Result};
pub use fibration::{
    BaseMode, ComposedBase, FiberComponent, FibrationData, LowerTerm, MorphismData, MorphismMode,
    MorphismPair, MorphismReport, PairCheck, TwoStageData,
};
pub use multiplicity::Multiplicity;
pub use plane::{ArrangementComponent, FamilyDimension, PlaneArrangementPair};
pub use restrict::{ContactRecord, ParamPlaneCurve, PlaneDivisorComponent, Restriction, Variant};
pub use mordell::{ClassicalWitness, DensityReport, OrbifoldP1Triple, RationalPoint, Sign};
pub use symdiff::{
    EnumerationLimits, ExponentProfile, MultiIndexJ, PositiveFloorReport, RelativeExponent,
    SweepReport,
};
