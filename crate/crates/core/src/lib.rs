//! Germ-local medial axis laboratory for plane curves.
//!
//! The objects of study are finite unions of *branches*: curves ending at the
//! origin, each given in a canonical frame as the graph `t ↦ (t, Σ aᵢ t^αᵢ)`
//! with exact rational exponents `αᵢ > 1`, then rotated into world
//! coordinates. For such a curve `X` the crate computes, near the origin:
//!
//! * distances `d(x, X)` and closest-point sets `m(x)` with reliable
//!   detection of multiple global minimizers ([`dist`]);
//! * the medial axis `M_X = { x : #m(x) > 1 }` by a brute-force grid oracle
//!   and by a conflict-set tracer for pairs of branches ([`medial`]);
//! * symbolic predictions of the local structure of `M_X` — reach of the
//!   origin, tangent cone directions, branch-count bound — from the
//!   superquadraticity of the branches ([`germ`]);
//! * numerical estimates of the same quantities from medial samples, and a
//!   comparison report ([`verify`]).
//!
//! The numeric kernel is generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); exponents are exact `p/q` rationals throughout so that
//! the `α = 2` boundary is decided symbolically, never by a float. The
//! aliases below fix `f64`, which is what the tolerances shipped with the
//! crate are calibrated for.

pub mod curve;
pub mod dist;
pub mod geom;
pub mod germ;
pub mod medial;
pub mod scalar;
pub mod verify;

pub use scalar::Real;

/// Exact rational exponent of a power term.
pub type Exponent = num_rational::Ratio<i64>;

/// Default scalar used by the concrete aliases.
pub type Scalar = f64;

pub type Point = geom::Point2<Scalar>;
pub type PowerTerm = curve::PowerTerm<Scalar>;
pub type BranchGerm = curve::BranchGerm<Scalar>;
pub type PlaneCurveGerm = curve::PlaneCurveGerm<Scalar>;
pub type ClosestPointCluster = dist::ClosestPointCluster<Scalar>;
pub type ClosestPointSet = dist::ClosestPointSet<Scalar>;
pub type DistanceField<'a> = dist::DistanceField<'a, Scalar>;
pub type MedialSample = medial::MedialSample<Scalar>;
pub type ConflictTrace = medial::ConflictTrace<Scalar>;
pub type DirectionFan = germ::DirectionFan<Scalar>;
pub type SuperquadraticVerdict = germ::SuperquadraticVerdict<Scalar>;
pub type RegionReport = germ::RegionReport<Scalar>;
pub type VerificationReport = verify::VerificationReport<Scalar>;
