//! Medial-axis extraction near the origin.
//!
//! Two independent methods produce verified samples of `M_X`:
//! a brute-force grid oracle ([`grid_medial_scan`]) that detects
//! discontinuities of the closest-point map between adjacent grid points and
//! refines each crossing onto the equidistance locus, and a
//! predictor–corrector tracer ([`trace_conflict_set`]) that marches the
//! conflict set of a pair of branches from the window boundary toward the
//! origin. Every emitted sample carries a proximal-inequality certificate.

mod region;
mod scan;
mod trace;

pub use region::RegionGeometry;
pub use scan::{grid_medial_scan, single_branch_medial_scan, GridScanConfig};
pub use trace::{trace_conflict_set, ConflictTrace, TraceConfig, TraceTermination};

use thiserror::Error;

use crate::curve::PlaneCurveGerm;
use crate::dist::{ClosestPointCluster, ClosestPointSet, DistError, DistanceField};
use crate::geom::Point2;
use crate::scalar::Real;

/// Proximal-inequality residual above which a candidate is rejected as a
/// numerical artifact rather than emitted as a medial sample.
pub const RESIDUAL_CERT: f64 = 1e-8;
/// Clearance below which the maximal-ball check counts as violated.
pub const CLEARANCE_CERT: f64 = -1e-9;
/// Reach verdict: the finest-window minimum sample norm must drop below
/// this fraction of the base window radius.
pub const REACH_NORM_FACTOR: f64 = 1e-3;
/// Reach verdict: `bounded away` requires every window minimum to stay
/// above this fraction of the base window radius.
pub const BOUNDED_AWAY_FACTOR: f64 = 0.05;
/// Relative parameter laps between window radii (`r_k = r_0·2^{-k}`).
pub const DEFAULT_HALVINGS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MedialError {
    #[error("window radius {window} exceeds half the curve domain {half_domain}")]
    WindowExceedsDomain { window: f64, half_domain: f64 },
    #[error("grid resolution {0} is below the minimum of 64")]
    ResolutionTooCoarse(usize),
    #[error("operation requires a single-branch curve, got {0} branches")]
    NotSingleBranch(usize),
    #[error("branch pair ({0}, {1}) does not delimit a region")]
    InvalidPair(usize, usize),
    #[error("march step {step} exceeds the maximum {max} for this window")]
    StepTooLarge { step: f64, max: f64 },
    #[error(
        "{count} medial samples violate the single-branch quadrant exclusion (first at ({x}, {y}))"
    )]
    QuadrantExclusionViolated { count: usize, x: f64, y: f64 },
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// Sample-level flags aggregated from the clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SampleFlags {
    /// Some cluster sits at the truncation end `t = ε`.
    pub boundary_artifact: bool,
    /// Some cluster sits at the origin.
    pub touches_origin: bool,
}

/// A verified medial-axis point with its closest-point clusters and the
/// proximal-inequality certificate computed at creation.
#[derive(Debug, Clone, PartialEq)]
pub struct MedialSample<T> {
    pub point: Point2<T>,
    pub distance: T,
    pub clusters: Vec<ClosestPointCluster<T>>,
    pub flags: SampleFlags,
    /// Certificate: max proximal-inequality residual over probes, `≤ 1e-8`.
    pub residual: T,
    /// Grid cell of the sample when it came from a scan.
    pub cell: Option<(i64, i64)>,
    pub(crate) shifted_h: T,
}

impl<T: Real> MedialSample<T> {
    /// Certifies a closest-point set as a medial sample. Returns `None`
    /// when the set has fewer than two non-artifact clusters or fails the
    /// proximal-inequality certificate.
    pub fn certify(
        set: &ClosestPointSet<T>,
        field: &DistanceField<'_, T>,
        probes_per_branch: usize,
    ) -> Option<Self> {
        if set.effective_cluster_count() < 2 || set.distance == T::zero() {
            return None;
        }
        let residual = field.proximal_residual(set, probes_per_branch).ok()?;
        if residual > T::of(RESIDUAL_CERT) {
            return None;
        }
        Some(Self {
            point: set.query,
            distance: set.distance,
            clusters: set.clusters.clone(),
            flags: SampleFlags {
                boundary_artifact: set.has_boundary_artifact(),
                touches_origin: set.touches_origin(),
            },
            residual,
            cell: None,
            shifted_h: set.h_best,
        })
    }

    pub fn has_cluster_on_branch(&self, branch: usize) -> bool {
        self.clusters.iter().any(|c| c.branch == branch)
    }

    /// Whether the sample counts for reach verdicts: an origin-touching
    /// sample needs a second non-origin cluster.
    pub fn counts_for_reach(&self) -> bool {
        if !self.flags.touches_origin {
            return true;
        }
        self.clusters
            .iter()
            .filter(|c| !c.is_origin() && !c.boundary_artifact)
            .count()
            >= 1
    }

    /// Largest margin of the ratio bound `‖b‖/‖a‖ ≤ 2·cos∠(b, a)` over the
    /// sample's non-origin clusters.
    pub fn ratio_bound_margin(&self) -> Option<T> {
        crate::dist::ratio_bound_margin(&self.as_set())
    }

    fn as_set(&self) -> ClosestPointSet<T> {
        ClosestPointSet {
            query: self.point,
            distance: self.distance,
            clusters: self.clusters.clone(),
            h_best: self.shifted_h,
        }
    }
}

/// Maximum proximal-inequality residual of a sample against the full curve.
pub fn proximal_inequality_residual<T: Real>(
    sample: &MedialSample<T>,
    curve: &PlaneCurveGerm<T>,
    probe_count: usize,
) -> Result<T, MedialError> {
    let field = DistanceField::new(curve, T::of(1e-12))?;
    Ok(field.proximal_residual(&sample.as_set(), probe_count)?)
}

/// Minimum over probe points `c` on the curve of `‖c − a‖ − d(a, X)`;
/// values `≥ −1e-9` certify that the open ball around the sample avoids
/// the probed curve.
pub fn maximal_ball_clearance<T: Real>(
    sample: &MedialSample<T>,
    curve: &PlaneCurveGerm<T>,
    probes: usize,
) -> Result<T, MedialError> {
    let field = DistanceField::new(curve, T::of(1e-12))?;
    Ok(field.clearance(&sample.as_set(), probes)?)
}

/// Same as [`maximal_ball_clearance`] against a prebuilt field.
pub fn clearance_with_field<T: Real>(
    sample: &MedialSample<T>,
    field: &DistanceField<'_, T>,
    probes: usize,
) -> Result<T, MedialError> {
    Ok(field.clearance(&sample.as_set(), probes)?)
}

/// Reach verdict for the origin from a shrinking-window scan schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReachVerdict {
    Reaches,
    BoundedAway,
    Inconclusive,
}

impl std::fmt::Display for ReachVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReachVerdict::Reaches => write!(f, "reaches"),
            ReachVerdict::BoundedAway => write!(f, "bounded away"),
            ReachVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Per-window minimum sample norms plus the verdict they imply.
#[derive(Debug, Clone)]
pub struct ReachAnalysis<T> {
    /// `(window radius, min ‖a‖ over verified samples)`, `None` when the
    /// window holds no sample.
    pub per_window: Vec<(T, Option<T>)>,
    pub verdict: ReachVerdict,
    /// Samples of the finest window, kept for downstream estimation.
    pub finest_samples: Vec<MedialSample<T>>,
}

/// Minimum verified-sample norm per analysis window.
///
/// Radii must be decreasing. Produces one `(radius, min ‖a‖)` entry per
/// radius with `None` standing for an empty window.
pub fn nearest_medial_distance<T: Real>(
    curve: &PlaneCurveGerm<T>,
    radii: &[T],
    base: &GridScanConfig<T>,
) -> Result<Vec<(T, Option<T>)>, MedialError> {
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let cfg = base.with_window(r, curve);
        let samples = grid_medial_scan(curve, &cfg)?;
        out.push((r, min_reach_norm(&samples)));
    }
    Ok(out)
}

pub(crate) fn min_reach_norm<T: Real>(samples: &[MedialSample<T>]) -> Option<T> {
    samples
        .iter()
        .filter(|s| s.counts_for_reach())
        .map(|s| s.point.norm())
        .min_by(|a, b| a.partial_cmp(b).unwrap())
}

/// Runs the halving-window schedule and decides whether the medial axis
/// reaches the origin.
pub fn analyze_reach<T: Real>(
    curve: &PlaneCurveGerm<T>,
    base: &GridScanConfig<T>,
    halvings: usize,
) -> Result<ReachAnalysis<T>, MedialError> {
    let r0 = base.window_radius;
    let mut per_window = Vec::with_capacity(halvings + 1);
    let mut finest_samples = Vec::new();
    for k in 0..=halvings {
        let r = r0 * T::of(0.5f64.powi(k as i32));
        let cfg = base.with_window(r, curve);
        let samples = grid_medial_scan(curve, &cfg)?;
        per_window.push((r, min_reach_norm(&samples)));
        if k == halvings {
            finest_samples = samples;
        }
    }
    let verdict = reach_verdict(&per_window, r0, base.resolution);
    Ok(ReachAnalysis {
        per_window,
        verdict,
        finest_samples,
    })
}

/// Verdict rule: `reaches` needs the finest-window minimum below
/// `1e-3·r₀` and an average decrease of at least 2× per window halving
/// (measured with one grid pitch of slack at either end, the scan's own
/// completeness limit); `bounded away` needs every window minimum above
/// `0.05·r₀`.
pub fn reach_verdict<T: Real>(
    per_window: &[(T, Option<T>)],
    r0: T,
    resolution: usize,
) -> ReachVerdict {
    let pitch_of = |r: T| T::two() * r / T::of((resolution - 1) as f64);
    let finest = per_window.last().expect("at least one window");
    if let Some(m_fine) = finest.1 {
        if m_fine < T::of(REACH_NORM_FACTOR) * r0 {
            // geometric decrease, endpoints corrected by one pitch
            let first_finite = per_window
                .iter()
                .enumerate()
                .find_map(|(k, (r, m))| m.map(|m| (k, *r, m)));
            if let Some((k0, r_first, m_first)) = first_finite {
                let k_fine = per_window.len() - 1;
                if k_fine > k0 {
                    let halvings = (k_fine - k0) as f64;
                    let hi = (m_first + pitch_of(r_first)).as_f64();
                    let lo = (m_fine - pitch_of(finest.0)).max(T::of(1e-300)).as_f64();
                    if (hi / lo).powf(1.0 / halvings) >= 2.0 {
                        return ReachVerdict::Reaches;
                    }
                }
            }
        }
    }
    let bound = T::of(BOUNDED_AWAY_FACTOR) * r0;
    if per_window.iter().all(|(_, m)| m.map_or(true, |v| v > bound)) {
        return ReachVerdict::BoundedAway;
    }
    ReachVerdict::Inconclusive
}
