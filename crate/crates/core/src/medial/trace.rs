//! Predictor–corrector tracer for the conflict set of a branch pair.
//!
//! The equidistance locus `{d(·, Γᵢ) = d(·, Γⱼ)}` is picked up on the
//! window boundary and marched toward the origin: predict along the current
//! direction, correct transversally by a bracketed root search on the
//! difference of branch-restricted shifted squared distances. Every
//! accepted point is certified against the full curve and dropped (with the
//! march terminated) when a third branch is strictly closer or the contacts
//! merge.

use crate::curve::PlaneCurveGerm;
use crate::dist::{DistanceField, ScanWorkspace};
use crate::geom::{ccw_delta, normalize_angle, Point2};
use crate::scalar::Real;

use super::{MedialError, MedialSample, RegionGeometry};

#[derive(Debug, Clone, Copy)]
pub struct TraceConfig<T> {
    pub window_radius: T,
    /// March step; must not exceed `window/50`.
    pub step: T,
    pub tol: T,
    pub probe_count: usize,
}

impl<T: Real> TraceConfig<T> {
    pub fn new(window_radius: T, step: T) -> Self {
        Self {
            window_radius,
            step,
            tol: T::of(1e-12),
            probe_count: crate::dist::DEFAULT_PROBES,
        }
    }
}

/// Why a march stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceTermination {
    /// Reached `‖x‖ < step`; the locus runs into the origin.
    ReachedCenter,
    /// The locus left the region between the branch pair.
    ExitedRegion,
    /// The transverse corrector could not bracket a sign change; the
    /// polyline holds everything up to the last good sample.
    CorrectorFailed,
    /// A third branch became strictly closer or the two contacts merged.
    CertificationFailed,
    /// Step budget exhausted.
    StepLimit,
    /// No certified starting point on the window boundary; the region's
    /// conflict set is empty or degenerate there.
    NoStartFound,
}

/// Polyline of verified medial samples along one branch-pair conflict set.
#[derive(Debug, Clone)]
pub struct ConflictTrace<T> {
    pub pair: (usize, usize),
    /// Cyclic region position of `D(Γᵢ, Γⱼ)`.
    pub region: usize,
    pub polyline: Vec<MedialSample<T>>,
    pub termination: TraceTermination,
    /// Radius at which the march started (the largest radius where the
    /// angular arrangement still matches the tangent cone).
    pub start_radius: T,
}

/// Traces the conflict set of the region delimited by the cyclically
/// consecutive branch pair `(i, j)` from the window boundary toward the
/// origin.
pub fn trace_conflict_set<T: Real>(
    curve: &PlaneCurveGerm<T>,
    pair: (usize, usize),
    cfg: &TraceConfig<T>,
) -> Result<ConflictTrace<T>, MedialError> {
    let (i, j) = pair;
    let k = curve.branch_count();
    if i >= k || j >= k || i == j || k < 2 || curve.cyclic_successor(i) != j {
        return Err(MedialError::InvalidPair(i, j));
    }
    let max_step = cfg.window_radius / T::of(50.0);
    if cfg.step > max_step * T::of(1.0 + 1e-12) {
        return Err(MedialError::StepTooLarge {
            step: cfg.step.as_f64(),
            max: max_step.as_f64(),
        });
    }
    let half = curve.min_domain_length().half();
    if cfg.window_radius > half * T::of(1.0 + 1e-12) {
        return Err(MedialError::WindowExceedsDomain {
            window: cfg.window_radius.as_f64(),
            half_domain: half.as_f64(),
        });
    }

    let geometry = RegionGeometry::new(curve);
    let region = geometry
        .position_of_pair(i, j)
        .ok_or(MedialError::InvalidPair(i, j))?;
    let field = DistanceField::new(curve, cfg.tol)?;
    let mut ws = ScanWorkspace::new();

    let Some(start_radius) = geometry.safe_radius(cfg.window_radius) else {
        return Ok(ConflictTrace {
            pair,
            region,
            polyline: Vec::new(),
            termination: TraceTermination::NoStartFound,
            start_radius: cfg.window_radius,
        });
    };

    let Some(start) = find_start(&field, &geometry, pair, start_radius, cfg, &mut ws)
    else {
        return Ok(ConflictTrace {
            pair,
            region,
            polyline: Vec::new(),
            termination: TraceTermination::NoStartFound,
            start_radius,
        });
    };

    let mut polyline = Vec::new();
    let mut x = start;
    let mut direction = initial_direction(&field, pair, x, &mut ws);
    let h = cfg.step;
    let max_steps = ((start_radius / h).as_f64() as usize) * 64 + 4096;
    let mut termination = TraceTermination::StepLimit;

    for _ in 0..max_steps {
        let predicted = x + direction * h;
        let normal = direction.perp();
        let Some(corrected) = correct(&field, pair, predicted, normal, h, &mut ws) else {
            termination = TraceTermination::CorrectorFailed;
            break;
        };
        if corrected.norm() < h {
            // inside the terminal disk the angular region test is noise
            termination = TraceTermination::ReachedCenter;
            break;
        }
        if corrected.norm() > start_radius * T::of(1.05)
            || geometry.locate(corrected) != Some(region)
        {
            termination = TraceTermination::ExitedRegion;
            break;
        }
        let detailed = field.closest_with_window_ws(corrected, T::zero(), &mut ws);
        let sample = MedialSample::certify(&detailed.set, &field, cfg.probe_count);
        let ok = sample.as_ref().is_some_and(|s| {
            (s.has_cluster_on_branch(i) && s.has_cluster_on_branch(j)) || s.flags.touches_origin
        });
        if !ok {
            termination = TraceTermination::CertificationFailed;
            break;
        }
        polyline.push(sample.expect("checked above"));
        if let Some(dir) = (corrected - x).unit() {
            direction = dir;
        }
        x = corrected;
        if x.norm() <= h * T::of(1.0 + 1e-9) {
            termination = TraceTermination::ReachedCenter;
            break;
        }
    }

    Ok(ConflictTrace {
        pair,
        region,
        polyline,
        termination,
        start_radius,
    })
}

/// Difference of branch-restricted shifted squared distances; its zero set
/// is the conflict locus of the pair.
fn restricted_diff<T: Real>(
    field: &DistanceField<'_, T>,
    pair: (usize, usize),
    q: Point2<T>,
    ws: &mut ScanWorkspace<T>,
) -> T {
    let hi = field.closest_on_branch_ws(q, pair.0, ws).h;
    let hj = field.closest_on_branch_ws(q, pair.1, ws).h;
    hi - hj
}

fn find_start<T: Real>(
    field: &DistanceField<'_, T>,
    geometry: &RegionGeometry<'_, T>,
    pair: (usize, usize),
    radius: T,
    cfg: &TraceConfig<T>,
    ws: &mut ScanWorkspace<T>,
) -> Option<Point2<T>> {
    const ARC_SAMPLES: usize = 720;
    const MAX_CERT_ATTEMPTS: usize = 32;
    let lo = geometry.branch_angle_at_radius(pair.0, radius)?;
    let hi = geometry.branch_angle_at_radius(pair.1, radius)?;
    let width = ccw_delta(lo, hi);
    let margin = width * T::of(1e-3);
    let at = |theta: T| Point2::from_angle(normalize_angle(theta)) * radius;

    let mut attempts = 0;
    let mut prev_theta = lo + margin;
    let mut prev_g = restricted_diff(field, pair, at(prev_theta), ws);
    for s in 1..ARC_SAMPLES {
        let theta = lo + margin
            + (width - T::two() * margin) * T::of(s as f64 / (ARC_SAMPLES - 1) as f64);
        let g = restricted_diff(field, pair, at(theta), ws);
        if (prev_g <= T::zero()) != (g <= T::zero()) {
            // bisect the angular bracket
            let (mut a, mut b, mut ga) = (prev_theta, theta, prev_g);
            for _ in 0..60 {
                let m = (a + b).half();
                let gm = restricted_diff(field, pair, at(m), ws);
                if (ga <= T::zero()) == (gm <= T::zero()) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            let root = at((a + b).half());
            let detailed = field.closest_with_window_ws(root, T::zero(), ws);
            if let Some(sample) = MedialSample::certify(&detailed.set, field, cfg.probe_count) {
                if (sample.has_cluster_on_branch(pair.0) && sample.has_cluster_on_branch(pair.1))
                    || sample.flags.touches_origin
                {
                    return Some(root);
                }
            }
            attempts += 1;
            if attempts >= MAX_CERT_ATTEMPTS {
                return None;
            }
        }
        prev_theta = theta;
        prev_g = g;
    }
    None
}

/// Locus tangent at the start, oriented toward the origin.
fn initial_direction<T: Real>(
    field: &DistanceField<'_, T>,
    pair: (usize, usize),
    x: Point2<T>,
    ws: &mut ScanWorkspace<T>,
) -> Point2<T> {
    let bi = field.closest_on_branch_ws(x, pair.0, ws);
    let bj = field.closest_on_branch_ws(x, pair.1, ws);
    let gi = (x - bi.point) / bi.distance.max(T::of(1e-300));
    let gj = (x - bj.point) / bj.distance.max(T::of(1e-300));
    let normal = gi - gj;
    let tangent = normal.perp().unit().unwrap_or(Point2::new(-T::one(), T::zero()));
    let inward = -(x.unit().unwrap_or(Point2::new(T::one(), T::zero())));
    if tangent.dot(inward) >= T::zero() {
        tangent
    } else {
        -tangent
    }
}

/// Transverse corrector: brackets and bisects the restricted difference
/// along the normal through the predicted point.
fn correct<T: Real>(
    field: &DistanceField<'_, T>,
    pair: (usize, usize),
    predicted: Point2<T>,
    normal: Point2<T>,
    h: T,
    ws: &mut ScanWorkspace<T>,
) -> Option<Point2<T>> {
    let g = |s: T, ws: &mut ScanWorkspace<T>| restricted_diff(field, pair, predicted + normal * s, ws);
    let mut span = h;
    let (mut lo, mut hi, mut glo) = loop {
        let glo = g(-span, ws);
        let ghi = g(span, ws);
        if (glo <= T::zero()) != (ghi <= T::zero()) {
            break (-span, span, glo);
        }
        span = span * T::two();
        if span > h * T::of(4.0) {
            return None;
        }
    };
    let d_scale = field.closest_on_branch_ws(predicted, pair.0, ws).distance;
    let stop = T::of(4e-10) * d_scale * (T::one() + d_scale);
    let mut mid = (lo + hi).half();
    for _ in 0..64 {
        mid = (lo + hi).half();
        let gm = g(mid, ws);
        if gm.abs() <= stop {
            break;
        }
        if (gm <= T::zero()) == (glo <= T::zero()) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Some(predicted + normal * mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::BranchGerm;
    use std::f64::consts::FRAC_PI_4;

    fn two_lines() -> PlaneCurveGerm<f64> {
        PlaneCurveGerm::new(vec![
            BranchGerm::half_line(FRAC_PI_4, 1.0).unwrap(),
            BranchGerm::half_line(-FRAC_PI_4, 1.0).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn two_line_bisector_is_traced_exactly() {
        let curve = two_lines();
        // +x wedge is the region from branch 1 (7π/4) to branch 0 (π/4)
        let cfg = TraceConfig::new(0.5, 0.5 / 128.0);
        let trace = trace_conflict_set(&curve, (1, 0), &cfg).unwrap();
        assert_eq!(trace.termination, TraceTermination::ReachedCenter);
        assert!(trace.polyline.len() > 30);
        for s in &trace.polyline {
            assert!(s.point.y.abs() <= 1e-9, "off-bisector point {:?}", s.point);
            assert!(s.has_cluster_on_branch(0) && s.has_cluster_on_branch(1));
        }
        // consecutive points are closer than the march step allows for
        for w in trace.polyline.windows(2) {
            assert!(w[0].point.dist(w[1].point) <= 2.0 * cfg.step);
        }
    }

    #[test]
    fn rejects_invalid_pairs() {
        let curve = two_lines();
        let cfg = TraceConfig::new(0.5, 0.5 / 128.0);
        assert!(matches!(
            trace_conflict_set(&curve, (0, 0), &cfg),
            Err(MedialError::InvalidPair(0, 0))
        ));
        assert!(matches!(
            trace_conflict_set(&curve, (0, 5), &cfg),
            Err(MedialError::InvalidPair(0, 5))
        ));
        let single =
            PlaneCurveGerm::new(vec![BranchGerm::power(1.0, 3, 2, 0.0, 1.0).unwrap()]).unwrap();
        assert!(matches!(
            trace_conflict_set(&single, (0, 1), &cfg),
            Err(MedialError::InvalidPair(0, 1))
        ));
    }

    #[test]
    fn rejects_oversized_step() {
        let curve = two_lines();
        let cfg = TraceConfig::new(0.5, 0.05);
        assert!(matches!(
            trace_conflict_set(&curve, (1, 0), &cfg),
            Err(MedialError::StepTooLarge { .. })
        ));
    }

    #[test]
    fn non_contributing_region_yields_no_start() {
        // upper 3π/2 wedge of the two-line curve has no conflict locus
        let curve = two_lines();
        let cfg = TraceConfig::new(0.5, 0.5 / 128.0);
        let trace = trace_conflict_set(&curve, (0, 1), &cfg).unwrap();
        assert_eq!(trace.termination, TraceTermination::NoStartFound);
        assert!(trace.polyline.is_empty());
    }
}
