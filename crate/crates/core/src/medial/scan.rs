//! Brute-force grid oracle for medial samples.
//!
//! The scan walks an `n×n` grid over the analysis window and records, per
//! grid point, the best contact of the distance function at node
//! resolution. The medial axis is exactly the discontinuity locus of the
//! closest-point map, so every adjacent pair of grid points whose contacts
//! jump (different branch, or a structural parameter jump on one branch)
//! brackets a crossing; the crossing is refined onto the equidistance locus
//! of the two contacts by a bracketed secant iteration and then certified
//! against the full curve.

use rayon::prelude::*;

use crate::curve::{BranchGerm, PlaneCurveGerm};
use crate::dist::{golden_min, h_eval, DistanceField, ScanWorkspace};
use crate::geom::Point2;
use crate::scalar::Real;

use super::{MedialError, MedialSample};

/// Window the refinement tolerance starts tightening below, relative to
/// the curve domain.
const TOL_TIGHTEN_REL: f64 = 1e-4;
/// Relative parameter jump between adjacent grid contacts that flags a
/// closest-point discontinuity on a single branch.
const PARAM_JUMP_REL: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct GridScanConfig<T> {
    pub window_radius: T,
    pub resolution: usize,
    /// Refinement tolerance; also the floor of the cluster separation rule.
    pub tol: T,
    /// Certificate probes per branch.
    pub probe_count: usize,
}

impl<T: Real> GridScanConfig<T> {
    pub fn new(window_radius: T, resolution: usize) -> Self {
        Self {
            window_radius,
            resolution,
            tol: T::of(1e-12),
            probe_count: crate::dist::DEFAULT_PROBES,
        }
    }

    /// Same configuration over a different window; the tolerance tightens
    /// proportionally once the window shrinks below `1e-4·ε`.
    pub fn with_window(&self, window: T, curve: &PlaneCurveGerm<T>) -> Self {
        let eps = curve.min_domain_length();
        let scale = (window / (T::of(TOL_TIGHTEN_REL) * eps)).min(T::one());
        Self {
            window_radius: window,
            resolution: self.resolution,
            tol: self.tol * scale,
            probe_count: self.probe_count,
        }
    }

    pub fn pitch(&self) -> T {
        T::two() * self.window_radius / T::of((self.resolution - 1) as f64)
    }

    fn validate(&self, curve: &PlaneCurveGerm<T>) -> Result<(), MedialError> {
        let half = curve.min_domain_length().half();
        if self.window_radius > half * T::of(1.0 + 1e-12) {
            return Err(MedialError::WindowExceedsDomain {
                window: self.window_radius.as_f64(),
                half_domain: half.as_f64(),
            });
        }
        if self.resolution < 64 {
            return Err(MedialError::ResolutionTooCoarse(self.resolution));
        }
        Ok(())
    }
}

/// Best contact of a grid point at node resolution.
#[derive(Debug, Clone, Copy)]
struct GridContact<T> {
    branch: usize,
    t: T,
    d: T,
}

/// Contact pinned down for the crossing refinement. Interior contacts track
/// their parameter as the query moves; endpoint contacts stay pinned.
#[derive(Debug, Clone, Copy)]
enum ContactKind<T> {
    Origin,
    DomainEnd { branch: usize },
    Interior { branch: usize, t: T },
}

impl<T: Real> ContactKind<T> {
    fn from_grid(contact: GridContact<T>, curve: &PlaneCurveGerm<T>) -> Self {
        let eps = curve.branch(contact.branch).domain_length();
        if contact.t == T::zero() {
            ContactKind::Origin
        } else if contact.t == eps {
            ContactKind::DomainEnd {
                branch: contact.branch,
            }
        } else {
            ContactKind::Interior {
                branch: contact.branch,
                t: contact.t,
            }
        }
    }

    /// Shifted squared distance of this contact at a query point; `None`
    /// once an interior contact's basin has vanished.
    fn h_at(&mut self, curve: &PlaneCurveGerm<T>, q_world: Point2<T>) -> Option<T> {
        match self {
            ContactKind::Origin => Some(T::zero()),
            ContactKind::DomainEnd { branch } => {
                let b = curve.branch(*branch);
                let q = b.world_to_canonical(q_world);
                Some(h_eval(b, q, b.domain_length()))
            }
            ContactKind::Interior { branch, t } => {
                let b = curve.branch(*branch);
                let q = b.world_to_canonical(q_world);
                let eps = b.domain_length();
                let mut lo = *t * T::of(0.125);
                let mut hi = (*t * T::of(8.0)).min(eps);
                for _ in 0..4 {
                    let (tt, hh) = golden_min(|x| h_eval(b, q, x), lo, hi);
                    let at_lo = tt <= lo * T::of(1.0 + 1e-6);
                    let at_hi = hi < eps && tt >= hi * T::of(1.0 - 1e-6);
                    if !at_lo && !at_hi {
                        *t = tt;
                        return Some(hh);
                    }
                    if at_lo {
                        lo = lo * T::of(1.0 / 64.0);
                        if lo < T::of(1e-310) {
                            // basin slid into the origin hump and vanished
                            return None;
                        }
                    }
                    if at_hi {
                        hi = (hi * T::of(64.0)).min(eps);
                    }
                }
                None
            }
        }
    }
}

/// Scans the window for verified medial samples.
///
/// Grid points within `2·pitch` of the curve are skipped; every detected
/// closest-point discontinuity between adjacent grid points is refined onto
/// the equidistance locus and certified against the full curve, so each
/// returned sample satisfies the proximal-inequality certificate and sits
/// within a grid pitch of the grid points that detected it.
pub fn grid_medial_scan<T: Real>(
    curve: &PlaneCurveGerm<T>,
    cfg: &GridScanConfig<T>,
) -> Result<Vec<MedialSample<T>>, MedialError> {
    cfg.validate(curve)?;
    let field = DistanceField::new(curve, cfg.tol)?;
    scan_frame(&field, cfg, |p| p, |p| p)
}

/// Grid scan for a single-branch curve, restricted to the half-plane side
/// of the canonical frame that contains the curve (both sides when the
/// branch is the zero graph). Fails when a verified sample lands in the
/// open quadrant `{x > pitch, side·y > pitch}` of the canonical frame
/// within half the window.
pub fn single_branch_medial_scan<T: Real>(
    curve: &PlaneCurveGerm<T>,
    cfg: &GridScanConfig<T>,
) -> Result<Vec<MedialSample<T>>, MedialError> {
    if curve.branch_count() != 1 {
        return Err(MedialError::NotSingleBranch(curve.branch_count()));
    }
    cfg.validate(curve)?;
    let branch = curve.branch(0);
    let side = leading_side(branch);
    let field = DistanceField::new(curve, cfg.tol)?;

    let to_world = |p: Point2<T>| branch.canonical_to_world(p);
    let to_frame = |p: Point2<T>| branch.world_to_canonical(p);
    let samples = scan_frame_masked(&field, cfg, to_world, to_frame, |p: Point2<T>| {
        side == T::zero() || side * p.y >= T::zero()
    })?;

    let pitch = cfg.pitch();
    let half = cfg.window_radius.half();
    let side_eff = if side == T::zero() { T::one() } else { side };
    let violations: Vec<&MedialSample<T>> = samples
        .iter()
        .filter(|s| {
            if side == T::zero() || s.point.norm() > half {
                return false;
            }
            let c = to_frame(s.point);
            c.x > pitch && side_eff * c.y > pitch
        })
        .collect();
    if let Some(first) = violations.first() {
        return Err(MedialError::QuadrantExclusionViolated {
            count: violations.len(),
            x: first.point.x.as_f64(),
            y: first.point.y.as_f64(),
        });
    }
    Ok(samples)
}

fn leading_side<T: Real>(branch: &BranchGerm<T>) -> T {
    match branch.leading() {
        Some(term) if term.coeff > T::zero() => T::one(),
        Some(_) => -T::one(),
        None => T::zero(),
    }
}

fn scan_frame<T, W, F>(
    field: &DistanceField<'_, T>,
    cfg: &GridScanConfig<T>,
    to_world: W,
    to_frame: F,
) -> Result<Vec<MedialSample<T>>, MedialError>
where
    T: Real,
    W: Fn(Point2<T>) -> Point2<T> + Sync,
    F: Fn(Point2<T>) -> Point2<T> + Sync,
{
    scan_frame_masked(field, cfg, to_world, to_frame, |_| true)
}

fn scan_frame_masked<T, W, F, M>(
    field: &DistanceField<'_, T>,
    cfg: &GridScanConfig<T>,
    to_world: W,
    to_frame: F,
    mask: M,
) -> Result<Vec<MedialSample<T>>, MedialError>
where
    T: Real,
    W: Fn(Point2<T>) -> Point2<T> + Sync,
    F: Fn(Point2<T>) -> Point2<T> + Sync,
    M: Fn(Point2<T>) -> bool + Sync,
{
    let n = cfg.resolution;
    let w = cfg.window_radius;
    let pitch = cfg.pitch();
    let coord = |i: usize| -w + pitch * T::of(i as f64);
    let curve = field.curve();

    // phase 1: best contact per grid point at node resolution
    let grid: Vec<Vec<Option<GridContact<T>>>> = (0..n)
        .into_par_iter()
        .map_init(ScanWorkspace::new, |ws, j| {
            let y = coord(j);
            (0..n)
                .map(|i| {
                    let p = Point2::new(coord(i), y);
                    if p.norm() > w || !mask(p) {
                        return None;
                    }
                    let q = to_world(p);
                    let c = field.coarse_probe(q, ws);
                    if c.d_estimate <= T::two() * pitch + c.d_slack {
                        return None; // distance-0 ambiguity zone around X
                    }
                    Some(GridContact {
                        branch: c.branch,
                        t: c.t_best,
                        d: c.d_estimate,
                    })
                })
                .collect()
        })
        .collect();

    // phase 2: adjacent contact jumps bracket medial crossings
    let candidates: Vec<(usize, usize, bool)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut row = Vec::new();
            for i in 0..n {
                let Some(a) = grid[j][i] else { continue };
                if i + 1 < n {
                    if let Some(b) = grid[j][i + 1] {
                        if contacts_jump(a, b) {
                            row.push((j, i, true));
                        }
                    }
                }
                if j + 1 < n {
                    if let Some(b) = grid[j + 1][i] {
                        if contacts_jump(a, b) {
                            row.push((j, i, false));
                        }
                    }
                }
            }
            row
        })
        .flatten()
        .collect();

    if std::env::var("MEDAX_SCAN_DEBUG").is_ok() {
        eprintln!("[scan] {} candidates", candidates.len());
    }
    // phase 3: refine each crossing onto the equidistance locus and certify
    let samples: Vec<MedialSample<T>> = candidates
        .into_par_iter()
        .map_init(ScanWorkspace::new, |ws, (j, i, horizontal)| {
            let p1 = Point2::new(coord(i), coord(j));
            let p2 = if horizontal {
                Point2::new(coord(i + 1), coord(j))
            } else {
                Point2::new(coord(i), coord(j + 1))
            };
            let c1 = grid[j][i]?;
            let c2 = if horizontal {
                grid[j][i + 1]?
            } else {
                grid[j + 1][i]?
            };
            let q1 = to_world(p1);
            let q2 = to_world(p2);
            let debug = std::env::var("MEDAX_SCAN_DEBUG").is_ok();
            let crossing = match refine_crossing(curve, q1, q2, c1, c2) {
                Some(c) => c,
                None => {
                    if debug {
                        eprintln!("[scan] refine failed at ({j},{i}) {:?} {:?}", c1, c2);
                    }
                    return None;
                }
            };
            let frame_pt = to_frame(crossing);
            if frame_pt.norm() > w {
                if debug {
                    eprintln!("[scan] out of window at ({j},{i})");
                }
                return None;
            }
            let detailed = field.closest_with_window_ws(crossing, T::zero(), ws);
            let mut sample = match MedialSample::certify(&detailed.set, field, cfg.probe_count) {
                Some(s) => s,
                None => {
                    if debug {
                        eprintln!(
                            "[scan] certify failed at ({j},{i}): crossing ({:?},{:?}) clusters {} eff {} d {:?} basins {:?}",
                            crossing.x,
                            crossing.y,
                            detailed.set.clusters.len(),
                            detailed.set.effective_cluster_count(),
                            detailed.set.distance,
                            detailed
                                .basins
                                .iter()
                                .map(|b| (b.t, b.h))
                                .collect::<Vec<_>>()
                        );
                    }
                    return None;
                }
            };
            sample.cell = Some((
                ((frame_pt.x + w) / pitch).round().as_f64() as i64,
                ((frame_pt.y + w) / pitch).round().as_f64() as i64,
            ));
            Some(sample)
        })
        .flatten()
        .collect();

    Ok(samples)
}

/// Discontinuity test for the closest-point map between adjacent grid
/// points: the contact switches branch, or its parameter jumps by more
/// than the structural threshold.
fn contacts_jump<T: Real>(a: GridContact<T>, b: GridContact<T>) -> bool {
    if a.branch != b.branch {
        return true;
    }
    (a.t - b.t).abs() > T::of(PARAM_JUMP_REL) * a.t.max(b.t)
}

/// Locates the equidistance point of the two contacts on the segment
/// `[q1, q2]` by a bracketed secant iteration on the difference of shifted
/// squared distances.
fn refine_crossing<T: Real>(
    curve: &PlaneCurveGerm<T>,
    q1: Point2<T>,
    q2: Point2<T>,
    c1: GridContact<T>,
    c2: GridContact<T>,
) -> Option<Point2<T>> {
    let mut contact_a = ContactKind::from_grid(c1, curve);
    let mut contact_b = ContactKind::from_grid(c2, curve);
    let d_scale = c1.d.max(c2.d);
    let stop = T::of(4e-10) * d_scale * (T::one() + d_scale);

    // (φ, local contact scale); the scale gates the stop criterion so that
    // collapsing contacts (both h values sinking toward 0 near the germ
    // point) are resolved at their own magnitude, not at the distance scale
    let phi = |s: T, a: &mut ContactKind<T>, b: &mut ContactKind<T>| -> (T, T) {
        let q = q1 + (q2 - q1) * s;
        let ha = a.h_at(curve, q);
        let hb = b.h_at(curve, q);
        match (ha, hb) {
            (Some(ha), Some(hb)) => (ha - hb, ha.abs() + hb.abs()),
            // a vanished basin means that side's contact is strictly worse
            (None, Some(_)) => (T::infinity(), T::zero()),
            (Some(_), None) => (T::neg_infinity(), T::zero()),
            (None, None) => (T::nan(), T::zero()),
        }
    };

    let mut lo = T::zero();
    let mut hi = T::one();
    let (mut flo, _) = phi(lo, &mut contact_a, &mut contact_b);
    let (mut fhi, _) = phi(hi, &mut contact_a, &mut contact_b);
    if flo.is_nan() || fhi.is_nan() {
        return None;
    }
    // contact A is best at q1 and B at q2, so φ(0) ≤ 0 ≤ φ(1) up to node
    // error; give up if the bracket does not materialize
    if flo > T::zero() || fhi < T::zero() {
        std::mem::swap(&mut lo, &mut hi);
        std::mem::swap(&mut flo, &mut fhi);
        if flo > T::zero() || fhi < T::zero() {
            return None;
        }
    }
    let mut s_mid = (lo + hi).half();
    for _ in 0..110 {
        // secant step when both ends are finite, midpoint otherwise
        let s = if flo.is_finite() && fhi.is_finite() && fhi != flo {
            let sec = lo - flo * (hi - lo) / (fhi - flo);
            let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
            if sec > a && sec < b {
                sec
            } else {
                (lo + hi).half()
            }
        } else {
            (lo + hi).half()
        };
        let (fs, scale) = phi(s, &mut contact_a, &mut contact_b);
        if fs.is_nan() {
            return None;
        }
        s_mid = s;
        if fs.abs() <= stop && fs.abs() <= T::of(1e-2) * scale {
            break;
        }
        if fs > T::zero() {
            hi = s;
            fhi = fs;
        } else {
            lo = s;
            flo = fs;
        }
        if (hi - lo).abs() <= T::of(1e-17) {
            break;
        }
    }
    Some(q1 + (q2 - q1) * s_mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::BranchGerm;
    use std::f64::consts::FRAC_PI_4;

    fn cfg(w: f64, n: usize) -> GridScanConfig<f64> {
        GridScanConfig::new(w, n)
    }

    #[test]
    fn rejects_bad_config() {
        let curve =
            PlaneCurveGerm::new(vec![BranchGerm::half_line(0.0, 1.0).unwrap()]).unwrap();
        assert!(matches!(
            grid_medial_scan(&curve, &cfg(0.7, 128)),
            Err(MedialError::WindowExceedsDomain { .. })
        ));
        assert!(matches!(
            grid_medial_scan(&curve, &cfg(0.4, 32)),
            Err(MedialError::ResolutionTooCoarse(32))
        ));
    }

    #[test]
    fn two_lines_concentrate_on_positive_axis() {
        let curve = PlaneCurveGerm::new(vec![
            BranchGerm::half_line(FRAC_PI_4, 1.0).unwrap(),
            BranchGerm::half_line(-FRAC_PI_4, 1.0).unwrap(),
        ])
        .unwrap();
        let c = cfg(0.5, 128);
        let samples = grid_medial_scan(&curve, &c).unwrap();
        assert!(!samples.is_empty());
        let pitch = c.pitch();
        for s in &samples {
            assert!(s.point.y.abs() <= pitch, "sample off axis: {:?}", s.point);
            assert!(s.point.x > 0.0);
            assert!(s.residual <= super::super::RESIDUAL_CERT);
        }
    }

    #[test]
    fn full_line_has_empty_medial_axis() {
        let curve = PlaneCurveGerm::new(vec![
            BranchGerm::half_line(0.0, 1.0).unwrap(),
            BranchGerm::half_line(std::f64::consts::PI, 1.0).unwrap(),
        ])
        .unwrap();
        let samples = grid_medial_scan(&curve, &cfg(0.5, 128)).unwrap();
        assert!(samples.is_empty(), "got {} samples", samples.len());
    }

    #[test]
    fn superquadratic_branch_reaches_origin_from_above() {
        let curve =
            PlaneCurveGerm::new(vec![BranchGerm::power(1.0, 3, 2, 0.0, 1.0).unwrap()]).unwrap();
        let samples = grid_medial_scan(&curve, &cfg(0.5, 192)).unwrap();
        assert!(!samples.is_empty());
        let min_norm = samples
            .iter()
            .map(|s| s.point.norm())
            .fold(f64::INFINITY, f64::min);
        assert!(min_norm < 0.05, "min sample norm {min_norm}");
        for s in &samples {
            assert!(s.point.y >= -1e-9, "sample below the curve side: {:?}", s.point);
        }
        // near-origin samples pair the origin with a smooth contact
        let near = samples.iter().filter(|s| s.point.norm() < 0.05);
        for s in near {
            assert!(s.flags.touches_origin, "{:?}", s);
            assert!(s.counts_for_reach());
        }
    }

    #[test]
    fn single_branch_scan_respects_side_and_quadrant() {
        let curve =
            PlaneCurveGerm::new(vec![BranchGerm::power(1.0, 3, 2, 0.0, 1.0).unwrap()]).unwrap();
        let c = cfg(0.5, 192);
        let samples = single_branch_medial_scan(&curve, &c).unwrap();
        assert!(!samples.is_empty());
        let pitch = c.pitch();
        for s in &samples {
            assert!(s.point.y >= 0.0);
            if s.point.norm() < 0.25 {
                assert!(
                    !(s.point.x > pitch && s.point.y > pitch),
                    "quadrant violation at {:?}",
                    s.point
                );
            }
        }
    }

    #[test]
    fn single_branch_scan_requires_one_branch() {
        let curve = PlaneCurveGerm::new(vec![
            BranchGerm::half_line(FRAC_PI_4, 1.0).unwrap(),
            BranchGerm::half_line(-FRAC_PI_4, 1.0).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            single_branch_medial_scan(&curve, &cfg(0.4, 128)),
            Err(MedialError::NotSingleBranch(2))
        ));
    }

    #[test]
    fn flat_half_line_scan_is_empty() {
        let curve =
            PlaneCurveGerm::new(vec![BranchGerm::half_line(0.0, 1.0).unwrap()]).unwrap();
        let samples = single_branch_medial_scan(&curve, &cfg(0.4, 128)).unwrap();
        assert!(samples.is_empty());
    }

    #[test]
    fn parabola_medial_stays_near_curvature_center() {
        let curve =
            PlaneCurveGerm::new(vec![BranchGerm::power(1.0, 2, 1, 0.0, 1.0).unwrap()]).unwrap();
        let samples = single_branch_medial_scan(&curve, &cfg(0.5, 192)).unwrap();
        for s in &samples {
            assert!(
                s.point.norm() >= 0.4,
                "sample at {:?} inside the curvature-center bound",
                s.point
            );
        }
    }
}
