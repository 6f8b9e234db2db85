//! Angular region geometry: the branches divide a small disk around the
//! origin into regions between cyclically consecutive branches.

use crate::curve::PlaneCurveGerm;
use crate::geom::{ccw_delta, in_ccw_interval, normalize_angle, Point2};
use crate::scalar::Real;

/// Resolves, at a given radius, the angular interval occupied by each
/// region `D(Γᵢ, Γᵢ₊₁)` between cyclically consecutive branches.
pub struct RegionGeometry<'a, T> {
    curve: &'a PlaneCurveGerm<T>,
}

impl<'a, T: Real> RegionGeometry<'a, T> {
    pub fn new(curve: &'a PlaneCurveGerm<T>) -> Self {
        Self { curve }
    }

    /// Number of regions (equal to the branch count; a single branch has
    /// one region, the complement of the branch).
    pub fn region_count(&self) -> usize {
        self.curve.branch_count()
    }

    /// Branch pair `(i, j)` delimiting the region at cyclic position `pos`:
    /// the region swept counterclockwise from branch `i` to branch `j`.
    pub fn pair_at(&self, pos: usize) -> (usize, usize) {
        let order = self.curve.cyclic_order();
        let i = order[pos % order.len()];
        let j = order[(pos + 1) % order.len()];
        (i, j)
    }

    /// Cyclic position of the region delimited by branch pair `(i, j)`.
    pub fn position_of_pair(&self, i: usize, j: usize) -> Option<usize> {
        let order = self.curve.cyclic_order();
        (0..order.len()).find(|&pos| {
            order[pos] == i && order[(pos + 1) % order.len()] == j
        })
    }

    /// Angle of the point where a branch crosses the circle of radius `r`,
    /// or `None` when the branch is too short to reach it.
    pub fn branch_angle_at_radius(&self, branch: usize, r: T) -> Option<T> {
        let b = self.curve.branch(branch);
        let eps = b.domain_length();
        if b.eval_raw(eps).norm() < r {
            return None;
        }
        let mut lo = T::zero();
        let mut hi = eps;
        for _ in 0..128 {
            let mid = (lo + hi).half();
            if b.eval_raw(mid).norm() < r {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= T::of(1e-16) * hi.max(T::of(1e-300)) {
                break;
            }
        }
        Some(b.eval_raw((lo + hi).half()).angle())
    }

    /// All branch crossing angles at radius `r`, in cyclic-order
    /// enumeration; `None` if some branch does not reach the radius.
    pub fn angles_at_radius(&self, r: T) -> Option<Vec<T>> {
        self.curve
            .cyclic_order()
            .iter()
            .map(|&b| self.branch_angle_at_radius(b, r))
            .collect()
    }

    /// Region position containing the point, resolved at the point's own
    /// radius. `None` on the origin or beyond the branch crossings.
    pub fn locate(&self, point: Point2<T>) -> Option<usize> {
        let r = point.norm();
        if r == T::zero() {
            return None;
        }
        let angles = self.angles_at_radius(r)?;
        if angles.len() == 1 {
            return Some(0);
        }
        let a = point.angle();
        for pos in 0..angles.len() {
            let lo = angles[pos];
            let hi = angles[(pos + 1) % angles.len()];
            if in_ccw_interval(a, lo, hi) {
                return Some(pos);
            }
        }
        Some(0)
    }

    /// Whether the angular arrangement at radius `r` is still faithful to
    /// the tangent-cone arrangement: every region's width at radius `r`
    /// must be within one radian of its limit width. Branch crossings away
    /// from the origin invert regions and fail this check.
    pub fn consistent_at_radius(&self, r: T) -> bool {
        let Some(angles) = self.angles_at_radius(r) else {
            return false;
        };
        let order = self.curve.cyclic_order();
        if order.len() == 1 {
            return true;
        }
        let one_rad = T::one();
        for pos in 0..order.len() {
            let width_r = ccw_delta(angles[pos], angles[(pos + 1) % angles.len()]);
            let limit = self.limit_width(pos);
            if (width_r - limit).abs() > one_rad {
                return false;
            }
        }
        true
    }

    /// Region width in the tangent-cone limit (shared tangents give 0).
    pub fn limit_width(&self, pos: usize) -> T {
        let (i, j) = self.pair_at(pos);
        let ti = self.curve.branch(i).tangent_angle();
        let tj = self.curve.branch(j).tangent_angle();
        normalize_angle(tj - ti)
    }

    /// Largest radius from `{r, r/2, r/4, r/8}` at which the arrangement is
    /// consistent.
    pub fn safe_radius(&self, r: T) -> Option<T> {
        let mut candidate = r;
        for _ in 0..4 {
            if self.consistent_at_radius(candidate) {
                return Some(candidate);
            }
            candidate = candidate.half();
        }
        None
    }
}
