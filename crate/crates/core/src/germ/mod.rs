//! Symbolic classification of branch germs and prediction of the local
//! medial-axis structure.
//!
//! Superquadraticity (`f ≢ 0` with leading exponent `α < 2`) is decided on
//! the exact rational exponents, never on floats: the `α = 2` boundary is
//! sharp. From the per-branch verdicts and the oriented angles of the
//! regions between cyclically consecutive branches, the module predicts
//! which directions the medial axis can approach the origin from — the
//! region-side bisector for contributing regions of angle `< π`, and
//! perpendiculars to the superquadratic delimiting tangents for the (at
//! most one) region of angle `> π`.

use num_rational::Ratio;
use thiserror::Error;

use crate::curve::{BranchGerm, PlaneCurveGerm, TANGENT_ANGLE_TOL};
use crate::geom::{angular_separation, ccw_delta, normalize_angle, Point2};
use crate::scalar::Real;
use crate::Exponent;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GermError {
    #[error("operation requires a single-branch curve, got {0} branches")]
    NotSingleBranch(usize),
    #[error("operation requires at least two branches, got {0}")]
    NeedsMultipleBranches(usize),
    #[error("cannot fit an exponent to the zero graph function")]
    ZeroFunctionFit,
    #[error("exponent fit needs at least 16 samples, got {0}")]
    TooFewSamples(usize),
    #[error("expected {expected} contributing flags, got {got}")]
    ContributingFlagCount { expected: usize, got: usize },
    #[error(
        "region {region} has oriented angle > π and is flagged contributing, \
         but neither delimiting branch is superquadratic"
    )]
    ContradictoryContribution { region: usize },
}

/// Superquadraticity verdict for one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperquadraticVerdict<T> {
    pub branch: usize,
    /// Leading term `(a, α)`; `None` for the zero graph function.
    pub leading: Option<(T, Exponent)>,
    pub superquadratic: bool,
}

/// Reads the leading term and decides `α < 2` by exact rational comparison.
pub fn classify_superquadratic<T: Real>(
    branch: &BranchGerm<T>,
    index: usize,
) -> SuperquadraticVerdict<T> {
    let leading = branch.leading().map(|t| (t.coeff, t.exponent));
    let superquadratic = matches!(&leading, Some((_, a)) if *a < Ratio::from_integer(2));
    SuperquadraticVerdict {
        branch: index,
        leading,
        superquadratic,
    }
}

/// Least-squares slope of `log|f(t)|` against `log t` over log-spaced
/// samples in `[10⁻⁶ε, 10⁻²ε]`, plus the RMS fit residual.
pub fn estimate_exponent_numeric<T: Real>(
    branch: &BranchGerm<T>,
    sample_count: usize,
) -> Result<(T, T), GermError> {
    if branch.is_zero_function() {
        return Err(GermError::ZeroFunctionFit);
    }
    if sample_count < 16 {
        return Err(GermError::TooFewSamples(sample_count));
    }
    let eps = branch.domain_length().as_f64();
    let n = sample_count;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let u = i as f64 / (n - 1) as f64;
        let t = eps * 10f64.powf(-6.0 + 4.0 * u);
        let fv = branch.f(T::of(t)).abs().as_f64();
        if fv > 0.0 && fv.is_finite() {
            xs.push(t.ln());
            ys.push(fv.ln());
        }
    }
    if xs.len() < 2 {
        return Err(GermError::ZeroFunctionFit);
    }
    let m = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let e = y - (slope * x + intercept);
        ss += e * e;
    }
    Ok((T::of(slope), T::of((ss / m).sqrt())))
}

/// Whether the medial axis reaches the origin for a single-branch curve:
/// exactly the superquadraticity of the branch.
pub fn predict_reach<T: Real>(curve: &PlaneCurveGerm<T>) -> Result<bool, GermError> {
    if curve.branch_count() != 1 {
        return Err(GermError::NotSingleBranch(curve.branch_count()));
    }
    Ok(classify_superquadratic(curve.branch(0), 0).superquadratic)
}

/// Counterclockwise angle from the tangent of branch `i` to the tangent of
/// branch `j` measured through the region `D(Γᵢ, Γⱼ)` at cyclic position
/// `pos`. Shared-tangent pairs resolve to `0` (in-group sliver) or `2π`
/// (full wrap when every branch shares one tangent).
pub fn oriented_angle<T: Real>(curve: &PlaneCurveGerm<T>, pos: usize) -> Result<T, GermError> {
    let k = curve.branch_count();
    if k < 2 {
        return Err(GermError::NeedsMultipleBranches(k));
    }
    let order = curve.cyclic_order();
    let i = order[pos % k];
    let j = order[(pos + 1) % k];
    let ti = curve.branch(i).tangent_angle();
    let tj = curve.branch(j).tangent_angle();
    let tol = T::of(TANGENT_ANGLE_TOL);
    if angular_separation(ti, tj) <= tol {
        let all_shared = curve
            .branches()
            .iter()
            .all(|b| angular_separation(b.tangent_angle(), ti) <= tol);
        if all_shared && (pos % k) == k - 1 {
            return Ok(T::of(std::f64::consts::TAU));
        }
        return Ok(T::zero());
    }
    Ok(ccw_delta(ti, tj))
}

/// Predicted contribution status of a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contribution {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for Contribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Contribution::Yes => write!(f, "yes"),
            Contribution::No => write!(f, "no"),
            Contribution::Unknown => write!(f, "unknown"),
        }
    }
}

/// Per-region analysis: oriented angle and what the theory can say about
/// contribution without observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionReport<T> {
    /// Delimiting branch indices `(i, j)`, `j` cyclically after `i`.
    pub pair: (usize, usize),
    /// Cyclic region position.
    pub position: usize,
    pub oriented_angle: T,
    pub contributing_predicted: Contribution,
    /// For angles `> π`: at least one delimiting branch is superquadratic.
    pub necessary_condition_met: bool,
}

/// Builds the region reports for a multi-branch curve.
///
/// Contribution is predicted only where the theory decides it: the joined
/// two-sided graph test at angle exactly `π`, and the failure of the
/// necessary condition at angles `> π`. Everything else stays `Unknown`
/// and is settled by observation.
pub fn predict_regions<T: Real>(
    curve: &PlaneCurveGerm<T>,
) -> Result<Vec<RegionReport<T>>, GermError> {
    let k = curve.branch_count();
    if k < 2 {
        return Err(GermError::NeedsMultipleBranches(k));
    }
    let order = curve.cyclic_order();
    let pi = T::of(std::f64::consts::PI);
    let tol = T::of(TANGENT_ANGLE_TOL);
    let mut out = Vec::with_capacity(k);
    for pos in 0..k {
        let i = order[pos];
        let j = order[(pos + 1) % k];
        let angle = oriented_angle(curve, pos)?;
        let sq_i = classify_superquadratic(curve.branch(i), i).superquadratic;
        let sq_j = classify_superquadratic(curve.branch(j), j).superquadratic;
        let (contributing, necessary) = if (angle - pi).abs() <= tol {
            let joined = joined_graph_superquadratic(curve.branch(i), curve.branch(j));
            (if joined { Contribution::Yes } else { Contribution::No }, true)
        } else if angle > pi {
            let necessary = sq_i || sq_j;
            (
                if necessary { Contribution::Unknown } else { Contribution::No },
                necessary,
            )
        } else {
            (Contribution::Unknown, true)
        };
        out.push(RegionReport {
            pair: (i, j),
            position: pos,
            oriented_angle: angle,
            contributing_predicted: contributing,
            necessary_condition_met: necessary,
        });
    }
    Ok(out)
}

/// Angle-π case: the two branches join into one `C¹` graph whose epigraph
/// (in the frame where the region is the upper half-plane) is the region.
/// The joined curve is superquadratic toward the region iff either sheet
/// has leading exponent `< 2` and bends into the region.
fn joined_graph_superquadratic<T: Real>(gi: &BranchGerm<T>, gj: &BranchGerm<T>) -> bool {
    let two = Ratio::from_integer(2);
    // sheet over x > 0: branch i in its own frame, region above
    let right = matches!(gi.leading(), Some(t) if t.exponent < two && t.coeff > T::zero());
    // sheet over x < 0: branch j appears point-reflected, so bending into
    // the region means a negative leading coefficient
    let left = matches!(gj.leading(), Some(t) if t.exponent < two && t.coeff < T::zero());
    right || left
}

/// Where a fan direction comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Region-side bisector of the tangents of branches `(i, j)`.
    Bisector(usize, usize),
    /// Perpendicular to the tangent of the given branch, on the region side.
    PerpendicularTo(usize),
    /// Perpendicular to a single-branch curve, on the curve's side.
    SingleBranchPerpendicular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanDirection<T> {
    pub direction: Point2<T>,
    pub provenance: Provenance,
}

/// A tangent cone represented as a finite fan of unit half-line directions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DirectionFan<T> {
    pub directions: Vec<FanDirection<T>>,
}

impl<T: Real> DirectionFan<T> {
    pub fn empty() -> Self {
        Self {
            directions: Vec::new(),
        }
    }

    /// Observation-side constructor without symbolic provenance.
    pub fn from_observed_angles(angles: &[T]) -> Self {
        let mut fan = Self::empty();
        for &a in angles {
            fan.push(Point2::from_angle(a), Provenance::SingleBranchPerpendicular);
        }
        fan
    }

    fn push(&mut self, direction: Point2<T>, provenance: Provenance) {
        let sep = T::of(1e-9);
        let angle = direction.angle();
        if self
            .directions
            .iter()
            .any(|d| angular_separation(d.direction.angle(), angle) <= sep)
        {
            return;
        }
        self.directions.push(FanDirection {
            direction,
            provenance,
        });
    }

    fn sort(&mut self) {
        self.directions.sort_by(|a, b| {
            a.direction
                .angle()
                .partial_cmp(&b.direction.angle())
                .unwrap()
        });
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Direction angles in degrees, ascending in `[0, 360)`.
    pub fn angles_deg(&self) -> Vec<T> {
        self.directions
            .iter()
            .map(|d| d.direction.angle() * T::of(180.0 / std::f64::consts::PI))
            .collect()
    }
}

/// Predicts the tangent cone of the medial axis at the origin as a fan of
/// half-line directions, given per-region contribution flags (cyclic
/// order; a single flag for a single-branch curve).
pub fn predict_tangent_cone<T: Real>(
    curve: &PlaneCurveGerm<T>,
    contributing: &[bool],
) -> Result<DirectionFan<T>, GermError> {
    let k = curve.branch_count();
    if contributing.len() != k {
        return Err(GermError::ContributingFlagCount {
            expected: k,
            got: contributing.len(),
        });
    }
    let mut fan = DirectionFan::empty();
    if k == 1 {
        let branch = curve.branch(0);
        let verdict = classify_superquadratic(branch, 0);
        if verdict.superquadratic && contributing[0] {
            let side = match verdict.leading {
                Some((a, _)) if a < T::zero() => -T::one(),
                _ => T::one(),
            };
            let angle =
                normalize_angle(branch.tangent_angle() + side * T::of(std::f64::consts::FRAC_PI_2));
            fan.push(
                Point2::from_angle(angle),
                Provenance::SingleBranchPerpendicular,
            );
        }
        return Ok(fan);
    }

    let order = curve.cyclic_order();
    let pi = T::of(std::f64::consts::PI);
    let half_pi = T::of(std::f64::consts::FRAC_PI_2);
    let tol = T::of(TANGENT_ANGLE_TOL);
    for pos in 0..k {
        if !contributing[pos] {
            continue;
        }
        let i = order[pos];
        let j = order[(pos + 1) % k];
        let angle = oriented_angle(curve, pos)?;
        let ti = curve.branch(i).tangent_angle();
        let tj = curve.branch(j).tangent_angle();
        if angle <= pi + tol {
            // region-side bisector; at angle exactly π this is the common
            // perpendicular (contribution there needs the joined curve
            // superquadratic, reported by predict_regions)
            let dir = normalize_angle(ti + angle.half());
            fan.push(Point2::from_angle(dir), Provenance::Bisector(i, j));
        } else {
            let sq_i = classify_superquadratic(curve.branch(i), i).superquadratic;
            let sq_j = classify_superquadratic(curve.branch(j), j).superquadratic;
            if !sq_i && !sq_j {
                return Err(GermError::ContradictoryContribution { region: pos });
            }
            if sq_i {
                fan.push(
                    Point2::from_angle(normalize_angle(ti + half_pi)),
                    Provenance::PerpendicularTo(i),
                );
            }
            if sq_j {
                fan.push(
                    Point2::from_angle(normalize_angle(tj - half_pi)),
                    Provenance::PerpendicularTo(j),
                );
            }
        }
    }
    fan.sort();
    Ok(fan)
}

/// Upper bound `c + 1` on the number of medial-axis branches at the origin,
/// where `c` counts the contributing regions.
pub fn branch_count_bound<T: Real>(
    curve: &PlaneCurveGerm<T>,
    contributing: &[bool],
) -> Result<usize, GermError> {
    let k = curve.branch_count();
    if k < 2 {
        return Err(GermError::NeedsMultipleBranches(k));
    }
    if contributing.len() != k {
        return Err(GermError::ContributingFlagCount {
            expected: k,
            got: contributing.len(),
        });
    }
    Ok(contributing.iter().filter(|&&c| c).count() + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{BranchGerm, PlaneCurveGerm, PowerTerm};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI, TAU};

    fn power(coeff: f64, p: i64, q: i64, rot: f64) -> BranchGerm<f64> {
        BranchGerm::power(coeff, p, q, rot, 1.0).unwrap()
    }

    fn example_curve() -> PlaneCurveGerm<f64> {
        PlaneCurveGerm::new(vec![
            power(1.0, 3, 2, -FRAC_PI_6),
            power(-1.0, 3, 2, FRAC_PI_6),
        ])
        .unwrap()
    }

    #[test]
    fn classify_matches_exact_boundary() {
        let v = classify_superquadratic(&power(1.0, 3, 2, 0.0), 0);
        assert_eq!(v.leading.unwrap(), (1.0, Ratio::new(3, 2)));
        assert!(v.superquadratic);

        let v = classify_superquadratic(&power(1.0, 2, 1, 0.0), 0);
        assert_eq!(v.leading.unwrap(), (1.0, Ratio::from_integer(2)));
        assert!(!v.superquadratic);

        let v = classify_superquadratic(&BranchGerm::half_line(0.0, 1.0).unwrap(), 0);
        assert!(v.leading.is_none());
        assert!(!v.superquadratic);

        // 199/100 < 2 < 201/100, decided exactly
        assert!(classify_superquadratic(&power(1.0, 199, 100, 0.0), 0).superquadratic);
        assert!(!classify_superquadratic(&power(1.0, 201, 100, 0.0), 0).superquadratic);
    }

    #[test]
    fn exponent_fit_recovers_pure_powers() {
        let (a, res) = estimate_exponent_numeric(&power(1.0, 3, 2, 0.0), 64).unwrap();
        assert_relative_eq!(a, 1.5, epsilon = 1e-6);
        assert!(res < 1e-10);

        let (a, res) = estimate_exponent_numeric(&power(5.0, 7, 4, 0.0), 64).unwrap();
        assert_relative_eq!(a, 1.75, epsilon = 1e-6);
        assert!(res < 1e-10);
    }

    #[test]
    fn exponent_fit_sees_higher_order_drift() {
        let b = BranchGerm::new(
            vec![
                PowerTerm::new(1.0, Ratio::from_integer(2)).unwrap(),
                PowerTerm::new(1.0, Ratio::from_integer(3)).unwrap(),
            ],
            0.0,
            1.0,
        )
        .unwrap();
        let (a, _) = estimate_exponent_numeric(&b, 64).unwrap();
        assert!(a > 2.0 && a < 2.01, "slope {a}");
    }

    #[test]
    fn exponent_fit_rejects_bad_input() {
        assert!(matches!(
            estimate_exponent_numeric(&BranchGerm::half_line(0.0, 1.0).unwrap(), 64),
            Err(GermError::ZeroFunctionFit)
        ));
        assert!(matches!(
            estimate_exponent_numeric(&power(1.0, 3, 2, 0.0), 8),
            Err(GermError::TooFewSamples(8))
        ));
    }

    #[test]
    fn reach_prediction_follows_superquadraticity() {
        let sq = PlaneCurveGerm::new(vec![power(1.0, 3, 2, 0.0)]).unwrap();
        assert!(predict_reach(&sq).unwrap());
        let quad = PlaneCurveGerm::new(vec![power(1.0, 2, 1, 0.0)]).unwrap();
        assert!(!predict_reach(&quad).unwrap());
        let flat = PlaneCurveGerm::new(vec![BranchGerm::half_line(0.0, 1.0).unwrap()]).unwrap();
        assert!(!predict_reach(&flat).unwrap());
        assert!(matches!(
            predict_reach(&example_curve()),
            Err(GermError::NotSingleBranch(2))
        ));
    }

    #[test]
    fn oriented_angles_of_example_fixture() {
        let curve = example_curve();
        // cyclic order: branch 1 (tangent π/6), branch 0 (tangent 11π/6)
        let a0 = oriented_angle(&curve, 0).unwrap();
        let a1 = oriented_angle(&curve, 1).unwrap();
        assert_relative_eq!(a0, 5.0 * PI / 3.0, epsilon = 1e-12);
        assert_relative_eq!(a1, PI / 3.0, epsilon = 1e-12);
        assert_relative_eq!(a0 + a1, TAU, epsilon = 1e-12);
    }

    #[test]
    fn oriented_angles_of_shared_tangent_pair() {
        // half-line plus t^{3/2} above it: angles 0 and 2π
        let flat = BranchGerm::half_line(0.0, 1.0).unwrap();
        let above = power(1.0, 3, 2, 0.0);
        let curve = PlaneCurveGerm::new(vec![flat, above]).unwrap();
        let a0 = oriented_angle(&curve, 0).unwrap();
        let a1 = oriented_angle(&curve, 1).unwrap();
        assert_eq!(a0, 0.0);
        assert_relative_eq!(a1, TAU, epsilon = 1e-15);
    }

    #[test]
    fn oriented_angles_of_perpendicular_lines() {
        let curve = PlaneCurveGerm::new(vec![
            BranchGerm::half_line(FRAC_PI_4, 1.0).unwrap(),
            BranchGerm::half_line(-FRAC_PI_4, 1.0).unwrap(),
        ])
        .unwrap();
        let a0 = oriented_angle(&curve, 0).unwrap();
        let a1 = oriented_angle(&curve, 1).unwrap();
        assert_relative_eq!(a0, 3.0 * PI / 2.0, epsilon = 1e-12);
        assert_relative_eq!(a1, PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn example_fan_hits_the_three_limit_directions() {
        let curve = example_curve();
        let fan = predict_tangent_cone(&curve, &[true, true]).unwrap();
        let degs: Vec<f64> = fan.angles_deg();
        assert_eq!(degs.len(), 3);
        assert_relative_eq!(degs[0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(degs[1], 120.0, epsilon = 1e-9);
        assert_relative_eq!(degs[2], 240.0, epsilon = 1e-9);
    }

    #[test]
    fn single_branch_fan_is_perpendicular_on_curve_side() {
        let curve = PlaneCurveGerm::new(vec![power(1.0, 3, 2, 0.0)]).unwrap();
        let fan = predict_tangent_cone(&curve, &[true]).unwrap();
        assert_eq!(fan.len(), 1);
        assert_relative_eq!(fan.angles_deg()[0], 90.0, epsilon = 1e-9);

        // bending downward flips the side
        let curve = PlaneCurveGerm::new(vec![power(-1.0, 3, 2, 0.0)]).unwrap();
        let fan = predict_tangent_cone(&curve, &[true]).unwrap();
        assert_relative_eq!(fan.angles_deg()[0], 270.0, epsilon = 1e-9);

        // non-superquadratic: empty no matter the flag
        let curve = PlaneCurveGerm::new(vec![power(1.0, 2, 1, 0.0)]).unwrap();
        assert!(predict_tangent_cone(&curve, &[true]).unwrap().is_empty());
    }

    #[test]
    fn two_line_fan_is_the_wedge_bisector() {
        let curve = PlaneCurveGerm::new(vec![
            BranchGerm::half_line(FRAC_PI_4, 1.0).unwrap(),
            BranchGerm::half_line(-FRAC_PI_4, 1.0).unwrap(),
        ])
        .unwrap();
        // only the π/2 wedge (cyclic position 1) contributes
        let fan = predict_tangent_cone(&curve, &[false, true]).unwrap();
        assert_eq!(fan.len(), 1);
        assert_relative_eq!(fan.angles_deg()[0], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn reflex_region_without_superquadratic_branch_is_contradictory() {
        let curve = PlaneCurveGerm::new(vec![
            BranchGerm::half_line(FRAC_PI_4, 1.0).unwrap(),
            BranchGerm::half_line(-FRAC_PI_4, 1.0).unwrap(),
        ])
        .unwrap();
        // position 0 spans 3π/2 and both branches are straight
        assert!(matches!(
            predict_tangent_cone(&curve, &[true, false]),
            Err(GermError::ContradictoryContribution { region: 0 })
        ));
    }

    #[test]
    fn region_reports_predict_what_theory_decides() {
        let reports = predict_regions(&example_curve()).unwrap();
        assert_eq!(reports.len(), 2);
        let reflex = &reports[0];
        assert!(reflex.oriented_angle > PI);
        assert!(reflex.necessary_condition_met);
        assert_eq!(reflex.contributing_predicted, Contribution::Unknown);
        let narrow = &reports[1];
        assert!(narrow.oriented_angle < PI);
        assert_eq!(narrow.contributing_predicted, Contribution::Unknown);

        // straight angle with an upward superquadratic sheet: joined test
        let curve = PlaneCurveGerm::new(vec![
            power(1.0, 3, 2, 0.0),
            BranchGerm::half_line(PI, 1.0).unwrap(),
        ])
        .unwrap();
        let reports = predict_regions(&curve).unwrap();
        let straight: Vec<_> = reports
            .iter()
            .filter(|r| (r.oriented_angle - PI).abs() < 1e-9)
            .collect();
        assert_eq!(straight.len(), 2);
        // the upper region sees the t^{3/2} sheet bending into it
        let upper = straight
            .iter()
            .find(|r| r.pair == (0, 1))
            .expect("region from branch 0 to branch 1");
        assert_eq!(upper.contributing_predicted, Contribution::Yes);
        let lower = straight.iter().find(|r| r.pair == (1, 0)).unwrap();
        assert_eq!(lower.contributing_predicted, Contribution::No);
    }

    #[test]
    fn branch_count_bound_counts_contributing_regions() {
        let curve = example_curve();
        assert_eq!(branch_count_bound(&curve, &[true, true]).unwrap(), 3);
        assert_eq!(branch_count_bound(&curve, &[false, true]).unwrap(), 2);
        assert_eq!(branch_count_bound(&curve, &[false, false]).unwrap(), 1);
    }

    #[test]
    fn fan_prediction_is_rotation_equivariant() {
        let phi = FRAC_PI_6 / 2.0;
        let base = example_curve();
        let rotated = PlaneCurveGerm::new(vec![
            power(1.0, 3, 2, -FRAC_PI_6 + phi),
            power(-1.0, 3, 2, FRAC_PI_6 + phi),
        ])
        .unwrap();
        let fan = predict_tangent_cone(&base, &[true, true]).unwrap();
        let fan_rot = predict_tangent_cone(&rotated, &[true, true]).unwrap();
        assert_eq!(fan.len(), fan_rot.len());
        for (a, b) in fan.directions.iter().zip(&fan_rot.directions) {
            let rotated_dir = a.direction.rotate(phi);
            assert!(rotated_dir.dist(b.direction) < 1e-12);
        }
    }
}
