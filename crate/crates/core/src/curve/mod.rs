//! Plane-curve germs built from power-sum branches.
//!
//! A branch is, in its canonical frame, the graph `t ↦ (t, f(t))` on
//! `[0, ε]` with `f(t) = Σ aᵢ t^αᵢ`, all exponents exact rationals `> 1`
//! (so `f(0) = 0` and `f'(0) = 0`), then rotated into world coordinates.
//! A curve germ is an ordered finite union of pairwise distinct branches,
//! all ending at the origin.

mod parse;

pub use parse::{parse_curve_spec, ParseError};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use thiserror::Error;

use crate::geom::{normalize_angle, Point2};
use crate::scalar::Real;
use crate::Exponent;

/// Two world tangent angles closer than this are treated as the same
/// tangent half-line; the tie is then broken symbolically.
pub const TANGENT_ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("term exponent {0} must be greater than 1")]
    ExponentNotGreaterThanOne(Exponent),
    #[error("term coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("term exponents must be strictly increasing")]
    NonIncreasingExponents,
    #[error("domain length must be positive")]
    DomainLengthNotPositive,
    #[error("parameter {t} outside branch domain [0, {eps}]")]
    ParameterOutOfDomain { t: f64, eps: f64 },
    #[error("a curve germ needs at least one branch")]
    NoBranches,
    #[error("branches {0} and {1} are indistinguishable near the origin")]
    IndistinguishableBranches(usize, usize),
}

/// One term `coeff · t^exponent` of a branch graph function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm<T> {
    pub coeff: T,
    pub exponent: Exponent,
}

impl<T: Real> PowerTerm<T> {
    pub fn new(coeff: T, exponent: Exponent) -> Result<Self, CurveError> {
        if coeff == T::zero() || !coeff.is_finite() {
            return Err(CurveError::ZeroCoefficient);
        }
        if exponent <= Ratio::from_integer(1) {
            return Err(CurveError::ExponentNotGreaterThanOne(exponent));
        }
        Ok(Self { coeff, exponent })
    }

    pub fn exponent_value(&self) -> T {
        T::of(*self.exponent.numer() as f64) / T::of(*self.exponent.denom() as f64)
    }
}

/// One branch of a curve germ: a rotated power-sum graph on `[0, ε]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchGerm<T> {
    terms: Vec<PowerTerm<T>>,
    rotation: T,
    domain_length: T,
    rot_cos: T,
    rot_sin: T,
    // float exponents cached for the hot evaluation path
    float_terms: Vec<(T, T)>,
}

impl<T: Real> BranchGerm<T> {
    /// Builds a branch; `rotation` is normalized into `[0, 2π)`.
    pub fn new(
        terms: Vec<PowerTerm<T>>,
        rotation: T,
        domain_length: T,
    ) -> Result<Self, CurveError> {
        if !(domain_length > T::zero()) || !domain_length.is_finite() {
            return Err(CurveError::DomainLengthNotPositive);
        }
        for pair in terms.windows(2) {
            if pair[1].exponent <= pair[0].exponent {
                return Err(CurveError::NonIncreasingExponents);
            }
        }
        let rotation = normalize_angle(rotation);
        let float_terms = terms
            .iter()
            .map(|term| (term.coeff, term.exponent_value()))
            .collect();
        Ok(Self {
            terms,
            rotation,
            domain_length,
            rot_cos: rotation.cos(),
            rot_sin: rotation.sin(),
            float_terms,
        })
    }

    /// Straight half-line branch (`f ≡ 0`).
    pub fn half_line(rotation: T, domain_length: T) -> Result<Self, CurveError> {
        Self::new(Vec::new(), rotation, domain_length)
    }

    /// Convenience constructor for `coeff · t^(p/q)` single-term branches.
    pub fn power(coeff: T, p: i64, q: i64, rotation: T, eps: T) -> Result<Self, CurveError> {
        Self::new(vec![PowerTerm::new(coeff, Ratio::new(p, q))?], rotation, eps)
    }

    pub fn terms(&self) -> &[PowerTerm<T>] {
        &self.terms
    }

    pub fn rotation(&self) -> T {
        self.rotation
    }

    pub fn domain_length(&self) -> T {
        self.domain_length
    }

    pub fn is_zero_function(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&PowerTerm<T>> {
        self.terms.first()
    }

    /// Canonical-frame graph value `f(t)`.
    pub fn f(&self, t: T) -> T {
        let mut acc = T::zero();
        for &(c, a) in &self.float_terms {
            acc += c * t.powf(a);
        }
        acc
    }

    /// `f'(t)` for `t > 0`; tends to 0 as `t → 0⁺` since all exponents
    /// exceed 1.
    pub fn f_prime(&self, t: T) -> T {
        let mut acc = T::zero();
        for &(c, a) in &self.float_terms {
            acc += c * a * t.powf(a - T::one());
        }
        acc
    }

    #[inline]
    pub fn eval_canonical(&self, t: T) -> Point2<T> {
        Point2::new(t, self.f(t))
    }

    /// World-frame point at parameter `t`, domain-checked.
    pub fn eval(&self, t: T) -> Result<Point2<T>, CurveError> {
        if t < T::zero() || t > self.domain_length || !t.is_finite() {
            return Err(CurveError::ParameterOutOfDomain {
                t: t.as_f64(),
                eps: self.domain_length.as_f64(),
            });
        }
        Ok(self.eval_raw(t))
    }

    #[inline]
    pub(crate) fn eval_raw(&self, t: T) -> Point2<T> {
        self.eval_canonical(t).rotate_cs(self.rot_cos, self.rot_sin)
    }

    /// Unit vector spanning the tangent half-line at the origin.
    pub fn tangent_direction(&self) -> Point2<T> {
        Point2::new(self.rot_cos, self.rot_sin)
    }

    pub fn tangent_angle(&self) -> T {
        self.rotation
    }

    /// World point mapped into this branch's canonical frame.
    #[inline]
    pub fn world_to_canonical(&self, p: Point2<T>) -> Point2<T> {
        p.rotate_cs(self.rot_cos, -self.rot_sin)
    }

    #[inline]
    pub fn canonical_to_world(&self, p: Point2<T>) -> Point2<T> {
        p.rotate_cs(self.rot_cos, self.rot_sin)
    }

    /// Upper bound for `‖γ'(t)‖` on the whole domain, hence a Lipschitz
    /// constant of the parametrization.
    pub fn speed_bound(&self) -> T {
        let mut slope = T::zero();
        for &(c, a) in &self.float_terms {
            slope += c.abs() * a * self.domain_length.powf(a - T::one());
        }
        (T::one() + slope * slope).sqrt()
    }

    fn same_tangent(&self, other: &Self) -> bool {
        crate::geom::angular_separation(self.rotation, other.rotation) <= T::of(TANGENT_ANGLE_TOL)
    }

    /// Sign of `f_self − f_other` for small `t > 0`, both branches read in
    /// the canonical frame of their (shared) tangent. `Equal` means the
    /// branches coincide as formal power sums.
    fn compare_ordinates(&self, other: &Self) -> Ordering {
        let mut diff: BTreeMap<Exponent, T> = BTreeMap::new();
        for term in &self.terms {
            *diff.entry(term.exponent).or_insert_with(T::zero) += term.coeff;
        }
        for term in &other.terms {
            *diff.entry(term.exponent).or_insert_with(T::zero) -= term.coeff;
        }
        for (_, net) in diff {
            if net > T::zero() {
                return Ordering::Greater;
            }
            if net < T::zero() {
                return Ordering::Less;
            }
        }
        Ordering::Equal
    }
}

/// A plane curve germ: `k ≥ 1` branches ending at the origin, together with
/// their counterclockwise cyclic order by tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurveGerm<T> {
    branches: Vec<BranchGerm<T>>,
    order: Vec<usize>,
}

impl<T: Real> PlaneCurveGerm<T> {
    pub fn new(branches: Vec<BranchGerm<T>>) -> Result<Self, CurveError> {
        let order = order_branches(&branches)?;
        Ok(Self { branches, order })
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[BranchGerm<T>] {
        &self.branches
    }

    pub fn branch(&self, i: usize) -> &BranchGerm<T> {
        &self.branches[i]
    }

    /// Branch indices in counterclockwise cyclic order, starting from the
    /// smallest tangent angle.
    pub fn cyclic_order(&self) -> &[usize] {
        &self.order
    }

    /// Branch index following `i` in the counterclockwise cyclic order.
    pub fn cyclic_successor(&self, i: usize) -> usize {
        let pos = self
            .order
            .iter()
            .position(|&b| b == i)
            .expect("branch index in cyclic order");
        self.order[(pos + 1) % self.order.len()]
    }

    /// Smallest branch domain length; analysis windows are sized from this.
    pub fn min_domain_length(&self) -> T {
        self.branches
            .iter()
            .map(|b| b.domain_length())
            .fold(T::infinity(), T::min)
    }

    /// Canonical curve-spec serialization; parsing it back yields an
    /// identical germ.
    pub fn to_spec_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "epsilon={}", self.min_domain_length());
        for branch in &self.branches {
            let _ = write!(out, "branch rotate={}rad: ", branch.rotation());
            if branch.is_zero_function() {
                out.push('0');
            } else {
                let rendered: Vec<String> = branch
                    .terms()
                    .iter()
                    .map(|term| {
                        if term.exponent.is_integer() {
                            format!("{}*t^{}", term.coeff, term.exponent.numer())
                        } else {
                            format!(
                                "{}*t^({}/{})",
                                term.coeff,
                                term.exponent.numer(),
                                term.exponent.denom()
                            )
                        }
                    })
                    .collect();
                out.push_str(&rendered.join(" + "));
            }
            out.push('\n');
        }
        out
    }
}

/// Computes the counterclockwise cyclic order of branches by world tangent
/// angle. Branches sharing a tangent half-line are ordered with the one
/// lying clockwise of the other (smaller ordinate in the shared canonical
/// frame) first.
pub fn order_branches<T: Real>(branches: &[BranchGerm<T>]) -> Result<Vec<usize>, CurveError> {
    if branches.is_empty() {
        return Err(CurveError::NoBranches);
    }
    let mut idx: Vec<usize> = (0..branches.len()).collect();
    idx.sort_by(|&a, &b| {
        branches[a]
            .tangent_angle()
            .partial_cmp(&branches[b].tangent_angle())
            .unwrap_or(Ordering::Equal)
    });

    // group indices sharing a tangent, including the wrap-around at 0/2π
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &idx {
        match groups.last_mut() {
            Some(group) if branches[*group.last().unwrap()].same_tangent(&branches[i]) => {
                group.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }
    if groups.len() > 1 {
        let first = groups[0][0];
        let last = *groups.last().unwrap().last().unwrap();
        if branches[first].same_tangent(&branches[last]) {
            let tail = groups.pop().unwrap();
            let head = std::mem::take(&mut groups[0]);
            groups[0] = tail.into_iter().chain(head).collect();
        }
    }

    let mut order = Vec::with_capacity(branches.len());
    for group in &mut groups {
        group.sort_by(|&a, &b| branches[a].compare_ordinates(&branches[b]));
        for pair in group.windows(2) {
            if branches[pair[0]].compare_ordinates(&branches[pair[1]]) == Ordering::Equal {
                return Err(CurveError::IndistinguishableBranches(pair[0], pair[1]));
            }
        }
        order.extend_from_slice(group);
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

    fn power_branch(coeff: f64, p: i64, q: i64, rot: f64) -> BranchGerm<f64> {
        BranchGerm::power(coeff, p, q, rot, 1.0).unwrap()
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(matches!(
            PowerTerm::new(1.0, Ratio::new(1, 1)),
            Err(CurveError::ExponentNotGreaterThanOne(_))
        ));
        assert!(matches!(
            PowerTerm::new(1.0, Ratio::new(1, 2)),
            Err(CurveError::ExponentNotGreaterThanOne(_))
        ));
        assert!(matches!(
            PowerTerm::new(0.0, Ratio::new(3, 2)),
            Err(CurveError::ZeroCoefficient)
        ));
        let t1 = PowerTerm::new(1.0, Ratio::new(3, 2)).unwrap();
        let t2 = PowerTerm::new(1.0, Ratio::new(5, 4)).unwrap();
        assert!(matches!(
            BranchGerm::new(vec![t1, t2], 0.0, 1.0),
            Err(CurveError::NonIncreasingExponents)
        ));
        assert!(matches!(
            BranchGerm::half_line(0.0, 0.0),
            Err(CurveError::DomainLengthNotPositive)
        ));
    }

    #[test]
    fn eval_matches_hand_values() {
        let b = power_branch(1.0, 3, 2, 0.0);
        let p0 = b.eval(0.0).unwrap();
        assert_eq!((p0.x, p0.y), (0.0, 0.0));
        let p1 = b.eval(1.0).unwrap();
        assert_eq!((p1.x, p1.y), (1.0, 1.0));

        let rotated = power_branch(1.0, 3, 2, FRAC_PI_2);
        let p = rotated.eval(1.0).unwrap();
        assert_relative_eq!(p.x, -1.0, epsilon = 1e-15);
        assert_relative_eq!(p.y, 1.0, epsilon = 1e-15);

        assert!(b.eval(1.5).is_err());
        assert!(b.eval(-0.1).is_err());
    }

    #[test]
    fn eval_at_origin_is_exact_for_any_rotation() {
        for i in 0..12 {
            let rot = i as f64 * PI / 6.0;
            let b = power_branch(-2.5, 7, 4, rot);
            let p = b.eval(0.0).unwrap();
            assert_eq!((p.x, p.y), (0.0, 0.0));
        }
    }

    #[test]
    fn tangent_direction_examples() {
        let b = power_branch(1.0, 3, 2, 0.0);
        assert_eq!(b.tangent_direction(), Point2::new(1.0, 0.0));

        let b = power_branch(1.0, 3, 2, FRAC_PI_6);
        let d = b.tangent_direction();
        assert_relative_eq!(d.x, FRAC_PI_6.cos(), epsilon = 1e-15);
        assert_relative_eq!(d.y, FRAC_PI_6.sin(), epsilon = 1e-15);
    }

    #[test]
    fn tangent_agrees_with_numeric_limit() {
        // Deviation of eval(t)/‖eval(t)‖ from the tangent scales like
        // t^(α−1); at t = 1e-8 this is below 1e-6 once α ≥ 7/4.
        for &(p, q) in &[(7i64, 4i64), (2, 1), (3, 1)] {
            let b = power_branch(1.0, p, q, 0.3);
            let t = 1e-8;
            let dir = b.eval(t).unwrap().unit().unwrap();
            let tangent = b.tangent_direction();
            assert!((dir - tangent).norm() < 1.1e-6, "α = {p}/{q}");
        }
        // straight branch: exact at any parameter
        let hl = BranchGerm::half_line(1.0, 1.0).unwrap();
        let dir = hl.eval(1e-8).unwrap().unit().unwrap();
        assert!((dir - hl.tangent_direction()).norm() < 1e-15);
        // below 7/4 the deviation follows the analytic rate instead
        let b = power_branch(1.0, 3, 2, 0.0);
        let dev = (b.eval(1e-8).unwrap().unit().unwrap() - b.tangent_direction()).norm();
        assert_relative_eq!(dev, 1e-4, max_relative = 1e-3);
    }

    #[test]
    fn eval_is_lipschitz_on_domain() {
        let b = BranchGerm::new(
            vec![
                PowerTerm::new(1.0, Ratio::new(3, 2)).unwrap(),
                PowerTerm::new(-0.5, Ratio::new(2, 1)).unwrap(),
            ],
            0.7,
            1.0,
        )
        .unwrap();
        let lip = b.speed_bound();
        let n = 500;
        for i in 0..n {
            let t0 = i as f64 / n as f64;
            let t1 = (i + 1) as f64 / n as f64;
            let d = b.eval(t0).unwrap().dist(b.eval(t1).unwrap());
            assert!(d <= lip * (t1 - t0) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn ordering_by_distinct_tangents() {
        let minus = power_branch(1.0, 3, 2, -FRAC_PI_6);
        let plus = power_branch(-1.0, 3, 2, FRAC_PI_6);
        let curve = PlaneCurveGerm::new(vec![minus, plus]).unwrap();
        // −π/6 normalizes to 11π/6, so the +π/6 branch leads the cycle
        assert_eq!(curve.cyclic_order(), &[1, 0]);
        assert_eq!(curve.cyclic_successor(1), 0);
        assert_eq!(curve.cyclic_successor(0), 1);
    }

    #[test]
    fn ordering_breaks_shared_tangent_ties_below_first() {
        // half-line y = 0 and the graph of t^{3/2} above it
        let flat = BranchGerm::half_line(0.0, 1.0).unwrap();
        let above = power_branch(1.0, 3, 2, 0.0);
        let curve = PlaneCurveGerm::new(vec![above, flat]).unwrap();
        assert_eq!(curve.cyclic_order(), &[1, 0]);
    }

    #[test]
    fn single_branch_is_a_trivial_cycle() {
        let curve = PlaneCurveGerm::new(vec![power_branch(1.0, 3, 2, 0.2)]).unwrap();
        assert_eq!(curve.cyclic_order(), &[0]);
    }

    #[test]
    fn identical_branches_are_rejected() {
        let a = power_branch(1.0, 3, 2, 0.0);
        let b = power_branch(1.0, 3, 2, 0.0);
        assert!(matches!(
            PlaneCurveGerm::new(vec![a, b]),
            Err(CurveError::IndistinguishableBranches(0, 1))
        ));
    }

    #[test]
    fn wraparound_tangent_group_is_ordered_consistently() {
        // branches at angles 2π−ε and +ε-equivalent share the tangent group
        let lo = BranchGerm::half_line(std::f64::consts::TAU - 5e-10, 1.0).unwrap();
        let hi = power_branch(1.0, 3, 2, 0.0);
        let order = order_branches(&[hi.clone(), lo.clone()]).unwrap();
        // the flat branch sits below the t^{3/2} branch
        assert_eq!(order, vec![1, 0]);
    }

    #[test]
    fn serialization_round_trips() {
        let curve = PlaneCurveGerm::new(vec![
            BranchGerm::new(
                vec![
                    PowerTerm::new(1.0, Ratio::new(3, 2)).unwrap(),
                    PowerTerm::new(-0.25, Ratio::new(2, 1)).unwrap(),
                ],
                -FRAC_PI_6,
                1.0,
            )
            .unwrap(),
            BranchGerm::half_line(FRAC_PI_6, 1.0).unwrap(),
        ])
        .unwrap();
        let text = curve.to_spec_string();
        let reparsed: PlaneCurveGerm<f64> = parse_curve_spec(&text).unwrap();
        assert_eq!(curve, reparsed);
        let again = parse_curve_spec::<f64>(&reparsed.to_spec_string()).unwrap();
        assert_eq!(reparsed, again);
    }
}
