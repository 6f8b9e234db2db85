//! Small 2-D vector/point type and angle utilities.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Real;

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Counterclockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    /// Rotates by the angle whose cosine/sine are given.
    #[inline]
    pub fn rotate_cs(self, cos: T, sin: T) -> Self {
        Self::new(self.x * cos - self.y * sin, self.x * sin + self.y * cos)
    }

    #[inline]
    pub fn rotate(self, angle: T) -> Self {
        self.rotate_cs(angle.cos(), angle.sin())
    }

    /// Angle in `[0, 2π)`.
    #[inline]
    pub fn angle(self) -> T {
        normalize_angle(self.y.atan2(self.x))
    }

    pub fn unit(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self / n)
        } else {
            None
        }
    }

    #[inline]
    pub fn from_angle(angle: T) -> Self {
        Self::new(angle.cos(), angle.sin())
    }
}

impl<T: Real> Add for Point2<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Real> Sub for Point2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Real> Mul<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: T) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

impl<T: Real> Div<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: T) -> Self {
        Self::new(self.x / rhs, self.y / rhs)
    }
}

impl<T: Real> Neg for Point2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Maps any angle to `[0, 2π)`.
pub fn normalize_angle<T: Real>(a: T) -> T {
    let tau = T::of(std::f64::consts::TAU);
    let mut r = a % tau;
    if r < T::zero() {
        r += tau;
    }
    // `% tau` of a slightly negative value can round up to exactly tau.
    if r >= tau {
        r -= tau;
    }
    r
}

/// Counterclockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_delta<T: Real>(from: T, to: T) -> T {
    normalize_angle(to - from)
}

/// Absolute angular separation, in `[0, π]`.
pub fn angular_separation<T: Real>(a: T, b: T) -> T {
    let d = ccw_delta(a, b);
    let tau = T::of(std::f64::consts::TAU);
    d.min(tau - d)
}

/// Whether `angle` lies in the closed ccw interval from `lo` to `hi`.
pub fn in_ccw_interval<T: Real>(angle: T, lo: T, hi: T) -> bool {
    ccw_delta(lo, angle) <= ccw_delta(lo, hi)
}

/// Circular mean of unit directions; `None` when they cancel out.
pub fn circular_mean<T: Real>(dirs: &[Point2<T>]) -> Option<Point2<T>> {
    let mut sum = Point2::zero();
    for d in dirs {
        sum = sum + *d;
    }
    sum.unit()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_normalization_wraps() {
        let a: f64 = -0.25;
        let n = normalize_angle(a);
        assert!((n - (std::f64::consts::TAU - 0.25)).abs() < 1e-15);
        assert_eq!(normalize_angle(0.0f64), 0.0);
    }

    #[test]
    fn ccw_interval_wraps_zero() {
        assert!(in_ccw_interval(0.1f64, -0.2, 0.3));
        assert!(!in_ccw_interval(1.0f64, -0.2, 0.3));
        // interval crossing 0
        assert!(in_ccw_interval(6.2f64, 6.0, 0.5));
    }

    #[test]
    fn perp_is_ccw() {
        let p = Point2::new(1.0f64, 0.0);
        let q = p.perp();
        assert!((q.x).abs() < 1e-15 && (q.y - 1.0).abs() < 1e-15);
    }
}
