//! Planar primitives shared by the solvers: points, circles, rigid motions,
//! the Apollonius circle and the bisector meeting-point root-finder.

use crate::error::{Error, Result};
use crate::search;
use crate::TOL_SPEED;

/// Absolute per-coordinate tolerance for degeneracy detection only.
/// Never used inside numeric kernels.
pub const TOL_POINT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Degeneracy test: equal within `TOL_POINT` per coordinate.
    pub fn approx_eq(self, other: Point) -> bool {
        (self.x - other.x).abs() <= TOL_POINT && (self.y - other.y).abs() <= TOL_POINT
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

pub fn distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn point_at(&self, theta: f64) -> Point {
        self.center + Point::new(theta.cos(), theta.sin()) * self.radius
    }
}

/// Signed angle of vector `v`, atan2 convention, in (-pi, pi].
pub fn polar_angle(v: Point) -> f64 {
    v.y.atan2(v.x)
}

/// Unsigned angle at `vertex` between rays toward `a` and `b`, in [0, pi].
pub fn angle_at(vertex: Point, a: Point, b: Point) -> f64 {
    let u = a - vertex;
    let w = b - vertex;
    let cross = u.x * w.y - u.y * w.x;
    let dot = u.dot(w);
    cross.atan2(dot).abs()
}

pub fn rotate_about(p: Point, center: Point, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    let d = p - center;
    center + Point::new(c * d.x - s * d.y, s * d.x + c * d.y)
}

/// Reflection of `p` across the line through `a` and `b` (a != b).
pub fn reflect_across(p: Point, a: Point, b: Point) -> Point {
    let d = b - a;
    let n = d * (1.0 / d.norm());
    let v = p - a;
    a + n * (2.0 * v.dot(n)) - v
}

/// Locus of points P with |PK|/|PS| = v, for v > 1: a circle containing S
/// strictly inside and excluding K.
pub fn apollonius_circle(k: Point, s: Point, v: f64) -> Result<Circle> {
    if !(v > 1.0 + TOL_SPEED) {
        return Err(Error::DegenerateSpeed);
    }
    if k.approx_eq(s) {
        return Err(Error::CoincidentPoints);
    }
    let den = v * v - 1.0;
    let center = s + (s - k) * (1.0 / den);
    let radius = v * distance(s, k) / den;
    Ok(Circle { center, radius })
}

/// Rigid motion mapping world coordinates to a local frame with `origin` at
/// (0,0) and `toward` on the positive x axis; optionally mirrored so a chosen
/// witness point lands in the closed upper half-plane.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    origin: Point,
    u: Point,
    flip_y: bool,
}

impl Frame {
    /// `origin` and `toward` must be distinct.
    pub fn from_segment(origin: Point, toward: Point) -> Result<Frame> {
        let d = toward - origin;
        let n = d.norm();
        if n <= 0.0 {
            return Err(Error::CoincidentPoints);
        }
        Ok(Frame { origin, u: d * (1.0 / n), flip_y: false })
    }

    /// Mirror the frame if needed so that `witness` maps into y >= 0.
    pub fn oriented_with(mut self, witness: Point) -> Frame {
        if self.to_local(witness).y < 0.0 {
            self.flip_y = true;
        }
        self
    }

    pub fn to_local(&self, p: Point) -> Point {
        let d = p - self.origin;
        let y = d.dot(self.u.perp());
        Point::new(d.dot(self.u), if self.flip_y { -y } else { y })
    }

    pub fn to_world(&self, p: Point) -> Point {
        let y = if self.flip_y { -p.y } else { p.y };
        self.origin + self.u * p.x + self.u.perp() * y
    }
}

/// Point M on `circle` minimizing |KM| + |MD|, i.e. the tangency point of the
/// smallest ellipse with foci K, D that touches the circle. At that point the
/// ray center->M bisects the angle D-M-K.
///
/// Requires K and D outside the circle (the at-source solver guarantees this:
/// the slow-solo branch already caught every D on or inside the locus).
pub fn bisector_meeting_point(circle: Circle, k: Point, d: Point, _v: f64) -> Result<Point> {
    let c = circle.center;
    let phi_k = polar_angle(k - c);
    let m_at = |alpha: f64| circle.point_at(phi_k + alpha);
    let objective = |alpha: f64| {
        let m = m_at(alpha);
        distance(k, m) + distance(m, d)
    };

    // With both foci outside, the length function along the circle has at
    // most two local minima, and chasing the bisection condition by sign
    // changes can lose a min-max pair to any fixed grid when a second basin
    // is about to appear. Minimize the length directly instead.
    let n = 4096;
    let step = std::f64::consts::TAU / n as f64;
    let mut best_j = 0;
    let mut best_val = f64::INFINITY;
    for j in 0..n {
        let val = objective(j as f64 * step);
        if val < best_val {
            best_val = val;
            best_j = j;
        }
    }
    let center = best_j as f64 * step;
    let (alpha, _) = search::golden_min(objective, center - step, center + step, 1e-12);

    // Golden section places the minimizer only to ~sqrt(ulp) on the flat
    // valley floor; the bisection condition crosses zero transversally there,
    // so polish the position with it.
    // The side factor keeps the residual odd when the minimizer sits on the
    // c-k axis (there the unsigned angle difference only touches zero).
    let residual = |a: f64| {
        let m = m_at(a);
        let side = (m - c).perp().dot(k - m).signum();
        side * (angle_at(m, d, c) - angle_at(m, c, k))
    };
    for delta in [1e-6, 1e-4, 1e-2] {
        if residual(alpha - delta) * residual(alpha + delta) < 0.0 {
            let root = search::bisect(residual, alpha - delta, alpha + delta, 0.0, 1e-14);
            return Ok(m_at(root));
        }
    }
    Ok(m_at(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: fn(f64, f64) -> Point = Point::new;

    #[test]
    fn distance_basics() {
        assert_eq!(distance(P(0.0, 0.0), P(0.0, 0.0)), 0.0);
        assert_eq!(distance(P(0.0, 0.0), P(3.0, 4.0)), 5.0);
        let r = distance(P(2f64.sqrt(), 0.0), P(1.0, 0.0));
        assert!((r - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn rotation_basics() {
        let q = rotate_about(P(1.0, 0.0), P(0.0, 0.0), std::f64::consts::FRAC_PI_2);
        assert!(distance(q, P(0.0, 1.0)) < 1e-15);
        let h = rotate_about(P(2.0, 0.0), P(1.0, 0.0), std::f64::consts::PI);
        assert!(distance(h, P(0.0, 0.0)) < 1e-15);
        let p = P(0.37, -1.2);
        assert!(distance(rotate_about(p, P(5.0, 2.0), 0.0), p) < 1e-14);
    }

    #[test]
    fn rotation_is_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let p = P(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let c = P(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let t = rng.random_range(-7.0..7.0);
            let q = rotate_about(p, c, t);
            assert!((distance(q, c) - distance(p, c)).abs() <= 1e-12 * (1.0 + distance(p, c)));
        }
    }

    #[test]
    fn apollonius_examples() {
        let c = apollonius_circle(P(3.0, 0.0), P(0.0, 0.0), 2.0).unwrap();
        assert!(distance(c.center, P(-1.0, 0.0)) < 1e-12 && (c.radius - 2.0).abs() < 1e-12);

        let c = apollonius_circle(P(1.0, 0.0), P(0.0, 0.0), 2.0).unwrap();
        assert!(distance(c.center, P(-1.0 / 3.0, 0.0)) < 1e-12);
        assert!((c.radius - 2.0 / 3.0).abs() < 1e-12);
        let p = P(1.0 / 3.0, 0.0);
        assert!((distance(p, P(1.0, 0.0)) / distance(p, P(0.0, 0.0)) - 2.0).abs() < 1e-12);

        let c = apollonius_circle(P(0.0, 5.0), P(0.0, 0.0), 3.0).unwrap();
        assert!(distance(c.center, P(0.0, -5.0 / 8.0)) < 1e-12);
        assert!((c.radius - 15.0 / 8.0).abs() < 1e-12);
        for i in 0..16 {
            let p = c.point_at(i as f64 * std::f64::consts::TAU / 16.0);
            let ratio = distance(p, P(0.0, 5.0)) / distance(p, P(0.0, 0.0));
            assert!((ratio - 3.0).abs() < 1e-9 * 3.0);
        }
    }

    #[test]
    fn apollonius_degeneracies() {
        assert_eq!(
            apollonius_circle(P(1.0, 0.0), P(0.0, 0.0), 1.0),
            Err(Error::DegenerateSpeed)
        );
        assert_eq!(
            apollonius_circle(P(0.0, 0.0), P(0.0, 0.0), 2.0),
            Err(Error::CoincidentPoints)
        );
    }

    #[test]
    fn apollonius_ratio_invariant_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let k = P(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let s = P(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            if distance(k, s) < 1e-3 {
                continue;
            }
            let v = rng.random_range(1.001..10.0);
            let c = apollonius_circle(k, s, v).unwrap();
            for i in 0..64 {
                let p = c.point_at(i as f64 * std::f64::consts::TAU / 64.0);
                let ratio = distance(p, k) / distance(p, s);
                assert!(
                    (ratio - v).abs() <= 1e-9 * v,
                    "ratio {ratio} vs v {v} at sample {i}"
                );
            }
        }
    }

    #[test]
    fn similitude_locus_of_circle_centers() {
        // Sliding the fast robot around a circle of radius a*v about K slides
        // the meeting-circle center around a circle about the original center.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let k = P(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let s = P(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            if distance(k, s) < 1e-2 {
                continue;
            }
            let v = rng.random_range(1.1..6.0);
            let a = rng.random_range(0.1..3.0);
            let locus_center = s + (s - k) * (1.0 / (v * v - 1.0));
            let locus_radius = a * v / (v * v - 1.0);
            for i in 0..32 {
                let beta = i as f64 * std::f64::consts::TAU / 32.0;
                let q = k + P(beta.cos(), beta.sin()) * (a * v);
                if q.approx_eq(s) {
                    continue;
                }
                let c = apollonius_circle(q, s, v).unwrap().center;
                assert!(
                    (distance(s, c) * (v * v - 1.0) - distance(s, q)).abs() <= 1e-9,
                    "center-to-source distance off at beta={beta}"
                );
                assert!(
                    (distance(locus_center, c) - locus_radius).abs() <= 1e-9,
                    "center locus radius off at beta={beta}"
                );
            }
        }
    }

    #[test]
    fn reflection_is_involution() {
        let a = P(0.3, -0.7);
        let b = P(2.0, 1.5);
        let p = P(-1.0, 4.0);
        let q = reflect_across(p, a, b);
        assert!(distance(reflect_across(q, a, b), p) < 1e-12);
        // points on the line are fixed
        assert!(distance(reflect_across(a, a, b), a) < 1e-12);
    }

    #[test]
    fn bisector_on_axis_when_symmetric() {
        // D on the ray center -> K beyond K: symmetry forces M onto the axis.
        let circle = apollonius_circle(P(3.0, 0.0), P(0.0, 0.0), 2.0).unwrap();
        let m = bisector_meeting_point(circle, P(3.0, 0.0), P(10.0, 0.0), 2.0).unwrap();
        assert!(m.y.abs() < 1e-9);
        assert!((m.x - 1.0).abs() < 1e-9); // center (-1,0) + radius 2 toward K
    }

    #[test]
    fn bisector_property_and_optimality() {
        let k = P(3.0, 0.0);
        let d = P(-1.0, 4.0);
        let circle = apollonius_circle(k, P(0.0, 0.0), 2.0).unwrap();
        let m = bisector_meeting_point(circle, k, d, 2.0).unwrap();
        let lhs = angle_at(m, d, circle.center);
        let rhs = angle_at(m, circle.center, k);
        assert!((lhs - rhs).abs() < 1e-9, "bisection residual {}", lhs - rhs);

        // brute force over a fine discretization, then refine the best bracket
        let obj = |p: Point| distance(k, p) + distance(p, d);
        let n = 100_000;
        let mut best_i = 0;
        let mut best = f64::INFINITY;
        for i in 0..n {
            let val = obj(circle.point_at(i as f64 * std::f64::consts::TAU / n as f64));
            if val < best {
                best = val;
                best_i = i;
            }
        }
        let step = std::f64::consts::TAU / n as f64;
        let (_, refined) = crate::search::golden_min(
            |t| obj(circle.point_at(t)),
            (best_i as f64 - 1.0) * step,
            (best_i as f64 + 1.0) * step,
            1e-14,
        );
        assert!(obj(m) <= refined + 1e-7, "obj(M)={} refined={}", obj(m), refined);
    }
}
