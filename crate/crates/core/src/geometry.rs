//! Planar primitives: vectors, rigid motions and angular wedges.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(angle: f64) -> Self {
        Vec2::new(angle.cos(), angle.sin())
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(TAU);
    if w > PI {
        w -= TAU;
    }
    w
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// A rigid motion of the plane `z ↦ L z + t` with `L` orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    /// Row-major linear part.
    pub linear: [[f64; 2]; 2],
    pub translation: Vec2,
}

impl Default for Isometry {
    fn default() -> Self {
        Isometry::IDENTITY
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        linear: [[1.0, 0.0], [0.0, 1.0]],
        translation: Vec2::ZERO,
    };

    pub fn translation(t: Vec2) -> Self {
        Isometry {
            translation: t,
            ..Isometry::IDENTITY
        }
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Isometry {
            linear: [[c, -s], [s, c]],
            translation: Vec2::ZERO,
        }
    }

    /// The unique isometry with the given orientation sending segment `a→b`
    /// onto segment `a2→b2` (the segments must have equal length).
    pub fn segment_map(a: Vec2, b: Vec2, a2: Vec2, b2: Vec2, preserve_orientation: bool) -> Self {
        let u = (b - a).normalized();
        let u2 = (b2 - a2).normalized();
        let (v, v2) = (
            u.perp(),
            if preserve_orientation {
                u2.perp()
            } else {
                -u2.perp()
            },
        );
        // L = [u2 v2] [u v]^T
        let linear = [
            [u2.x * u.x + v2.x * v.x, u2.x * u.y + v2.x * v.y],
            [u2.y * u.x + v2.y * v.x, u2.y * u.y + v2.y * v.y],
        ];
        let mut iso = Isometry {
            linear,
            translation: Vec2::ZERO,
        };
        iso.translation = a2 - iso.apply_linear(a);
        iso
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        self.apply_linear(p) + self.translation
    }

    pub fn apply_linear(&self, v: Vec2) -> Vec2 {
        let m = &self.linear;
        Vec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let a = &self.linear;
        let b = &other.linear;
        let linear = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        Isometry {
            linear,
            translation: self.apply(other.translation),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let m = &self.linear;
        // orthogonal: inverse is the transpose
        let linear = [[m[0][0], m[1][0]], [m[0][1], m[1][1]]];
        let mut inv = Isometry {
            linear,
            translation: Vec2::ZERO,
        };
        inv.translation = -inv.apply_linear(self.translation);
        inv
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.linear;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn preserves_orientation(&self) -> bool {
        self.determinant() > 0.0
    }

    /// Whether the linear part is the identity within `tol`.
    pub fn is_translation(&self, tol: f64) -> bool {
        let m = &self.linear;
        (m[0][0] - 1.0).abs() <= tol
            && (m[1][1] - 1.0).abs() <= tol
            && m[0][1].abs() <= tol
            && m[1][0].abs() <= tol
    }

    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (self.linear[i][j] - other.linear[i][j]).abs() <= tol))
            && self.translation.distance(other.translation) <= tol
    }
}

/// A closed-or-open arc of directions `[lo, lo + width]`, measured
/// counterclockwise. `width == 2π` means every direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wedge {
    pub lo: f64,
    pub width: f64,
    /// Rays exactly along the lower (resp. upper) boundary are excluded.
    pub lo_open: bool,
    pub hi_open: bool,
}

/// Angular slack used when classifying a direction against a wedge boundary.
pub const ANGLE_EPS: f64 = 1e-11;

impl Wedge {
    pub const FULL: Wedge = Wedge {
        lo: 0.0,
        width: TAU,
        lo_open: false,
        hi_open: false,
    };

    pub fn closed(lo: f64, width: f64) -> Self {
        Wedge {
            lo,
            width,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn is_full(&self) -> bool {
        self.width >= TAU
    }

    /// Offset of `angle` from the lower boundary, in `[-π/2, 3π/2)`.
    pub fn offset(&self, angle: f64) -> f64 {
        let mut rel = (angle - self.lo).rem_euclid(TAU);
        if rel >= 1.5 * PI {
            rel -= TAU;
        }
        rel
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let rel = self.offset(angle);
        if rel < -ANGLE_EPS || rel > self.width + ANGLE_EPS {
            return false;
        }
        if rel <= ANGLE_EPS && self.lo_open {
            return false;
        }
        if rel >= self.width - ANGLE_EPS && self.hi_open {
            return false;
        }
        true
    }

    /// Intersection with a wedge of width below π. Returns `None` when the
    /// overlap is empty or thinner than the angular slack.
    pub fn intersect(&self, other: &Wedge) -> Option<Wedge> {
        if self.is_full() {
            return Some(*other);
        }
        let a = wrap_angle(other.lo - self.lo);
        let (lo_rel, lo_open) = if a > ANGLE_EPS {
            (a, other.lo_open)
        } else if a < -ANGLE_EPS {
            (0.0, self.lo_open)
        } else {
            (0.0, self.lo_open || other.lo_open)
        };
        let other_hi = a + other.width;
        let (hi_rel, hi_open) = if other_hi < self.width - ANGLE_EPS {
            (other_hi, other.hi_open)
        } else if other_hi > self.width + ANGLE_EPS {
            (self.width, self.hi_open)
        } else {
            (self.width, self.hi_open || other.hi_open)
        };
        let width = hi_rel - lo_rel;
        if width <= ANGLE_EPS {
            return None;
        }
        Some(Wedge {
            lo: self.lo + lo_rel,
            width,
            lo_open,
            hi_open,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_map_sends_endpoints() {
        let (a, b) = (Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0));
        let (a2, b2) = (Vec2::new(3.0, 1.0), Vec2::new(3.0, 2.0));
        for keep in [true, false] {
            let iso = Isometry::segment_map(a, b, a2, b2, keep);
            assert!(iso.apply(a).distance(a2) < 1e-12);
            assert!(iso.apply(b).distance(b2) < 1e-12);
            assert_eq!(iso.preserves_orientation(), keep);
        }
    }

    #[test]
    fn compose_and_inverse() {
        let f = Isometry::segment_map(
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(2.0, 0.5),
            Vec2::new(2.0, 0.5 + 2f64.sqrt()),
            false,
        );
        let id = f.compose(&f.inverse());
        assert!(id.approx_eq(&Isometry::IDENTITY, 1e-12));
    }

    #[test]
    fn wedge_intersection_and_membership() {
        let w = Wedge::closed(0.0, 1.0);
        let v = Wedge {
            lo: 0.5,
            width: 1.0,
            lo_open: true,
            hi_open: false,
        };
        let x = w.intersect(&v).unwrap();
        assert!((x.lo - 0.5).abs() < 1e-15 && (x.width - 0.5).abs() < 1e-15);
        assert!(x.lo_open && !x.hi_open);
        assert!(!x.contains_angle(0.5));
        assert!(x.contains_angle(1.0));
        assert!(x.contains_angle(0.75));
        assert!(w.intersect(&Wedge::closed(2.0, 0.5)).is_none());
        // wrap-around
        let a = Wedge::closed(3.0, 0.5);
        let b = Wedge::closed(-3.0, 0.5);
        let ab = a.intersect(&b).unwrap();
        assert!(ab.contains_angle(3.4) && !ab.contains_angle(PI));
    }
}
