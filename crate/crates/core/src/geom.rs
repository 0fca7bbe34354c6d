//! Small 2D geometry helpers used throughout the simulator.

use serde::{Deserialize, Serialize};

use crate::Real;

/// 2D point/vector in meters. Serializes as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[Real; 2]", into = "[Real; 2]")]
pub struct Vec2 {
    pub x: Real,
    pub y: Real,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: Real, y: Real) -> Self {
        Vec2 { x, y }
    }

    pub fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(self, k: Real) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }

    pub fn dot(self, o: Vec2) -> Real {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> Real {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Vec2) -> Real {
        self.sub(o).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn rot90(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: Real) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Unit vector in the same direction, or `None` when shorter than `eps`.
    pub fn normalized(self, eps: Real) -> Option<Vec2> {
        let n = self.norm();
        if n < eps {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    /// Angle of the vector from +x, in radians.
    pub fn azimuth(self) -> Real {
        self.y.atan2(self.x)
    }

    /// Complex multiplication, treating vectors as `x + yi`.
    pub fn complex_mul(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x * o.x - self.y * o.y, self.x * o.y + self.y * o.x)
    }

    /// Complex division, treating vectors as `x + yi`.
    pub fn complex_div(self, o: Vec2) -> Vec2 {
        let d = o.dot(o);
        Vec2::new(
            (self.x * o.x + self.y * o.y) / d,
            (self.y * o.x - self.x * o.y) / d,
        )
    }
}

impl From<[Real; 2]> for Vec2 {
    fn from(a: [Real; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl From<Vec2> for [Real; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

/// Wrap an angle to (-pi, pi].
pub fn wrap_angle(a: Real) -> Real {
    let mut a = a % (2.0 * std::f64::consts::PI);
    if a <= -std::f64::consts::PI {
        a += 2.0 * std::f64::consts::PI;
    } else if a > std::f64::consts::PI {
        a -= 2.0 * std::f64::consts::PI;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rot90_is_ccw() {
        let v = Vec2::new(1.0, 0.0).rot90();
        assert!((v.x - 0.0).abs() < 1e-12 && (v.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        for k in -10..10 {
            let a = wrap_angle(0.3 + k as f64 * std::f64::consts::PI);
            assert!(a > -std::f64::consts::PI - 1e-12 && a <= std::f64::consts::PI + 1e-12);
        }
    }

    #[test]
    fn complex_roundtrip() {
        let a = Vec2::new(0.3, -1.2);
        let b = Vec2::new(2.0, 0.7);
        let c = a.complex_mul(b).complex_div(b);
        assert!((c.x - a.x).abs() < 1e-12 && (c.y - a.y).abs() < 1e-12);
    }
}
