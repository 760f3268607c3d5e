//! Plane vectors, 2x2 matrices and the scalar math shim.

use core::ops::{Add, Mul, Neg, Sub};

/// Scalar math routed through `std` when available and `libm` otherwise, so
/// the rest of the crate is oblivious to the target.
pub(crate) mod scalar {
    #[cfg(feature = "std")]
    mod imp {
        #[inline]
        pub fn sqrt(x: f64) -> f64 {
            x.sqrt()
        }
        #[inline]
        pub fn sin(x: f64) -> f64 {
            x.sin()
        }
        #[inline]
        pub fn cos(x: f64) -> f64 {
            x.cos()
        }
        #[inline]
        pub fn tan(x: f64) -> f64 {
            x.tan()
        }
        #[inline]
        pub fn acos(x: f64) -> f64 {
            x.acos()
        }
        #[inline]
        pub fn atan(x: f64) -> f64 {
            x.atan()
        }
        #[inline]
        pub fn atan2(y: f64, x: f64) -> f64 {
            y.atan2(x)
        }
        #[inline]
        pub fn abs(x: f64) -> f64 {
            x.abs()
        }
        #[inline]
        pub fn floor(x: f64) -> f64 {
            x.floor()
        }
        #[inline]
        pub fn round(x: f64) -> f64 {
            x.round()
        }
    }

    #[cfg(not(feature = "std"))]
    mod imp {
        #[inline]
        pub fn sqrt(x: f64) -> f64 {
            libm::sqrt(x)
        }
        #[inline]
        pub fn sin(x: f64) -> f64 {
            libm::sin(x)
        }
        #[inline]
        pub fn cos(x: f64) -> f64 {
            libm::cos(x)
        }
        #[inline]
        pub fn tan(x: f64) -> f64 {
            libm::tan(x)
        }
        #[inline]
        pub fn acos(x: f64) -> f64 {
            libm::acos(x)
        }
        #[inline]
        pub fn atan(x: f64) -> f64 {
            libm::atan(x)
        }
        #[inline]
        pub fn atan2(y: f64, x: f64) -> f64 {
            libm::atan2(y, x)
        }
        #[inline]
        pub fn abs(x: f64) -> f64 {
            libm::fabs(x)
        }
        #[inline]
        pub fn floor(x: f64) -> f64 {
            libm::floor(x)
        }
        #[inline]
        pub fn round(x: f64) -> f64 {
            libm::round(x)
        }
    }

    pub use imp::*;
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    use core::f64::consts::PI;
    let two_pi = 2.0 * PI;
    let r = (PI - a) - two_pi * scalar::floor((PI - a) / two_pi);
    PI - r
}

/// Plane vector (meters, or meters/second for velocities).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at `angle` from the x-axis: `(cos, sin)`.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        Vec2::new(scalar::cos(angle), scalar::sin(angle))
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; equals `selfᵀ · E · o` for the
    /// rotation E = [[0, 1], [-1, 0]].
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        scalar::sqrt(self.norm_sq())
    }

    /// Unit vector, or `None` when the norm is zero.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        if n > 0.0 {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    /// Rotate by -90 degrees: the paper-convention matrix
    /// E = [[0, 1], [-1, 0]] applied to `self`.
    #[inline]
    pub fn rot_cw(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    /// Rotate by +90 degrees.
    #[inline]
    pub fn rot_ccw(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Direction angle `atan2(y, x)`.
    #[inline]
    pub fn angle(self) -> f64 {
        scalar::atan2(self.y, self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

/// 2x2 matrix, row-major. Hessians of C² functions must be symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub xx: f64,
    pub xy: f64,
    pub yx: f64,
    pub yy: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { xx: 0.0, xy: 0.0, yx: 0.0, yy: 0.0 };
    pub const IDENTITY: Mat2 = Mat2 { xx: 1.0, xy: 0.0, yx: 0.0, yy: 1.0 };

    #[inline]
    pub const fn new(xx: f64, xy: f64, yx: f64, yy: f64) -> Self {
        Mat2 { xx, xy, yx, yy }
    }

    #[inline]
    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        Vec2::new(self.xx * v.x + self.xy * v.y, self.yx * v.x + self.yy * v.y)
    }

    #[inline]
    pub fn transpose(self) -> Mat2 {
        Mat2::new(self.xx, self.yx, self.xy, self.yy)
    }

    /// Largest entry magnitude.
    pub fn max_abs(self) -> f64 {
        scalar::abs(self.xx)
            .max(scalar::abs(self.xy))
            .max(scalar::abs(self.yx))
            .max(scalar::abs(self.yy))
    }

    /// Off-diagonal mismatch relative to the largest entry.
    pub fn asymmetry(self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            scalar::abs(self.xy - self.yx) / scale
        }
    }

    pub fn is_symmetric(self, rel_tol: f64) -> bool {
        self.asymmetry() <= rel_tol
    }

    pub fn is_finite(self) -> bool {
        self.xx.is_finite() && self.xy.is_finite() && self.yx.is_finite() && self.yy.is_finite()
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.xx - o.xx, self.xy - o.xy, self.yx - o.yx, self.yy - o.yy)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        Mat2::new(self.xx * s, self.xy * s, self.yx * s, self.yy * s)
    }
}

/// Axis-aligned box used for sampling regions and field grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec2,
    pub max: Vec2,
}

impl Aabb {
    pub fn new(min: Vec2, max: Vec2) -> crate::Result<Aabb> {
        if !min.is_finite() || !max.is_finite() {
            return Err(crate::Error::NonFiniteInput);
        }
        if min.x >= max.x || min.y >= max.y {
            return Err(crate::Error::InvalidConfig("box must have positive extent"));
        }
        Ok(Aabb { min, max })
    }

    /// Box centered at `c` with half-extents `h` (both positive).
    pub fn centered(c: Vec2, h: Vec2) -> crate::Result<Aabb> {
        Aabb::new(c - h, c + h)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}
