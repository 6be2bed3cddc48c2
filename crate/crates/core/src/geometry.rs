//! Spherical primitives.
//!
//! Points on the Earth sphere are unit direction vectors from the Earth's
//! center. Lengths are in km and angles in radians throughout; the Earth
//! radius is the fixed constant [`EARTH_RADIUS_KM`]. The South Pole is
//! `(0, 0, -1)` and the North Pole `(0, 0, 1)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Slack on closed angular comparisons (`<=`), absorbing the last-ulp
/// rounding of exactly constructed boundary cases.
pub const BOUNDARY_EPS: f64 = 1e-12;

const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    dir: [f64; 3],
}

impl SpherePoint {
    /// Normalises `(x, y, z)` onto the unit sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::domain(
                "direction",
                norm,
                "must be finite and non-zero",
            ));
        }
        Ok(Self {
            dir: [x / norm, y / norm, z / norm],
        })
    }

    /// Accepts a vector that is already unit length (to 1e-12).
    pub fn from_unit(dir: [f64; 3]) -> Result<Self> {
        let norm = norm3(dir);
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::domain("direction", norm, "not a unit vector"));
        }
        Ok(Self { dir })
    }

    /// Point at polar angle `theta` from the North Pole and longitude `phi`.
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            dir: [st * cp, st * sp, ct],
        }
    }

    /// Point at angle `psi` from the South Pole and longitude `phi`.
    pub fn from_south_angle(psi: f64, phi: f64) -> Self {
        Self::from_polar(PI - psi, phi)
    }

    pub const fn north_pole() -> Self {
        Self {
            dir: [0.0, 0.0, 1.0],
        }
    }

    pub const fn south_pole() -> Self {
        Self {
            dir: [0.0, 0.0, -1.0],
        }
    }

    #[inline]
    pub fn dir(&self) -> [f64; 3] {
        self.dir
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.dir[0]
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.dir[1]
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.dir[2]
    }

    pub fn antipode(&self) -> Self {
        Self {
            dir: [-self.dir[0], -self.dir[1], -self.dir[2]],
        }
    }

    #[inline]
    pub fn dot(&self, other: &SpherePoint) -> f64 {
        dot3(self.dir, other.dir)
    }

    /// Euclidean chord between the two surface points, in km.
    pub fn chord_km(&self, other: &SpherePoint) -> f64 {
        let d = sub3(self.dir, other.dir);
        EARTH_RADIUS_KM * norm3(d)
    }

    /// Great-circle distance along the surface, in km.
    pub fn arc_km(&self, other: &SpherePoint) -> f64 {
        EARTH_RADIUS_KM * angular_distance(self, other)
    }

    /// Angle from the South Pole, in `[0, pi]`.
    pub fn south_angle(&self) -> f64 {
        angular_distance(&Self::south_pole(), self)
    }

    /// Longitude in `(-pi, pi]`.
    pub fn longitude(&self) -> f64 {
        self.dir[1].atan2(self.dir[0])
    }

    /// Applies a 3x3 rotation matrix (row-major) and renormalises.
    pub fn rotated(&self, m: &[[f64; 3]; 3]) -> Self {
        let d = self.dir;
        let r = [dot3(m[0], d), dot3(m[1], d), dot3(m[2], d)];
        let n = norm3(r);
        Self {
            dir: [r[0] / n, r[1] / n, r[2] / n],
        }
    }
}

/// Central angle between two surface points, in `[0, pi]`.
///
/// Uses `atan2(|u x v|, u . v)`, which stays accurate near 0 and pi where
/// `acos` loses precision.
pub fn angular_distance(u: &SpherePoint, v: &SpherePoint) -> f64 {
    let c = cross3(u.dir, v.dir);
    norm3(c).atan2(dot3(u.dir, v.dir))
}

/// Surface area of a cap with the given half-angle, in km^2.
pub fn cap_area(half_angle: f64) -> Result<f64> {
    if !(half_angle > 0.0 && half_angle <= PI) {
        return Err(Error::domain(
            "half_angle",
            half_angle,
            "must lie in (0, pi]",
        ));
    }
    Ok(2.0 * PI * EARTH_RADIUS_KM * EARTH_RADIUS_KM * (1.0 - half_angle.cos()))
}

/// Closed spherical cap: all points within `half_angle` of `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub center: SpherePoint,
    pub half_angle: f64,
}

impl Cap {
    pub fn new(center: SpherePoint, half_angle: f64) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle < PI) {
            return Err(Error::domain(
                "half_angle",
                half_angle,
                "must lie in (0, pi)",
            ));
        }
        Ok(Self { center, half_angle })
    }

    pub fn area(&self) -> f64 {
        2.0 * PI * EARTH_RADIUS_KM * EARTH_RADIUS_KM * (1.0 - self.half_angle.cos())
    }

    /// Inclusive membership test.
    pub fn contains(&self, p: &SpherePoint) -> bool {
        cap_contains(self, p)
    }
}

pub fn cap_contains(cap: &Cap, p: &SpherePoint) -> bool {
    angular_distance(&cap.center, p) <= cap.half_angle + BOUNDARY_EPS
}

/// Closed test `angle(u, v) <= limit` that only falls back to the exact
/// `atan2` form when the dot product is too close to call.
#[derive(Debug, Clone, Copy)]
pub struct AngleWithin {
    limit: f64,
    cos_hi: f64,
    cos_lo: f64,
}

impl AngleWithin {
    const MARGIN: f64 = 1e-9;

    pub fn new(limit: f64) -> Self {
        let c = limit.min(PI).cos();
        Self {
            limit,
            cos_hi: c + Self::MARGIN,
            cos_lo: c - Self::MARGIN,
        }
    }

    pub fn limit(&self) -> f64 {
        self.limit
    }

    #[inline]
    pub fn test(&self, u: &SpherePoint, v: &SpherePoint) -> bool {
        if self.limit >= PI {
            return true;
        }
        let d = u.dot(v);
        if d >= self.cos_hi {
            true
        } else if d <= self.cos_lo {
            false
        } else {
            angular_distance(u, v) <= self.limit + BOUNDARY_EPS
        }
    }
}

/// Uniform point on the sphere: `z` uniform on `[-1, 1)`, azimuth uniform on
/// `[0, 2 pi)`. Consumes exactly two draws.
pub fn sample_uniform_sphere(stream: &mut RandomStream) -> SpherePoint {
    let z = stream.uniform_in(-1.0, 1.0);
    let phi = stream.uniform_in(0.0, 2.0 * PI);
    let s = (1.0 - z * z).max(0.0).sqrt();
    let (sp, cp) = phi.sin_cos();
    SpherePoint {
        dir: [s * cp, s * sp, z],
    }
}

/// Uniformly random rotation matrix (row-major), from a random unit
/// quaternion.
pub fn random_rotation(stream: &mut RandomStream) -> [[f64; 3]; 3] {
    let u1 = stream.uniform();
    let u2 = stream.uniform_in(0.0, 2.0 * PI);
    let u3 = stream.uniform_in(0.0, 2.0 * PI);
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos());
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

#[inline]
pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}
