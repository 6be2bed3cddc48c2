//! Stereographic projection onto the plane tangent at the South Pole.
//!
//! The projection frame puts the Earth's center at `(0, 0, r_e)`, so the
//! South Pole sits at the origin, the North Pole at `(0, 0, 2 r_e)`, and the
//! projection plane is `z = 0`. Rays are cast from the North Pole, which is
//! the one point without an image.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angular_distance, Cap, SpherePoint, EARTH_RADIUS_KM};

const R: f64 = EARTH_RADIUS_KM;

/// Angular tolerance for the North Pole singularity and the half-plane case.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Image of a spherical cap on the projection plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProjectedShape {
    /// Cap excludes the North Pole: a closed disk.
    Disk { center: PlanePoint, radius: f64 },
    /// Cap boundary passes through the North Pole: the half-plane
    /// `{q : q . normal >= offset}`.
    HalfPlane { normal: [f64; 2], offset: f64 },
    /// Cap contains the North Pole: everything outside the open disk.
    DiskComplement { center: PlanePoint, radius: f64 },
}

impl ProjectedShape {
    pub fn contains(&self, q: &PlanePoint) -> bool {
        match *self {
            ProjectedShape::Disk { center, radius } => q.distance(&center) <= radius,
            ProjectedShape::HalfPlane { normal, offset } => {
                q.x * normal[0] + q.y * normal[1] >= offset
            }
            ProjectedShape::DiskComplement { center, radius } => q.distance(&center) >= radius,
        }
    }
}

/// Unit-vector frame to projection frame (km).
pub fn to_projection_frame(p: &SpherePoint) -> [f64; 3] {
    [R * p.x(), R * p.y(), R * (1.0 + p.z())]
}

/// Projection frame (km) to unit-vector frame.
pub fn from_projection_frame(v: [f64; 3]) -> Result<SpherePoint> {
    SpherePoint::new(v[0], v[1], v[2] - R)
}

pub fn project(p: &SpherePoint) -> Result<PlanePoint> {
    if angular_distance(p, &SpherePoint::north_pole()) < POLE_TOL {
        return Err(Error::PoleProjection);
    }
    // 2 r_e / (2 r_e - z) with z = r_e (1 + u_z).
    let scale = 2.0 * R / (1.0 - p.z());
    Ok(PlanePoint::new(scale * p.x(), scale * p.y()))
}

/// Projection-frame coordinates (km) of the preimage of `q`.
pub fn unproject_frame(q: &PlanePoint) -> [f64; 3] {
    let rho2 = q.x * q.x + q.y * q.y;
    let denom = 4.0 * R * R + rho2;
    [
        4.0 * R * R * q.x / denom,
        4.0 * R * R * q.y / denom,
        2.0 * R * rho2 / denom,
    ]
}

pub fn unproject(q: &PlanePoint) -> SpherePoint {
    let rho2 = q.x * q.x + q.y * q.y;
    let denom = 4.0 * R * R + rho2;
    // z / r_e - 1 rewritten to avoid cancellation far from the origin.
    let x = 4.0 * R * q.x / denom;
    let y = 4.0 * R * q.y / denom;
    let z = (rho2 - 4.0 * R * R) / denom;
    SpherePoint::new(x, y, z).expect("finite plane point has a sphere preimage")
}

/// Signed distance from the origin of the image of a point at signed angle
/// `s` from the South Pole along a fixed meridian.
#[inline]
fn meridian_image(s: f64) -> f64 {
    2.0 * R * (s / 2.0).tan()
}

#[inline]
fn meridian_preimage(rho: f64) -> f64 {
    2.0 * (rho / (2.0 * R)).atan()
}

/// Radius of the disk a cap of half-angle `gamma0` projects to when its center
/// is at angle `psi` from the South Pole.
pub fn projected_circle_radius(psi: f64, gamma0: f64) -> Result<f64> {
    if !(gamma0 > 0.0 && gamma0 < FRAC_PI_2) {
        return Err(Error::domain("gamma0", gamma0, "must lie in (0, pi/2)"));
    }
    if psi.abs() >= PI - gamma0 || psi.is_nan() {
        return Err(Error::domain(
            "psi",
            psi,
            "cap must exclude the North Pole (|psi| < pi - gamma0)",
        ));
    }
    Ok(R * (((psi + gamma0) / 2.0).tan() - ((psi - gamma0) / 2.0).tan()).abs())
}

/// Largest central angle of a cap whose image is a disk of radius `r`.
pub fn max_central_angle_for_radius(r: f64) -> f64 {
    2.0 * (r / (2.0 * R)).atan()
}

pub fn project_cap(cap: &Cap) -> ProjectedShape {
    let delta = angular_distance(&cap.center, &SpherePoint::north_pole());
    let psi = PI - delta;
    let phi = if psi.abs() < POLE_TOL || delta.abs() < POLE_TOL {
        0.0
    } else {
        cap.center.longitude()
    };
    let dir = [phi.cos(), phi.sin()];

    if (delta - cap.half_angle).abs() <= POLE_TOL {
        let offset = meridian_image(psi - cap.half_angle);
        return ProjectedShape::HalfPlane {
            normal: dir,
            offset,
        };
    }
    if delta > cap.half_angle {
        let (center, radius) = meridian_disk(psi, cap.half_angle, dir);
        ProjectedShape::Disk { center, radius }
    } else {
        // The open complement is a cap around the antipode that misses the
        // North Pole; its image bounds this one from inside.
        let comp_psi = PI - psi;
        let comp_dir = [-dir[0], -dir[1]];
        let (center, radius) = meridian_disk(comp_psi, PI - cap.half_angle, comp_dir);
        ProjectedShape::DiskComplement { center, radius }
    }
}

/// Disk spanned by the images of the two meridian-diameter endpoints of a cap.
fn meridian_disk(psi: f64, half_angle: f64, dir: [f64; 2]) -> (PlanePoint, f64) {
    let near = meridian_image(psi - half_angle);
    let far = meridian_image(psi + half_angle);
    let mid = 0.5 * (near + far);
    (
        PlanePoint::new(mid * dir[0], mid * dir[1]),
        0.5 * (far - near).abs(),
    )
}

/// Spherical cap whose image is the closed disk of `radius` around `center`.
pub fn disk_to_cap(center: &PlanePoint, radius: f64) -> Result<Cap> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain(
            "radius",
            radius,
            "must be positive and finite",
        ));
    }
    if !(center.x.is_finite() && center.y.is_finite()) {
        return Err(Error::domain("center", center.norm(), "must be finite"));
    }
    let rho = center.norm();
    let phi = if rho > 0.0 {
        center.y.atan2(center.x)
    } else {
        0.0
    };
    let near = meridian_preimage(rho - radius);
    let far = meridian_preimage(rho + radius);
    let psi = 0.5 * (near + far);
    let half = 0.5 * (far - near);
    Cap::new(SpherePoint::from_south_angle(psi, phi), half)
}
