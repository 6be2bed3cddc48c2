//! Hexagonal cells on the stereographic plane.
//!
//! Cells are pointy-top regular hexagons of side `a` (circumradius `a`),
//! indexed by axial coordinates `(q, r)` with `H_0 = (0, 0)` centered on the
//! origin, i.e. on the South Pole.
//!
//! Exact coverage of a hexagon by a union of projected caps is not decided.
//! A cell is labelled only when its circumscribed circle settles the
//! question: one cap swallows the whole circle (open), or every cap misses
//! it (closed). Everything else is [`HexLabel::Undetermined`].

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{p_cov, p_ncov};
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::geometry::{angular_distance, Cap, EARTH_RADIUS_KM};
use crate::stereographic::{disk_to_cap, PlanePoint};

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexCell {
    pub q: i64,
    pub r: i64,
    pub center: PlanePoint,
    pub side: f64,
}

impl HexCell {
    pub fn new(q: i64, r: i64, side: f64) -> Self {
        let x = side * SQRT3 * (q as f64 + r as f64 / 2.0);
        let y = side * 1.5 * r as f64;
        Self {
            q,
            r,
            center: PlanePoint::new(x, y),
            side,
        }
    }

    pub fn vertices(&self) -> [PlanePoint; 6] {
        std::array::from_fn(|k| {
            let ang = PI / 6.0 + k as f64 * PI / 3.0;
            PlanePoint::new(
                self.center.x + self.side * ang.cos(),
                self.center.y + self.side * ang.sin(),
            )
        })
    }

    /// Point-in-hexagon test (boundary inclusive).
    pub fn contains(&self, p: &PlanePoint) -> bool {
        let v = self.vertices();
        (0..6).all(|k| {
            let (a, b) = (v[k], v[(k + 1) % 6]);
            (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) >= -1e-9 * self.side
        })
    }

    /// Euclidean distance from `p` to the closed hexagon.
    pub fn distance_to(&self, p: &PlanePoint) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        let v = self.vertices();
        (0..6)
            .map(|k| segment_distance(p, &v[k], &v[(k + 1) % 6]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn neighbors(&self) -> [HexCell; 6] {
        const DIRS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
        DIRS.map(|(dq, dr)| HexCell::new(self.q + dq, self.r + dr, self.side))
    }

    /// Spherical preimage of the circumscribed circle.
    pub fn circumscribed_cap(&self) -> Result<Cap> {
        disk_to_cap(&self.center, self.side)
    }
}

fn segment_distance(p: &PlanePoint, a: &PlanePoint, b: &PlanePoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    PlanePoint::new(a.x + t * dx, a.y + t * dy).distance(p)
}

/// All cells meeting the closed disk of radius `extent` around the origin.
pub fn hex_lattice(a: f64, extent: f64) -> Result<Vec<HexCell>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("a", a, "hexagon side must be positive"));
    }
    if !(extent >= a && extent.is_finite()) {
        return Err(Error::domain(
            "extent_radius",
            extent,
            "must be finite and at least a",
        ));
    }
    // Any meeting cell has its center within extent + a of the origin.
    let reach = extent + a;
    let rmax = (reach / (1.5 * a)).ceil() as i64 + 1;
    let mut cells = Vec::new();
    for r in -rmax..=rmax {
        let qspan = (reach / (SQRT3 * a)).ceil() as i64 + rmax + 1;
        for q in -qspan..=qspan {
            let cell = HexCell::new(q, r, a);
            if cell.center.norm() > reach {
                continue;
            }
            if cell.distance_to(&PlanePoint::ORIGIN) <= extent {
                cells.push(cell);
            }
        }
    }
    Ok(cells)
}

/// Largest central angle of the preimage of the circumscribed circle of a
/// side-`a` hexagon, attained for the cell at the origin.
pub fn gamma_m(a: f64) -> f64 {
    2.0 * (a / (2.0 * EARTH_RADIUS_KM)).atan()
}

/// Lower bounds `(P{open}, P{closed})` for any cell of side `a`.
pub fn hex_probability_bounds(n: u64, gamma: f64, a: f64) -> Result<(f64, f64)> {
    let gm = gamma_m(a);
    if gm >= gamma || gamma.is_nan() {
        return Err(Error::domain(
            "a",
            a,
            format!("gamma_m = {gm} must be below gamma = {gamma}"),
        ));
    }
    Ok((p_cov(n, gamma - gm), p_ncov(n, gamma + gm)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HexLabel {
    OpenCertified,
    ClosedCertified,
    Undetermined,
}

impl fmt::Display for HexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HexLabel::OpenCertified => "open_certified",
            HexLabel::ClosedCertified => "closed_certified",
            HexLabel::Undetermined => "undetermined",
        })
    }
}

/// Which central angle stands in for the cell's circumscribed cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CellAngle {
    /// The exact angle at the cell's position.
    #[default]
    Exact,
    /// The worst case `gamma_m(a)`, uniform over the lattice.
    Uniform,
}

pub fn classify_hex(cell: &HexCell, c: &Constellation) -> Result<HexLabel> {
    classify_hex_with(cell, c, CellAngle::Exact)
}

pub fn classify_hex_with(cell: &HexCell, c: &Constellation, mode: CellAngle) -> Result<HexLabel> {
    let cap = cell.circumscribed_cap()?;
    let g0 = match mode {
        CellAngle::Exact => cap.half_angle,
        CellAngle::Uniform => gamma_m(cell.side),
    };
    let open_within = c.gamma - g0;
    let closed_beyond = c.gamma + g0;
    let mut all_far = true;
    for x in &c.centers {
        let d = angular_distance(&cap.center, x);
        if d <= open_within {
            return Ok(HexLabel::OpenCertified);
        }
        if d <= closed_beyond {
            all_far = false;
        }
    }
    Ok(if all_far {
        HexLabel::ClosedCertified
    } else {
        HexLabel::Undetermined
    })
}

/// Labels every cell in parallel; the constellation is shared read-only.
pub fn classify_cells(
    cells: &[HexCell],
    c: &Constellation,
    mode: CellAngle,
) -> Result<Vec<HexLabel>> {
    cells
        .par_iter()
        .map(|cell| classify_hex_with(cell, c, mode))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stereographic::{max_central_angle_for_radius, unproject};
    use crate::SpherePoint;
    use approx::assert_relative_eq;

    #[test]
    fn innermost_ring() {
        let a = 10.0;
        let cells = hex_lattice(a, a).unwrap();
        assert_eq!(cells.len(), 7);
        let h0 = cells.iter().find(|c| c.q == 0 && c.r == 0).unwrap();
        assert_eq!(h0.center, PlanePoint::ORIGIN);
        for c in cells.iter().filter(|c| (c.q, c.r) != (0, 0)) {
            assert_relative_eq!(c.center.norm(), SQRT3 * a, max_relative = 1e-12);
        }
    }

    #[test]
    fn neighbours_are_adjacent() {
        let cell = HexCell::new(3, -2, 5.0);
        for nb in cell.neighbors() {
            assert_relative_eq!(
                nb.center.distance(&cell.center),
                SQRT3 * 5.0,
                max_relative = 1e-12
            );
        }
        let cells = hex_lattice(5.0, 100.0).unwrap();
        let interior = cells.iter().find(|c| (c.q, c.r) == (1, 1)).unwrap();
        let present = interior
            .neighbors()
            .iter()
            .filter(|nb| cells.iter().any(|c| (c.q, c.r) == (nb.q, nb.r)))
            .count();
        assert_eq!(present, 6);
    }

    #[test]
    fn lattice_rejects_bad_input() {
        assert!(hex_lattice(0.0, 10.0).is_err());
        assert!(hex_lattice(10.0, 5.0).is_err());
    }

    #[test]
    fn gamma_m_values() {
        // mpmath: 2 atan(10 / 12742)
        assert!((gamma_m(10.0) - 1.569_611_983_508_36e-3).abs() < 1e-15);
        assert_eq!(gamma_m(10.0), max_central_angle_for_radius(10.0));
        let ratio = gamma_m(0.1) / (0.1 / EARTH_RADIUS_KM);
        assert!((ratio - 1.0).abs() < 1e-6);
    }

    #[test]
    fn origin_cell_uses_worst_case_angle() {
        let cap = HexCell::new(0, 0, 10.0).circumscribed_cap().unwrap();
        assert_relative_eq!(cap.half_angle, gamma_m(10.0), max_relative = 1e-12);
        let far = HexCell::new(40, 40, 10.0).circumscribed_cap().unwrap();
        assert!(far.half_angle < gamma_m(10.0));
    }

    #[test]
    fn probability_bounds() {
        let g = 5.2_f64.to_radians();
        let (open, closed) = hex_probability_bounds(337, g, 1e-6).unwrap();
        assert_relative_eq!(open, p_cov(337, g), max_relative = 1e-6);
        assert_relative_eq!(closed, p_ncov(337, g), max_relative = 1e-6);

        // mpmath at a = 10 km: open 0.48848656, closed 0.48752133
        let (open, closed) = hex_probability_bounds(337, g, 10.0).unwrap();
        assert!((open - 0.488_486_562_930_018).abs() < 1e-9);
        assert!((closed - 0.487_521_332_360_192_7).abs() < 1e-9);
        assert!(open + closed <= 1.0);

        // Just above the upper hexagon bound the open bound passes 1/2.
        let (open, _) = hex_probability_bounds(349, g, 10.0).unwrap();
        assert!(open > 0.5);
        assert!(hex_probability_bounds(10, g, 1000.0).is_err());
    }

    #[test]
    fn classify_simple_cases() {
        let cell = HexCell::new(2, -1, 10.0);
        let center = unproject(&cell.center);
        let c = Constellation::from_centers(0.05, vec![center]).unwrap();
        assert_eq!(classify_hex(&cell, &c).unwrap(), HexLabel::OpenCertified);

        let far = Constellation::from_centers(0.05, vec![SpherePoint::north_pole()]).unwrap();
        assert_eq!(
            classify_hex(&cell, &far).unwrap(),
            HexLabel::ClosedCertified
        );

        // A cap whose rim runs through the cell center.
        let cap = cell.circumscribed_cap().unwrap();
        let rim =
            SpherePoint::from_south_angle(cap.center.south_angle() + 0.05, cap.center.longitude());
        assert_relative_eq!(
            angular_distance(&cap.center, &rim),
            0.05,
            max_relative = 1e-9
        );
        let edge = Constellation::from_centers(0.05, vec![rim]).unwrap();
        assert_eq!(classify_hex(&cell, &edge).unwrap(), HexLabel::Undetermined);
    }

    #[test]
    fn uniform_angle_is_more_conservative() {
        let g = 5.2_f64.to_radians();
        let c = crate::constellation::sample_constellation(337, g, 11).unwrap();
        let cells = hex_lattice(10.0, 400.0).unwrap();
        let exact = classify_cells(&cells, &c, CellAngle::Exact).unwrap();
        let uniform = classify_cells(&cells, &c, CellAngle::Uniform).unwrap();
        for (e, u) in exact.iter().zip(&uniform) {
            if *u != HexLabel::Undetermined {
                assert_eq!(e, u);
            }
        }
    }
}
