//! Constellation shells: link-budget geometry and coverage-center layouts.
//!
//! Only the footprint centers are stored. Altitude enters solely through
//! [`LinkGeometry`], which turns `(h, one of eta / epsilon / d_m / gamma)`
//! into the coverage angle `gamma`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sample_uniform_sphere, AngleWithin, SpherePoint, EARTH_RADIUS_KM};
use crate::rng::RandomStream;

const R: f64 = EARTH_RADIUS_KM;

/// The single parameter that pins down a shell at a given altitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KnownParam {
    /// Nadir angle, radians.
    Eta(f64),
    /// Minimum elevation angle, radians.
    Elevation(f64),
    /// Maximum slant range, km.
    SlantRange(f64),
    /// Coverage angle, radians.
    Gamma(f64),
}

/// Mutually consistent geometry of one shell. Angles in radians, lengths in km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub h: f64,
    pub r_s: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub d_m: f64,
}

impl LinkGeometry {
    /// Residual of the law of cosines relating `gamma` and `d_m`.
    pub fn cosine_residual(&self) -> f64 {
        let rhs = (self.r_s * self.r_s + R * R - self.d_m * self.d_m) / (2.0 * R * self.r_s);
        (self.gamma.cos() - rhs).abs()
    }

    /// Residual of `gamma + eta + epsilon = pi / 2`.
    pub fn angle_residual(&self) -> f64 {
        (self.gamma + self.eta + self.epsilon - FRAC_PI_2).abs()
    }

    /// Largest admissible nadir angle at this altitude.
    pub fn max_eta(&self) -> f64 {
        (R / self.r_s).asin()
    }
}

/// Solves the shell geometry at altitude `h` from one known parameter.
pub fn link_geometry(h: f64, known: KnownParam) -> Result<LinkGeometry> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain("h", h, "altitude must be positive"));
    }
    let r_s = R + h;
    let eta_max = (R / r_s).asin();
    let gamma_max = (R / r_s).acos();
    let d_max = (r_s * r_s - R * R).sqrt();

    match known {
        KnownParam::Eta(eta) => {
            if !(eta > 0.0 && eta <= eta_max) {
                return Err(Error::domain(
                    "eta",
                    eta,
                    format!("nadir angle must lie in (0, {eta_max}] at h = {h} km"),
                ));
            }
            Ok(from_eta(h, r_s, eta))
        }
        KnownParam::Elevation(eps) => {
            if !(0.0..FRAC_PI_2).contains(&eps) {
                return Err(Error::domain(
                    "elevation",
                    eps,
                    "elevation angle must lie in [0, pi/2)",
                ));
            }
            let eta = (R * eps.cos() / r_s).asin();
            let mut g = from_eta(h, r_s, eta);
            // Closure already holds to rounding; keep the caller's value.
            g.epsilon = eps;
            Ok(g)
        }
        KnownParam::SlantRange(d) => {
            if !(d >= h && d <= d_max) {
                return Err(Error::domain(
                    "d_m",
                    d,
                    format!("slant range must lie in [{h}, {d_max}] km at h = {h} km"),
                ));
            }
            Ok(from_slant_range(h, r_s, d))
        }
        KnownParam::Gamma(gamma) => {
            if !(gamma > 0.0 && gamma <= gamma_max) {
                return Err(Error::domain(
                    "gamma",
                    gamma,
                    format!("coverage angle must lie in (0, {gamma_max}] at h = {h} km"),
                ));
            }
            let half = (gamma / 2.0).sin();
            let d = (h * h + 4.0 * R * r_s * half * half).sqrt();
            let mut g = from_slant_range(h, r_s, d.min(d_max));
            g.gamma = gamma;
            g.epsilon = FRAC_PI_2 - gamma - g.eta;
            Ok(g)
        }
    }
}

fn from_eta(h: f64, r_s: f64, eta: f64) -> LinkGeometry {
    let (s, c) = eta.sin_cos();
    let disc = (R * R - r_s * r_s * s * s).max(0.0);
    let d_m = r_s * c - disc.sqrt();
    let gamma = (d_m / R * s).clamp(-1.0, 1.0).asin();
    LinkGeometry {
        h,
        r_s,
        eta,
        epsilon: FRAC_PI_2 - gamma - eta,
        gamma,
        d_m,
    }
}

/// Triangle (Earth center, satellite, edge user) with sides `R`, `r_s`, `d`,
/// solved with half-angle tangents, which stay accurate for thin triangles.
fn from_slant_range(h: f64, r_s: f64, d: f64) -> LinkGeometry {
    let plus = 2.0 * R + h + d;
    let minus = (2.0 * R + h - d).max(0.0);
    let dh = (d - h).max(0.0);
    let gamma = 2.0 * ((d + h) * dh / (plus * minus)).sqrt().atan();
    let eta = 2.0 * (dh * minus / (plus * (h + d))).sqrt().atan();
    LinkGeometry {
        h,
        r_s,
        eta,
        epsilon: FRAC_PI_2 - gamma - eta,
        gamma,
        d_m: d,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    RandomBpp,
    Layout,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::RandomBpp => "random_bpp",
            Provenance::Layout => "layout",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "random_bpp" => Ok(Provenance::RandomBpp),
            "layout" => Ok(Provenance::Layout),
            other => Err(format!("unknown provenance `{other}`")),
        }
    }
}

/// Footprint centers of one shell together with their coverage angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    pub gamma: f64,
    pub centers: Vec<SpherePoint>,
    pub seed: u64,
    pub provenance: Provenance,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < PI) {
        return Err(Error::domain(
            "gamma",
            gamma,
            "coverage angle must lie in (0, pi)",
        ));
    }
    Ok(())
}

impl Constellation {
    /// Wraps an explicit set of centers.
    pub fn from_centers(gamma: f64, centers: Vec<SpherePoint>) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            gamma,
            centers,
            seed: 0,
            provenance: Provenance::RandomBpp,
        })
    }

    /// `n` independent uniform centers drawn from `stream`.
    pub fn from_stream(n: usize, gamma: f64, stream: &mut RandomStream, seed: u64) -> Self {
        let centers = (0..n).map(|_| sample_uniform_sphere(stream)).collect();
        Self {
            gamma,
            centers,
            seed,
            provenance: Provenance::RandomBpp,
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// The constellation formed by the first `n` centers.
    pub fn prefix(&self, n: usize) -> Constellation {
        Constellation {
            gamma: self.gamma,
            centers: self.centers[..n.min(self.centers.len())].to_vec(),
            seed: self.seed,
            provenance: self.provenance,
        }
    }

    /// Serialises as a header line plus one `x y z` line per center, each
    /// coordinate with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(64 + self.centers.len() * 72);
        let _ = writeln!(
            out,
            "N={} gamma_rad={:.16e} seed={} provenance={}",
            self.centers.len(),
            self.gamma,
            self.seed,
            self.provenance
        );
        for c in &self.centers {
            let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", c.x(), c.y(), c.z());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let perr = |line: usize, message: String| Error::Parse {
            line: line + 1,
            message,
        };

        let (mut n, mut gamma, mut seed, mut prov) = (None, None, None, None);
        for field in header.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| perr(0, format!("malformed header field `{field}`")))?;
            match k {
                "N" => n = Some(v.parse::<usize>().map_err(|e| perr(0, format!("N: {e}")))?),
                "gamma_rad" => {
                    gamma = Some(
                        v.parse::<f64>()
                            .map_err(|e| perr(0, format!("gamma_rad: {e}")))?,
                    )
                }
                "seed" => {
                    seed = Some(
                        v.parse::<u64>()
                            .map_err(|e| perr(0, format!("seed: {e}")))?,
                    )
                }
                "provenance" => prov = Some(v.parse::<Provenance>().map_err(|e| perr(0, e))?),
                other => return Err(perr(0, format!("unknown header key `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| perr(0, "missing N".into()))?;
        let gamma = gamma.ok_or_else(|| perr(0, "missing gamma_rad".into()))?;
        check_gamma(gamma)?;

        let mut centers = Vec::with_capacity(n);
        for (idx, line) in lines {
            let v: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| perr(idx, format!("{e}")))?;
            if v.len() != 3 {
                return Err(perr(
                    idx,
                    format!("expected 3 coordinates, found {}", v.len()),
                ));
            }
            let p =
                SpherePoint::from_unit([v[0], v[1], v[2]]).map_err(|e| perr(idx, e.to_string()))?;
            centers.push(p);
        }
        if centers.len() != n {
            return Err(perr(
                0,
                format!("header says N={n} but {} centers follow", centers.len()),
            ));
        }
        Ok(Self {
            gamma,
            centers,
            seed: seed.unwrap_or(0),
            provenance: prov.unwrap_or(Provenance::RandomBpp),
        })
    }
}

/// `n` uniform coverage centers, reproducible from `seed`.
pub fn sample_constellation(n: usize, gamma: f64, seed: u64) -> Result<Constellation> {
    if n == 0 {
        return Err(Error::domain(
            "N",
            0.0,
            "at least one satellite is required",
        ));
    }
    check_gamma(gamma)?;
    let mut stream = RandomStream::new(seed);
    Ok(Constellation::from_stream(n, gamma, &mut stream, seed))
}

/// Belt/piece dimensions of the full-coverage layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutInfo {
    /// Number of belts.
    pub m: u64,
    /// Pieces per belt.
    pub n: u64,
    /// Half-angle of the smallest cap containing one piece.
    pub zeta: f64,
}

impl LayoutInfo {
    pub fn count(&self) -> u64 {
        self.m * self.n
    }
}

/// `m = ceil(pi / gamma)`, `n = ceil(pi / acos(cos gamma / cos(pi / 2m))) + 1`.
pub fn layout_dimensions(gamma: f64) -> Result<LayoutInfo> {
    if !(gamma > 0.0 && gamma < FRAC_PI_2) {
        return Err(Error::domain(
            "gamma",
            gamma,
            "layout needs gamma in (0, pi/2)",
        ));
    }
    let m = (PI / gamma).ceil();
    let half_belt = PI / (2.0 * m);
    let n = (PI / (gamma.cos() / half_belt.cos()).acos()).ceil() + 1.0;
    let zeta = (half_belt.cos() * (PI / n).cos()).acos();
    Ok(LayoutInfo {
        m: m as u64,
        n: n as u64,
        zeta,
    })
}

/// Deterministic `m * n` centers whose caps of half-angle `gamma` cover the
/// whole sphere.
///
/// The sphere is cut into `2m` lunes of longitude width `pi / m`. Lune `j` and
/// its antipodal twin sit inside belt `j`, the band of half-width `pi / 2m`
/// around the meridian great circle at longitude `(j + 1/2) pi / m`. Each belt
/// is split along its great circle into `n` pieces, and every piece fits in a
/// cap of half-angle `zeta < gamma` around its midpoint.
pub fn full_coverage_layout(gamma: f64) -> Result<(Constellation, LayoutInfo)> {
    let info = layout_dimensions(gamma)?;
    if info.zeta >= gamma {
        return Err(Error::Construction(format!(
            "piece cap half-angle {} is not below gamma {}",
            info.zeta, gamma
        )));
    }
    let (m, n) = (info.m as usize, info.n as usize);
    let mut centers = Vec::with_capacity(m * n);
    for j in 0..m {
        let lon = (j as f64 + 0.5) * PI / m as f64;
        let (sl, cl) = lon.sin_cos();
        for k in 0..n {
            // Position along the belt's great circle, measured from +z.
            let a = (k as f64 + 0.5) * 2.0 * PI / n as f64;
            let (sa, ca) = a.sin_cos();
            centers.push(SpherePoint::new(sa * cl, sa * sl, ca)?);
        }
    }
    Ok((
        Constellation {
            gamma,
            centers,
            seed: 0,
            provenance: Provenance::Layout,
        },
        info,
    ))
}

const AUDIT_CHUNK: u64 = 10_000;

/// Number of `samples` uniform points (drawn from `seed`) that no cap of `c`
/// covers. The result does not depend on the worker count.
pub fn uncovered_count(c: &Constellation, samples: u64, seed: u64) -> u64 {
    let cover = AngleWithin::new(c.gamma);
    // Polar-angle bins at least gamma wide: a covering center sits in the
    // sample's bin or a neighbour.
    let bins = ((PI / (c.gamma + 1e-9)).floor() as usize).clamp(1, 1 << 16);
    let bin_of = |p: &SpherePoint| {
        let polar = p.x().hypot(p.y()).atan2(p.z());
        ((polar / PI * bins as f64) as usize).min(bins - 1)
    };
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); bins];
    for (i, p) in c.centers.iter().enumerate() {
        members[bin_of(p)].push(i);
    }
    let chunks = samples.div_ceil(AUDIT_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut s = RandomStream::substream(seed, k);
            let len = AUDIT_CHUNK.min(samples - k * AUDIT_CHUNK);
            (0..len)
                .filter(|_| {
                    let q = sample_uniform_sphere(&mut s);
                    let b = bin_of(&q);
                    let lo = b.saturating_sub(1);
                    let hi = (b + 1).min(bins - 1);
                    !(lo..=hi).any(|nb| members[nb].iter().any(|&i| cover.test(&c.centers[i], &q)))
                })
                .count() as u64
        })
        .sum()
}
