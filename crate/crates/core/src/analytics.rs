//! Closed-form coverage and critical-value expressions.
//!
//! Powers of `(1 + cos gamma) / 2 = cos^2(gamma / 2)` are evaluated through
//! `ln cos(gamma / 2)` so that large `N` neither underflows nor loses the
//! small complement.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::Serialize;

use crate::constellation::{layout_dimensions, LinkGeometry};
use crate::error::{Error, Result};
use crate::geometry::EARTH_RADIUS_KM;

const R: f64 = EARTH_RADIUS_KM;

/// `ln((1 + cos gamma) / 2)`.
#[inline]
fn ln_miss(gamma: f64) -> f64 {
    2.0 * (gamma / 2.0).cos().ln()
}

/// Probability that a fixed point is covered by at least one of `n` uniform
/// caps of half-angle `gamma`.
pub fn p_cov(n: u64, gamma: f64) -> f64 {
    p_cov_real(n as f64, gamma)
}

/// Probability that a fixed point is covered by none of the caps.
pub fn p_ncov(n: u64, gamma: f64) -> f64 {
    p_ncov_real(n as f64, gamma)
}

/// [`p_cov`] for a real-valued satellite count.
pub fn p_cov_real(n: f64, gamma: f64) -> f64 {
    -(n * ln_miss(gamma)).exp_m1()
}

pub fn p_ncov_real(n: f64, gamma: f64) -> f64 {
    (n * ln_miss(gamma)).exp()
}

/// Sub- and super-critical constructive bounds on the satellite count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayoutBounds {
    /// `floor(pi / 2 gamma)`: a meridian chain this long cannot reach both poles.
    pub n_l: u64,
    /// `m * n`: the full-coverage layout size.
    pub n_u: u64,
    pub m: u64,
    pub n: u64,
    pub zeta: f64,
}

pub fn bounds_nl_nu(gamma: f64) -> Result<LayoutBounds> {
    let info = layout_dimensions(gamma)?;
    Ok(LayoutBounds {
        n_l: (FRAC_PI_2 / gamma).floor() as u64,
        n_u: info.count(),
        m: info.m,
        n: info.n,
        zeta: info.zeta,
    })
}

/// Critical satellite count `ln 2 / (ln 2 - ln(1 + cos gamma))`, the real
/// root of `p_cov(N, gamma) = 1/2`.
pub fn critical_n(gamma: f64) -> f64 {
    -LN_2 / ln_miss(gamma)
}

/// Largest central angle of the spherical preimage of a disk of radius `a`.
pub fn gamma_m(a: f64) -> f64 {
    2.0 * (a / (2.0 * R)).atan()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HexBounds {
    pub lower: f64,
    pub upper: f64,
    pub gamma_m: f64,
}

impl HexBounds {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Bounds on the critical count from hexagons of side `a` km.
pub fn hex_bounds_nc(gamma: f64, a: f64) -> Result<HexBounds> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("a", a, "hexagon side must be positive"));
    }
    let gm = gamma_m(a);
    if gm >= gamma {
        return Err(Error::domain(
            "a",
            a,
            format!("gamma_m = {gm} must be below gamma = {gamma}"),
        ));
    }
    if gamma + gm >= PI {
        return Err(Error::domain(
            "gamma",
            gamma,
            "gamma + gamma_m must stay below pi",
        ));
    }
    Ok(HexBounds {
        lower: critical_n(gamma + gm),
        upper: critical_n(gamma - gm),
        gamma_m: gm,
    })
}

/// `t(N) = 2 (1/2)^(1/N) - 1 = cos gamma^c`.
pub fn t_factor(n: u64) -> f64 {
    1.0 + 2.0 * (-LN_2 / n as f64).exp_m1()
}

/// Critical coverage angle for `n` satellites.
pub fn critical_gamma(n: u64) -> f64 {
    // acos(t) with t = 1 - 2 sin^2(gamma/2), kept accurate for large n.
    let one_minus_t = -2.0 * (-LN_2 / n as f64).exp_m1();
    2.0 * (one_minus_t / 2.0).sqrt().asin()
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(
            "N",
            0.0,
            "at least one satellite is required",
        ));
    }
    Ok(())
}

/// Critical altitude for `n` satellites at maximum slant range `d_m`.
pub fn critical_altitude(n: u64, d_m: f64) -> Result<f64> {
    check_n(n)?;
    if !(d_m > 0.0 && d_m.is_finite()) {
        return Err(Error::domain("d_m", d_m, "slant range must be positive"));
    }
    let t = t_factor(n);
    let rad = d_m * d_m - R * R + t * t * R * R;
    if rad < 0.0 {
        return Err(Error::domain(
            "d_m",
            d_m,
            format!("too short for any altitude at N = {n}"),
        ));
    }
    let h = rad.sqrt() + t * R - R;
    if h <= 0.0 {
        return Err(Error::domain(
            "d_m",
            d_m,
            format!("critical altitude {h} km is not positive at N = {n}"),
        ));
    }
    check_horizon(t, h, "d_m", d_m)?;
    Ok(h)
}

/// `gamma^c` must not exceed the horizon angle `acos(R / r_s)`.
fn check_horizon(t: f64, h: f64, param: &'static str, value: f64) -> Result<()> {
    if t * (R + h) < R {
        return Err(Error::domain(
            param,
            value,
            format!("critical coverage angle acos({t}) lies beyond the horizon at this altitude"),
        ));
    }
    Ok(())
}

/// Critical maximum slant range for `n` satellites at altitude `h`.
pub fn critical_slant_range(n: u64, h: f64) -> Result<f64> {
    check_n(n)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain("h", h, "altitude must be positive"));
    }
    let t = t_factor(n);
    check_horizon(t, h, "h", h)?;
    let r_s = R + h;
    let rad = R * R + r_s * r_s - 2.0 * t * R * r_s;
    if rad < 0.0 {
        return Err(Error::domain("h", h, "negative radicand"));
    }
    Ok(rad.sqrt())
}

/// Which quantity is held fixed when solving for the critical companion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalKnown {
    SlantRange(f64),
    Altitude(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalGeometry {
    pub t: f64,
    pub gamma_c: f64,
    pub h_c: Option<f64>,
    pub d_m_c: Option<f64>,
}

pub fn critical_geometry(n: u64, known: CriticalKnown) -> Result<CriticalGeometry> {
    check_n(n)?;
    let (h_c, d_m_c) = match known {
        CriticalKnown::SlantRange(d) => (Some(critical_altitude(n, d)?), None),
        CriticalKnown::Altitude(h) => (None, Some(critical_slant_range(n, h)?)),
    };
    Ok(CriticalGeometry {
        t: t_factor(n),
        gamma_c: critical_gamma(n),
        h_c,
        d_m_c,
    })
}

/// Flat, serialisable summary of every closed form for one shell.
/// Angles appear in both degrees and radians.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalReport {
    pub gamma_rad: f64,
    pub gamma_deg: f64,
    pub h_km: Option<f64>,
    pub eta_rad: Option<f64>,
    pub eta_deg: Option<f64>,
    pub epsilon_rad: Option<f64>,
    pub epsilon_deg: Option<f64>,
    pub d_m_km: Option<f64>,
    pub coverage_area_km2: f64,
    pub n: Option<u64>,
    pub p_cov: Option<f64>,
    pub p_ncov: Option<f64>,
    pub n_l: u64,
    pub n_u: u64,
    pub m: u64,
    pub layout_n: u64,
    pub zeta_rad: f64,
    pub zeta_deg: f64,
    pub n_c: f64,
    pub hex_a_km: Option<f64>,
    pub n_c_lower: Option<f64>,
    pub n_c_upper: Option<f64>,
    pub gamma_m_rad: Option<f64>,
    pub gamma_m_deg: Option<f64>,
    pub t_factor: Option<f64>,
    pub gamma_c_rad: Option<f64>,
    pub gamma_c_deg: Option<f64>,
    pub h_c_km: Option<f64>,
    pub d_m_c_km: Option<f64>,
}

/// Optional inputs to [`critical_report`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportRequest {
    pub link: Option<LinkGeometry>,
    pub n: Option<u64>,
    pub hex_side: Option<f64>,
}

pub fn critical_report(gamma: f64, req: ReportRequest) -> Result<CriticalReport> {
    if !(gamma > 0.0 && gamma < FRAC_PI_2) {
        return Err(Error::domain(
            "gamma",
            gamma,
            "coverage angle must lie in (0, pi/2)",
        ));
    }
    let b = bounds_nl_nu(gamma)?;
    let hex = req.hex_side.map(|a| hex_bounds_nc(gamma, a)).transpose()?;
    if let Some(n) = req.n {
        check_n(n)?;
    }
    // Critical companions are only defined when the shell geometry is known.
    let (h_c, d_m_c) = match (req.n, req.link) {
        (Some(n), Some(l)) => (
            critical_altitude(n, l.d_m).ok(),
            critical_slant_range(n, l.h).ok(),
        ),
        _ => (None, None),
    };
    Ok(CriticalReport {
        gamma_rad: gamma,
        gamma_deg: gamma.to_degrees(),
        h_km: req.link.map(|l| l.h),
        eta_rad: req.link.map(|l| l.eta),
        eta_deg: req.link.map(|l| l.eta.to_degrees()),
        epsilon_rad: req.link.map(|l| l.epsilon),
        epsilon_deg: req.link.map(|l| l.epsilon.to_degrees()),
        d_m_km: req.link.map(|l| l.d_m),
        coverage_area_km2: 2.0 * PI * R * R * (1.0 - gamma.cos()),
        n: req.n,
        p_cov: req.n.map(|n| p_cov(n, gamma)),
        p_ncov: req.n.map(|n| p_ncov(n, gamma)),
        n_l: b.n_l,
        n_u: b.n_u,
        m: b.m,
        layout_n: b.n,
        zeta_rad: b.zeta,
        zeta_deg: b.zeta.to_degrees(),
        n_c: critical_n(gamma),
        hex_a_km: req.hex_side,
        n_c_lower: hex.map(|h| h.lower),
        n_c_upper: hex.map(|h| h.upper),
        gamma_m_rad: hex.map(|h| h.gamma_m),
        gamma_m_deg: hex.map(|h| h.gamma_m.to_degrees()),
        t_factor: req.n.map(t_factor),
        gamma_c_rad: req.n.map(critical_gamma),
        gamma_c_deg: req.n.map(|n| critical_gamma(n).to_degrees()),
        h_c_km: h_c,
        d_m_c_km: d_m_c,
    })
}
