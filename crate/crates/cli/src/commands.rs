use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::Context;
use sphereperc_core::analytics::{critical_n, critical_report, p_cov, ReportRequest};
use sphereperc_core::constellation::{
    full_coverage_layout, link_geometry, sample_constellation, uncovered_count,
};
use sphereperc_core::hexlattice::{classify_cells, hex_lattice, hex_probability_bounds, CellAngle};
use sphereperc_core::percolation::{estimate_theta_with, sweep_lenient, CiMethod, SweepSpec};
use sphereperc_core::{CriticalReport, HexLabel, KnownParam, LinkGeometry};

use crate::args::{
    AnalyzeArgs, Axis, Format, HexgridArgs, Interval, LayoutArgs, ReportFormat, ShellArgs,
    SimulateArgs, SweepArgs,
};
use crate::error::CliError;
use crate::output::{emit, encode, HexRecord, LayoutRecord, SweepRecord};

type Result<T> = std::result::Result<T, CliError>;

/// Coverage angle (radians) and, when an altitude was given, the full shell.
#[derive(Debug, Clone, Copy)]
pub struct Shell {
    pub gamma: f64,
    pub link: Option<LinkGeometry>,
}

pub fn resolve_shell(s: &ShellArgs) -> Result<Shell> {
    let given: Vec<&str> = [
        ("--elevation-deg", s.elevation_deg.is_some()),
        ("--eta-deg", s.eta_deg.is_some()),
        ("--dm-km", s.dm_km.is_some()),
        ("--gamma-deg", s.gamma_deg.is_some()),
    ]
    .iter()
    .filter(|(_, set)| *set)
    .map(|(name, _)| *name)
    .collect();
    if given.len() != 1 {
        return Err(CliError::Config(format!(
            "exactly one of --gamma-deg, --elevation-deg, --eta-deg, --dm-km is required (got {})",
            if given.is_empty() {
                "none".into()
            } else {
                given.join(", ")
            }
        )));
    }
    let known = if let Some(e) = s.elevation_deg {
        KnownParam::Elevation(e.to_radians())
    } else if let Some(e) = s.eta_deg {
        KnownParam::Eta(e.to_radians())
    } else if let Some(d) = s.dm_km {
        KnownParam::SlantRange(d)
    } else {
        let g = s.gamma_deg.unwrap_or_default();
        if !(g > 0.0 && g < 180.0) {
            return Err(CliError::domain(
                "gamma",
                g,
                "coverage angle must lie in (0, 180) degrees",
            ));
        }
        KnownParam::Gamma(g.to_radians())
    };
    match (s.h, known) {
        (None, KnownParam::Gamma(gamma)) => Ok(Shell { gamma, link: None }),
        (None, _) => Err(CliError::Config(format!("{} needs --h", given[0]))),
        (Some(h), known) => {
            let link = link_geometry(h, known)?;
            Ok(Shell {
                gamma: link.gamma,
                link: Some(link),
            })
        }
    }
}

/// `from, from + step, ...` up to and including `to`.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::domain("from", from, "grid ends must be finite"));
    }
    if !(step.is_finite() && step != 0.0) || (to - from) * step < 0.0 {
        return Err(CliError::domain(
            "step",
            step,
            "step must be nonzero and point from --from to --to",
        ));
    }
    let count = ((to - from) / step * (1.0 + 1e-12)).floor() + 1.0;
    if count > 1e6 {
        return Err(CliError::domain(
            "step",
            step,
            "grid would exceed 10^6 points",
        ));
    }
    Ok((0..count as usize)
        .map(|k| from + k as f64 * step)
        .collect())
}

/// Progress and summary lines go to stdout when the data went to a file,
/// and to stderr when the data itself is on stdout.
fn note(out: Option<&Path>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

pub fn analyze(a: &AnalyzeArgs) -> Result<()> {
    let shell = resolve_shell(&a.shell)?;
    let report = critical_report(
        shell.gamma,
        ReportRequest {
            link: shell.link,
            n: a.n,
            hex_side: a.a_km,
        },
    )?;
    let bytes = match a.format {
        ReportFormat::Text => report_text(&report).into_bytes(),
        ReportFormat::Csv => encode(std::slice::from_ref(&report), Format::Csv)?,
        ReportFormat::Json => {
            let mut b = serde_json::to_vec_pretty(&report).context("encoding report")?;
            b.push(b'\n');
            b
        }
    };
    emit(&bytes, a.common.out.as_deref())?;
    Ok(())
}

pub fn report_text(r: &CriticalReport) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(s, "{k:<22} {v}");
    };
    let angle = |rad: f64, deg: f64| format!("{deg:.6} deg ({rad:.9} rad)");
    line("gamma", angle(r.gamma_rad, r.gamma_deg));
    if let Some(h) = r.h_km {
        line("altitude h", format!("{h:.3} km"));
    }
    if let (Some(rad), Some(deg)) = (r.eta_rad, r.eta_deg) {
        line("nadir eta", angle(rad, deg));
    }
    if let (Some(rad), Some(deg)) = (r.epsilon_rad, r.epsilon_deg) {
        line("elevation epsilon", angle(rad, deg));
    }
    if let Some(d) = r.d_m_km {
        line("slant range d_m", format!("{d:.3} km"));
    }
    line("coverage area", format!("{:.6e} km^2", r.coverage_area_km2));
    if let (Some(n), Some(p)) = (r.n, r.p_cov) {
        line("N", n.to_string());
        line("p_cov(N, gamma)", format!("{p:.9}"));
    }
    line("N_L", r.n_l.to_string());
    line(
        "N_U",
        format!("{} (m = {}, n = {})", r.n_u, r.m, r.layout_n),
    );
    line("zeta", angle(r.zeta_rad, r.zeta_deg));
    line("N_c", format!("{:.6} (ceil {})", r.n_c, r.n_c.ceil()));
    if let (Some(a), Some(lo), Some(hi)) = (r.hex_a_km, r.n_c_lower, r.n_c_upper) {
        line("hexagon side a", format!("{a} km"));
        line("N_c^L .. N_c^U", format!("{lo:.6} .. {hi:.6}"));
    }
    if let (Some(rad), Some(deg)) = (r.gamma_m_rad, r.gamma_m_deg) {
        line("gamma_m", angle(rad, deg));
    }
    if let Some(t) = r.t_factor {
        line("t(N)", format!("{t:.9}"));
    }
    if let (Some(rad), Some(deg)) = (r.gamma_c_rad, r.gamma_c_deg) {
        line("gamma^c(N)", angle(rad, deg));
    }
    if let Some(h) = r.h_c_km {
        line("h^c(N, d_m)", format!("{h:.3} km"));
    }
    if let Some(d) = r.d_m_c_km {
        line("d_m^c(N, h)", format!("{d:.3} km"));
    }
    s
}

fn ci_method(i: Interval) -> CiMethod {
    match i {
        Interval::Wald => CiMethod::Wald,
        Interval::ClopperPearson => CiMethod::ClopperPearson,
    }
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let shell = resolve_shell(&a.shell)?;
    if a.n == 0 {
        return Err(CliError::domain(
            "N",
            0.0,
            "at least one satellite is required",
        ));
    }
    let est = estimate_theta_with(
        a.n as usize,
        shell.gamma,
        a.mc.trials,
        a.mc.seed,
        a.mc.coupled,
        ci_method(a.ci),
    )?;
    let rec = SweepRecord {
        axis: "N".into(),
        value: a.n as f64,
        gamma_rad: shell.gamma,
        theta_hat: est.theta_hat,
        ci95: est.ci95_halfwidth,
        trials: est.trials,
        p_cov_analytic: p_cov(a.n, shell.gamma),
        seed: a.mc.seed,
        critical: Some(critical_n(shell.gamma)),
    };
    emit(&encode(&[rec], a.format)?, a.common.out.as_deref())?;
    Ok(())
}

fn reject_shell_flags(s: &ShellArgs, allowed: &[&str], axis: &str) -> Result<()> {
    let set = [
        ("--h", s.h.is_some()),
        ("--elevation-deg", s.elevation_deg.is_some()),
        ("--eta-deg", s.eta_deg.is_some()),
        ("--dm-km", s.dm_km.is_some()),
        ("--gamma-deg", s.gamma_deg.is_some()),
    ];
    for (name, on) in set {
        if on && !allowed.contains(&name) {
            return Err(CliError::Config(format!(
                "{name} does not apply to a {axis} sweep"
            )));
        }
    }
    Ok(())
}

fn required<T: Copy>(v: Option<T>, flag: &str, axis: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Config(format!("a {axis} sweep needs {flag}")))
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let values = grid(a.from, a.to, a.step)?;
    let spec = match a.axis {
        Axis::N => {
            if a.n.is_some() {
                return Err(CliError::Config("--N does not apply to an N sweep".into()));
            }
            SweepSpec::Count {
                gamma: resolve_shell(&a.shell)?.gamma,
            }
        }
        Axis::Altitude => {
            reject_shell_flags(&a.shell, &["--dm-km"], "altitude")?;
            SweepSpec::Altitude {
                d_m: required(a.shell.dm_km, "--dm-km", "altitude")?,
                n: required(a.n, "--N", "altitude")? as usize,
            }
        }
        Axis::SlantRange => {
            reject_shell_flags(&a.shell, &["--h"], "slant_range")?;
            SweepSpec::SlantRange {
                h: required(a.shell.h, "--h", "slant_range")?,
                n: required(a.n, "--N", "slant_range")? as usize,
            }
        }
    };
    let out = sweep_lenient(spec, &values, a.mc.trials, a.mc.seed, a.mc.coupled)?;
    let records: Vec<SweepRecord> = out.rows.iter().map(SweepRecord::from).collect();
    emit(&encode(&records, a.format)?, a.common.out.as_deref())?;

    if out.infeasible.is_empty() {
        return Ok(());
    }
    let axis = spec.axis().name();
    let mut stderr = std::io::stderr().lock();
    for (v, e) in &out.infeasible {
        let _ = writeln!(stderr, "infeasible {axis}={v}: {e}");
    }
    if a.skip_infeasible {
        return Ok(());
    }
    Err(CliError::Infeasible {
        count: out.infeasible.len(),
        detail: out
            .infeasible
            .iter()
            .map(|(v, _)| format!("{axis}={v}"))
            .collect::<Vec<_>>()
            .join(", "),
    })
}

pub fn layout(a: &LayoutArgs) -> Result<()> {
    let shell = resolve_shell(&a.shell)?;
    let (c, info) = full_coverage_layout(shell.gamma)?;
    let records: Vec<LayoutRecord> = c
        .centers
        .iter()
        .enumerate()
        .map(|(i, p)| LayoutRecord::new(i, p))
        .collect();
    let out = a.common.out.as_deref();
    emit(&encode(&records, a.format)?, out)?;
    note(
        out,
        &format!(
            "layout m={} n={} N_U={} zeta_deg={:.9}",
            info.m,
            info.n,
            info.count(),
            info.zeta.to_degrees()
        ),
    );
    if a.audit_samples > 0 {
        let holes = uncovered_count(&c, a.audit_samples, a.seed);
        note(
            out,
            &format!(
                "audit samples={} seed={} uncovered={holes}",
                a.audit_samples, a.seed
            ),
        );
    }
    Ok(())
}

pub fn hexgrid(a: &HexgridArgs) -> Result<()> {
    let shell = resolve_shell(&a.shell)?;
    if a.n == 0 {
        return Err(CliError::domain(
            "N",
            0.0,
            "at least one satellite is required",
        ));
    }
    let c = sample_constellation(a.n as usize, shell.gamma, a.seed)?;
    let cells = hex_lattice(a.a_km, a.extent_km)?;
    let mode = if a.uniform {
        CellAngle::Uniform
    } else {
        CellAngle::Exact
    };
    let labels = classify_cells(&cells, &c, mode)?;
    let records: Vec<HexRecord> = cells
        .iter()
        .zip(&labels)
        .map(|(cell, &l)| HexRecord::new(cell, l))
        .collect();
    let out = a.common.out.as_deref();
    emit(&encode(&records, a.format)?, out)?;

    let count = |want: HexLabel| labels.iter().filter(|&&l| l == want).count();
    note(
        out,
        &format!(
            "cells={} open_certified={} closed_certified={} undetermined={}",
            cells.len(),
            count(HexLabel::OpenCertified),
            count(HexLabel::ClosedCertified),
            count(HexLabel::Undetermined)
        ),
    );
    if let Ok((open_lb, closed_lb)) = hex_probability_bounds(a.n, shell.gamma, a.a_km) {
        note(
            out,
            &format!("open_lb={open_lb:.9} closed_lb={closed_lb:.9}"),
        );
    }
    Ok(())
}
