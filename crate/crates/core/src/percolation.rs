//! Connectivity of coverage caps and pole-to-pole percolation.
//!
//! Two caps of half-angle `gamma` are linked when their centers are at most
//! `2 gamma` apart (the caps touch or overlap). A constellation percolates
//! when one linked component holds both a cap covering the South Pole and a
//! cap covering the North Pole.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::analytics;
use crate::constellation::{link_geometry, Constellation, KnownParam};
use crate::error::{Error, Result};
use crate::geometry::{AngleWithin, SpherePoint};
use crate::rng::{mix_seed, RandomStream};

/// Union-find over `0..n` with union by size and path halving.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Adds a singleton and returns its index.
    pub fn push(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i);
        self.size.push(1);
        i
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let grand = self.parent[self.parent[x]];
            self.parent[x] = grand;
            x = grand;
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the new root if they differed.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        Some(ra)
    }

    pub fn size_of(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// How candidate pairs are enumerated. Both strategies produce identical
/// graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Adjacency {
    /// Every pair.
    BruteForce,
    /// Pairs whose polar angles differ by at most `2 gamma`.
    #[default]
    BandSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub root: usize,
    pub size: usize,
    pub covers_south: bool,
    pub covers_north: bool,
}

#[derive(Debug, Clone)]
pub struct ConnectivityGraph {
    /// Component label (root index) of each cap.
    pub labels: Vec<usize>,
    pub covers_south: Vec<bool>,
    pub covers_north: Vec<bool>,
    pub components: Vec<ComponentSummary>,
}

impl ConnectivityGraph {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn connected(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    pub fn percolates(&self) -> bool {
        self.components
            .iter()
            .any(|c| c.covers_south && c.covers_north)
    }

    pub fn component_of(&self, i: usize) -> &ComponentSummary {
        let root = self.labels[i];
        self.components
            .iter()
            .find(|c| c.root == root)
            .expect("every label has a component")
    }
}

fn polar_angle(p: &SpherePoint) -> f64 {
    p.x().hypot(p.y()).atan2(p.z())
}

/// Calls `link(i, j)` for every linked pair `i < j` (in index order within
/// each pair).
fn for_each_link(c: &Constellation, adjacency: Adjacency, mut link: impl FnMut(usize, usize)) {
    let n = c.len();
    let test = AngleWithin::new(2.0 * c.gamma);
    match adjacency {
        Adjacency::BruteForce => {
            for i in 0..n {
                for j in i + 1..n {
                    if test.test(&c.centers[i], &c.centers[j]) {
                        link(i, j);
                    }
                }
            }
        }
        Adjacency::BandSweep => {
            let mut order: Vec<(f64, usize)> = c
                .centers
                .iter()
                .enumerate()
                .map(|(i, p)| (polar_angle(p), i))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            // Linked centers differ in polar angle by at most their separation.
            let width = 2.0 * c.gamma + 1e-9;
            for (k, &(ti, i)) in order.iter().enumerate() {
                for &(tj, j) in &order[k + 1..] {
                    if tj - ti > width {
                        break;
                    }
                    if test.test(&c.centers[i], &c.centers[j]) {
                        link(i.min(j), i.max(j));
                    }
                }
            }
        }
    }
}

pub fn build_graph(c: &Constellation) -> ConnectivityGraph {
    build_graph_with(c, Adjacency::default())
}

pub fn build_graph_with(c: &Constellation, adjacency: Adjacency) -> ConnectivityGraph {
    build_graph_between(
        c,
        adjacency,
        &SpherePoint::south_pole(),
        &SpherePoint::north_pole(),
    )
}

/// Graph whose pole flags refer to `south` and `north` instead of the poles.
pub fn build_graph_between(
    c: &Constellation,
    adjacency: Adjacency,
    south: &SpherePoint,
    north: &SpherePoint,
) -> ConnectivityGraph {
    let n = c.len();
    let mut ds = DisjointSet::new(n);
    for_each_link(c, adjacency, |i, j| {
        ds.union(i, j);
    });

    let cover = AngleWithin::new(c.gamma);
    let covers_south: Vec<bool> = c.centers.iter().map(|p| cover.test(p, south)).collect();
    let covers_north: Vec<bool> = c.centers.iter().map(|p| cover.test(p, north)).collect();
    let labels: Vec<usize> = (0..n).map(|i| ds.find(i)).collect();

    let mut components: Vec<ComponentSummary> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = labels[i];
        if slot[root] == usize::MAX {
            slot[root] = components.len();
            components.push(ComponentSummary {
                root,
                size: 0,
                covers_south: false,
                covers_north: false,
            });
        }
        let comp = &mut components[slot[root]];
        comp.size += 1;
        comp.covers_south |= covers_south[i];
        comp.covers_north |= covers_north[i];
    }

    ConnectivityGraph {
        labels,
        covers_south,
        covers_north,
        components,
    }
}

/// Pole-to-pole percolation of a single constellation.
pub fn percolates(c: &Constellation) -> bool {
    build_graph(c).percolates()
}

/// Percolation between an arbitrary antipodal pair `(a, -a)`.
pub fn percolates_between(c: &Constellation, a: &SpherePoint) -> bool {
    build_graph_between(c, Adjacency::default(), a, &a.antipode()).percolates()
}

/// Smallest `k` such that the first `k` centers percolate, if any.
///
/// Centers are inserted one at a time into a union-find whose roots carry
/// pole flags, so the whole prefix sequence costs one graph construction.
pub fn first_percolating_prefix(c: &Constellation) -> Option<usize> {
    let gamma = c.gamma;
    let link = AngleWithin::new(2.0 * gamma);
    let cover = AngleWithin::new(gamma);
    let (south, north) = (SpherePoint::south_pole(), SpherePoint::north_pole());

    // Polar-angle bins of width >= 2 gamma: linked centers share or
    // neighbour a bin.
    let bins = ((PI / (2.0 * gamma + 1e-9)).floor() as usize).max(1);
    let bin_of = |p: &SpherePoint| ((polar_angle(p) / PI * bins as f64) as usize).min(bins - 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); bins];

    let mut ds = DisjointSet::new(0);
    let mut has_south: Vec<bool> = Vec::with_capacity(c.len());
    let mut has_north: Vec<bool> = Vec::with_capacity(c.len());

    for (k, p) in c.centers.iter().enumerate() {
        let i = ds.push();
        has_south.push(cover.test(p, &south));
        has_north.push(cover.test(p, &north));
        let b = bin_of(p);
        for bucket in &members[b.saturating_sub(1)..=(b + 1).min(bins - 1)] {
            for &j in bucket {
                if link.test(p, &c.centers[j]) {
                    let (ri, rj) = (ds.find(i), ds.find(j));
                    if let Some(root) = ds.union(ri, rj) {
                        has_south[root] = has_south[ri] || has_south[rj];
                        has_north[root] = has_north[ri] || has_north[rj];
                    }
                }
            }
        }
        members[b].push(i);
        let r = ds.find(i);
        if has_south[r] && has_north[r] {
            return Some(k + 1);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    #[default]
    Wald,
    ClopperPearson,
}

/// Bernoulli statistics of the percolation event over independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercolationEstimate {
    pub trials: u64,
    pub successes: u64,
    pub theta_hat: f64,
    pub ci95_halfwidth: f64,
    pub seed: u64,
    /// All trials agreed, so the Wald interval collapses to zero width.
    pub degenerate: bool,
    pub ci_method: CiMethod,
}

impl PercolationEstimate {
    pub fn from_counts(successes: u64, trials: u64, seed: u64, method: CiMethod) -> Self {
        assert!(trials > 0 && successes <= trials);
        let p = successes as f64 / trials as f64;
        let degenerate = successes == 0 || successes == trials;
        let half = match method {
            CiMethod::Wald => {
                if degenerate {
                    0.0
                } else {
                    1.96 * (p * (1.0 - p) / trials as f64).sqrt()
                }
            }
            CiMethod::ClopperPearson => {
                let (lo, hi) = clopper_pearson(successes, trials, 0.05);
                (p - lo).max(hi - p)
            }
        };
        Self {
            trials,
            successes,
            theta_hat: p,
            ci95_halfwidth: half,
            seed,
            degenerate,
            ci_method: method,
        }
    }

    /// Standard error of `theta_hat` under the binomial model.
    pub fn std_error(&self) -> f64 {
        (self.theta_hat * (1.0 - self.theta_hat) / self.trials as f64).sqrt()
    }
}

/// Exact two-sided `1 - alpha` binomial interval.
pub fn clopper_pearson(successes: u64, trials: u64, alpha: f64) -> (f64, f64) {
    let (k, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .expect("positive shape parameters")
            .inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .expect("positive shape parameters")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

/// Stream for trial `t`. Coupled trials share one point stream across all
/// sizes; uncoupled ones get a fresh stream per size.
fn trial_stream(seed: u64, trial: u64, n: usize, coupled: bool) -> RandomStream {
    let base = if coupled {
        seed
    } else {
        mix_seed(seed, n as u64)
    };
    RandomStream::substream(base, trial)
}

/// Monte Carlo estimate of the pole-to-pole percolation probability.
pub fn estimate_theta(
    n: usize,
    gamma: f64,
    trials: u64,
    seed: u64,
    coupled: bool,
) -> Result<PercolationEstimate> {
    estimate_theta_with(n, gamma, trials, seed, coupled, CiMethod::Wald)
}

pub fn estimate_theta_with(
    n: usize,
    gamma: f64,
    trials: u64,
    seed: u64,
    coupled: bool,
    ci: CiMethod,
) -> Result<PercolationEstimate> {
    check_trials(trials)?;
    check_gamma(gamma)?;
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut s = trial_stream(seed, t, n, coupled);
            percolates(&Constellation::from_stream(n, gamma, &mut s, seed))
        })
        .count() as u64;
    Ok(PercolationEstimate::from_counts(
        successes, trials, seed, ci,
    ))
}

/// Per-trial first percolating prefix over a coupled stream of `max_n`
/// points. Entry `t` is `None` if trial `t` never percolates.
pub fn coupled_thresholds(
    max_n: usize,
    gamma: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<Option<usize>>> {
    check_trials(trials)?;
    check_gamma(gamma)?;
    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let mut s = trial_stream(seed, t, max_n, true);
            first_percolating_prefix(&Constellation::from_stream(max_n, gamma, &mut s, seed))
        })
        .collect())
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::domain(
            "trials",
            0.0,
            "at least one trial is required",
        ));
    }
    Ok(())
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

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Number of satellites.
    N,
    /// Altitude in km.
    Altitude,
    /// Maximum slant range in km.
    SlantRange,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::N => "N",
            SweepAxis::Altitude => "altitude",
            SweepAxis::SlantRange => "slant_range",
        }
    }
}

/// What stays fixed while the grid varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SweepSpec {
    /// Vary N at fixed coverage angle.
    Count { gamma: f64 },
    /// Vary altitude at fixed slant range and N.
    Altitude { d_m: f64, n: usize },
    /// Vary slant range at fixed altitude and N.
    SlantRange { h: f64, n: usize },
}

impl SweepSpec {
    pub fn axis(&self) -> SweepAxis {
        match self {
            SweepSpec::Count { .. } => SweepAxis::N,
            SweepSpec::Altitude { .. } => SweepAxis::Altitude,
            SweepSpec::SlantRange { .. } => SweepAxis::SlantRange,
        }
    }
}

/// One grid point of a sweep. `critical` is the analytic critical value of
/// the swept quantity (N_c, h^c or d_m^c) at the fixed parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub gamma_rad: f64,
    pub theta_hat: f64,
    pub ci95: f64,
    pub trials: u64,
    pub p_cov_analytic: f64,
    pub seed: u64,
    pub critical: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Grid values with no valid geometry, with the reason.
    pub infeasible: Vec<(f64, Error)>,
}

struct GridPoint {
    value: f64,
    n: usize,
    gamma: f64,
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("grid", 0.0, "grid must not be empty"));
    }
    let up = grid.windows(2).all(|w| w[1] > w[0]);
    let down = grid.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(Error::domain(
            "grid",
            grid.len() as f64,
            "grid must be strictly monotone",
        ));
    }
    Ok(())
}

/// Runs the sweep, stopping at the first infeasible grid point.
pub fn sweep(
    spec: SweepSpec,
    grid: &[f64],
    trials: u64,
    seed: u64,
    coupled: bool,
) -> Result<Vec<SweepRow>> {
    let out = sweep_lenient(spec, grid, trials, seed, coupled)?;
    if let Some((_, e)) = out.infeasible.into_iter().next() {
        return Err(e);
    }
    Ok(out.rows)
}

/// Runs the sweep over every feasible grid point and reports the rest.
pub fn sweep_lenient(
    spec: SweepSpec,
    grid: &[f64],
    trials: u64,
    seed: u64,
    coupled: bool,
) -> Result<SweepOutcome> {
    validate_grid(grid)?;
    check_trials(trials)?;

    let mut points = Vec::new();
    let mut infeasible = Vec::new();
    for &value in grid {
        match resolve(spec, value) {
            Ok(p) => points.push(p),
            Err(e) => infeasible.push((value, e)),
        }
    }

    let successes: Vec<u64> = match spec {
        SweepSpec::Count { gamma } if coupled => {
            let max_n = points.iter().map(|p| p.n).max().unwrap_or(0);
            let firsts = coupled_thresholds(max_n, gamma, trials, seed)?;
            points
                .iter()
                .map(|p| {
                    firsts
                        .iter()
                        .filter(|f| matches!(f, Some(k) if *k <= p.n))
                        .count() as u64
                })
                .collect()
        }
        SweepSpec::Altitude { n, .. } | SweepSpec::SlantRange { n, .. } if coupled => {
            // Same points in every column; only gamma changes.
            let per_trial: Vec<Vec<bool>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut s = trial_stream(seed, t, n, true);
                    let base = Constellation::from_stream(
                        n,
                        points.first().map_or(0.1, |p| p.gamma),
                        &mut s,
                        seed,
                    );
                    points
                        .iter()
                        .map(|p| {
                            let mut c = base.clone();
                            c.gamma = p.gamma;
                            percolates(&c)
                        })
                        .collect()
                })
                .collect();
            (0..points.len())
                .map(|k| per_trial.iter().filter(|row| row[k]).count() as u64)
                .collect()
        }
        _ => points
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let grid_seed = mix_seed(seed, k as u64 + 1);
                estimate_theta(p.n, p.gamma, trials, grid_seed, false).map(|e| e.successes)
            })
            .collect::<Result<_>>()?,
    };

    let rows = points
        .iter()
        .zip(successes)
        .map(|(p, s)| {
            let est = PercolationEstimate::from_counts(s, trials, seed, CiMethod::Wald);
            SweepRow {
                axis: spec.axis(),
                value: p.value,
                gamma_rad: p.gamma,
                theta_hat: est.theta_hat,
                ci95: est.ci95_halfwidth,
                trials,
                p_cov_analytic: analytics::p_cov(p.n as u64, p.gamma),
                seed,
                critical: critical_marker(spec, p.gamma),
            }
        })
        .collect();
    Ok(SweepOutcome { rows, infeasible })
}

fn resolve(spec: SweepSpec, value: f64) -> Result<GridPoint> {
    match spec {
        SweepSpec::Count { gamma } => {
            check_gamma(gamma)?;
            if !(value >= 1.0 && value.fract() == 0.0) {
                return Err(Error::domain(
                    "N",
                    value,
                    "satellite count must be a positive integer",
                ));
            }
            Ok(GridPoint {
                value,
                n: value as usize,
                gamma,
            })
        }
        SweepSpec::Altitude { d_m, n } => {
            let g = link_geometry(value, KnownParam::SlantRange(d_m))?;
            check_gamma(g.gamma)?;
            Ok(GridPoint {
                value,
                n,
                gamma: g.gamma,
            })
        }
        SweepSpec::SlantRange { h, n } => {
            let g = link_geometry(h, KnownParam::SlantRange(value))?;
            check_gamma(g.gamma)?;
            Ok(GridPoint {
                value,
                n,
                gamma: g.gamma,
            })
        }
    }
}

fn critical_marker(spec: SweepSpec, gamma: f64) -> Option<f64> {
    match spec {
        SweepSpec::Count { .. } => Some(analytics::critical_n(gamma)),
        SweepSpec::Altitude { d_m, n } => analytics::critical_altitude(n as u64, d_m).ok(),
        SweepSpec::SlantRange { h, n } => analytics::critical_slant_range(n as u64, h).ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::sample_constellation;

    fn deg(x: f64) -> f64 {
        x.to_radians()
    }

    fn meridian(gamma: f64, south_angles: &[f64]) -> Constellation {
        let centers = south_angles
            .iter()
            .map(|&a| SpherePoint::from_south_angle(a, 0.3))
            .collect();
        Constellation::from_centers(gamma, centers).unwrap()
    }

    #[test]
    fn disjoint_set_basics() {
        let mut ds = DisjointSet::new(5);
        assert!(ds.union(0, 1).is_some());
        assert!(ds.union(1, 0).is_none());
        ds.union(3, 4);
        assert_eq!(ds.size_of(0), 2);
        assert_ne!(ds.find(0), ds.find(3));
        ds.union(1, 4);
        assert_eq!(ds.size_of(3), 4);
        assert_eq!(ds.push(), 5);
        assert_eq!(ds.size_of(5), 1);
    }

    #[test]
    fn tangent_caps_are_linked() {
        let g = deg(5.2);
        let c = meridian(g, &[0.4, 0.4 + 2.0 * g]);
        assert!(build_graph(&c).connected(0, 1));
        let c = meridian(g, &[0.4, 0.4 + 2.0 * g + 1e-9]);
        assert!(!build_graph(&c).connected(0, 1));
    }

    #[test]
    fn short_chain_is_one_component() {
        let g = deg(5.2);
        let c = meridian(g, &[0.5, 0.5 + 1.9 * g, 0.5 + 3.8 * g]);
        let graph = build_graph(&c);
        assert_eq!(graph.components.len(), 1);
        assert_eq!(graph.component_of(0).size, 3);
    }

    #[test]
    fn empty_and_single_do_not_percolate() {
        let c = Constellation::from_centers(0.5, vec![]).unwrap();
        assert!(!percolates(&c));
        let c = Constellation::from_centers(1.5, vec![SpherePoint::south_pole()]).unwrap();
        assert!(!percolates(&c));
    }

    #[test]
    fn single_cap_rule() {
        // One cap holds both poles only once it spans more than a hemisphere.
        let eq = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        let c = Constellation::from_centers(std::f64::consts::FRAC_PI_2, vec![eq]).unwrap();
        assert!(percolates(&c));
        let c = Constellation::from_centers(std::f64::consts::FRAC_PI_2 - 1e-6, vec![eq]).unwrap();
        assert!(!percolates(&c));
        let e = estimate_theta(1, std::f64::consts::FRAC_PI_2, 50, 1, false).unwrap();
        let frac = e.theta_hat;
        // Only centers exactly on the equator qualify: a null event.
        assert_eq!(frac, 0.0);
    }

    #[test]
    fn band_sweep_matches_brute_force() {
        for seed in 0..20 {
            let c = sample_constellation(300, deg(6.0), seed).unwrap();
            let a = build_graph_with(&c, Adjacency::BruteForce);
            let b = build_graph_with(&c, Adjacency::BandSweep);
            for i in 0..c.len() {
                for j in 0..c.len() {
                    assert_eq!(a.connected(i, j), b.connected(i, j));
                }
            }
            assert_eq!(a.percolates(), b.percolates());
        }
    }

    #[test]
    fn first_prefix_agrees_with_direct_check() {
        for seed in 0..10 {
            let c = sample_constellation(900, deg(7.0), seed).unwrap();
            let first = first_percolating_prefix(&c);
            for n in (50..=900).step_by(50) {
                let expect = percolates(&c.prefix(n));
                assert_eq!(first.is_some_and(|k| k <= n), expect, "seed {seed} n {n}");
            }
        }
    }

    #[test]
    fn wald_and_exact_intervals() {
        let e = PercolationEstimate::from_counts(30, 100, 0, CiMethod::Wald);
        assert!((e.ci95_halfwidth - 1.96 * (0.3f64 * 0.7 / 100.0).sqrt()).abs() < 1e-15);
        let z = PercolationEstimate::from_counts(0, 100, 0, CiMethod::Wald);
        assert!(z.degenerate);
        assert_eq!(z.ci95_halfwidth, 0.0);
        let (lo, hi) = clopper_pearson(0, 100, 0.05);
        assert_eq!(lo, 0.0);
        // 1 - 0.025^(1/100)
        assert!((hi - 0.036_216_692_645_177).abs() < 1e-12, "{hi}");
        let cp = PercolationEstimate::from_counts(0, 100, 0, CiMethod::ClopperPearson);
        assert!(cp.ci95_halfwidth > 0.0);
    }

    #[test]
    fn estimate_rejects_zero_trials() {
        assert!(estimate_theta(10, 0.1, 0, 1, false).is_err());
    }

    #[test]
    fn estimates_are_deterministic() {
        let a = estimate_theta(400, deg(8.0), 40, 9, false).unwrap();
        let b = estimate_theta(400, deg(8.0), 40, 9, false).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_validation() {
        let spec = SweepSpec::Count { gamma: 0.1 };
        assert!(sweep(spec, &[], 1, 0, true).is_err());
        assert!(sweep(spec, &[10.0, 10.0], 1, 0, true).is_err());
        assert!(sweep(spec, &[10.5], 1, 0, false).is_err());
    }

    #[test]
    fn infeasible_altitudes_are_reported() {
        let spec = SweepSpec::Altitude { d_m: 809.5, n: 50 };
        let out = sweep_lenient(spec, &[500.0, 700.0, 900.0], 4, 1, true).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert_eq!(out.infeasible.len(), 1);
        assert_eq!(out.infeasible[0].0, 900.0);
        assert!(sweep(spec, &[500.0, 900.0], 4, 1, true).is_err());
    }
}
