//! Percolation of satellite coverage caps on a sphere.
//!
//! Satellites at a common altitude are modelled by the centers of their
//! ground footprints, spherical caps of half-angle `gamma` on the Earth
//! sphere. Two footprints are linked when they touch, and a constellation
//! percolates when a single linked component covers both the South and the
//! North Pole.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: unit vectors, caps, areas and uniform sampling.
//! * [`rng`]: seeded, per-trial random substreams.
//! * [`stereographic`]: projection onto the plane tangent at the South Pole.
//! * [`constellation`]: link-budget geometry and point-set generation.
//! * [`percolation`]: connectivity graphs, pole-to-pole detection and
//!   Monte Carlo estimation.
//! * [`analytics`]: closed-form coverage and critical-value expressions.
//! * [`hexlattice`]: hexagonal cells on the projection plane and their
//!   open/closed certificates.

pub mod analytics;
pub mod constellation;
pub mod error;
pub mod geometry;
pub mod hexlattice;
pub mod percolation;
pub mod rng;
pub mod stereographic;

pub use analytics::{CriticalReport, HexBounds, LayoutBounds};
pub use constellation::{Constellation, KnownParam, LayoutInfo, LinkGeometry, Provenance};
pub use error::{Error, Result};
pub use geometry::{Cap, SpherePoint, EARTH_RADIUS_KM};
pub use hexlattice::{HexCell, HexLabel};
pub use percolation::{ConnectivityGraph, PercolationEstimate, SweepAxis, SweepRow};
pub use rng::RandomStream;
pub use stereographic::{PlanePoint, ProjectedShape};
