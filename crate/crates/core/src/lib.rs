//! Spherical depth (DCOPS) for data on Riemannian manifolds.
//!
//! The depth of a point `p` with respect to a distribution `P` is the
//! probability that `p` falls inside the closed geodesic ball whose diameter
//! endpoints are two independent draws from `P`. Its empirical version is the
//! order-2 U-statistic over all unordered sample pairs.
//!
//! The crate is organised as:
//!
//! * [`geometry`]: manifolds (Euclidean / weighted Hilbert, sphere, flat torus,
//!   SPD cone), geodesic distance, midpoints and ball containment.
//! * [`depth`]: empirical and Monte-Carlo depth, batch queries, deepest points,
//!   depth profiles along rays.
//! * [`baselines`]: projection depths (outlyingness and random projection) and
//!   an angular Tukey depth on the sphere.
//! * [`samplers`]: seeded generators for Gaussian, von Mises-Fisher,
//!   multivariate von Mises, Wishart and mixture distributions.
//! * [`asymptotics`]: CLT and uniform-consistency experiments.
//!
//! With the default `parallel` feature, batch evaluations run on rayon. The
//! sequential build produces bit-identical output.

// NaN must fail these checks, so the negated forms are deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod asymptotics;
pub mod baselines;
pub mod depth;
mod error;
pub mod geometry;
mod par;
pub mod samplers;
pub mod stats;

pub use depth::{Dataset, DepthMethod, DepthReport};
pub use error::{Error, Result};
pub use geometry::{GeodesicBall, ManifoldSpec, Point};
pub use par::current_num_threads;
pub use samplers::{RngStream, SamplerSpec};
