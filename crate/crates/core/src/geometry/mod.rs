//! Manifolds, geodesic distance, geodesic midpoints and closed geodesic balls.
//!
//! A [`ManifoldSpec`] fixes how the coordinates of a [`Point`] are read:
//!
//! | manifold | coordinates | distance |
//! |----------|-------------|----------|
//! | Euclidean / weighted Hilbert | `k` reals | `sqrt(sum w_i (p_i - q_i)^2)` |
//! | Sphere `S^{k-1}` | `k` reals, unit norm | great-circle angle |
//! | Flat torus `T^d` | `d` angles in `[0, 2pi)` | root-sum-square of circular arcs |
//! | SPD cone `P_k` | `k*k` reals, row-major | `‖log(A^{-1/2} B A^{-1/2})‖_F` |
//!
//! The ball `B_{x1 x2}` is the closed ball centred at the geodesic midpoint of
//! `x1` and `x2` with radius `d(x1, x2) / 2`. On the sphere and torus the
//! midpoint is undefined for cut-locus pairs; those calls return
//! [`Error::CutLocus`] and it is up to the caller to skip the pair.

pub mod linalg;
mod spd;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};
use linalg::SquareMatrix;

pub use spd::{spd_exp_ray, spd_geodesic, spd_geometric_mean};

const TWO_PI: f64 = 2.0 * PI;
/// Slack added to ball radii so float-exact boundary points are contained.
pub const BOUNDARY_SLACK: f64 = 1e-12;
/// Distance from the antipode (sphere) or from a half-turn (torus) below which
/// a pair is treated as lying on the cut locus.
pub const CUT_LOCUS_EPS: f64 = 1e-9;
/// Sphere inputs farther than this from unit norm are rejected.
pub const UNIT_NORM_TOL: f64 = 1e-6;
/// Relative symmetry tolerance for SPD inputs.
pub const SPD_SYMMETRY_TOL: f64 = 1e-9;
/// Smallest admissible eigenvalue of an SPD point, relative to the largest.
pub const SPD_EIGEN_FLOOR: f64 = 1e-10;

/// Geometry of the sample space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ManifoldKind {
    /// `R^k`, optionally with a diagonal weighted inner product (a discretised
    /// `L^2` inner product for curves).
    Euclidean { dim: usize, weights: Option<Vec<f64>> },
    /// Unit sphere embedded in `R^dim`.
    Sphere { dim: usize },
    /// Flat torus `(S^1)^dim`.
    Torus { dim: usize },
    /// Symmetric positive-definite `size x size` matrices, affine-invariant metric.
    SpdCone { size: usize },
}

/// Immutable, validated manifold descriptor.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ManifoldSpec {
    kind: ManifoldKind,
}

/// Coordinates of a point, valid for the manifold that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub(crate) fn new_unchecked(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Closed geodesic ball `B_{x1 x2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicBall {
    pub center: Point,
    pub radius: f64,
    /// `center^{-1/2}` on the SPD cone, reused by every containment test.
    pub(crate) center_inv_sqrt: Option<Vec<f64>>,
}

impl ManifoldSpec {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidManifold("euclidean dimension must be >= 1".into()));
        }
        Ok(ManifoldSpec {
            kind: ManifoldKind::Euclidean { dim, weights: None },
        })
    }

    /// `R^k` with inner product `sum w_i x_i y_i`.
    pub fn weighted(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidManifold("weight vector is empty".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidManifold(
                "weights must be finite and strictly positive".into(),
            ));
        }
        Ok(ManifoldSpec {
            kind: ManifoldKind::Euclidean {
                dim: weights.len(),
                weights: Some(weights),
            },
        })
    }

    /// Curves sampled on `m` equispaced points of `[0, 1]` with trapezoid
    /// quadrature weights, so the inner product approximates `∫ x(t) y(t) dt`.
    pub fn hilbert_trapezoid(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidManifold("need at least 2 grid points".into()));
        }
        let h = 1.0 / (m - 1) as f64;
        let weights = (0..m).map(|i| if i == 0 || i == m - 1 { 0.5 * h } else { h }).collect();
        Self::weighted(weights)
    }

    pub fn sphere(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidManifold("sphere ambient dimension must be >= 2".into()));
        }
        Ok(ManifoldSpec {
            kind: ManifoldKind::Sphere { dim },
        })
    }

    pub fn torus(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidManifold("torus dimension must be >= 1".into()));
        }
        Ok(ManifoldSpec {
            kind: ManifoldKind::Torus { dim },
        })
    }

    pub fn spd(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidManifold("matrix size must be >= 1".into()));
        }
        Ok(ManifoldSpec {
            kind: ManifoldKind::SpdCone { size },
        })
    }

    pub fn kind(&self) -> &ManifoldKind {
        &self.kind
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.kind, ManifoldKind::Euclidean { .. })
    }

    /// Euclidean weights, if any.
    pub fn weights(&self) -> Option<&[f64]> {
        match &self.kind {
            ManifoldKind::Euclidean { weights, .. } => weights.as_deref(),
            _ => None,
        }
    }

    /// Number of stored coordinates per point.
    pub fn coord_len(&self) -> usize {
        match &self.kind {
            ManifoldKind::Euclidean { dim, .. } | ManifoldKind::Sphere { dim } | ManifoldKind::Torus { dim } => *dim,
            ManifoldKind::SpdCone { size } => size * size,
        }
    }

    /// Checks membership and returns the canonical representative.
    ///
    /// Torus angles are reduced mod `2pi`, near-unit sphere vectors are
    /// renormalised, SPD matrices are symmetrised.
    pub fn validate(&self, raw: &[f64]) -> Result<Point> {
        let expected = self.coord_len();
        if raw.len() != expected {
            return Err(Error::WrongDimension {
                expected,
                got: raw.len(),
            });
        }
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        match &self.kind {
            ManifoldKind::Euclidean { .. } => Ok(Point(raw.to_vec())),
            ManifoldKind::Sphere { .. } => {
                let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
                let deviation = (norm - 1.0).abs();
                if deviation > UNIT_NORM_TOL {
                    return Err(Error::NotUnitNorm { deviation });
                }
                Ok(Point(raw.iter().map(|v| v / norm).collect()))
            }
            ManifoldKind::Torus { .. } => Ok(Point(raw.iter().map(|&a| wrap_angle(a)).collect())),
            ManifoldKind::SpdCone { size } => {
                let m = SquareMatrix::from_row_major(*size, raw.to_vec())?;
                spd::validate(&m).map(|m| Point(m.into_vec()))
            }
        }
    }

    fn check(&self, p: &Point) -> Result<()> {
        if p.len() == self.coord_len() {
            Ok(())
        } else {
            Err(Error::ManifoldMismatch)
        }
    }

    /// Geodesic distance.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.distance_raw(p.coords(), q.coords()))
    }

    pub(crate) fn distance_raw(&self, p: &[f64], q: &[f64]) -> f64 {
        match &self.kind {
            ManifoldKind::Euclidean { weights, .. } => {
                let s: f64 = match weights {
                    None => p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum(),
                    Some(w) => p.iter().zip(q).zip(w).map(|((a, b), w)| w * (a - b) * (a - b)).sum(),
                };
                s.sqrt()
            }
            ManifoldKind::Sphere { .. } => sphere_angle(p, q),
            ManifoldKind::Torus { .. } => p
                .iter()
                .zip(q)
                .map(|(&a, &b)| {
                    let d = circle_distance(a, b);
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            ManifoldKind::SpdCone { size } => spd::distance(*size, p, q),
        }
    }

    /// Geodesic midpoint, or [`Error::CutLocus`] when it is not unique.
    pub fn midpoint(&self, p: &Point, q: &Point) -> Result<Point> {
        self.check(p)?;
        self.check(q)?;
        self.midpoint_raw(p.coords(), q.coords()).map(Point)
    }

    fn midpoint_raw(&self, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        match &self.kind {
            ManifoldKind::Euclidean { .. } => Ok(p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect()),
            ManifoldKind::Sphere { .. } => {
                let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
                if dot <= -1.0 + CUT_LOCUS_EPS {
                    return Err(Error::CutLocus);
                }
                let s: Vec<f64> = p.iter().zip(q).map(|(a, b)| a + b).collect();
                let norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
                Ok(s.into_iter().map(|v| v / norm).collect())
            }
            ManifoldKind::Torus { .. } => p
                .iter()
                .zip(q)
                .map(|(&a, &b)| circle_midpoint(a, b).ok_or(Error::CutLocus))
                .collect(),
            ManifoldKind::SpdCone { size } => Ok(spd::midpoint(*size, p, q).into_vec()),
        }
    }

    /// The closed ball with diameter endpoints `x1`, `x2`.
    pub fn ball(&self, x1: &Point, x2: &Point) -> Result<GeodesicBall> {
        self.check(x1)?;
        self.check(x2)?;
        self.ball_raw(x1.coords(), x2.coords())
    }

    pub(crate) fn ball_raw(&self, x1: &[f64], x2: &[f64]) -> Result<GeodesicBall> {
        let center = self.midpoint_raw(x1, x2)?;
        let radius = 0.5 * self.distance_raw(x1, x2);
        let center_inv_sqrt = match &self.kind {
            ManifoldKind::SpdCone { size } => Some(spd::inv_sqrt(*size, &center)),
            _ => None,
        };
        Ok(GeodesicBall {
            center: Point(center),
            radius,
            center_inv_sqrt,
        })
    }

    /// Closed-ball test `d(center, p) <= radius + BOUNDARY_SLACK`.
    pub fn in_ball(&self, ball: &GeodesicBall, p: &Point) -> Result<bool> {
        self.check(p)?;
        self.check(&ball.center)?;
        Ok(self.in_ball_raw(ball, p.coords()))
    }

    #[inline]
    pub(crate) fn in_ball_raw(&self, ball: &GeodesicBall, p: &[f64]) -> bool {
        self.in_ball_parts(ball.center.coords(), ball.radius, ball.center_inv_sqrt.as_deref(), p)
    }

    /// Containment test on the unpacked parts of a ball; every cached and
    /// uncached path goes through here so their results agree bit for bit.
    #[inline]
    pub(crate) fn in_ball_parts(&self, center: &[f64], radius: f64, inv_sqrt: Option<&[f64]>, p: &[f64]) -> bool {
        let d = match (&self.kind, inv_sqrt) {
            (ManifoldKind::SpdCone { size }, Some(s)) => spd::distance_from_inv_sqrt(*size, s, p),
            _ => self.distance_raw(center, p),
        };
        d <= radius + BOUNDARY_SLACK
    }

    /// Whether `p` lies in the closed ball `B_{x1 x2}`.
    ///
    /// On Euclidean/Hilbert spaces this is the midpoint-free test
    /// `<x1 - p, x2 - p>_w <= 0`.
    pub fn ball_contains(&self, x1: &Point, x2: &Point, p: &Point) -> Result<bool> {
        self.check(x1)?;
        self.check(x2)?;
        self.check(p)?;
        self.ball_contains_raw(x1.coords(), x2.coords(), p.coords())
    }

    #[inline]
    pub(crate) fn ball_contains_raw(&self, x1: &[f64], x2: &[f64], p: &[f64]) -> Result<bool> {
        match &self.kind {
            ManifoldKind::Euclidean { weights, .. } => Ok(euclidean_contains(x1, x2, p, weights.as_deref())),
            _ => {
                let ball = self.ball_raw(x1, x2)?;
                Ok(self.in_ball_raw(&ball, p))
            }
        }
    }
}

/// `<x1 - p, x2 - p>_w <= 0`.
#[inline]
pub(crate) fn euclidean_contains(x1: &[f64], x2: &[f64], p: &[f64], weights: Option<&[f64]>) -> bool {
    let dot: f64 = match weights {
        None => x1.iter().zip(x2).zip(p).map(|((a, b), c)| (a - c) * (b - c)).sum(),
        Some(w) => x1
            .iter()
            .zip(x2)
            .zip(p)
            .zip(w)
            .map(|(((a, b), c), w)| w * (a - c) * (b - c))
            .sum(),
    };
    dot <= 0.0
}

/// Great-circle angle `2 atan2(|p - q|, |p + q|)`, accurate for nearly equal
/// and nearly antipodal points alike.
#[inline]
fn sphere_angle(p: &[f64], q: &[f64]) -> f64 {
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (a, b) in p.iter().zip(q) {
        diff += (a - b) * (a - b);
        sum += (a + b) * (a + b);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Reduces an angle to `[0, 2pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TWO_PI);
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Arc length between two canonical angles.
#[inline]
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(TWO_PI - d)
}

/// Midpoint of the minimising arc, `None` when the arc is (numerically) a
/// half-turn.
#[inline]
fn circle_midpoint(a: f64, b: f64) -> Option<f64> {
    let mut delta = b - a;
    if delta > PI {
        delta -= TWO_PI;
    } else if delta < -PI {
        delta += TWO_PI;
    }
    if (delta.abs() - PI).abs() <= CUT_LOCUS_EPS {
        return None;
    }
    Some(wrap_angle(a + 0.5 * delta))
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ManifoldKind::Euclidean { dim, weights: None } => write!(f, "euclidean:{dim}"),
            ManifoldKind::Euclidean { dim, weights: Some(_) } => write!(f, "weighted:{dim}"),
            ManifoldKind::Sphere { dim } => write!(f, "sphere:{dim}"),
            ManifoldKind::Torus { dim } => write!(f, "torus:{dim}"),
            ManifoldKind::SpdCone { size } => write!(f, "spd:{size}"),
        }
    }
}

impl FromStr for ManifoldSpec {
    type Err = Error;

    /// Parses `euclidean:k`, `hilbert:m` (trapezoid weights on `[0,1]`),
    /// `sphere:k`, `torus:d` or `spd:k`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, dim) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidManifold(format!("expected `name:dim`, got `{s}`")))?;
        let dim: usize = dim
            .trim()
            .parse()
            .map_err(|_| Error::InvalidManifold(format!("bad dimension in `{s}`")))?;
        match name.trim().to_ascii_lowercase().as_str() {
            "euclidean" | "r" => Self::euclidean(dim),
            "hilbert" | "fda" => Self::hilbert_trapezoid(dim),
            "sphere" | "s" => Self::sphere(dim),
            "torus" | "t" => Self::torus(dim),
            "spd" => Self::spd(dim),
            other => Err(Error::InvalidManifold(format!("unknown manifold `{other}`"))),
        }
    }
}
