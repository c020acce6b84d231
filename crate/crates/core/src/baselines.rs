//! Comparison depths: projection outlyingness depth (PD1), random-projection
//! depth (PD2) and an approximate angular Tukey depth (ATD) on the sphere.
//!
//! The normalized comparison scale (`4 * PD2`, `2 * DCOPS`) is a presentation
//! concern and is never applied here.

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::depth::Dataset;
use crate::geometry::{ManifoldKind, Point, BOUNDARY_SLACK};
use crate::samplers::RngStream;
use crate::stats;
use crate::{Error, Result};

/// Default number of random directions.
pub const DEFAULT_DIRECTIONS: usize = 500;
/// Substream for direction draws, so a direction set never reuses the
/// Gaussian draws of a sample generated from the same seed.
const DIRECTION_STREAM: u64 = 0xD1EC_7104;

/// A fixed set of unit vectors in `R^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSet {
    dim: usize,
    directions: Vec<Vec<f64>>,
    seed: Option<u64>,
}

fn normalize(v: &[f64]) -> Option<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 0.0 && norm.is_finite()).then(|| v.iter().map(|x| x / norm).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl DirectionSet {
    /// `count` normalized standard Gaussian vectors.
    pub fn random(dim: usize, count: usize, seed: u64) -> Result<Self> {
        if dim == 0 || count == 0 {
            return Err(Error::InvalidArgument(
                "direction set needs dim >= 1 and count >= 1".into(),
            ));
        }
        let mut rng = RngStream::substream(seed, DIRECTION_STREAM);
        let mut directions = Vec::with_capacity(count);
        while directions.len() < count {
            let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            if let Some(u) = normalize(&g) {
                directions.push(u);
            }
        }
        Ok(DirectionSet {
            dim,
            directions,
            seed: Some(seed),
        })
    }

    /// Normalizes the given vectors.
    pub fn from_vectors(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vectors.first().map(Vec::len).unwrap_or(0);
        if dim == 0 {
            return Err(Error::InvalidArgument("direction set must be nonempty".into()));
        }
        let directions = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if v.len() != dim {
                    return Err(Error::WrongDimension {
                        expected: dim,
                        got: v.len(),
                    }
                    .at(i));
                }
                normalize(v).ok_or_else(|| Error::InvalidArgument("zero direction".into()).at(i))
            })
            .collect::<Result<_>>()?;
        Ok(DirectionSet {
            dim,
            directions,
            seed: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Sorted sample projections with their median and MAD, one entry per
/// direction. Build once and query many points.
#[derive(Debug, Clone)]
pub struct ProjectionSummary<'a> {
    dirs: &'a DirectionSet,
    sorted: Vec<Vec<f64>>,
    median: Vec<f64>,
    mad: Vec<f64>,
    zero_mad: usize,
}

impl<'a> ProjectionSummary<'a> {
    pub fn new(ds: &Dataset, dirs: &'a DirectionSet) -> Result<Self> {
        if !matches!(ds.spec().kind(), ManifoldKind::Euclidean { .. }) {
            return Err(Error::InvalidManifold("projection depths need Euclidean data".into()));
        }
        if ds.len() < 2 {
            return Err(Error::DegenerateSample("need at least 2 points".into()));
        }
        if dirs.dim() != ds.spec().coord_len() {
            return Err(Error::WrongDimension {
                expected: ds.spec().coord_len(),
                got: dirs.dim(),
            });
        }
        let mut sorted = Vec::with_capacity(dirs.len());
        let mut median = Vec::with_capacity(dirs.len());
        let mut mad = Vec::with_capacity(dirs.len());
        for u in dirs.directions() {
            let mut proj: Vec<f64> = ds.points().iter().map(|x| dot(x.coords(), u)).collect();
            proj.sort_by(f64::total_cmp);
            let m = stats::median_sorted(&proj);
            let mut dev: Vec<f64> = proj.iter().map(|v| (v - m).abs()).collect();
            dev.sort_by(f64::total_cmp);
            median.push(m);
            mad.push(stats::median_sorted(&dev));
            sorted.push(proj);
        }
        let zero_mad = mad.iter().filter(|m| **m == 0.0).count();
        if zero_mad == dirs.len() {
            return Err(Error::ZeroMad);
        }
        Ok(ProjectionSummary {
            dirs,
            sorted,
            median,
            mad,
            zero_mad,
        })
    }

    /// Directions skipped by PD1 because the projected sample has zero MAD.
    pub fn zero_mad_directions(&self) -> usize {
        self.zero_mad
    }

    fn check(&self, p: &Point) -> Result<()> {
        if p.len() == self.dirs.dim() {
            Ok(())
        } else {
            Err(Error::WrongDimension {
                expected: self.dirs.dim(),
                got: p.len(),
            })
        }
    }

    /// `1 / (1 + OU(p))` with `OU` the largest robust z-score over directions.
    pub fn pd1(&self, p: &Point) -> Result<f64> {
        self.check(p)?;
        let mut ou = 0.0f64;
        for ((u, m), s) in self.dirs.directions().iter().zip(&self.median).zip(&self.mad) {
            if *s > 0.0 {
                ou = ou.max((dot(p.coords(), u) - m).abs() / s);
            }
        }
        Ok(1.0 / (1.0 + ou))
    }

    /// Average of `F(t) (1 - F(t))` over directions, `F` the projected ECDF.
    pub fn pd2(&self, p: &Point) -> Result<f64> {
        self.check(p)?;
        let n = self.sorted[0].len() as f64;
        let total: f64 = self
            .dirs
            .directions()
            .iter()
            .zip(&self.sorted)
            .map(|(u, proj)| {
                let t = dot(p.coords(), u);
                let f = proj.partition_point(|v| *v <= t) as f64 / n;
                f * (1.0 - f)
            })
            .sum();
        Ok(total / self.dirs.len() as f64)
    }
}

/// PD1 value and the number of skipped zero-MAD directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pd1Value {
    pub value: f64,
    pub zero_mad_directions: usize,
}

/// Projection outlyingness depth of `p`.
pub fn pd1(ds: &Dataset, p: &Point, dirs: &DirectionSet) -> Result<Pd1Value> {
    let summary = ProjectionSummary::new(ds, dirs)?;
    Ok(Pd1Value {
        value: summary.pd1(p)?,
        zero_mad_directions: summary.zero_mad_directions(),
    })
}

/// Random-projection depth of `p`; at most 1/4.
pub fn pd2(ds: &Dataset, p: &Point, dirs: &DirectionSet) -> Result<f64> {
    ProjectionSummary::new(ds, dirs)?.pd2(p)
}

/// Approximate angular Tukey depth: the smallest sample fraction in a closed
/// hemisphere `{x : <v, x> >= 0}` over candidate poles `v` with `<v, p> >= 0`.
///
/// Candidates are the given poles, `p` itself, and for every sample point
/// `X_i` the pole orthogonal to `p` whose boundary passes through `p` and
/// which excludes `X_i`. The result is an upper bound on the exact depth.
pub fn atd_sphere(ds: &Dataset, p: &Point, poles: &DirectionSet) -> Result<f64> {
    if !matches!(ds.spec().kind(), ManifoldKind::Sphere { .. }) {
        return Err(Error::InvalidManifold("angular Tukey depth needs sphere data".into()));
    }
    let dim = ds.spec().coord_len();
    if p.len() != dim {
        return Err(Error::ManifoldMismatch);
    }
    if poles.dim() != dim {
        return Err(Error::WrongDimension {
            expected: dim,
            got: poles.dim(),
        });
    }
    if ds.is_empty() {
        return Err(Error::DegenerateSample("empty sample".into()));
    }
    let pc = p.coords();
    let tight = ds.points().iter().filter_map(|x| {
        let xc = x.coords();
        let a = dot(xc, pc);
        let perp: Vec<f64> = xc.iter().zip(pc).map(|(x, p)| a * p - x).collect();
        // X_i at +-p gives no usable direction
        if dot(&perp, &perp) < 1e-24 {
            return None;
        }
        normalize(&perp)
    });
    let candidates = poles
        .directions()
        .iter()
        .cloned()
        .chain(std::iter::once(pc.to_vec()))
        .chain(tight);
    let n = ds.len();
    let mut best: Option<usize> = None;
    for v in candidates {
        if dot(&v, pc) < -BOUNDARY_SLACK {
            continue;
        }
        let count = ds
            .points()
            .iter()
            .filter(|x| dot(&v, x.coords()) >= -BOUNDARY_SLACK)
            .count();
        best = Some(best.map_or(count, |b| b.min(count)));
    }
    best.map(|c| c as f64 / n as f64).ok_or(Error::NoValidPole)
}
