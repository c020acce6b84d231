//! Empirical and population spherical depth.
//!
//! The empirical depth of `p` is the fraction of unordered sample pairs
//! `(X_i, X_j)` whose closed geodesic ball contains `p`. Pairs whose midpoint
//! is not unique (cut locus) are dropped from both numerator and denominator
//! and reported as `skipped_pairs`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::baselines::{self, DirectionSet};
use crate::geometry::{euclidean_contains, spd_exp_ray, ManifoldKind, ManifoldSpec, Point};
use crate::par::{iter_maybe_parallel, slice_maybe_parallel};
use crate::samplers::{RngStream, Sampler, SamplerSpec};
use crate::{Error, Result};
#[cfg(feature = "parallel")]
use rayon::iter::ParallelIterator;

/// Pair-ball caches are only built up to this sample size by default.
pub const DEFAULT_CACHE_LIMIT: usize = 5000;
/// Monte-Carlo pairs are drawn in chunks with one RNG substream per chunk.
const MC_CHUNK: u64 = 8192;

/// A validated sample on one manifold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    spec: ManifoldSpec,
    points: Vec<Point>,
}

impl Dataset {
    /// Wraps already-validated points, checking only that they have the
    /// manifold's coordinate length.
    pub fn new(spec: ManifoldSpec, points: Vec<Point>) -> Result<Self> {
        let len = spec.coord_len();
        if let Some(i) = points.iter().position(|p| p.len() != len) {
            return Err(Error::ManifoldMismatch.at(i));
        }
        Ok(Dataset { spec, points })
    }

    /// Validates raw coordinate rows.
    pub fn from_rows<R: AsRef<[f64]>>(spec: ManifoldSpec, rows: &[R]) -> Result<Self> {
        let points = rows
            .iter()
            .enumerate()
            .map(|(i, r)| spec.validate(r.as_ref()).map_err(|e| e.at(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset { spec, points })
    }

    pub(crate) fn from_points_unchecked(spec: ManifoldSpec, points: Vec<Point>) -> Self {
        Dataset { spec, points }
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The first `n` points.
    pub fn prefix(&self, n: usize) -> Dataset {
        Dataset {
            spec: self.spec.clone(),
            points: self.points[..n.min(self.len())].to_vec(),
        }
    }

    fn check_query(&self, p: &Point) -> Result<()> {
        if p.len() == self.spec.coord_len() {
            Ok(())
        } else {
            Err(Error::ManifoldMismatch)
        }
    }
}

/// Which depth a report holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DepthMethod {
    Dcops,
    Pd1,
    Pd2,
    Atd,
}

impl DepthMethod {
    pub fn name(&self) -> &'static str {
        match self {
            DepthMethod::Dcops => "dcops",
            DepthMethod::Pd1 => "pd1",
            DepthMethod::Pd2 => "pd2",
            DepthMethod::Atd => "atd",
        }
    }
}

impl fmt::Display for DepthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DepthMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dcops" | "bd" | "spherical" => Ok(DepthMethod::Dcops),
            "pd1" => Ok(DepthMethod::Pd1),
            "pd2" => Ok(DepthMethod::Pd2),
            "atd" => Ok(DepthMethod::Atd),
            other => Err(Error::InvalidArgument(format!("unknown depth method `{other}`"))),
        }
    }
}

/// Depth values for a batch of queries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthReport {
    pub method: DepthMethod,
    pub values: Vec<f64>,
    /// Sample size.
    pub n: usize,
    /// Pairs dropped because their geodesic is not unique (DCOPS), or
    /// projection directions with zero MAD (PD1).
    pub skipped_pairs: u64,
    pub seed: Option<u64>,
}

/// Depth of one query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepthValue {
    pub value: f64,
    pub skipped_pairs: u64,
}

/// Options for [`DepthEngine`].
#[derive(Debug, Clone, Copy)]
pub struct BatchOptions {
    /// Largest sample size for which all pair balls are precomputed.
    pub cache_limit: usize,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            cache_limit: DEFAULT_CACHE_LIMIT,
        }
    }
}

/// Flat storage of precomputed balls: centre coordinates, radius and (on the
/// SPD cone) the centre's inverse square root.
#[derive(Debug, Clone)]
struct BallCache {
    stride: usize,
    inv_stride: usize,
    centers: Vec<f64>,
    radii: Vec<f64>,
    inv_sqrt: Vec<f64>,
    valid: Vec<bool>,
}

impl BallCache {
    fn build(spec: &ManifoldSpec, points: &[Point], pairs: &PairPlan) -> BallCache {
        let stride = spec.coord_len();
        let inv_stride = if matches!(spec.kind(), ManifoldKind::SpdCone { .. }) {
            stride
        } else {
            0
        };
        let balls: Vec<Option<crate::GeodesicBall>> = match pairs {
            PairPlan::All => {
                let n = points.len();
                let rows: Vec<Vec<Option<crate::GeodesicBall>>> = iter_maybe_parallel!(0..n)
                    .map(|i| {
                        ((i + 1)..n)
                            .map(|j| spec.ball_raw(points[i].coords(), points[j].coords()).ok())
                            .collect()
                    })
                    .collect();
                rows.into_iter().flatten().collect()
            }
            PairPlan::List(list) => slice_maybe_parallel!(list)
                .map(|&(i, j)| {
                    spec.ball_raw(points[i as usize].coords(), points[j as usize].coords())
                        .ok()
                })
                .collect(),
        };
        let mut cache = BallCache {
            stride,
            inv_stride,
            centers: Vec::with_capacity(balls.len() * stride),
            radii: Vec::with_capacity(balls.len()),
            inv_sqrt: Vec::with_capacity(balls.len() * inv_stride),
            valid: Vec::with_capacity(balls.len()),
        };
        for b in balls {
            match b {
                Some(b) => {
                    cache.centers.extend_from_slice(b.center.coords());
                    cache.radii.push(b.radius);
                    if let Some(s) = &b.center_inv_sqrt {
                        cache.inv_sqrt.extend_from_slice(s);
                    }
                    cache.valid.push(true);
                }
                None => {
                    cache.centers.extend(std::iter::repeat_n(0.0, stride));
                    cache.radii.push(f64::NAN);
                    cache.inv_sqrt.extend(std::iter::repeat_n(0.0, inv_stride));
                    cache.valid.push(false);
                }
            }
        }
        cache
    }

    fn skipped(&self) -> u64 {
        self.valid.iter().filter(|v| !**v).count() as u64
    }

    fn count(&self, spec: &ManifoldSpec, p: &[f64]) -> u64 {
        let mut hits = 0u64;
        for (idx, &ok) in self.valid.iter().enumerate() {
            if !ok {
                continue;
            }
            let center = &self.centers[idx * self.stride..(idx + 1) * self.stride];
            let inv = if self.inv_stride > 0 {
                Some(&self.inv_sqrt[idx * self.inv_stride..(idx + 1) * self.inv_stride])
            } else {
                None
            };
            if spec.in_ball_parts(center, self.radii[idx], inv, p) {
                hits += 1;
            }
        }
        hits
    }
}

#[derive(Debug, Clone)]
enum PairPlan {
    All,
    List(Vec<(u32, u32)>),
}

/// Reusable evaluator of empirical depth over a fixed sample.
///
/// `exact` uses every unordered pair (the U-statistic); `subsampled` uses a
/// fixed random list of pairs drawn with replacement (an incomplete
/// U-statistic), which keeps large samples tractable. Off the Euclidean case
/// the pair balls are precomputed once when the sample is small enough.
#[derive(Debug, Clone)]
pub struct DepthEngine<'a> {
    ds: &'a Dataset,
    plan: PairPlan,
    cache: Option<BallCache>,
}

impl<'a> DepthEngine<'a> {
    pub fn exact(ds: &'a Dataset) -> Result<Self> {
        Self::exact_with(ds, BatchOptions::default())
    }

    pub fn exact_with(ds: &'a Dataset, opts: BatchOptions) -> Result<Self> {
        if ds.len() < 2 {
            return Err(Error::DegenerateSample("need at least 2 points".into()));
        }
        let plan = PairPlan::All;
        let cache = (!ds.spec.is_euclidean() && ds.len() <= opts.cache_limit)
            .then(|| BallCache::build(&ds.spec, &ds.points, &plan));
        let engine = DepthEngine { ds, plan, cache };
        engine.check_not_degenerate()?;
        Ok(engine)
    }

    /// Engine over `n_pairs` index pairs `i < j` drawn uniformly with replacement.
    pub fn subsampled(ds: &'a Dataset, n_pairs: usize, seed: u64) -> Result<Self> {
        let n = ds.len();
        if n < 2 {
            return Err(Error::DegenerateSample("need at least 2 points".into()));
        }
        if n_pairs == 0 {
            return Err(Error::InvalidArgument("pair budget must be >= 1".into()));
        }
        let mut rng = RngStream::new(seed);
        let list: Vec<(u32, u32)> = (0..n_pairs)
            .map(|_| {
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                (i.min(j) as u32, i.max(j) as u32)
            })
            .collect();
        let plan = PairPlan::List(list);
        let cache = (!ds.spec.is_euclidean()).then(|| BallCache::build(&ds.spec, &ds.points, &plan));
        let engine = DepthEngine { ds, plan, cache };
        engine.check_not_degenerate()?;
        Ok(engine)
    }

    fn check_not_degenerate(&self) -> Result<()> {
        if let Some(cache) = &self.cache {
            if cache.skipped() as usize == cache.valid.len() {
                return Err(Error::DegenerateSample("every pair lies on the cut locus".into()));
            }
        }
        Ok(())
    }

    pub fn dataset(&self) -> &Dataset {
        self.ds
    }

    /// Number of pairs the estimator averages over, before skipping.
    pub fn total_pairs(&self) -> u64 {
        match &self.plan {
            PairPlan::All => {
                let n = self.ds.len() as u64;
                n * (n - 1) / 2
            }
            PairPlan::List(l) => l.len() as u64,
        }
    }

    /// `(hits, skipped)` for one query.
    fn count(&self, p: &[f64]) -> Result<(u64, u64)> {
        if let Some(cache) = &self.cache {
            return Ok((cache.count(&self.ds.spec, p), cache.skipped()));
        }
        let spec = &self.ds.spec;
        let pts = &self.ds.points;
        let (mut hits, mut skipped) = (0u64, 0u64);
        let mut visit = |i: usize, j: usize| match spec.ball_contains_raw(pts[i].coords(), pts[j].coords(), p) {
            Ok(true) => hits += 1,
            Ok(false) => {}
            Err(_) => skipped += 1,
        };
        match &self.plan {
            PairPlan::All => {
                if let ManifoldKind::Euclidean { weights, .. } = spec.kind() {
                    let w = weights.as_deref();
                    for i in 0..pts.len() {
                        let xi = pts[i].coords();
                        for xj in &pts[i + 1..] {
                            if euclidean_contains(xi, xj.coords(), p, w) {
                                hits += 1;
                            }
                        }
                    }
                } else {
                    for i in 0..pts.len() {
                        for j in (i + 1)..pts.len() {
                            visit(i, j);
                        }
                    }
                }
            }
            PairPlan::List(list) => {
                for &(i, j) in list {
                    visit(i as usize, j as usize);
                }
            }
        }
        Ok((hits, skipped))
    }

    fn value(&self, p: &[f64]) -> Result<DepthValue> {
        let (hits, skipped) = self.count(p)?;
        let retained = self.total_pairs() - skipped;
        if retained == 0 {
            return Err(Error::DegenerateSample("every pair lies on the cut locus".into()));
        }
        Ok(DepthValue {
            value: hits as f64 / retained as f64,
            skipped_pairs: skipped,
        })
    }

    pub fn depth(&self, p: &Point) -> Result<DepthValue> {
        self.ds.check_query(p)?;
        self.value(p.coords())
    }

    /// Depth of every query; runs in parallel with the `parallel` feature.
    pub fn depth_batch(&self, queries: &[Point]) -> Result<Vec<DepthValue>> {
        for (i, q) in queries.iter().enumerate() {
            self.ds.check_query(q).map_err(|e| e.at(i))?;
        }
        slice_maybe_parallel!(queries).map(|q| self.value(q.coords())).collect()
    }

    /// Sequential version of [`DepthEngine::depth_batch`].
    pub fn depth_batch_seq(&self, queries: &[Point]) -> Result<Vec<DepthValue>> {
        queries
            .iter()
            .enumerate()
            .map(|(i, q)| self.depth(q).map_err(|e| e.at(i)))
            .collect()
    }

    fn report(&self, values: Vec<DepthValue>, seed: Option<u64>) -> DepthReport {
        let skipped_pairs = values.first().map(|v| v.skipped_pairs).unwrap_or(0);
        DepthReport {
            method: DepthMethod::Dcops,
            values: values.into_iter().map(|v| v.value).collect(),
            n: self.ds.len(),
            skipped_pairs,
            seed,
        }
    }
}

/// Empirical depth of one point.
pub fn empirical_depth(ds: &Dataset, p: &Point) -> Result<DepthValue> {
    ds.check_query(p)?;
    // a single query visits every pair once, so caching would only add memory
    let engine = DepthEngine::exact_with(ds, BatchOptions { cache_limit: 0 })?;
    engine.depth(p)
}

/// Empirical depth of many points. Identical values to calling
/// [`empirical_depth`] on each query.
pub fn empirical_depth_batch(ds: &Dataset, queries: &[Point]) -> Result<DepthReport> {
    empirical_depth_batch_with(ds, queries, BatchOptions::default())
}

pub fn empirical_depth_batch_with(ds: &Dataset, queries: &[Point], opts: BatchOptions) -> Result<DepthReport> {
    let opts = if queries.len() <= 1 {
        BatchOptions { cache_limit: 0 }
    } else {
        opts
    };
    let engine = DepthEngine::exact_with(ds, opts)?;
    let values = engine.depth_batch(queries)?;
    Ok(engine.report(values, None))
}

/// Sequential batch, for comparison against the parallel path.
pub fn empirical_depth_batch_seq(ds: &Dataset, queries: &[Point]) -> Result<DepthReport> {
    let engine = DepthEngine::exact(ds)?;
    let values = engine.depth_batch_seq(queries)?;
    Ok(engine.report(values, None))
}

/// Incomplete U-statistic over `n_pairs` random sample pairs.
pub fn subsampled_depth_batch(ds: &Dataset, queries: &[Point], n_pairs: usize, seed: u64) -> Result<DepthReport> {
    let engine = DepthEngine::subsampled(ds, n_pairs, seed)?;
    let values = engine.depth_batch(queries)?;
    Ok(engine.report(values, Some(seed)))
}

/// Monte-Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub pairs: u64,
}

impl McEstimate {
    pub(crate) fn from_hits(hits: u64, pairs: u64) -> Self {
        let v = hits as f64 / pairs as f64;
        McEstimate {
            estimate: v,
            stderr: (v * (1.0 - v) / pairs as f64).sqrt(),
            pairs,
        }
    }
}

/// Draws one pair whose ball is well defined, redrawing cut-locus pairs.
fn draw_pair(sampler: &Sampler, rng: &mut RngStream) -> Result<(Point, Point)> {
    // a.s. terminates; the bound only guards against degenerate samplers
    for _ in 0..1_000_000 {
        let a = sampler.draw(rng)?;
        let b = sampler.draw(rng)?;
        if sampler.manifold().is_euclidean() || sampler.manifold().midpoint(&a, &b).is_ok() {
            return Ok((a, b));
        }
    }
    Err(Error::DegenerateSample(
        "sampler keeps producing cut-locus pairs".into(),
    ))
}

/// Population depth `P(p in B_{X1 X2})` at several points, estimated on the
/// same `pairs` iid pairs.
pub fn population_depth_mc_batch(
    manifold: &ManifoldSpec,
    sampler: &SamplerSpec,
    points: &[Point],
    pairs: u64,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    if pairs < 100 {
        return Err(Error::InvalidArgument("Monte-Carlo budget must be >= 100 pairs".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != manifold.coord_len() {
            return Err(Error::ManifoldMismatch.at(i));
        }
    }
    let sampler = Sampler::new(manifold, sampler)?;
    let chunks = pairs.div_ceil(MC_CHUNK);
    let per_chunk: Vec<Vec<u64>> = iter_maybe_parallel!(0..chunks)
        .map(|c| -> Result<Vec<u64>> {
            let mut rng = RngStream::substream(seed, c);
            let todo = MC_CHUNK.min(pairs - c * MC_CHUNK);
            let mut hits = vec![0u64; points.len()];
            for _ in 0..todo {
                let (a, b) = draw_pair(&sampler, &mut rng)?;
                if manifold.is_euclidean() {
                    for (h, p) in hits.iter_mut().zip(points) {
                        if euclidean_contains(a.coords(), b.coords(), p.coords(), manifold.weights()) {
                            *h += 1;
                        }
                    }
                } else {
                    let ball = manifold.ball(&a, &b)?;
                    for (h, p) in hits.iter_mut().zip(points) {
                        if manifold.in_ball_raw(&ball, p.coords()) {
                            *h += 1;
                        }
                    }
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    let mut totals = vec![0u64; points.len()];
    for chunk in per_chunk {
        for (t, h) in totals.iter_mut().zip(chunk) {
            *t += h;
        }
    }
    Ok(totals.into_iter().map(|h| McEstimate::from_hits(h, pairs)).collect())
}

/// Population depth at one point.
pub fn population_depth_mc(
    manifold: &ManifoldSpec,
    sampler: &SamplerSpec,
    p: &Point,
    pairs: u64,
    seed: u64,
) -> Result<McEstimate> {
    population_depth_mc_batch(manifold, sampler, std::slice::from_ref(p), pairs, seed).map(|mut v| v.remove(0))
}

/// Index and depth of the deepest sample point; ties go to the lowest index.
pub fn deepest_point(ds: &Dataset) -> Result<(usize, f64)> {
    let engine = DepthEngine::exact(ds)?;
    let values = engine.depth_batch(ds.points())?;
    Ok(argmax(values.iter().map(|v| v.value)))
}

fn argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Options for [`deepest_point_refined`].
#[derive(Debug, Clone, Copy)]
pub struct RefineOptions {
    /// Candidates kept between rounds.
    pub top: usize,
    /// Midpoint rounds after the initial scoring of the sample.
    pub rounds: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { top: 24, rounds: 4 }
    }
}

/// Result of a deepest-point search off the sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DeepestPoint {
    pub point: Point,
    pub depth: f64,
    /// Set when the winner is a sample point.
    pub sample_index: Option<usize>,
}

/// Searches beyond the sample: starting from the sample points, each round
/// adds the geodesic midpoints of every pair among the current `top`
/// candidates and rescores. Ties keep the earliest candidate, so sample points
/// win ties against midpoints.
pub fn deepest_point_refined(engine: &DepthEngine<'_>, opts: RefineOptions) -> Result<DeepestPoint> {
    let ds = engine.dataset();
    let spec = ds.spec();
    let mut pool: Vec<(Point, f64, Option<usize>)> = engine
        .depth_batch(ds.points())?
        .into_iter()
        .zip(ds.points())
        .enumerate()
        .map(|(i, (v, p))| (p.clone(), v.value, Some(i)))
        .collect();
    let top = opts.top.max(2);
    for _ in 0..opts.rounds {
        let mut order: Vec<usize> = (0..pool.len()).collect();
        order.sort_by(|&a, &b| pool[b].1.total_cmp(&pool[a].1).then(a.cmp(&b)));
        order.truncate(top);
        let mut fresh = Vec::new();
        for (ai, &a) in order.iter().enumerate() {
            for &b in &order[ai + 1..] {
                if let Ok(m) = spec.midpoint(&pool[a].0, &pool[b].0) {
                    fresh.push(m);
                }
            }
        }
        let scores = engine.depth_batch(&fresh)?;
        pool.extend(fresh.into_iter().zip(scores).map(|(p, v)| (p, v.value, None)));
    }
    let (best, _) = argmax(pool.iter().map(|c| c.1));
    let (point, depth, sample_index) = pool.swap_remove(best);
    Ok(DeepestPoint {
        point,
        depth,
        sample_index,
    })
}

/// A one-parameter family of points leaving `base` in a fixed direction.
///
/// * Euclidean: `base + t u`.
/// * Sphere: the great circle `cos(t) base + sin(t) v`, with `v` the unit
///   tangent part of `u`.
/// * Torus: `base + t u` reduced mod `2pi`.
/// * SPD: `B^{1/2} exp(t D) B^{1/2}` with `D = u` read as a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    base: Point,
    direction: Vec<f64>,
    grid: Vec<f64>,
}

impl Ray {
    pub fn new(spec: &ManifoldSpec, base: Point, direction: Vec<f64>, grid: Vec<f64>) -> Result<Self> {
        if base.len() != spec.coord_len() || direction.len() != spec.coord_len() {
            return Err(Error::ManifoldMismatch);
        }
        if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "ray grid must be nonempty and strictly increasing".into(),
            ));
        }
        let direction = match spec.kind() {
            ManifoldKind::Sphere { .. } => {
                let dot: f64 = base.coords().iter().zip(&direction).map(|(a, b)| a * b).sum();
                let t: Vec<f64> = direction.iter().zip(base.coords()).map(|(u, b)| u - dot * b).collect();
                let norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm < 1e-12 {
                    return Err(Error::InvalidArgument("direction is parallel to the base point".into()));
                }
                t.into_iter().map(|v| v / norm).collect()
            }
            _ => {
                if direction.iter().all(|v| *v == 0.0) {
                    return Err(Error::InvalidArgument("direction must be nonzero".into()));
                }
                direction
            }
        };
        Ok(Ray { base, direction, grid })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn point_at(&self, spec: &ManifoldSpec, t: f64) -> Result<Point> {
        let b = self.base.coords();
        let u = &self.direction;
        match spec.kind() {
            ManifoldKind::Euclidean { .. } | ManifoldKind::Torus { .. } => {
                let raw: Vec<f64> = b.iter().zip(u).map(|(b, u)| b + t * u).collect();
                spec.validate(&raw)
            }
            ManifoldKind::Sphere { .. } => {
                let (c, s) = (t.cos(), t.sin());
                let raw: Vec<f64> = b.iter().zip(u).map(|(b, u)| c * b + s * u).collect();
                spec.validate(&raw)
            }
            ManifoldKind::SpdCone { .. } => spec.validate(spd_exp_ray(&self.base, u, t)?.coords()),
        }
    }

    pub fn points(&self, spec: &ManifoldSpec) -> Result<Vec<Point>> {
        self.grid.iter().map(|&t| self.point_at(spec, t)).collect()
    }
}

/// Where profile depths come from.
#[derive(Debug, Clone, Copy)]
pub enum ProfileSource<'a> {
    Sample(&'a Dataset),
    /// Monte-Carlo population DCOPS.
    Population {
        manifold: &'a ManifoldSpec,
        sampler: &'a SamplerSpec,
        pairs: u64,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub lambda: f64,
    pub distance: f64,
    pub depth: f64,
}

/// Depth along a ray, with a count of grid steps where depth went up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub method: DepthMethod,
    pub rows: Vec<ProfileRow>,
    /// Steps where depth increased; reported, never asserted.
    pub increases: usize,
}

/// Evaluates `method` at every grid point of `ray`.
pub fn depth_profile(
    source: ProfileSource<'_>,
    ray: &Ray,
    method: DepthMethod,
    directions: Option<&DirectionSet>,
) -> Result<Profile> {
    let spec = match source {
        ProfileSource::Sample(ds) => ds.spec(),
        ProfileSource::Population { manifold, .. } => manifold,
    };
    let points = ray.points(spec)?;
    let values: Vec<f64> = match source {
        ProfileSource::Sample(ds) => depth_values(ds, &points, method, directions)?.values,
        ProfileSource::Population {
            manifold,
            sampler,
            pairs,
            seed,
        } => {
            if method != DepthMethod::Dcops {
                return Err(Error::InvalidArgument(
                    "population profiles are only available for DCOPS".into(),
                ));
            }
            population_depth_mc_batch(manifold, sampler, &points, pairs, seed)?
                .into_iter()
                .map(|e| e.estimate)
                .collect()
        }
    };
    let rows: Vec<ProfileRow> = ray
        .grid()
        .iter()
        .zip(&points)
        .zip(values)
        .map(|((&lambda, p), depth)| {
            Ok(ProfileRow {
                lambda,
                distance: spec.distance(ray.base(), p)?,
                depth,
            })
        })
        .collect::<Result<_>>()?;
    let increases = rows.windows(2).filter(|w| w[1].depth > w[0].depth).count();
    Ok(Profile {
        method,
        rows,
        increases,
    })
}

/// Depth of `queries` by any method. Projection depths need a direction set
/// (pole set for ATD); DCOPS ignores it.
pub fn depth_values(
    ds: &Dataset,
    queries: &[Point],
    method: DepthMethod,
    directions: Option<&DirectionSet>,
) -> Result<DepthReport> {
    let need_dirs = || directions.ok_or_else(|| Error::InvalidArgument(format!("{method} needs a direction set")));
    match method {
        DepthMethod::Dcops => empirical_depth_batch(ds, queries),
        DepthMethod::Pd1 => {
            let proj = baselines::ProjectionSummary::new(ds, need_dirs()?)?;
            let values = slice_maybe_parallel!(queries)
                .map(|q| proj.pd1(q))
                .collect::<Result<Vec<_>>>()?;
            Ok(DepthReport {
                method,
                values,
                n: ds.len(),
                skipped_pairs: proj.zero_mad_directions() as u64,
                seed: need_dirs()?.seed(),
            })
        }
        DepthMethod::Pd2 => {
            let proj = baselines::ProjectionSummary::new(ds, need_dirs()?)?;
            let values = slice_maybe_parallel!(queries)
                .map(|q| proj.pd2(q))
                .collect::<Result<Vec<_>>>()?;
            Ok(DepthReport {
                method,
                values,
                n: ds.len(),
                skipped_pairs: 0,
                seed: need_dirs()?.seed(),
            })
        }
        DepthMethod::Atd => {
            let poles = need_dirs()?;
            let values = slice_maybe_parallel!(queries)
                .map(|q| baselines::atd_sphere(ds, q, poles))
                .collect::<Result<Vec<_>>>()?;
            Ok(DepthReport {
                method,
                values,
                n: ds.len(),
                skipped_pairs: 0,
                seed: poles.seed(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1(values: &[f64]) -> Dataset {
        let rows: Vec<Vec<f64>> = values.iter().map(|v| vec![*v]).collect();
        Dataset::from_rows(ManifoldSpec::euclidean(1).unwrap(), &rows).unwrap()
    }

    #[test]
    fn three_point_line() {
        // pairs [0,1], [0,2], [1,2] all contain 1
        let ds = e1(&[0.0, 1.0, 2.0]);
        let p = ds.spec().validate(&[1.0]).unwrap();
        assert_eq!(empirical_depth(&ds, &p).unwrap().value, 1.0);
        // only [0,2] contains 1.5; [1,2] contains it too
        let q = ds.spec().validate(&[1.5]).unwrap();
        assert_eq!(empirical_depth(&ds, &q).unwrap().value, 2.0 / 3.0);
        assert_eq!(deepest_point(&ds).unwrap(), (1, 1.0));
    }

    #[test]
    fn far_point_has_zero_depth() {
        let ds = e1(&[0.0, 1.0, 2.0, 0.5]);
        let p = ds.spec().validate(&[10.0]).unwrap();
        assert_eq!(empirical_depth(&ds, &p).unwrap().value, 0.0);
    }

    #[test]
    fn pair_midpoint_is_fully_deep() {
        let spec = ManifoldSpec::sphere(3).unwrap();
        let ds = Dataset::from_rows(spec.clone(), &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let m = spec.midpoint(&ds.points()[0], &ds.points()[1]).unwrap();
        assert_eq!(empirical_depth(&ds, &m).unwrap().value, 1.0);
    }

    #[test]
    fn symmetric_cross_ties_to_index_zero() {
        let ds = Dataset::from_rows(
            ManifoldSpec::euclidean(2).unwrap(),
            &[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
        )
        .unwrap();
        let report = empirical_depth_batch(&ds, ds.points()).unwrap();
        assert!(report.values.iter().all(|v| *v == report.values[0]));
        assert_eq!(deepest_point(&ds).unwrap().0, 0);
    }

    #[test]
    fn outlier_never_deepest() {
        // (0,0),(0.1,0),(0,0.1) are close; (10,10) is far
        let ds = Dataset::from_rows(
            ManifoldSpec::euclidean(2).unwrap(),
            &[vec![10.0, 10.0], vec![0.0, 0.0], vec![0.1, 0.0], vec![0.0, 0.1]],
        )
        .unwrap();
        let report = empirical_depth_batch(&ds, ds.points()).unwrap();
        // outlier lies only in its own three balls
        assert_eq!(report.values[0], 0.5);
        assert_ne!(deepest_point(&ds).unwrap().0, 0);
    }

    #[test]
    fn all_pairs_on_cut_locus_is_degenerate() {
        let spec = ManifoldSpec::sphere(3).unwrap();
        let ds = Dataset::from_rows(spec.clone(), &[vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0]]).unwrap();
        let err = empirical_depth(&ds, &ds.points()[0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateSample(_)));
        assert!(matches!(deepest_point(&ds), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn cut_locus_pairs_leave_the_denominator() {
        let spec = ManifoldSpec::sphere(3).unwrap();
        let ds = Dataset::from_rows(
            spec.clone(),
            &[vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        )
        .unwrap();
        let v = empirical_depth(&ds, &ds.points()[2]).unwrap();
        assert_eq!(v.skipped_pairs, 1);
        // retained pairs (0,2) and (1,2) both contain their endpoint X_2
        assert_eq!(v.value, 1.0);
        let batch = empirical_depth_batch(&ds, ds.points()).unwrap();
        assert_eq!(batch.skipped_pairs, 1);
        assert_eq!(batch.values[2], 1.0);
    }

    #[test]
    fn population_point_mass() {
        let spec = ManifoldSpec::torus(2).unwrap();
        let q = vec![1.0, 2.0];
        let sampler = SamplerSpec::PointMass { point: q.clone() };
        let est = population_depth_mc(&spec, &sampler, &spec.validate(&q).unwrap(), 1000, 1).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert!(population_depth_mc(&spec, &sampler, &spec.validate(&q).unwrap(), 10, 1).is_err());
    }

    #[test]
    fn ray_points_have_expected_distance() {
        let spd = ManifoldSpec::spd(2).unwrap();
        let base = spd.validate(&[2.0, 0.5, 0.5, 1.0]).unwrap();
        let ray = Ray::new(&spd, base.clone(), vec![0.6, 0.0, 0.0, 0.8], vec![0.0, 0.5, 1.0]).unwrap();
        for (t, p) in ray.grid().iter().zip(ray.points(&spd).unwrap()) {
            assert!((spd.distance(&base, &p).unwrap() - t).abs() < 1e-10);
        }
        let s3 = ManifoldSpec::sphere(3).unwrap();
        let base = s3.validate(&[0.0, 0.0, 1.0]).unwrap();
        let ray = Ray::new(&s3, base.clone(), vec![1.0, 0.0, 0.3], vec![0.0, 1.0, 3.0]).unwrap();
        for (t, p) in ray.grid().iter().zip(ray.points(&s3).unwrap()) {
            assert!((s3.distance(&base, &p).unwrap() - t).abs() < 1e-12);
        }
        assert!(Ray::new(&s3, base, vec![1.0, 0.0, 0.0], vec![1.0, 1.0]).is_err());
    }
}
