//! Monte-Carlo experiments around the limit theory of the empirical depth:
//! marginal variances, the projection variance `zeta_1`, CLT replications and
//! uniform-consistency curves.

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::depth::{
    empirical_depth_batch, population_depth_mc, population_depth_mc_batch, BatchOptions, Dataset, DepthEngine,
    McEstimate,
};
use crate::geometry::{ManifoldKind, ManifoldSpec, Point};
use crate::par::iter_maybe_parallel;
use crate::samplers::{RngStream, Sampler, SamplerSpec};
use crate::stats;
use crate::{Error, Result};
#[cfg(feature = "parallel")]
use rayon::iter::ParallelIterator;

/// Default pair budget for population references.
pub const REFERENCE_PAIRS: u64 = 1_000_000;
const CHUNK: u64 = 8192;

// Offsets that keep the reference, zeta and replication streams apart.
const REFERENCE_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;
const ZETA_STREAM: u64 = 0xD1B5_4A32_D192_ED03;

/// `P(x in B_{y Z})` for `Z ~ N(0, I)`: the standard normal upper tail at
/// `<x - y, x> / |x - y|`.
pub fn gx_gaussian(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::WrongDimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let norm = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let z = diff.iter().zip(x).map(|(d, a)| d * a).sum::<f64>() / norm;
    Ok(0.5 * erfc(z / std::f64::consts::SQRT_2))
}

/// Sum and sum of squares of `f` over `n` chunked draws.
fn chunked_moments<F>(n: u64, seed: u64, f: F) -> Result<(f64, f64)>
where
    F: Fn(&mut RngStream) -> Result<f64> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(f64, f64)> = iter_maybe_parallel!(0..chunks)
        .map(|c| -> Result<(f64, f64)> {
            let mut rng = RngStream::substream(seed, c);
            let mut s = (0.0, 0.0);
            for _ in 0..CHUNK.min(n - c * CHUNK) {
                let v = f(&mut rng)?;
                s.0 += v;
                s.1 += v * v;
            }
            Ok(s)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1)))
}

fn estimate_from_moments(sum: f64, sum_sq: f64, n: u64) -> McEstimate {
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    McEstimate {
        estimate: mean,
        stderr: (var / nf).sqrt(),
        pairs: n,
    }
}

/// Population depth of `x` under `N(0, I_k)`, `k = x.len()`, estimated as the
/// mean of [`gx_gaussian`] over `n` Gaussian draws.
pub fn p2_gaussian(x: &[f64], n: u64, seed: u64) -> Result<McEstimate> {
    if n < 10_000 {
        return Err(Error::InvalidArgument("need at least 10^4 draws".into()));
    }
    let k = x.len();
    let (s, s2) = chunked_moments(n, seed, |rng| {
        loop {
            let y: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut *rng)).collect();
            // y == x has probability zero
            if let Ok(g) = gx_gaussian(x, &y) {
                return Ok(g);
            }
        }
    })?;
    Ok(estimate_from_moments(s, s2, n))
}

fn gaussian_fast_path(manifold: &ManifoldSpec, sampler: &SamplerSpec) -> bool {
    matches!(manifold.kind(), ManifoldKind::Euclidean { weights: None, .. }) && sampler.is_standard_gaussian()
}

/// `sigma^2 = 4 P2 (1 - P2)` with the `P2` estimate it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalVariance {
    pub sigma2: f64,
    /// Delta-method standard error of `sigma2`.
    pub stderr: f64,
    pub p2: McEstimate,
}

impl MarginalVariance {
    fn from_p2(p2: McEstimate) -> Self {
        let p = p2.estimate;
        MarginalVariance {
            sigma2: 4.0 * p * (1.0 - p),
            stderr: (4.0 * (1.0 - 2.0 * p)).abs() * p2.stderr,
            p2,
        }
    }
}

/// Population depth at `x`, using the Gaussian closed form where it applies.
pub fn population_depth(
    manifold: &ManifoldSpec,
    sampler: &SamplerSpec,
    x: &Point,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    if gaussian_fast_path(manifold, sampler) {
        if x.len() != manifold.coord_len() {
            return Err(Error::ManifoldMismatch);
        }
        p2_gaussian(x.coords(), n, seed)
    } else {
        population_depth_mc(manifold, sampler, x, n, seed)
    }
}

/// The marginal variance `4 P2(D_x) (1 - P2(D_x))`.
pub fn sigma2_marginal(
    manifold: &ManifoldSpec,
    sampler: &SamplerSpec,
    x: &Point,
    n: u64,
    seed: u64,
) -> Result<MarginalVariance> {
    population_depth(manifold, sampler, x, n, seed).map(MarginalVariance::from_p2)
}

/// Projection variance `zeta_1 = Var(g(Y))` with `g(y) = P(x in B_{yZ})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Zeta1 {
    /// Bias-corrected estimate: the sample variance of the inner estimates
    /// minus their mean binomial noise. Can be slightly negative.
    pub zeta1: f64,
    /// Sample variance of the inner estimates before correction.
    pub raw_variance: f64,
    pub outer: usize,
    pub inner: usize,
}

/// Nested Monte Carlo for `zeta_1`: `n_outer` draws of `Y`, each scored
/// against `n_inner` fresh draws of `Z`.
pub fn zeta1(
    manifold: &ManifoldSpec,
    sampler: &SamplerSpec,
    x: &Point,
    n_outer: usize,
    n_inner: usize,
    seed: u64,
) -> Result<Zeta1> {
    if n_outer < 1000 || n_inner < 1000 {
        return Err(Error::InvalidArgument(
            "zeta1 needs at least 10^3 outer and inner draws".into(),
        ));
    }
    if x.len() != manifold.coord_len() {
        return Err(Error::ManifoldMismatch);
    }
    let sampler = Sampler::new(manifold, sampler)?;
    let xs = x.coords();
    let g: Vec<f64> = iter_maybe_parallel!(0..n_outer)
        .map(|i| -> Result<f64> {
            let mut rng = RngStream::substream(seed, i as u64);
            let y = sampler.draw(&mut rng)?;
            let mut hits = 0usize;
            let mut done = 0usize;
            let mut tries = 0usize;
            while done < n_inner {
                tries += 1;
                if tries > 100 * n_inner {
                    return Err(Error::DegenerateSample(
                        "sampler keeps producing cut-locus pairs".into(),
                    ));
                }
                let z = sampler.draw(&mut rng)?;
                match manifold.ball_contains_raw(y.coords(), z.coords(), xs) {
                    Ok(inside) => {
                        done += 1;
                        hits += inside as usize;
                    }
                    Err(_) => continue,
                }
            }
            Ok(hits as f64 / n_inner as f64)
        })
        .collect::<Result<_>>()?;
    let raw = stats::variance(&g);
    let noise = g.iter().map(|v| v * (1.0 - v)).sum::<f64>() / g.len() as f64 / (n_inner - 1) as f64;
    Ok(Zeta1 {
        zeta1: raw - noise,
        raw_variance: raw,
        outer: n_outer,
        inner: n_inner,
    })
}

/// Settings for [`clt_experiment`].
#[derive(Debug, Clone, Copy)]
pub struct CltOptions {
    pub n: usize,
    pub reps: usize,
    pub reference_pairs: u64,
    /// Outer/inner draws for `zeta_1`; `None` skips it.
    pub zeta: Option<(usize, usize)>,
}

/// Replicated `sqrt(n) (BD_n(x) - BD(x))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub x: Vec<f64>,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub reference: McEstimate,
    pub mean: f64,
    /// Standard error of `mean`.
    pub mean_stderr: f64,
    pub variance: f64,
    /// `4 P2 (1 - P2)`.
    pub sigma2_marginal: f64,
    /// `4 zeta_1`, when computed.
    pub sigma2_projection: Option<f64>,
    pub ks_distance: f64,
    /// Total cut-locus pairs skipped over all replications.
    pub skipped_pairs: u64,
    /// The replicated deviations themselves.
    pub deviations: Vec<f64>,
}

/// Draws `reps` independent samples of size `n` and records the scaled
/// deviation of the empirical depth at `x` from a Monte-Carlo reference.
pub fn clt_experiment(
    manifold: &ManifoldSpec,
    sampler: &SamplerSpec,
    x: &Point,
    opts: CltOptions,
    seed: u64,
) -> Result<CltReport> {
    if opts.reps < 100 {
        return Err(Error::InvalidArgument("need at least 100 replications".into()));
    }
    if opts.n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    let reference = population_depth(manifold, sampler, x, opts.reference_pairs, seed ^ REFERENCE_STREAM)?;
    let compiled = Sampler::new(manifold, sampler)?;
    let runs: Vec<(f64, u64)> = iter_maybe_parallel!(0..opts.reps)
        .map(|r| -> Result<(f64, u64)> {
            let mut rng = RngStream::substream(seed, r as u64);
            let ds = compiled.sample(&mut rng, opts.n)?;
            let engine = DepthEngine::exact_with(&ds, BatchOptions { cache_limit: 0 })?;
            let v = engine.depth(x)?;
            Ok((v.value, v.skipped_pairs))
        })
        .collect::<Result<_>>()?;
    let scale = (opts.n as f64).sqrt();
    let deviations: Vec<f64> = runs.iter().map(|(v, _)| scale * (v - reference.estimate)).collect();
    let variance = stats::variance(&deviations);
    let p = reference.estimate;
    let sigma2_projection = match opts.zeta {
        Some((outer, inner)) => Some(4.0 * zeta1(manifold, sampler, x, outer, inner, seed ^ ZETA_STREAM)?.zeta1),
        None => None,
    };
    Ok(CltReport {
        x: x.coords().to_vec(),
        n: opts.n,
        reps: opts.reps,
        seed,
        reference,
        mean: stats::mean(&deviations),
        mean_stderr: (variance / opts.reps as f64).sqrt(),
        variance,
        sigma2_marginal: 4.0 * p * (1.0 - p),
        sigma2_projection,
        ks_distance: stats::ks_normal(&deviations),
        skipped_pairs: runs.iter().map(|r| r.1).sum(),
        deviations,
    })
}

/// Sup-norm error of the empirical depth over a fixed grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub grid: Vec<Vec<f64>>,
    pub n_values: Vec<usize>,
    pub sup_errors: Vec<f64>,
    pub reference: Vec<McEstimate>,
    pub seed: u64,
}

/// `count` grid points drawn from the sampler itself.
pub fn sample_grid(manifold: &ManifoldSpec, sampler: &SamplerSpec, count: usize, seed: u64) -> Result<Vec<Point>> {
    let mut rng = RngStream::new(seed ^ REFERENCE_STREAM.rotate_left(17));
    Ok(Sampler::new(manifold, sampler)?
        .sample(&mut rng, count)?
        .points()
        .to_vec())
}

/// Evaluates `sup_p |BD_n(p) - BD(p)|` over `grid` for each `n` in
/// `n_values`. The samples are nested prefixes of one draw of the largest
/// size, and the reference uses `reference_pairs` pairs shared by all grid
/// points.
pub fn gc_experiment(
    manifold: &ManifoldSpec,
    sampler: &SamplerSpec,
    grid: &[Point],
    n_values: &[usize],
    reference_pairs: u64,
    seed: u64,
) -> Result<ConsistencyReport> {
    if grid.len() < 20 {
        return Err(Error::InvalidArgument(
            "consistency grid needs at least 20 points".into(),
        ));
    }
    if n_values.is_empty() || n_values.windows(2).any(|w| w[0] >= w[1]) || n_values[0] < 2 {
        return Err(Error::InvalidArgument(
            "sample sizes must be increasing and >= 2".into(),
        ));
    }
    let reference = if gaussian_fast_path(manifold, sampler) {
        grid.iter()
            .map(|p| p2_gaussian(p.coords(), reference_pairs, seed ^ REFERENCE_STREAM))
            .collect::<Result<Vec<_>>>()?
    } else {
        population_depth_mc_batch(manifold, sampler, grid, reference_pairs, seed ^ REFERENCE_STREAM)?
    };
    let mut rng = RngStream::new(seed);
    let full = Sampler::new(manifold, sampler)?.sample(&mut rng, *n_values.last().expect("nonempty"))?;
    let sup_errors = n_values
        .iter()
        .map(|&n| -> Result<f64> {
            let ds: Dataset = full.prefix(n);
            let report = empirical_depth_batch(&ds, grid)?;
            Ok(report
                .values
                .iter()
                .zip(&reference)
                .map(|(v, r)| (v - r.estimate).abs())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConsistencyReport {
        grid: grid.iter().map(|p| p.coords().to_vec()).collect(),
        n_values: n_values.to_vec(),
        sup_errors,
        reference,
        seed,
    })
}

/// One point of the marginal-variance curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceRow {
    pub k: usize,
    pub l: f64,
    pub p2: f64,
    pub sigma2: f64,
    pub stderr: f64,
}

/// `sigma^2(l e_1)` under `N(0, I_k)` for every `(k, l)`.
pub fn variance_curve(ks: &[usize], ls: &[f64], draws: u64, seed: u64) -> Result<Vec<VarianceRow>> {
    let mut rows = Vec::with_capacity(ks.len() * ls.len());
    for (ki, &k) in ks.iter().enumerate() {
        if k == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        for (li, &l) in ls.iter().enumerate() {
            let mut x = vec![0.0; k];
            x[0] = l;
            let stream = seed.wrapping_add(((ki as u64) << 32) | li as u64);
            let mv = MarginalVariance::from_p2(p2_gaussian(&x, draws, stream)?);
            rows.push(VarianceRow {
                k,
                l,
                p2: mv.p2.estimate,
                sigma2: mv.sigma2,
                stderr: mv.stderr,
            });
        }
    }
    Ok(rows)
}

/// Covariance of the limiting process at two points,
/// `P(x, y both in B) - P(x in B) P(y in B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BridgeCovariance {
    pub covariance: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_xy: f64,
}

pub fn bridge_covariance(
    manifold: &ManifoldSpec,
    sampler: &SamplerSpec,
    x: &Point,
    y: &Point,
    pairs: u64,
    seed: u64,
) -> Result<BridgeCovariance> {
    if pairs < 100 {
        return Err(Error::InvalidArgument("Monte-Carlo budget must be >= 100 pairs".into()));
    }
    let compiled = Sampler::new(manifold, sampler)?;
    let chunks = pairs.div_ceil(CHUNK);
    let counts: Vec<[u64; 3]> = iter_maybe_parallel!(0..chunks)
        .map(|c| -> Result<[u64; 3]> {
            let mut rng = RngStream::substream(seed, c);
            let mut out = [0u64; 3];
            let mut done = 0;
            while done < CHUNK.min(pairs - c * CHUNK) {
                let a = compiled.draw(&mut rng)?;
                let b = compiled.draw(&mut rng)?;
                let (Ok(ix), Ok(iy)) = (
                    manifold.ball_contains_raw(a.coords(), b.coords(), x.coords()),
                    manifold.ball_contains_raw(a.coords(), b.coords(), y.coords()),
                ) else {
                    continue;
                };
                done += 1;
                out[0] += ix as u64;
                out[1] += iy as u64;
                out[2] += (ix && iy) as u64;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let total = counts
        .iter()
        .fold([0u64; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    let n = pairs as f64;
    let (p_x, p_y, p_xy) = (total[0] as f64 / n, total[1] as f64 / n, total[2] as f64 / n);
    Ok(BridgeCovariance {
        covariance: p_xy - p_x * p_y,
        p_x,
        p_y,
        p_xy,
    })
}
