//! Seeded random generators for every distribution used in the experiments.

mod directional;
mod presets;
mod rng;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::depth::Dataset;
use crate::geometry::linalg::{sym_eig, SquareMatrix};
use crate::geometry::{ManifoldKind, ManifoldSpec, Point};
use crate::{Error, Result};

pub use directional::von_mises;
pub use presets::{contaminated_gaussian, preset, Preset, PRESET_NAMES};
pub use rng::RngStream;

use directional::VmfSampler;

/// Proposals after which a stalled rejection sampler gives up.
const STALL_WINDOW: u64 = 100_000;
/// Minimum acceptance rate over [`STALL_WINDOW`] proposals.
const STALL_RATE: f64 = 1e-4;

/// Distribution descriptor. Matrices are stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SamplerSpec {
    /// `N(mean, cov)` on a Euclidean / Hilbert space.
    Gaussian {
        mean: Vec<f64>,
        cov: Vec<f64>,
    },
    /// von Mises-Fisher on the sphere.
    VonMisesFisher {
        mean: Vec<f64>,
        kappa: f64,
    },
    /// Multivariate von Mises (sine model) on the torus, density proportional to
    /// `exp(kappa' c(theta) + s(theta)' coupling s(theta) / 2)`.
    MultivariateVonMises {
        mean: Vec<f64>,
        kappa: Vec<f64>,
        coupling: Vec<f64>,
    },
    /// `sum_{i<=dof} X_i X_i'` with `X_i ~ N(0, scale)`.
    Wishart {
        scale: Vec<f64>,
        dof: usize,
    },
    Mixture {
        components: Vec<SamplerSpec>,
        weights: Vec<f64>,
    },
    PointMass {
        point: Vec<f64>,
    },
}

impl SamplerSpec {
    pub fn standard_gaussian(k: usize) -> Self {
        SamplerSpec::Gaussian {
            mean: vec![0.0; k],
            cov: SquareMatrix::identity(k).into_vec(),
        }
    }

    /// `N(0, I)` with zero mean and identity covariance.
    pub fn is_standard_gaussian(&self) -> bool {
        match self {
            SamplerSpec::Gaussian { mean, cov } => {
                let k = mean.len();
                cov.len() == k * k
                    && mean.iter().all(|m| *m == 0.0)
                    && cov
                        .iter()
                        .enumerate()
                        .all(|(i, &v)| v == if i / k == i % k { 1.0 } else { 0.0 })
            }
            _ => false,
        }
    }
}

/// A [`SamplerSpec`] checked against a manifold, with factorisations cached.
#[derive(Debug, Clone)]
pub struct Sampler {
    manifold: ManifoldSpec,
    kind: Compiled,
}

#[derive(Debug, Clone)]
enum Compiled {
    Gaussian {
        mean: Vec<f64>,
        factor: SquareMatrix,
    },
    Vmf(VmfSampler),
    Mvm {
        mean: Vec<f64>,
        kappa: Vec<f64>,
        coupling: SquareMatrix,
        envelope: f64,
    },
    Wishart {
        factor: SquareMatrix,
        dof: usize,
    },
    Mixture {
        components: Vec<Compiled>,
        cumulative: Vec<f64>,
    },
    PointMass(Point),
}

/// `L` with `L L' = cov`: Cholesky, or `V sqrt(Λ)` when Cholesky breaks down
/// on a numerically semidefinite matrix.
fn covariance_factor(k: usize, cov: &[f64]) -> Result<SquareMatrix> {
    let m = SquareMatrix::from_row_major(k, cov.to_vec())?;
    if m.max_asymmetry() > 1e-9 * m.frobenius_norm().max(1.0) {
        return Err(Error::InvalidSampler("covariance is not symmetric".into()));
    }
    if let Some(l) = m.cholesky() {
        return Ok(l);
    }
    let eig = sym_eig(&m)?;
    if eig.min_value() < -1e-10 * eig.max_value().abs().max(1.0) {
        return Err(Error::InvalidSampler("covariance is not positive semidefinite".into()));
    }
    let v = &eig.vectors;
    Ok(SquareMatrix::from_fn(k, |i, j| {
        v.get(i, j) * eig.values[j].max(0.0).sqrt()
    }))
}

fn compile(manifold: &ManifoldSpec, spec: &SamplerSpec) -> Result<Compiled> {
    let bad = |msg: &str| Error::InvalidSampler(msg.to_string());
    match (spec, manifold.kind()) {
        (SamplerSpec::Gaussian { mean, cov }, ManifoldKind::Euclidean { dim, .. }) => {
            if mean.len() != *dim {
                return Err(bad("gaussian mean length does not match the manifold"));
            }
            Ok(Compiled::Gaussian {
                mean: mean.clone(),
                factor: covariance_factor(*dim, cov)?,
            })
        }
        (SamplerSpec::VonMisesFisher { mean, kappa }, ManifoldKind::Sphere { .. }) => {
            let mean = manifold.validate(mean)?.into_vec();
            if !(kappa.is_finite() && *kappa >= 0.0) {
                return Err(bad("vMF concentration must be finite and >= 0"));
            }
            Ok(Compiled::Vmf(VmfSampler::new(mean, *kappa)))
        }
        (SamplerSpec::MultivariateVonMises { mean, kappa, coupling }, ManifoldKind::Torus { dim }) => {
            let d = *dim;
            if mean.len() != d || kappa.len() != d {
                return Err(bad("MVM parameter lengths do not match the torus"));
            }
            if kappa.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
                return Err(bad("MVM concentrations must be finite and >= 0"));
            }
            let coupling = SquareMatrix::from_row_major(d, coupling.clone())?;
            if coupling.max_asymmetry() != 0.0 {
                return Err(bad("MVM coupling matrix must be symmetric"));
            }
            if (0..d).any(|i| coupling.get(i, i) != 0.0) {
                return Err(bad("MVM coupling matrix must have a zero diagonal"));
            }
            // |s_i s_j| <= 1 bounds the coupling term by half the off-diagonal L1 norm
            let envelope = 0.5 * coupling.as_slice().iter().map(|v| v.abs()).sum::<f64>();
            Ok(Compiled::Mvm {
                mean: manifold.validate(mean)?.into_vec(),
                kappa: kappa.clone(),
                coupling,
                envelope,
            })
        }
        (SamplerSpec::Wishart { scale, dof }, ManifoldKind::SpdCone { size }) => {
            if *dof < *size {
                return Err(bad("Wishart degrees of freedom must be >= matrix size"));
            }
            Ok(Compiled::Wishart {
                factor: covariance_factor(*size, scale)?,
                dof: *dof,
            })
        }
        (SamplerSpec::Mixture { components, weights }, _) => {
            if components.is_empty() || components.len() != weights.len() {
                return Err(bad("mixture needs one weight per component"));
            }
            if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                return Err(bad("mixture weights must be nonnegative"));
            }
            let total: f64 = weights.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(bad("mixture weights must sum to 1"));
            }
            let mut acc = 0.0;
            let cumulative = weights
                .iter()
                .map(|w| {
                    acc += w;
                    acc
                })
                .collect();
            Ok(Compiled::Mixture {
                components: components.iter().map(|c| compile(manifold, c)).collect::<Result<_>>()?,
                cumulative,
            })
        }
        (SamplerSpec::PointMass { point }, _) => Ok(Compiled::PointMass(manifold.validate(point)?)),
        _ => Err(bad("sampler is not defined on this manifold")),
    }
}

impl Sampler {
    pub fn new(manifold: &ManifoldSpec, spec: &SamplerSpec) -> Result<Self> {
        Ok(Sampler {
            manifold: manifold.clone(),
            kind: compile(manifold, spec)?,
        })
    }

    pub fn manifold(&self) -> &ManifoldSpec {
        &self.manifold
    }

    /// One draw and the index of the top-level mixture component it came from
    /// (always 0 for non-mixtures). Also returns the number of rejection
    /// proposals consumed.
    fn draw_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Point, usize, u64)> {
        let (label, (raw, proposals)) = match &self.kind {
            Compiled::Mixture { components, cumulative } => {
                let u: f64 = rng.random();
                let idx = cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1);
                (idx, draw_compiled(&components[idx], rng)?)
            }
            kind => (0, draw_compiled(kind, rng)?),
        };
        let point = match raw {
            Drawn::Point(p) => p,
            Drawn::Raw(v) => self.manifold.validate(&v)?,
        };
        Ok((point, label, proposals))
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point> {
        self.draw_raw(rng).map(|(p, _, _)| p)
    }

    /// `n` iid draws with their component labels.
    pub fn sample_labeled<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<(Dataset, Vec<usize>)> {
        if n == 0 {
            return Err(Error::InvalidArgument("sample size must be >= 1".into()));
        }
        let mut points = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        let (mut proposed, mut accepted) = (0u64, 0u64);
        for _ in 0..n {
            let (p, label, used) = self.draw_raw(rng)?;
            if used > 0 {
                proposed += used;
                accepted += 1;
                if proposed >= STALL_WINDOW && (accepted as f64) < STALL_RATE * proposed as f64 {
                    return Err(Error::RejectionStall { accepted, proposed });
                }
            }
            points.push(p);
            labels.push(label);
        }
        Ok((Dataset::from_points_unchecked(self.manifold.clone(), points), labels))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<Dataset> {
        self.sample_labeled(rng, n).map(|(d, _)| d)
    }
}

enum Drawn {
    Raw(Vec<f64>),
    Point(Point),
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, mean: &[f64], factor: &SquareMatrix) -> Vec<f64> {
    let z: Vec<f64> = (0..mean.len()).map(|_| rng.sample(StandardNormal)).collect();
    let k = mean.len();
    (0..k)
        .map(|i| mean[i] + (0..k).map(|j| factor.get(i, j) * z[j]).sum::<f64>())
        .collect()
}

fn draw_compiled<R: Rng + ?Sized>(kind: &Compiled, rng: &mut R) -> Result<(Drawn, u64)> {
    Ok(match kind {
        Compiled::Gaussian { mean, factor } => (Drawn::Raw(gaussian(rng, mean, factor)), 0),
        Compiled::Vmf(s) => (Drawn::Raw(s.draw(rng)), 0),
        Compiled::Mvm {
            mean,
            kappa,
            coupling,
            envelope,
        } => {
            let d = mean.len();
            let mut proposals = 0u64;
            loop {
                proposals += 1;
                let theta: Vec<f64> = (0..d).map(|i| von_mises(rng, mean[i], kappa[i])).collect();
                let s: Vec<f64> = theta.iter().zip(mean).map(|(t, m)| (t - m).sin()).collect();
                let quad: f64 = (0..d)
                    .map(|i| (0..d).map(|j| s[i] * coupling.get(i, j) * s[j]).sum::<f64>())
                    .sum();
                let u: f64 = rng.random();
                if u.ln() <= 0.5 * quad - envelope {
                    break (Drawn::Raw(theta), proposals);
                }
                if proposals >= STALL_WINDOW {
                    return Err(Error::RejectionStall {
                        accepted: 0,
                        proposed: proposals,
                    });
                }
            }
        }
        Compiled::Wishart { factor, dof } => {
            let k = factor.size();
            let zero = vec![0.0; k];
            let mut s = SquareMatrix::zeros(k);
            for _ in 0..*dof {
                let x = gaussian(rng, &zero, factor);
                for i in 0..k {
                    for j in 0..k {
                        s.set(i, j, s.get(i, j) + x[i] * x[j]);
                    }
                }
            }
            (Drawn::Raw(s.into_vec()), 0)
        }
        Compiled::Mixture { components, cumulative } => {
            let u: f64 = rng.random();
            let idx = cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1);
            draw_compiled(&components[idx], rng)?
        }
        Compiled::PointMass(p) => (Drawn::Point(p.clone()), 0),
    })
}

/// `n` iid draws from `spec` on `manifold`.
pub fn sample(manifold: &ManifoldSpec, spec: &SamplerSpec, rng: &mut RngStream, n: usize) -> Result<Dataset> {
    Sampler::new(manifold, spec)?.sample(rng, n)
}
