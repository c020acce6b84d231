//! Named simulation designs.

use std::f64::consts::PI;

use super::SamplerSpec;
use crate::geometry::linalg::SquareMatrix;
use crate::geometry::{ManifoldSpec, Point};
use crate::{Error, Result};

/// Names accepted by [`preset`]. `gauss-k<k>` and `gauss-contaminated-k<k>`
/// also accept any other positive dimension.
pub const PRESET_NAMES: &[&str] = &[
    "torus-mvm-mixture",
    "sphere-vmf",
    "sphere-vmf-mixture",
    "spd-wishart",
    "spd-wishart-mixture",
    "gauss-k2",
    "gauss-k5",
    "gauss-k20",
    "gauss-contaminated-k10",
    "fda-gp",
];

/// A manifold, a distribution on it, and the point distances are reported
/// from (the mean, or the centre of the majority component).
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub manifold: ManifoldSpec,
    pub sampler: SamplerSpec,
    pub reference: Point,
    /// Column label for the distance to `reference`.
    pub reference_column: String,
    /// Whether component labels are meaningful (mixtures).
    pub is_mixture: bool,
}

fn identity(k: usize) -> Vec<f64> {
    SquareMatrix::identity(k).into_vec()
}

/// `(1 - alpha) N(0, I_k) + alpha N(2 * 1, I_k)`.
pub fn contaminated_gaussian(k: usize, alpha: f64) -> SamplerSpec {
    SamplerSpec::Mixture {
        components: vec![
            SamplerSpec::standard_gaussian(k),
            SamplerSpec::Gaussian {
                mean: vec![2.0; k],
                cov: identity(k),
            },
        ],
        weights: vec![1.0 - alpha, alpha],
    }
}

fn parse_dim(rest: &str, name: &str) -> Result<usize> {
    rest.parse::<usize>()
        .ok()
        .filter(|k| *k >= 1)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// Exponential covariance `exp(-|s - t| / 0.2)` on `m` equispaced points of `[0, 1]`.
fn ou_covariance(m: usize) -> Vec<f64> {
    let h = 1.0 / (m - 1) as f64;
    SquareMatrix::from_fn(m, |i, j| (-(i as f64 - j as f64).abs() * h / 0.2).exp()).into_vec()
}

/// Looks up a named design.
pub fn preset(name: &str) -> Result<Preset> {
    let make = |manifold: ManifoldSpec, sampler, reference: &[f64], column: &str, is_mixture| -> Result<Preset> {
        let reference = manifold.validate(reference)?;
        Ok(Preset {
            name: name.to_string(),
            manifold,
            sampler,
            reference,
            reference_column: column.to_string(),
            is_mixture,
        })
    };
    match name {
        "torus-mvm-mixture" => {
            let coupling = vec![0.0, 1.0, 1.0, 0.0];
            let mu1 = vec![PI / 2.0, 0.0];
            let sampler = SamplerSpec::Mixture {
                components: vec![
                    SamplerSpec::MultivariateVonMises {
                        mean: mu1.clone(),
                        kappa: vec![20.0, 20.0],
                        coupling: coupling.clone(),
                    },
                    SamplerSpec::MultivariateVonMises {
                        mean: vec![7.0 * PI / 4.0, 0.0],
                        kappa: vec![100.0, 100.0],
                        coupling,
                    },
                ],
                weights: vec![0.9, 0.1],
            };
            make(ManifoldSpec::torus(2)?, sampler, &mu1, "dist_to_mu1", true)
        }
        "sphere-vmf" => {
            let mu = [1.0, 0.0, 0.0];
            let sampler = SamplerSpec::VonMisesFisher {
                mean: mu.to_vec(),
                kappa: 15.0,
            };
            make(ManifoldSpec::sphere(3)?, sampler, &mu, "dist_to_mu", false)
        }
        "sphere-vmf-mixture" => {
            let mu = [1.0, 0.0, 0.0];
            let sampler = SamplerSpec::Mixture {
                components: vec![
                    SamplerSpec::VonMisesFisher {
                        mean: mu.to_vec(),
                        kappa: 10.0,
                    },
                    SamplerSpec::VonMisesFisher {
                        mean: vec![0.0, 0.0, 1.0],
                        kappa: 50.0,
                    },
                ],
                weights: vec![0.9, 0.1],
            };
            make(ManifoldSpec::sphere(3)?, sampler, &mu, "dist_to_mu", true)
        }
        "spd-wishart" => {
            let sampler = SamplerSpec::Wishart {
                scale: identity(3),
                dof: 20,
            };
            let mean = SquareMatrix::identity(3).scale(20.0).into_vec();
            make(ManifoldSpec::spd(3)?, sampler, &mean, "dist_to_20I", false)
        }
        "spd-wishart-mixture" => {
            let sampler = SamplerSpec::Mixture {
                components: vec![
                    SamplerSpec::Wishart {
                        scale: identity(3),
                        dof: 20,
                    },
                    SamplerSpec::Wishart {
                        scale: SquareMatrix::identity(3).scale(0.1).into_vec(),
                        dof: 50,
                    },
                ],
                weights: vec![0.9, 0.1],
            };
            let mean = SquareMatrix::identity(3).scale(20.0).into_vec();
            make(ManifoldSpec::spd(3)?, sampler, &mean, "dist_to_20I", true)
        }
        "fda-gp" => {
            let m = 50;
            let sampler = SamplerSpec::Gaussian {
                mean: vec![0.0; m],
                cov: ou_covariance(m),
            };
            make(
                ManifoldSpec::hilbert_trapezoid(m)?,
                sampler,
                &vec![0.0; m],
                "dist_to_origin",
                false,
            )
        }
        _ => {
            if let Some(rest) = name.strip_prefix("gauss-contaminated-k") {
                let k = parse_dim(rest, name)?;
                make(
                    ManifoldSpec::euclidean(k)?,
                    contaminated_gaussian(k, 0.1),
                    &vec![0.0; k],
                    "dist_to_origin",
                    true,
                )
            } else if let Some(rest) = name.strip_prefix("gauss-k") {
                let k = parse_dim(rest, name)?;
                make(
                    ManifoldSpec::euclidean(k)?,
                    SamplerSpec::standard_gaussian(k),
                    &vec![0.0; k],
                    "dist_to_origin",
                    false,
                )
            } else {
                Err(Error::UnknownPreset(name.to_string()))
            }
        }
    }
}
