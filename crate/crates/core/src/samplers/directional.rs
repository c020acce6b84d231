//! Circular and spherical samplers.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::geometry::wrap_angle;

/// Below this concentration both samplers fall back to the uniform law.
const UNIFORM_KAPPA: f64 = 1e-10;

/// von Mises draw on `[0, 2pi)` by the Best-Fisher wrapped-Cauchy envelope.
pub fn von_mises<R: Rng + ?Sized>(rng: &mut R, mu: f64, kappa: f64) -> f64 {
    if kappa < UNIFORM_KAPPA {
        return rng.random::<f64>() * 2.0 * PI;
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let theta = f.clamp(-1.0, 1.0).acos();
            let signed = if u3 > 0.5 { theta } else { -theta };
            return wrap_angle(mu + signed);
        }
    }
}

/// Precomputed constants of Wood's rejection step for the von Mises-Fisher
/// distribution on `S^{k-1}`.
#[derive(Debug, Clone)]
pub(crate) struct VmfSampler {
    mean: Vec<f64>,
    kappa: f64,
    b: f64,
    x0: f64,
    c: f64,
    beta: Beta<f64>,
}

impl VmfSampler {
    pub fn new(mean: Vec<f64>, kappa: f64) -> Self {
        let m = (mean.len() - 1) as f64;
        // b = (-2k + sqrt(4k^2 + m^2)) / m, written without cancellation
        let b = m / (2.0 * kappa + (4.0 * kappa * kappa + m * m).sqrt());
        let x0 = (1.0 - b) / (1.0 + b);
        let c = kappa * x0 + m * (1.0 - x0 * x0).ln();
        let beta = Beta::new(m / 2.0, m / 2.0).expect("positive shape parameters");
        VmfSampler {
            mean,
            kappa,
            b,
            x0,
            c,
            beta,
        }
    }

    /// Tangent-normal decomposition `x = w mu + sqrt(1 - w^2) v` with `w` from
    /// Wood's rejection step and `v` uniform on the unit sphere orthogonal to `mu`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let k = self.mean.len();
        let w = if self.kappa < UNIFORM_KAPPA {
            // with b = 1, w = 1 - 2z is the exact uniform marginal
            1.0 - 2.0 * self.beta.sample(rng)
        } else {
            let m = (k - 1) as f64;
            loop {
                let z = self.beta.sample(rng);
                let w = (1.0 - (1.0 + self.b) * z) / (1.0 - (1.0 - self.b) * z);
                let u: f64 = rng.random();
                if self.kappa * w + m * (1.0 - self.x0 * w).ln() - self.c >= u.ln() {
                    break w;
                }
            }
        };
        let v = loop {
            let g: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
            let dot: f64 = g.iter().zip(&self.mean).map(|(a, b)| a * b).sum();
            let t: Vec<f64> = g.iter().zip(&self.mean).map(|(a, b)| a - dot * b).collect();
            let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break t.into_iter().map(|x| x / norm).collect::<Vec<_>>();
            }
        };
        let s = (1.0 - w * w).max(0.0).sqrt();
        let x: Vec<f64> = self.mean.iter().zip(&v).map(|(m, v)| w * m + s * v).collect();
        let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        x.into_iter().map(|a| a / norm).collect()
    }
}
