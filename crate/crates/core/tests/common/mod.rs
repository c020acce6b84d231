#![allow(dead_code)]

use geodepth::depth::Dataset;
use geodepth::samplers::{preset, sample, SamplerSpec};
use geodepth::{ManifoldSpec, Point, RngStream};

/// One dataset per manifold family, drawn from the named presets.
pub fn manifold_cases() -> Vec<(&'static str, &'static str)> {
    vec![
        ("euclidean", "gauss-k5"),
        ("sphere", "sphere-vmf-mixture"),
        ("torus", "torus-mvm-mixture"),
        ("spd", "spd-wishart-mixture"),
    ]
}

pub fn preset_sample(name: &str, n: usize, seed: u64) -> Dataset {
    let p = preset(name).unwrap();
    sample(&p.manifold, &p.sampler, &mut RngStream::new(seed), n).unwrap()
}

pub fn gaussian(k: usize, n: usize, seed: u64) -> Dataset {
    let spec = ManifoldSpec::euclidean(k).unwrap();
    sample(&spec, &SamplerSpec::standard_gaussian(k), &mut RngStream::new(seed), n).unwrap()
}

/// Textbook double loop over all pairs with the public containment test.
pub fn naive_depth(ds: &Dataset, p: &Point) -> (u64, u64) {
    let pts = ds.points();
    let (mut hits, mut skipped) = (0, 0);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            match ds.spec().ball_contains(&pts[i], &pts[j], p) {
                Ok(true) => hits += 1,
                Ok(false) => {}
                Err(_) => skipped += 1,
            }
        }
    }
    (hits, skipped)
}

pub fn naive_value(ds: &Dataset, p: &Point) -> f64 {
    let n = ds.len() as u64;
    let (hits, skipped) = naive_depth(ds, p);
    hits as f64 / (n * (n - 1) / 2 - skipped) as f64
}

/// Haar-ish rotation from Gram-Schmidt on a seeded Gaussian matrix.
pub fn rotation(k: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    let mut rng = RngStream::new(seed);
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < k {
        let mut v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        for u in &q {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= d * y;
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            q.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    q
}

pub fn apply(q: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    q.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// `g X g^T` for row-major `k x k` matrices.
pub fn congruence(g: &[f64], x: &[f64], k: usize) -> Vec<f64> {
    let mut gx = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            gx[i * k + j] = (0..k).map(|l| g[i * k + l] * x[l * k + j]).sum();
        }
    }
    let mut out = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            out[i * k + j] = (0..k).map(|l| gx[i * k + l] * g[j * k + l]).sum();
        }
    }
    out
}
