//! Limit-theory helpers against Monte-Carlo oracles.

use geodepth::asymptotics::{
    bridge_covariance, clt_experiment, gc_experiment, gx_gaussian, p2_gaussian, sample_grid, sigma2_marginal,
    variance_curve, zeta1, CltOptions,
};
use geodepth::depth::population_depth_mc;
use geodepth::samplers::SamplerSpec;
use geodepth::{ManifoldSpec, RngStream};
use rand::Rng;
use rand_distr::StandardNormal;

#[test]
fn gx_matches_raw_pair_monte_carlo() {
    let mut rng = RngStream::new(21);
    let draws = 20_000;
    for _ in 0..50 {
        let k = rng.random_range(1..=10);
        let x: Vec<f64> = (0..k).map(|_| 1.5 * rng.sample::<f64, _>(StandardNormal)).collect();
        let y: Vec<f64> = (0..k).map(|_| 1.5 * rng.sample::<f64, _>(StandardNormal)).collect();
        let mut hits = 0;
        for _ in 0..draws {
            let z: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
            // x in B_{yz}  <=>  <y - x, z - x> <= 0
            let dot: f64 = (0..k).map(|i| (y[i] - x[i]) * (z[i] - x[i])).sum();
            hits += (dot <= 0.0) as u32;
        }
        let mc = hits as f64 / draws as f64;
        let g = gx_gaussian(&x, &y).unwrap();
        let se = (g * (1.0 - g) / draws as f64).sqrt().max(1e-4);
        assert!((mc - g).abs() < 4.0 * se, "k = {k}: {mc} vs {g}");
    }
}

#[test]
fn p2_agrees_with_pair_sampling_and_with_itself() {
    let spec = ManifoldSpec::euclidean(2).unwrap();
    let sampler = SamplerSpec::standard_gaussian(2);
    for (i, x) in [[1.0, 0.0], [0.5, -1.5], [2.5, 0.0]].iter().enumerate() {
        let fast = p2_gaussian(x, 100_000, i as u64).unwrap();
        let raw = population_depth_mc(&spec, &sampler, &spec.validate(x).unwrap(), 100_000, 50 + i as u64).unwrap();
        let joint = (fast.stderr.powi(2) + raw.stderr.powi(2)).sqrt();
        assert!((fast.estimate - raw.estimate).abs() < 4.0 * joint);
        let bigger = p2_gaussian(x, 400_000, 90 + i as u64).unwrap();
        let joint = (fast.stderr.powi(2) + bigger.stderr.powi(2)).sqrt();
        assert!((fast.estimate - bigger.estimate).abs() < 3.0 * joint);
    }
    assert!(p2_gaussian(&[8.0, 0.0], 10_000, 1).unwrap().estimate < 0.01);
}

#[test]
fn marginal_variance_examples() {
    let center = sigma2_marginal(
        &ManifoldSpec::euclidean(3).unwrap(),
        &SamplerSpec::standard_gaussian(3),
        &ManifoldSpec::euclidean(3).unwrap().validate(&[0.0; 3]).unwrap(),
        10_000,
        1,
    )
    .unwrap();
    assert_eq!(center.sigma2, 1.0);
    let rows = variance_curve(&[2, 10], &[2.0, 6.0], 100_000, 4).unwrap();
    assert!(rows[2].sigma2 > rows[0].sigma2 + 3.0 * (rows[0].stderr + rows[2].stderr));
    assert!(rows[1].sigma2 < 1e-3);
}

#[test]
fn zeta1_vanishes_at_the_center_and_bounds_hold() {
    let spec = ManifoldSpec::euclidean(2).unwrap();
    let sampler = SamplerSpec::standard_gaussian(2);
    let center = zeta1(&spec, &sampler, &spec.validate(&[0.0, 0.0]).unwrap(), 10_000, 1000, 3).unwrap();
    assert!(center.zeta1.abs() < 1e-3);
    let x = spec.validate(&[1.0, 0.0]).unwrap();
    let z = zeta1(&spec, &sampler, &x, 4000, 2000, 4).unwrap();
    let s = sigma2_marginal(&spec, &sampler, &x, 100_000, 5).unwrap();
    assert!(4.0 * z.zeta1 <= s.sigma2);
    assert!(z.zeta1 > 0.02);
}

#[test]
fn clt_replications_are_centered() {
    let spec = ManifoldSpec::euclidean(2).unwrap();
    let sampler = SamplerSpec::standard_gaussian(2);
    let x = spec.validate(&[1.0, 0.0]).unwrap();
    let opts = CltOptions {
        n: 100,
        reps: 200,
        reference_pairs: 200_000,
        zeta: None,
    };
    let r = clt_experiment(&spec, &sampler, &x, opts, 7).unwrap();
    assert!(r.mean.abs() < 4.0 * r.mean_stderr + 4.0 * 10.0 * r.reference.stderr);
    assert_eq!(r.deviations.len(), 200);
    assert!(r.variance > 0.0 && r.sigma2_marginal >= 0.0);
    assert_eq!(r, clt_experiment(&spec, &sampler, &x, opts, 7).unwrap());
}

#[test]
fn gc_is_reproducible_and_shrinks() {
    let spec = ManifoldSpec::sphere(3).unwrap();
    let sampler = SamplerSpec::VonMisesFisher {
        mean: vec![1.0, 0.0, 0.0],
        kappa: 5.0,
    };
    let grid = sample_grid(&spec, &sampler, 20, 1).unwrap();
    let a = gc_experiment(&spec, &sampler, &grid, &[50, 800], 100_000, 2).unwrap();
    assert_eq!(
        a,
        gc_experiment(&spec, &sampler, &grid, &[50, 800], 100_000, 2).unwrap()
    );
    assert!(a.sup_errors[1] < a.sup_errors[0]);
    assert!(gc_experiment(&spec, &sampler, &grid[..5], &[50], 1000, 2).is_err());
}

#[test]
fn bridge_covariance_on_the_diagonal_is_binomial() {
    let spec = ManifoldSpec::euclidean(2).unwrap();
    let sampler = SamplerSpec::standard_gaussian(2);
    let x = spec.validate(&[0.7, 0.2]).unwrap();
    let c = bridge_covariance(&spec, &sampler, &x, &x, 50_000, 3).unwrap();
    assert!((c.covariance - c.p_x * (1.0 - c.p_x)).abs() < 1e-12);
    let y = spec.validate(&[-0.7, 0.2]).unwrap();
    let c = bridge_covariance(&spec, &sampler, &x, &y, 50_000, 3).unwrap();
    assert!(c.covariance.abs() <= 0.25);
}
