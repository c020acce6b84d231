use geodepth::baselines::{atd_sphere, DirectionSet, ProjectionSummary};
use geodepth::depth::{DepthEngine, Ray};
use geodepth::geometry::ManifoldKind;
use geodepth::samplers::{preset, Preset, Sampler};
use geodepth::stats::chi_square_sf;
use geodepth::{Dataset, ManifoldSpec, Point, RngStream, SamplerSpec};
use rayon::prelude::*;

use super::base_meta;
use crate::args::SimulateArgs;
use crate::error::{CliError, CliResult};
use crate::input::{parse_list, parse_range};
use crate::output::{Cell, Report, Table};
use crate::svg::{Plot, Series};

/// Above this size the default switches from all pairs to a pair subsample.
const EXACT_LIMIT: usize = 2000;
const DEFAULT_PAIRS: usize = 100_000;

fn pair_budget(arg: Option<&str>, n: usize) -> CliResult<Option<usize>> {
    match arg {
        None if n <= EXACT_LIMIT => Ok(None),
        None => Ok(Some(DEFAULT_PAIRS)),
        Some("exact") => Ok(None),
        Some(s) => {
            s.parse::<usize>().ok().filter(|p| *p > 0).map(Some).ok_or_else(|| {
                CliError::validation(format!("--pairs: expected `exact` or a positive count, got `{s}`"))
            })
        }
    }
}

fn ray_direction(s: &str, dim: usize) -> CliResult<Vec<f64>> {
    if let Some(i) = s.strip_prefix('e').and_then(|i| i.parse::<usize>().ok()) {
        if i == 0 || i > dim {
            return Err(CliError::validation(format!("--profile-ray: e{i} outside 1..={dim}")));
        }
        let mut u = vec![0.0; dim];
        u[i - 1] = 1.0;
        return Ok(u);
    }
    let u: Vec<f64> = parse_list(s, "--profile-ray")?;
    if u.len() != dim {
        return Err(CliError::validation(format!(
            "--profile-ray: expected {dim} coordinates, got {}",
            u.len()
        )));
    }
    Ok(u)
}

struct Baselines<'a> {
    projections: Option<ProjectionSummary<'a>>,
    poles: Option<&'a DirectionSet>,
}

impl Baselines<'_> {
    fn columns(&self) -> Vec<&'static str> {
        let mut c = Vec::new();
        if self.projections.is_some() {
            c.extend(["pd1", "pd2"]);
        }
        if self.poles.is_some() {
            c.push("atd");
        }
        c
    }

    fn values(&self, ds: &Dataset, p: &Point) -> CliResult<Vec<f64>> {
        let mut v = Vec::new();
        if let Some(proj) = &self.projections {
            v.push(proj.pd1(p)?);
            v.push(proj.pd2(p)?);
        }
        if let Some(poles) = self.poles {
            v.push(atd_sphere(ds, p, poles)?);
        }
        Ok(v)
    }
}

/// Mean of the first component, reached through mixtures.
fn center(sampler: &SamplerSpec) -> Option<Vec<f64>> {
    match sampler {
        SamplerSpec::Gaussian { mean, .. }
        | SamplerSpec::VonMisesFisher { mean, .. }
        | SamplerSpec::MultivariateVonMises { mean, .. } => Some(mean.clone()),
        SamplerSpec::Wishart { scale, dof } => Some(scale.iter().map(|s| s * *dof as f64).collect()),
        SamplerSpec::Mixture { components, .. } => components.first().and_then(center),
        SamplerSpec::PointMass { point } => Some(point.clone()),
    }
}

fn design(args: &SimulateArgs) -> CliResult<Preset> {
    if let Some(name) = &args.preset {
        return preset(name).map_err(|e| CliError::context(e, "--preset"));
    }
    let (Some(raw), Some(manifold)) = (&args.sampler, &args.manifold) else {
        return Err(CliError::validation("give --preset, or --sampler with --manifold"));
    };
    let manifold: ManifoldSpec = manifold.parse().map_err(|e| CliError::context(e, "--manifold"))?;
    let sampler: SamplerSpec =
        serde_json::from_str(raw).map_err(|e| CliError::validation(format!("--sampler: {e}")))?;
    Sampler::new(&manifold, &sampler).map_err(|e| CliError::context(e, "--sampler"))?;
    let reference = center(&sampler)
        .ok_or_else(|| CliError::validation("--sampler: no centre to measure distances from"))
        .and_then(|c| {
            manifold
                .validate(&c)
                .map_err(|e| CliError::context(e, "--sampler centre"))
        })?;
    Ok(Preset {
        name: "custom".into(),
        is_mixture: matches!(sampler, SamplerSpec::Mixture { .. }),
        manifold,
        sampler,
        reference,
        reference_column: "dist_to_center".into(),
    })
}

pub fn run(args: &SimulateArgs, command: &str) -> CliResult<Report> {
    let preset = design(args)?;
    if args.n < 2 {
        return Err(CliError::validation("--n must be at least 2"));
    }
    let spec = &preset.manifold;
    let sampler = Sampler::new(spec, &preset.sampler)?;
    let (ds, labels) = sampler.sample_labeled(&mut RngStream::new(args.seed), args.n)?;
    let pairs = pair_budget(args.pairs.as_deref(), args.n)?;
    let engine = match pairs {
        None => DepthEngine::exact(&ds)?,
        Some(p) => DepthEngine::subsampled(&ds, p, args.seed)?,
    };

    let dirs = match spec.kind() {
        ManifoldKind::Euclidean { .. } | ManifoldKind::Sphere { .. } => {
            Some(DirectionSet::random(spec.coord_len(), args.directions, args.seed)?)
        }
        _ => None,
    };
    let baselines = Baselines {
        projections: match (spec.kind(), &dirs) {
            (ManifoldKind::Euclidean { .. }, Some(d)) => Some(ProjectionSummary::new(&ds, d)?),
            _ => None,
        },
        poles: match spec.kind() {
            ManifoldKind::Sphere { .. } => dirs.as_ref(),
            _ => None,
        },
    };

    let mut meta = base_meta(command, Some(args.seed), &spec.to_string());
    meta.push("preset", &preset.name);
    meta.push("n", args.n);
    meta.push("pairs", pairs.map_or("exact".to_string(), |p| p.to_string()));
    if dirs.is_some() {
        meta.push("directions", args.directions);
    }

    let (table, plot) = match &args.profile_ray {
        Some(dir) => profile(args, &preset, &ds, &engine, &baselines, dir, &mut meta)?,
        None => per_point(args, &preset, &ds, &labels, &engine, &baselines)?,
    };
    Ok(Report { meta, table, plot })
}

fn per_point(
    args: &SimulateArgs,
    preset: &Preset,
    ds: &Dataset,
    labels: &[usize],
    engine: &DepthEngine<'_>,
    baselines: &Baselines<'_>,
) -> CliResult<(Table, Plot)> {
    let spec = &preset.manifold;
    let scored = args.score.unwrap_or(ds.len()).min(ds.len());
    let points = &ds.points()[..scored];
    let depths = engine.depth_batch(points)?;
    let mut columns = vec!["index"];
    if preset.is_mixture {
        columns.push("component");
    }
    columns.push(&preset.reference_column);
    columns.push("depth");
    columns.extend(baselines.columns());
    let mut table = Table::new(&columns);
    let mut series: Vec<Series> = Vec::new();
    let scores: Vec<(f64, Vec<f64>)> = points
        .par_iter()
        .map(|p| -> CliResult<(f64, Vec<f64>)> { Ok((spec.distance(&preset.reference, p)?, baselines.values(ds, p)?)) })
        .collect::<CliResult<_>>()?;
    for (i, (d, (dist, base))) in depths.iter().zip(scores).enumerate() {
        let mut row = vec![Cell::from(i)];
        let group = if preset.is_mixture { labels[i] } else { 0 };
        if preset.is_mixture {
            row.push(Cell::from(labels[i]));
        }
        row.push(Cell::from(dist));
        row.push(Cell::from(d.value));
        row.extend(base.into_iter().map(Cell::from));
        table.rows.push(row);
        while series.len() <= group {
            series.push(Series {
                name: format!("component {}", series.len()),
                points: Vec::new(),
                line: false,
            });
        }
        series[group].points.push((dist, d.value));
    }
    if !preset.is_mixture {
        series[0].name = "sample".into();
    }
    let plot = Plot {
        title: format!("{} (n = {})", preset.name, ds.len()),
        x_label: preset.reference_column.clone(),
        y_label: "depth".into(),
        series,
    };
    Ok((table, plot))
}

fn profile(
    args: &SimulateArgs,
    preset: &Preset,
    ds: &Dataset,
    engine: &DepthEngine<'_>,
    baselines: &Baselines<'_>,
    dir: &str,
    meta: &mut crate::output::Meta,
) -> CliResult<(Table, Plot)> {
    let spec = &preset.manifold;
    let grid = parse_range(&args.lambda, "--lambda")?;
    let direction = ray_direction(dir, spec.coord_len())?;
    let ray =
        Ray::new(spec, preset.reference.clone(), direction, grid).map_err(|e| CliError::context(e, "--profile-ray"))?;
    let points = ray.points(spec)?;
    let depths = engine.depth_batch(&points)?;
    let gaussian_tail =
        matches!(spec.kind(), ManifoldKind::Euclidean { weights: None, .. }) && preset.sampler.is_standard_gaussian();
    meta.push("profile_ray", dir);
    meta.push("lambda", &args.lambda);

    let mut columns = vec!["lambda", "distance", "depth"];
    let extra = baselines.columns();
    columns.extend(&extra);
    columns.push("depth_x2");
    if baselines.projections.is_some() {
        columns.push("pd2_x4");
    }
    if gaussian_tail {
        columns.push("tail_prob");
    }
    let mut table = Table::new(&columns);
    for ((lambda, p), d) in ray.grid().iter().zip(&points).zip(&depths) {
        let dist = spec.distance(&preset.reference, p)?;
        let base = baselines.values(ds, p)?;
        let mut row = vec![Cell::from(*lambda), Cell::from(dist), Cell::from(d.value)];
        row.extend(base.iter().map(|v| Cell::from(*v)));
        row.push(Cell::from(2.0 * d.value));
        if baselines.projections.is_some() {
            row.push(Cell::from(4.0 * base[1]));
        }
        if gaussian_tail {
            row.push(Cell::from(chi_square_sf(spec.coord_len() as f64, dist * dist)));
        }
        table.rows.push(row);
    }
    let lambdas = table.column("lambda").expect("lambda column");
    let mut series = Vec::new();
    for name in ["depth_x2", "pd1", "pd2_x4", "atd", "tail_prob"] {
        if let Some(ys) = table.column(name) {
            series.push(Series {
                name: name.to_string(),
                points: lambdas.iter().copied().zip(ys).collect(),
                line: true,
            });
        }
    }
    let plot = Plot {
        title: format!("{} depth profile along {dir}", preset.name),
        x_label: "lambda".into(),
        y_label: "normalized depth".into(),
        series,
    };
    Ok((table, plot))
}
