use geodepth::asymptotics::{clt_experiment, gc_experiment, sample_grid, variance_curve, CltOptions};
use geodepth::samplers::preset;

use super::base_meta;
use crate::args::{AsymArgs, AsymKind};
use crate::error::{CliError, CliResult};
use crate::input::{parse_list, parse_range};
use crate::output::{Cell, Report, Table};
use crate::svg::{Plot, Series};

pub fn run(args: &AsymArgs, command: &str) -> CliResult<Report> {
    match args.kind {
        AsymKind::VarianceCurve => variance(args, command),
        AsymKind::Clt => clt(args, command),
        AsymKind::Gc => gc(args, command),
    }
}

fn variance(args: &AsymArgs, command: &str) -> CliResult<Report> {
    let ks: Vec<usize> = parse_list(&args.k, "--k")?;
    let ls = parse_range(&args.l, "--l")?;
    let rows = variance_curve(&ks, &ls, args.draws, args.seed)?;
    let mut meta = base_meta(command, Some(args.seed), &format!("euclidean (k = {})", args.k));
    meta.push("experiment", "variance-curve");
    meta.push("draws", args.draws);
    let mut table = Table::new(&["k", "l", "p2", "sigma2", "stderr"]);
    let mut series: Vec<Series> = Vec::new();
    for r in &rows {
        table.rows.push(vec![
            Cell::from(r.k),
            Cell::from(r.l),
            Cell::from(r.p2),
            Cell::from(r.sigma2),
            Cell::from(r.stderr),
        ]);
        let name = format!("k = {}", r.k);
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push((r.l, r.sigma2)),
            None => series.push(Series {
                name,
                points: vec![(r.l, r.sigma2)],
                line: true,
            }),
        }
    }
    let plot = Plot {
        title: "marginal variance 4 P2 (1 - P2) at l e1".into(),
        x_label: "l".into(),
        y_label: "sigma^2".into(),
        series,
    };
    Ok(Report { meta, table, plot })
}

fn clt(args: &AsymArgs, command: &str) -> CliResult<Report> {
    let name = args.preset.as_deref().unwrap_or("gauss-k2");
    let p = preset(name).map_err(|e| CliError::context(e, "--preset"))?;
    let x_raw: Vec<f64> = match &args.x {
        Some(s) => parse_list(s, "--x")?,
        None => return Err(CliError::validation("--x is required for --type clt")),
    };
    let x = p.manifold.validate(&x_raw).map_err(|e| CliError::context(e, "--x"))?;
    let n = match &args.n {
        Some(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::validation(format!("--n: expected one sample size, got `{s}`")))?,
        None => 500,
    };
    let opts = CltOptions {
        n,
        reps: args.reps,
        reference_pairs: args.reference_pairs,
        zeta: (args.zeta_outer > 0).then_some((args.zeta_outer, args.zeta_inner)),
    };
    let r = clt_experiment(&p.manifold, &p.sampler, &x, opts, args.seed)?;
    let mut meta = base_meta(command, Some(args.seed), &p.manifold.to_string());
    meta.push("experiment", "clt");
    meta.push("preset", name);
    meta.push(
        "x",
        x.coords()
            .iter()
            .map(|v| format!("{v:?}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    meta.push("reference_pairs", args.reference_pairs);
    let mut table = Table::new(&[
        "n",
        "reps",
        "reference",
        "reference_stderr",
        "mean",
        "mean_stderr",
        "variance",
        "sigma2_marginal",
        "sigma2_projection",
        "ks_distance",
        "skipped_pairs",
    ]);
    table.rows.push(vec![
        Cell::from(r.n),
        Cell::from(r.reps),
        Cell::from(r.reference.estimate),
        Cell::from(r.reference.stderr),
        Cell::from(r.mean),
        Cell::from(r.mean_stderr),
        Cell::from(r.variance),
        Cell::from(r.sigma2_marginal),
        r.sigma2_projection.map_or(Cell::Float(f64::NAN), Cell::from),
        Cell::from(r.ks_distance),
        Cell::from(r.skipped_pairs),
    ]);
    let mut sorted = r.deviations.clone();
    sorted.sort_by(f64::total_cmp);
    let plot = Plot {
        title: format!("sorted sqrt(n) deviations, n = {n}"),
        x_label: "rank / reps".into(),
        y_label: "sqrt(n) (depth - reference)".into(),
        series: vec![Series {
            name: "replications".into(),
            points: sorted
                .iter()
                .enumerate()
                .map(|(i, v)| ((i as f64 + 0.5) / r.reps as f64, *v))
                .collect(),
            line: false,
        }],
    };
    Ok(Report { meta, table, plot })
}

fn gc(args: &AsymArgs, command: &str) -> CliResult<Report> {
    let name = args.preset.as_deref().unwrap_or("sphere-vmf");
    let p = preset(name).map_err(|e| CliError::context(e, "--preset"))?;
    let ns: Vec<usize> = parse_list(args.n.as_deref().unwrap_or("100,200,400,800,1600"), "--n")?;
    let grid = sample_grid(&p.manifold, &p.sampler, args.grid_size, args.seed)?;
    let r = gc_experiment(&p.manifold, &p.sampler, &grid, &ns, args.reference_pairs, args.seed)?;
    let mut meta = base_meta(command, Some(args.seed), &p.manifold.to_string());
    meta.push("experiment", "gc");
    meta.push("preset", name);
    meta.push("grid_size", args.grid_size);
    meta.push("reference_pairs", args.reference_pairs);
    let mut table = Table::new(&["n", "sup_error"]);
    for (n, e) in r.n_values.iter().zip(&r.sup_errors) {
        table.rows.push(vec![Cell::from(*n), Cell::from(*e)]);
    }
    let plot = Plot {
        title: format!("sup-norm error over the grid, {name}"),
        x_label: "n".into(),
        y_label: "sup |depth_n - depth|".into(),
        series: vec![Series {
            name: "sup error".into(),
            points: r
                .n_values
                .iter()
                .map(|n| *n as f64)
                .zip(r.sup_errors.iter().copied())
                .collect(),
            line: true,
        }],
    };
    Ok(Report { meta, table, plot })
}
