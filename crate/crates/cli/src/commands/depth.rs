use geodepth::baselines::DirectionSet;
use geodepth::depth::{depth_values, empirical_depth_batch, subsampled_depth_batch};
use geodepth::{DepthMethod, ManifoldSpec};

use super::base_meta;
use crate::args::DepthArgs;
use crate::error::{CliError, CliResult};
use crate::input::{read_dataset, read_points};
use crate::output::{Cell, Report, Table};
use crate::svg::{Plot, Series};

pub fn run(args: &DepthArgs, command: &str) -> CliResult<Report> {
    let spec: ManifoldSpec = args.manifold.parse().map_err(|e| CliError::context(e, "--manifold"))?;
    let method: DepthMethod = args.method.parse().map_err(|e| CliError::context(e, "--method"))?;
    let ds = read_dataset(&spec, &args.input)?;
    let queries = match (&args.queries, args.query_self) {
        (_, true) => ds.points().to_vec(),
        (Some(path), false) => read_points(&spec, path)?,
        (None, false) => return Err(CliError::validation("give --queries FILE or --query-self")),
    };
    let report = match method {
        DepthMethod::Dcops => match args.pairs {
            Some(p) => subsampled_depth_batch(&ds, &queries, p, args.seed)?,
            None => empirical_depth_batch(&ds, &queries)?,
        },
        _ => {
            let dirs = DirectionSet::random(spec.coord_len(), args.directions, args.seed)?;
            depth_values(&ds, &queries, method, Some(&dirs))?
        }
    };

    let mut meta = base_meta(command, Some(args.seed), &spec.to_string());
    meta.push("method", method);
    match method {
        DepthMethod::Dcops => meta.push("pairs", args.pairs.map_or("exact".to_string(), |p| p.to_string())),
        _ => meta.push("directions", args.directions),
    }
    let mut table = Table::new(&["query_index", "depth", "method", "n", "skipped_pairs"]);
    for (i, v) in report.values.iter().enumerate() {
        table.rows.push(vec![
            Cell::from(i),
            Cell::from(*v),
            Cell::from(method.name()),
            Cell::from(report.n),
            Cell::from(report.skipped_pairs),
        ]);
    }
    let plot = Plot {
        title: format!("{method} depth on {spec}"),
        x_label: "query index".into(),
        y_label: "depth".into(),
        series: vec![Series {
            name: method.to_string(),
            points: report.values.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect(),
            line: false,
        }],
    };
    Ok(Report { meta, table, plot })
}
