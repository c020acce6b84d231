use std::path::Path;

use geodepth::{Dataset, ManifoldSpec, Point};

use crate::error::{CliError, CliResult};

/// Parses a headerless numeric CSV; `#` lines and blank lines are skipped.
/// Returns each row with its 1-based line number.
pub fn read_rows(path: &Path) -> CliResult<Vec<(u64, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let values = record
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| {
                    CliError::validation(format!("{}: line {line}: `{f}` is not a number", path.display()))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push((line, values));
    }
    Ok(rows)
}

pub fn read_points(spec: &ManifoldSpec, path: &Path) -> CliResult<Vec<Point>> {
    read_rows(path)?
        .into_iter()
        .map(|(line, row)| {
            spec.validate(&row)
                .map_err(|e| CliError::context(e, format!("{}: line {line}", path.display())))
        })
        .collect()
}

pub fn read_dataset(spec: &ManifoldSpec, path: &Path) -> CliResult<Dataset> {
    let points = read_points(spec, path)?;
    if points.len() < 2 {
        return Err(CliError::validation(format!(
            "{}: need at least 2 points, found {}",
            path.display(),
            points.len()
        )));
    }
    Ok(Dataset::new(spec.clone(), points)?)
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| CliError::validation(format!("{what}: cannot parse `{t}`")))
        })
        .collect()
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
pub fn parse_range(s: &str, what: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::validation(format!("{what}: expected start:stop:step, got `{s}`")))?;
    let [start, stop, step] = parts[..] else {
        return Err(CliError::validation(format!(
            "{what}: expected start:stop:step, got `{s}`"
        )));
    };
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(CliError::validation(format!("{what}: need step > 0 and stop >= start")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}
