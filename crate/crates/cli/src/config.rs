//! `--config FILE` support: keys of a flat TOML table become flags inserted
//! right after the subcommand, so explicit flags given later still win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{CliError, CliResult};

const SUBCOMMANDS: [&str; 3] = ["depth", "simulate", "asym"];

fn config_path(argv: &[OsString]) -> Option<(usize, usize, OsString)> {
    for (i, a) in argv.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return argv.get(i + 1).map(|v| (i, 2, v.clone()));
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some((i, 1, OsString::from(v)));
        }
    }
    None
}

fn table_to_flags(table: &toml::Table, path: &Path) -> CliResult<(Option<String>, Vec<OsString>)> {
    let mut command = None;
    let mut flags = Vec::new();
    for (key, value) in table {
        if key == "command" {
            command = value.as_str().map(str::to_string);
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let text = match value {
            toml::Value::Boolean(true) => {
                flags.push(flag.into());
                continue;
            }
            toml::Value::Boolean(false) => continue,
            toml::Value::String(s) => s.clone(),
            toml::Value::Integer(v) => v.to_string(),
            toml::Value::Float(v) => v.to_string(),
            toml::Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    toml::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            _ => {
                return Err(CliError::validation(format!(
                    "{}: key `{key}` must be a string, number, boolean or array",
                    path.display()
                )))
            }
        };
        flags.push(flag.into());
        flags.push(text.into());
    }
    Ok((command, flags))
}

/// Returns `argv` with the config file's flags spliced in.
pub fn expand(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some((at, width, path)) = config_path(&argv) else {
        return Ok(argv);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    let (command, flags) = table_to_flags(&table, path)?;
    let mut out: Vec<OsString> = argv[..at].iter().chain(&argv[at + width..]).cloned().collect();
    let sub = out
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    let insert_at = match (sub, command) {
        (Some(i), _) => i + 1,
        (None, Some(c)) => {
            out.insert(1, c.into());
            2
        }
        (None, None) => return Ok(out),
    };
    out.splice(insert_at..insert_at, flags);
    Ok(out)
}

/// The command line recorded in output headers: the effective arguments
/// without flags that cannot change the primary output.
pub fn recorded_command(argv: &[OsString]) -> String {
    let mut parts = vec!["geodepth".to_string()];
    let mut skip_next = false;
    for a in argv.iter().skip(1) {
        let s = a.to_string_lossy();
        if skip_next {
            skip_next = false;
            continue;
        }
        if ["--threads", "--out", "--config"].contains(&s.as_ref()) {
            skip_next = true;
            continue;
        }
        if s.starts_with("--threads=") || s.starts_with("--out=") || s.starts_with("--config=") {
            continue;
        }
        if s.is_empty() || s.contains(char::is_whitespace) {
            parts.push(format!("'{s}'"));
        } else {
            parts.push(s.into_owned());
        }
    }
    parts.join(" ")
}
