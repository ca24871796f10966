//! Reading the small text inputs the subcommands accept.

use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use pcroc::data::{aggregate, load_games, PairCounts};

use crate::error::CliError;

pub fn read_counts(path: &Path) -> Result<PairCounts, CliError> {
    let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let games = load_games(file).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(aggregate(&games)?)
}

/// Values from a file (one or more per line, comma separated) or, when `arg`
/// is not an existing file, from an inline comma-separated list. A leading
/// non-numeric token is taken as a column header and skipped.
pub fn read_values<T: FromStr>(arg: &str) -> Result<Vec<T>, CliError> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path)?
    } else {
        arg.to_string()
    };
    let tokens: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    let mut out = Vec::with_capacity(tokens.len());
    for (k, t) in tokens.iter().enumerate() {
        match t.parse::<T>() {
            Ok(v) => out.push(v),
            Err(_) if k == 0 && t.parse::<f64>().is_err() => continue,
            Err(_) => return Err(CliError::Input(format!("cannot parse `{t}` in `{arg}`"))),
        }
    }
    if out.is_empty() {
        return Err(CliError::Input(format!("no values in `{arg}`")));
    }
    Ok(out)
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn read_grid(arg: &str) -> Result<Vec<u64>, CliError> {
    let parts: Vec<&str> = arg.split(':').collect();
    if parts.len() == 3 {
        let p = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Input(format!("bad range `{arg}`")))
        };
        let (start, stop, step) = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
        if step == 0 || start > stop {
            return Err(CliError::Input(format!("bad range `{arg}`")));
        }
        return Ok((start..=stop).step_by(step as usize).collect());
    }
    read_values(arg)
}

/// Schedule rows `i,j,games` (0-based team indices), header optional.
pub fn read_design(path: &Path) -> Result<Vec<(usize, usize, u64)>, CliError> {
    let bad = |line: usize, msg: &str| CliError::Input(format!("{}:{line}: {msg}", path.display()));
    let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(k + 1, &e.to_string()))?;
        if record.len() != 3 {
            return Err(bad(k + 1, "expected three columns i,j,games"));
        }
        let parsed = (
            record[0].parse::<usize>(),
            record[1].parse::<usize>(),
            record[2].parse::<u64>(),
        );
        match parsed {
            (Ok(i), Ok(j), Ok(n)) if i != j => rows.push((i, j, n)),
            (Ok(_), Ok(_), Ok(_)) => return Err(bad(k + 1, "a team cannot play itself")),
            _ if k == 0 => continue,
            _ => return Err(bad(k + 1, "expected integers i,j,games")),
        }
    }
    if rows.is_empty() {
        return Err(CliError::Input(format!("{}: empty design", path.display())));
    }
    Ok(rows)
}
