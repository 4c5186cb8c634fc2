//! Line-oriented text formats for series and coefficient tables.
//!
//! Series files start with `w=<grid> trunc=<num>/<den>` followed by one
//! `<exp_num>/<exp_den> <coeff_num>/<coeff_den>` line per stored term.
//! Coefficient tables start with `level=<M> nmax=<n>` followed by
//! `<n> <a_n>` for every `1 ≤ n ≤ nmax`. Blank lines and lines starting
//! with `#` are skipped on input.

use std::fs;
use std::path::{Path, PathBuf};

use modparam_core::periods::{CoeffSource, CoeffTable};
use modparam_core::{BigInt, BigRational, Exponent, FracSeries};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn key_value<'a>(line: usize, item: &'a str, key: &str) -> Result<&'a str, FormatError> {
    item.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| syntax(line, format!("expected {key}=…, got {item:?}")))
}

fn parse_fraction<T: std::str::FromStr>(line: usize, s: &str) -> Result<(T, T), FormatError> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| syntax(line, format!("expected n/d, got {s:?}")))?;
    let n = n.parse().map_err(|_| syntax(line, format!("bad numerator in {s:?}")))?;
    let d = d.parse().map_err(|_| syntax(line, format!("bad denominator in {s:?}")))?;
    Ok((n, d))
}

fn exponent(line: usize, s: &str) -> Result<Exponent, FormatError> {
    let (n, d): (i64, i64) = parse_fraction(line, s)?;
    if d <= 0 {
        return Err(syntax(line, "denominator must be positive"));
    }
    Ok(Exponent::new(n, d))
}

fn rational(line: usize, s: &str) -> Result<BigRational, FormatError> {
    let (n, d): (BigInt, BigInt) = parse_fraction(line, s)?;
    if d <= BigInt::from(0) {
        return Err(syntax(line, "denominator must be positive"));
    }
    Ok(BigRational::new(n, d))
}

pub fn write_series(s: &FracSeries) -> String {
    let t = s.trunc_order();
    let mut out = format!("w={} trunc={}/{}\n", s.grid(), t.numer(), t.denom());
    for (e, c) in s.terms() {
        out.push_str(&format!("{}/{} {}/{}\n", e.numer(), e.denom(), c.numer(), c.denom()));
    }
    out
}

pub fn read_series(text: &str) -> Result<FracSeries, FormatError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| FormatError::Invalid("empty series file".into()))?;
    let mut items = header.split_whitespace();
    let (Some(w), Some(t), None) = (items.next(), items.next(), items.next()) else {
        return Err(syntax(ln, "header must be `w=<grid> trunc=<num>/<den>`"));
    };
    let grid: i64 = key_value(ln, w, "w")?
        .parse()
        .map_err(|_| syntax(ln, "grid must be an integer"))?;
    let trunc = exponent(ln, key_value(ln, t, "trunc")?)?;
    let mut terms = Vec::new();
    for (ln, l) in lines {
        let (e, c) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(ln, "expected `<exponent> <coefficient>`"))?;
        terms.push((exponent(ln, e)?, rational(ln, c.trim())?));
    }
    FracSeries::from_terms(grid, trunc, terms).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_coeff_table(t: &CoeffTable) -> String {
    let mut out = format!("level={} nmax={}\n", t.level(), t.n_max());
    for (i, a) in t.values().iter().enumerate() {
        out.push_str(&format!("{} {}\n", i + 1, a));
    }
    out
}

/// Reads a table and checks its structural identities.
pub fn read_coeff_table(text: &str) -> Result<CoeffTable, FormatError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| FormatError::Invalid("empty coefficient file".into()))?;
    let mut items = header.split_whitespace();
    let (Some(l), Some(n), None) = (items.next(), items.next(), items.next()) else {
        return Err(syntax(ln, "header must be `level=<M> nmax=<n>`"));
    };
    let level: u64 = key_value(ln, l, "level")?
        .parse()
        .map_err(|_| syntax(ln, "level must be a positive integer"))?;
    let n_max: usize = key_value(ln, n, "nmax")?
        .parse()
        .map_err(|_| syntax(ln, "nmax must be a nonnegative integer"))?;
    let mut values: Vec<Option<i64>> = vec![None; n_max];
    for (ln, l) in lines {
        let mut parts = l.split_whitespace();
        let (Some(i), Some(a), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(syntax(ln, "expected `<n> <a_n>`"));
        };
        let i: usize = i.parse().map_err(|_| syntax(ln, "bad index"))?;
        let a: i64 = a.parse().map_err(|_| syntax(ln, "bad coefficient"))?;
        if i == 0 || i > n_max {
            return Err(syntax(ln, format!("index {i} outside 1..={n_max}")));
        }
        if values[i - 1].replace(a).is_some() {
            return Err(syntax(ln, format!("index {i} repeated")));
        }
    }
    let values: Vec<i64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| FormatError::Invalid(format!("a({}) missing", i + 1))))
        .collect::<Result<_, _>>()?;
    CoeffTable::from_values(level, &values, CoeffSource::File).map_err(|e| FormatError::Invalid(e.to_string()))
}

fn read_file(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), FormatError> {
    fs::write(path, contents).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_series(path: &Path) -> Result<FracSeries, FormatError> {
    read_series(&read_file(path)?)
}

pub fn load_coeff_table(path: &Path) -> Result<CoeffTable, FormatError> {
    read_coeff_table(&read_file(path)?)
}

/// Directory named by `MODPARAM_DATA`, if set.
pub fn data_dir() -> Option<PathBuf> {
    std::env::var_os("MODPARAM_DATA").map(PathBuf::from)
}

/// `path` itself if it exists, otherwise the same name under
/// `MODPARAM_DATA`.
pub fn resolve_data_path(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match data_dir() {
        Some(dir) if dir.join(path).exists() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// The conventional file name for a stored table of the given level.
pub fn table_file_name(level: u64) -> String {
    format!("level{level}.coeffs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn series_round_trip_keeps_grid() {
        let s = FracSeries::from_terms(
            6,
            Exponent::new(7, 2),
            [(Exponent::new(-1, 3), r(5, 7)), (Exponent::new(1, 2), r(-3, 1)), (Exponent::new(3, 1), r(1, 9))],
        )
        .unwrap();
        let text = write_series(&s);
        assert_eq!(text, "w=6 trunc=7/2\n-1/3 5/7\n1/2 -3/1\n3/1 1/9\n");
        let back = read_series(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.grid(), 6);
        assert_eq!(write_series(&back), text);
    }

    #[test]
    fn series_errors_name_the_line() {
        let err = read_series("w=2 trunc=3/1\n1/2 x\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2"), "{err}");
        assert!(read_series("w=2 trunc=3/1\n1/3 1/1\n").is_err());
        assert!(read_series("").is_err());
    }

    #[test]
    fn table_round_trip() {
        let primes = BTreeMap::from([(2, 0), (3, 2), (5, -1), (7, -3)]);
        let t = CoeffTable::from_prime_values(76, 10, &primes, CoeffSource::Given).unwrap();
        let text = write_coeff_table(&t);
        assert!(text.starts_with("level=76 nmax=10\n1 1\n2 0\n3 2\n"));
        let back = read_coeff_table(&text).unwrap();
        assert_eq!(back.values(), t.values());
        assert_eq!(back.source(), &CoeffSource::File);
    }

    #[test]
    fn broken_tables_rejected() {
        assert!(read_coeff_table("level=11 nmax=2\n1 1\n").is_err());
        assert!(read_coeff_table("level=11 nmax=2\n1 1\n2 -2\n2 -2\n").is_err());
        // a(1) must be 1
        assert!(read_coeff_table("level=11 nmax=1\n1 2\n").is_err());
    }
}
