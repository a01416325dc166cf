//! File helpers shared by the TSV formats.
//!
//! Every output file except partitioned bitexts starts with a `#<build id>`
//! line, optionally followed by `#key=value` metadata lines. A comment line
//! starts with `#` and contains no tab; data lines always contain a tab.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::phrase::PairKey;
use crate::BUILD_ID;

pub fn is_comment(line: &str) -> bool {
    line.starts_with('#') && !line.contains('\t')
}

pub fn write_header<W: Write>(w: &mut W, meta: &[(&str, String)]) -> std::io::Result<()> {
    writeln!(w, "#{BUILD_ID}")?;
    for (k, v) in meta {
        writeln!(w, "#{k}={v}")?;
    }
    Ok(())
}

/// Collects `#key=value` comment lines.
pub fn header_meta(lines: &[String]) -> BTreeMap<String, String> {
    lines
        .iter()
        .filter(|l| is_comment(l))
        .filter_map(|l| l[1..].split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::InvalidArgument(
            format!("{}: no such file", path.display()),
        )),
        Err(e) => Err(e.into()),
    }
}

pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in open(path)?.lines() {
        let line = line?;
        out.push(line.strip_suffix('\r').map(str::to_string).unwrap_or(line));
    }
    Ok(out)
}

/// Creates parent directories as needed.
pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Reads a list of pairs: the last two tab-separated fields of every data line.
/// Works for plain `phrase1<TAB>phrase2` files as well as `ranked.tsv`.
pub fn read_pair_list(path: &Path) -> Result<Vec<PairKey>> {
    let mut out = Vec::new();
    for (idx, line) in read_lines(path)?.iter().enumerate() {
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 {
            return Err(Error::parse(path, idx + 1, "expected at least two fields"));
        }
        let a = fields[fields.len() - 2];
        let b = fields[fields.len() - 1];
        let key = PairKey::from_raw(a, b)
            .ok_or_else(|| Error::parse(path, idx + 1, "identity or empty pair"))?;
        out.push(key);
    }
    Ok(out)
}

pub fn write_pair_list(path: &Path, pairs: &[PairKey]) -> Result<()> {
    let mut w = create(path)?;
    write_header(&mut w, &[])?;
    for p in pairs {
        writeln!(w, "{}\t{}", p.lo(), p.hi())?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a comma-separated list.
pub fn parse_list<T, F>(s: &str, mut f: F) -> Result<Vec<T>>
where
    F: FnMut(&str) -> Result<T>,
{
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(&mut f)
        .collect()
}
