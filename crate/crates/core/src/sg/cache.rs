//! Plain-text table cache.
//!
//! ```text
//! grundy-cache v1 exco n=2 box=1,2,3
//! 0 0 0 0
//! 0 0 1 1
//! ...
//! ```
//!
//! Rows list every cell of the box in lexicographic order, one per line,
//! as the coordinates followed by the SG value.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::table::SgTable;
use crate::error::{CacheError, Error, Result};
use crate::game::GameRules;

const MAGIC: &str = "grundy-cache";
const VERSION: &str = "v1";

pub fn save_cache<W: Write>(table: &SgTable, mut out: W) -> Result<()> {
    let rules = table.rules();
    writeln!(out, "{MAGIC} {VERSION} {} n={} box={}", rules.token(), rules.n(), table.bounds_string())?;
    let mut line = String::new();
    for (pos, g) in table.iter() {
        line.clear();
        for c in pos.coords() {
            line.push_str(&c.to_string());
            line.push(' ');
        }
        line.push_str(&g.to_string());
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_cache_file(table: &SgTable, path: impl AsRef<Path>) -> Result<()> {
    save_cache(table, BufWriter::new(File::create(path)?))
}

pub fn load_cache_file(path: impl AsRef<Path>) -> Result<SgTable> {
    load_cache(BufReader::new(File::open(path)?))
}

/// Like [`load_cache`], but rejects a file written for different rules.
pub fn load_cache_expecting<R: BufRead>(input: R, rules: &GameRules) -> Result<SgTable> {
    let table = load_cache(input)?;
    if table.rules() != rules {
        return Err(CacheError::VariantMismatch {
            expected: rules.to_string(),
            found: table.rules().to_string(),
        }
        .into());
    }
    Ok(table)
}

/// Parses a cache and checks every stored value against its successors.
pub fn load_cache<R: BufRead>(input: R) -> Result<SgTable> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(line) => line.map_err(CacheError::from)?,
        None => return Err(CacheError::MalformedHeader("empty file".into()).into()),
    };
    let (rules, bounds) = parse_header(&header)?;

    let expected: usize = bounds
        .iter()
        .try_fold(1usize, |acc, &b| acc.checked_mul(b as usize + 1))
        .filter(|&c| c as u64 <= super::DEFAULT_CELL_LIMIT)
        .ok_or_else(|| CacheError::MalformedHeader(format!("box {header:?} is too large")))?;
    let width = bounds.len() + 1;
    let mut values = Vec::with_capacity(expected);
    let mut cur = vec![0u64; bounds.len()];
    let mut fields = Vec::with_capacity(width);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line.map_err(CacheError::from)?;
        if values.len() == expected {
            return Err(parse_err(lineno, "unexpected row after the last cell"));
        }
        fields.clear();
        for tok in line.split(' ') {
            let v = tok
                .parse::<u64>()
                .map_err(|_| parse_err(lineno, format!("{tok:?} is not a nonnegative integer")))?;
            fields.push(v);
        }
        if fields.len() != width {
            return Err(parse_err(lineno, format!("expected {width} fields, found {}", fields.len())));
        }
        if fields[..bounds.len()] != cur[..] {
            return Err(parse_err(lineno, format!("row out of order; expected cell {}", join(&cur))));
        }
        let g = u32::try_from(fields[bounds.len()])
            .map_err(|_| parse_err(lineno, "SG value out of range"))?;
        values.push(g);
        advance(&mut cur, &bounds);
    }
    if values.len() != expected {
        return Err(CacheError::Truncated { expected, found: values.len() }.into());
    }

    let table = SgTable::from_parts(rules, bounds, values);
    if let Some((pos, stored, expected)) = table.inconsistencies().into_iter().next() {
        return Err(CacheError::Inconsistent { pos: pos.to_string(), stored, expected }.into());
    }
    Ok(table)
}

fn parse_header(header: &str) -> Result<(GameRules, Vec<u64>), CacheError> {
    let bad = |why: &str| CacheError::MalformedHeader(format!("{why} in {header:?}"));
    let toks: Vec<&str> = header.split(' ').collect();
    if toks.first() != Some(&MAGIC) {
        return Err(bad("missing magic token"));
    }
    match toks.get(1) {
        Some(&VERSION) => {}
        Some(v) => return Err(CacheError::Version { found: v.to_string() }),
        None => return Err(bad("missing version")),
    }
    if toks.len() != 5 {
        return Err(bad("expected 5 fields"));
    }
    let n: usize = toks[3]
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("bad n= field"))?;
    let rules = GameRules::from_token(toks[2], n).map_err(|e| bad(&e.to_string()))?;
    let bounds = toks[4]
        .strip_prefix("box=")
        .ok_or_else(|| bad("bad box= field"))?
        .split(',')
        .map(|s| s.parse::<u64>().map_err(|_| bad("bad box= field")))
        .collect::<Result<Vec<_>, _>>()?;
    if bounds.len() != n + 1 {
        return Err(bad("box dimension does not match n"));
    }
    if !rules.has_extra_pile() && bounds[0] != 0 {
        return Err(bad("x0 bound must be 0 for this variant"));
    }
    Ok((rules, bounds))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    CacheError::Parse { line, message: message.into() }.into()
}

fn advance(cur: &mut [u64], bounds: &[u64]) {
    for i in (0..cur.len()).rev() {
        if cur[i] < bounds[i] {
            cur[i] += 1;
            return;
        }
        cur[i] = 0;
    }
}

fn join(c: &[u64]) -> String {
    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}
