//! Plain-text family files.
//!
//! One set per line as comma separated ascending integers (`0,2,5`). Blank
//! lines and `#` comments are ignored, except for an optional header
//! `# N=<n> k=<k>` which fixes the ambient bound and set size. Without a
//! header both are inferred from the data. A family containing 0 anywhere is
//! read as zero-anchored, i.e. over `[0, N]`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::setcore::KSet;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses `a,b,c` into a strictly increasing list; `line` is 1-based and
/// only used for error messages.
pub fn parse_set_line(text: &str, line: usize) -> Result<Vec<u32>> {
    let elems = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u32>()
                .map_err(|_| parse_err(line, format!("not a non-negative integer: {t:?}")))
        })
        .collect::<Result<Vec<u32>>>()?;
    if elems.windows(2).any(|w| w[0] >= w[1]) {
        return Err(parse_err(line, "elements must be strictly increasing"));
    }
    Ok(elems)
}

/// `(n, k)` from a `# N=<n> k=<k>` comment, if the line is one.
fn parse_header(comment: &str) -> Option<(u32, usize)> {
    let mut n = None;
    let mut k = None;
    for tok in comment.split_whitespace() {
        if let Some(v) = tok.strip_prefix("N=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("k=") {
            k = v.parse().ok();
        }
    }
    Some((n?, k?))
}

pub fn parse_family(text: &str) -> Result<Family> {
    let mut header: Option<(u32, usize)> = None;
    let mut rows: Vec<(usize, Vec<u32>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            if header.is_none() && rows.is_empty() {
                header = parse_header(c);
            }
            continue;
        }
        rows.push((line, parse_set_line(t, line)?));
    }
    let (n, k) = match header {
        Some(h) => h,
        None => {
            let k = rows
                .first()
                .map(|r| r.1.len())
                .ok_or_else(|| parse_err(1, "no sets and no `# N=<n> k=<k>` header"))?;
            let n = rows.iter().filter_map(|r| r.1.last()).copied().max().unwrap_or(0);
            (n, k)
        }
    };
    let mut seen: HashMap<&[u32], usize> = HashMap::new();
    for (line, elems) in &rows {
        if elems.len() != k {
            return Err(parse_err(*line, format!("expected {k} elements, found {}", elems.len())));
        }
        if let Some(&max) = elems.last().filter(|&&m| m > n) {
            return Err(parse_err(*line, format!("element {max} exceeds N={n}")));
        }
        if let Some(first) = seen.insert(elems.as_slice(), *line) {
            return Err(parse_err(*line, format!("duplicate set, first seen on line {first}")));
        }
    }
    let zero_anchored = rows.iter().any(|r| r.1.first() == Some(&0));
    let sets = rows
        .into_iter()
        .map(|(line, e)| KSet::new(e, n).map_err(|err| parse_err(line, err.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Family::new(n, k, zero_anchored, sets)
}

pub fn read_family(path: impl AsRef<Path>) -> Result<Family> {
    parse_family(&fs::read_to_string(path)?)
}

/// Text form with the `# N=<n> k=<k>` header followed by one `# ` line per
/// entry of `comments`.
pub fn format_family(f: &Family, comments: &[String]) -> String {
    let mut out = format!("# N={} k={}\n", f.n(), f.k());
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for s in f {
        let row: Vec<String> = s.elements().iter().map(u32::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_family(f: &Family, path: impl AsRef<Path>, comments: &[String]) -> Result<()> {
    fs::write(path, format_family(f, comments))?;
    Ok(())
}
