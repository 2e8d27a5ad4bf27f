//! Parsers for the compact flag syntaxes.

use std::path::Path;

use numphase::observables::{ArcSet, ArcSetJson, IndexSet};
use numphase::transport::{ProbCircle, ProbCircleJson, ProbInt, ProbIntJson};
use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn number(s: &str) -> CliResult<f64> {
    let v: f64 = s.trim().parse().map_err(|_| invalid(format!("'{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(invalid(format!("'{s}' is not finite")));
    }
    Ok(v)
}

/// `"a:b a:b ..."` in radians, or `@path` to an ArcSet JSON file.
pub fn arcs(spec: &str) -> CliResult<ArcSet> {
    if let Some(path) = spec.strip_prefix('@') {
        let js: ArcSetJson = read_json(Path::new(path))?;
        return Ok(ArcSet::try_from(js)?);
    }
    let mut pieces = Vec::new();
    for token in spec.split_whitespace() {
        let (a, b) = token.split_once(':').ok_or_else(|| invalid(format!("arc '{token}' is not of the form a:b")))?;
        pieces.push((number(a)?, number(b)?));
    }
    if pieces.is_empty() {
        return Err(invalid("no arcs given"));
    }
    Ok(ArcSet::new(pieces)?)
}

/// `"0,1,5"`; an empty string is the empty set.
pub fn index_set(spec: &str) -> CliResult<IndexSet> {
    let mut out = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        out.push(token.parse::<i64>().map_err(|_| invalid(format!("'{token}' is not an integer")))?);
    }
    Ok(IndexSet::new(out))
}

/// `uniform:N`, `point:θ`, or a path to a ProbCircle JSON file.
pub fn circle_measure(spec: &str) -> CliResult<ProbCircle> {
    if let Some(n) = spec.strip_prefix("uniform:") {
        let n: usize = n.trim().parse().map_err(|_| invalid(format!("bad grid size in '{spec}'")))?;
        if n == 0 || n > crate::config::MAX_GRID {
            return Err(invalid(format!("grid size in '{spec}' outside 1..={}", crate::config::MAX_GRID)));
        }
        return Ok(ProbCircle::uniform_grid(n));
    }
    if let Some(x) = spec.strip_prefix("point:") {
        return Ok(ProbCircle::point(number(x)?));
    }
    let js: ProbCircleJson = read_json(Path::new(spec))?;
    Ok(ProbCircle::try_from(js)?)
}

/// `uniform:N` (on `0..N`), `point:k`, or a path to a ProbInt JSON file.
pub fn int_measure(spec: &str) -> CliResult<ProbInt> {
    if let Some(n) = spec.strip_prefix("uniform:") {
        let n: i64 = n.trim().parse().map_err(|_| invalid(format!("bad support size in '{spec}'")))?;
        if n <= 0 || n as usize > crate::config::MAX_GRID {
            return Err(invalid(format!("support size in '{spec}' outside 1..={}", crate::config::MAX_GRID)));
        }
        return Ok(ProbInt::new((0..n).map(|k| (k, 1.0 / n as f64)))?);
    }
    if let Some(k) = spec.strip_prefix("point:") {
        let k: i64 = k.trim().parse().map_err(|_| invalid(format!("'{k}' is not an integer")))?;
        return Ok(ProbInt::point(k));
    }
    let js: ProbIntJson = read_json(Path::new(spec))?;
    Ok(ProbInt::try_from(js)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}
