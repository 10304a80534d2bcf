//! Text dump of an [`EstimationResult`].
//!
//! ```text
//! ris-ce-estimate v1
//! scheme proposed
//! reference_symbol 1
//! symbols_used 18
//! shape 192 16
//! <re> <im>          # N lines: direct CFR
//! <re> <im> ...      # N lines: one pair per sub-surface
//! ```

use std::fmt::Write;

use ndarray::Array2;
use num_complex::Complex64;

use super::{EstimationResult, Scheme};
use crate::channel::Cfr;
use crate::{Error, Result};

const MAGIC: &str = "ris-ce-estimate v1";

pub fn write_estimate(est: &EstimationResult) -> String {
    let (n, m) = est.h_urg_hat.dim();
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "scheme {}", est.scheme).unwrap();
    writeln!(out, "reference_symbol {}", est.reference_symbol).unwrap();
    writeln!(out, "symbols_used {}", est.symbols_used).unwrap();
    writeln!(out, "shape {n} {m}").unwrap();
    for v in &est.h_ug_hat.values {
        writeln!(out, "{:e} {:e}", v.re, v.im).unwrap();
    }
    for row in est.h_urg_hat.rows() {
        let fields: Vec<String> = row
            .iter()
            .map(|v| format!("{:e} {:e}", v.re, v.im))
            .collect();
        writeln!(out, "{}", fields.join(" ")).unwrap();
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Dump {
        line,
        msg: msg.into(),
    }
}

fn keyed<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<(usize, Vec<&'a str>)> {
    let (l, line) = lines
        .next()
        .ok_or_else(|| err(0, format!("missing `{key}`")))?;
    let mut f = line.split_whitespace();
    if f.next() != Some(key) {
        return Err(err(l, format!("expected `{key}`")));
    }
    Ok((l, f.collect()))
}

fn parse_pairs(l: usize, line: &str, count: usize) -> Result<Vec<Complex64>> {
    let nums: Vec<f64> = line
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| err(l, format!("bad number {s:?}"))))
        .collect::<Result<_>>()?;
    if nums.len() != 2 * count {
        return Err(err(l, format!("expected {count} complex values")));
    }
    Ok(nums.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

pub fn read_estimate(text: &str) -> Result<EstimationResult> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        _ => return Err(err(1, "missing header")),
    }
    let (l, f) = keyed(&mut lines, "scheme")?;
    let scheme = f
        .first()
        .and_then(|s| Scheme::from_name(s))
        .ok_or_else(|| err(l, "unknown scheme"))?;
    let one = |(l, f): (usize, Vec<&str>)| -> Result<usize> {
        f.first()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(l, "expected integer"))
    };
    let reference_symbol = one(keyed(&mut lines, "reference_symbol")?)?;
    let symbols_used = one(keyed(&mut lines, "symbols_used")?)?;
    let (l, f) = keyed(&mut lines, "shape")?;
    let dims: Vec<usize> = f.iter().filter_map(|s| s.parse().ok()).collect();
    let [n, m] = dims[..] else {
        return Err(err(l, "shape needs N and M"));
    };

    let mut ug = Vec::with_capacity(n);
    for _ in 0..n {
        let (l, line) = lines.next().ok_or_else(|| err(0, "truncated direct CFR"))?;
        ug.extend(parse_pairs(l, line, 1)?);
    }
    let mut urg = Array2::zeros((n, m));
    for k in 0..n {
        let (l, line) = lines
            .next()
            .ok_or_else(|| err(0, "truncated cascade CFR"))?;
        for (j, v) in parse_pairs(l, line, m)?.into_iter().enumerate() {
            urg[[k, j]] = v;
        }
    }
    Ok(EstimationResult {
        h_ug_hat: Cfr::new(ug),
        h_urg_hat: urg,
        reference_symbol,
        scheme,
        symbols_used,
    })
}
