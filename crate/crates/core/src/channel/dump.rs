//! Plain-text dump of a [`LinkSet`] realisation.
//!
//! ```text
//! ris-ce-links v1
//! n_subcarriers 192
//! cir ug 6
//! <re> <im> <theta>
//! ...
//! cir ur 0 6
//! ...
//! cir rg 0 6
//! ...
//! ```
//!
//! Values are written with Rust's shortest round-trip float formatting, so a
//! dump reads back bit-exactly. Blank lines and lines starting with `#` are
//! ignored.

use std::fmt::Write;

use num_complex::Complex64;

use super::{Cir, LinkSet};
use crate::{Error, Result};

const MAGIC: &str = "ris-ce-links v1";

fn write_cir(out: &mut String, header: &str, cir: &Cir) {
    writeln!(out, "cir {header} {}", cir.len()).unwrap();
    for (t, a) in cir.taps.iter().zip(&cir.doppler_angles) {
        writeln!(out, "{:e} {:e} {:e}", t.re, t.im, a).unwrap();
    }
}

pub fn write_links(links: &LinkSet) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "n_subcarriers {}", links.n_subcarriers()).unwrap();
    write_cir(&mut out, "ug", links.h_ug());
    for (m, c) in links.h_ur().iter().enumerate() {
        write_cir(&mut out, &format!("ur {m}"), c);
    }
    for (m, c) in links.h_rg().iter().enumerate() {
        write_cir(&mut out, &format!("rg {m}"), c);
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((i + 1, line.split_whitespace().collect()));
        }
        None
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Dump {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| err(line, format!("bad number {s:?}")))
}

pub fn read_links(text: &str) -> Result<LinkSet> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    match lines.next() {
        Some((_, f)) if f.join(" ") == MAGIC => {}
        Some((l, _)) => return Err(err(l, "missing header")),
        None => return Err(err(0, "empty dump")),
    }
    let n = match lines.next() {
        Some((l, f)) if f.len() == 2 && f[0] == "n_subcarriers" => num(l, f[1])?,
        Some((l, _)) => return Err(err(l, "expected n_subcarriers")),
        None => return Err(err(0, "truncated dump")),
    };

    let mut ug = None;
    let mut ur: Vec<(usize, Cir)> = Vec::new();
    let mut rg: Vec<(usize, Cir)> = Vec::new();
    while let Some((l, f)) = lines.next() {
        if f.first() != Some(&"cir") {
            return Err(err(l, "expected `cir` record"));
        }
        let (kind, index, count) = match f.as_slice() {
            ["cir", "ug", c] => ("ug", 0, num::<usize>(l, c)?),
            ["cir", k @ ("ur" | "rg"), m, c] => (*k, num(l, m)?, num(l, c)?),
            _ => return Err(err(l, "malformed `cir` record")),
        };
        let mut taps = Vec::with_capacity(count);
        let mut angles = Vec::with_capacity(count);
        for _ in 0..count {
            let (tl, v) = lines.next().ok_or_else(|| err(l, "truncated tap list"))?;
            if v.len() != 3 {
                return Err(err(tl, "tap line needs re im theta"));
            }
            taps.push(Complex64::new(num(tl, v[0])?, num(tl, v[1])?));
            angles.push(num(tl, v[2])?);
        }
        let cir = Cir::new(taps, angles);
        match kind {
            "ug" => ug = Some(cir),
            "ur" => ur.push((index, cir)),
            _ => rg.push((index, cir)),
        }
    }
    let ug = ug.ok_or_else(|| err(0, "missing direct link"))?;
    let order = |mut v: Vec<(usize, Cir)>| -> Result<Vec<Cir>> {
        v.sort_by_key(|(i, _)| *i);
        if v.iter().enumerate().any(|(k, (i, _))| k != *i) {
            return Err(err(0, "sub-surface indices not contiguous"));
        }
        Ok(v.into_iter().map(|(_, c)| c).collect())
    };
    LinkSet::new(n, ug, order(ur)?, order(rg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{gen_links, AngleModel};
    use crate::config::reference_preset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_bit_exact() {
        let cfg = reference_preset();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let links = gen_links(&cfg, AngleModel::SharedPerTap, &mut rng);
        let text = write_links(&links);
        let back = read_links(&text).unwrap();
        assert_eq!(back.h_ug(), links.h_ug());
        assert_eq!(back.h_ur(), links.h_ur());
        assert_eq!(back.h_rg(), links.h_rg());
        assert_eq!(write_links(&back), text);
    }

    #[test]
    fn golden_two_subsurface_dump() {
        let text = "ris-ce-links v1\nn_subcarriers 4\n# comment\ncir ug 1\n1 0 0\n\
                    cir ur 1 1\n0 1 1.5\ncir ur 0 1\n1 0 0\ncir rg 0 1\n1 0 0\ncir rg 1 1\n2 0 0\n";
        let links = read_links(text).unwrap();
        assert_eq!(links.n_subsurfaces(), 2);
        assert_eq!(links.h_ur()[1].taps[0], Complex64::new(0.0, 1.0));
        assert_eq!(links.cascade_cfr()[[3, 1]], Complex64::new(0.0, 2.0));
    }

    #[test]
    fn truncated_dump_reports_line() {
        let text = "ris-ce-links v1\nn_subcarriers 4\ncir ug 2\n1 0 0\n";
        assert!(matches!(read_links(text), Err(Error::Dump { .. })));
        assert!(read_links("nonsense").is_err());
    }
}
