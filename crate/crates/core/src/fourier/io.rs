//! Text formats: set files and spectrum dumps.
//!
//! A set file starts with a header line `ZN <N>` or `F2 <n>` followed by one
//! element per line. Cyclic elements are decimal residues. Cube elements are
//! `n`-character strings over {0,1} written in coordinate order, so the first
//! character is x₁ (bit 0 of the mask). Blank lines and `#` comments are
//! ignored.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::group::{Group, GroupSubset};
use crate::fourier::spectrum::Spectrum;

pub fn parse_set_file(text: &str) -> Result<GroupSubset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
    let mut parts = header.split_whitespace();
    let kind = parts.next().unwrap_or("");
    let param: u64 = parts
        .next()
        .ok_or_else(|| Error::Parse { line: hline, message: "header needs a size".into() })?
        .parse()
        .map_err(|e| Error::Parse { line: hline, message: format!("bad size: {e}") })?;
    if parts.next().is_some() {
        return Err(Error::Parse { line: hline, message: "trailing tokens in header".into() });
    }
    let group = match kind {
        "ZN" => Group::cyclic(param)?,
        "F2" => Group::cube(u32::try_from(param).map_err(|_| Error::InvalidParameter("cube dimension".into()))?)?,
        other => return Err(Error::Parse { line: hline, message: format!("unknown group kind {other:?}") }),
    };
    let mut elements = Vec::new();
    for (line, tok) in lines {
        let x = match group {
            Group::Cyclic { .. } => {
                tok.parse::<u64>().map_err(|e| Error::Parse { line, message: format!("bad residue {tok:?}: {e}") })?
            }
            Group::Cube { dim } => parse_bits(tok, dim).ok_or_else(|| Error::Parse {
                line,
                message: format!("expected {dim} binary digits, got {tok:?}"),
            })?,
        };
        if !group.contains(x) {
            return Err(Error::Parse { line, message: format!("element {tok} outside {group}") });
        }
        elements.push(x);
    }
    GroupSubset::new(group, elements)
}

fn parse_bits(tok: &str, dim: u32) -> Option<u64> {
    if tok.len() != dim as usize {
        return None;
    }
    let mut mask = 0u64;
    for (i, c) in tok.chars().enumerate() {
        match c {
            '0' => {}
            '1' => mask |= 1 << i,
            _ => return None,
        }
    }
    Some(mask)
}

/// Coordinate-order bit string of a cube element.
pub fn format_bits(x: u64, dim: u32) -> String {
    (0..dim).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn format_set_file(a: &GroupSubset) -> String {
    let mut out = String::new();
    match a.group() {
        Group::Cyclic { modulus } => {
            out.push_str(&format!("ZN {modulus}\n"));
            for x in a.elements() {
                out.push_str(&format!("{x}\n"));
            }
        }
        Group::Cube { dim } => {
            out.push_str(&format!("F2 {dim}\n"));
            for &x in a.elements() {
                out.push_str(&format_bits(x, dim));
                out.push('\n');
            }
        }
    }
    out
}

pub fn read_set_file(path: impl AsRef<Path>) -> Result<GroupSubset> {
    parse_set_file(&fs::read_to_string(path)?)
}

pub fn write_set_file(path: impl AsRef<Path>, a: &GroupSubset) -> Result<()> {
    fs::write(path, format_set_file(a))?;
    Ok(())
}

#[derive(Serialize)]
struct SpectrumRow {
    r: u64,
    re: f64,
    im: f64,
    abs: f64,
}

/// Writes `r,re,im,abs` rows for every frequency.
pub fn write_spectrum_csv<W: Write>(writer: W, spectrum: &Spectrum) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in 0..spectrum.len() as u64 {
        let z = spectrum.value(r);
        w.serialize(SpectrumRow { r, re: z.re, im: z.im, abs: z.norm() })?;
    }
    w.flush()?;
    Ok(())
}
