//! Plain-text formats for elements, polynomials, words, erasure side
//! information and decoder verdicts.
//!
//! An element is the decimal integer `sum_i c_i q^i` of its coordinates.
//! A polynomial is a whitespace-separated list of elements, lowest q-degree
//! first; `0` is the zero polynomial.

use std::fmt::Write as _;

use crate::channel::ErasureInfo;
use crate::codes::{MessageTuple, WordMatrix};
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::interp::DecodeOutcome;
use crate::linalg::Matrix;
use crate::linpoly::LinPoly;

pub fn parse_elem(field: &Field, tok: &str) -> Result<Elem> {
    let v: u64 = tok
        .parse()
        .map_err(|_| Error::Parse(format!("bad element token {tok:?}")))?;
    field.elem(v)
}

pub fn parse_poly(field: &Field, line: &str) -> Result<LinPoly> {
    Ok(LinPoly::new(
        line.split_whitespace()
            .map(|t| parse_elem(field, t))
            .collect::<Result<_>>()?,
    ))
}

pub fn format_poly(p: &LinPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    join(p.coeffs())
}

fn join(elems: &[Elem]) -> String {
    elems
        .iter()
        .map(|e| e.0.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Exactly `s` polynomial lines.
pub fn parse_messages(field: &Field, text: &str, s: usize) -> Result<MessageTuple> {
    let polys = content_lines(text)
        .map(|l| parse_poly(field, l))
        .collect::<Result<Vec<_>>>()?;
    if polys.len() != s {
        return Err(Error::Parse(format!(
            "expected {s} message polynomials, found {}",
            polys.len()
        )));
    }
    Ok(MessageTuple::new(polys))
}

pub fn format_messages(msg: &MessageTuple) -> String {
    msg.polys.iter().map(|p| format_poly(p) + "\n").collect()
}

/// Header of a word file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordHeader {
    pub q: u32,
    pub m: usize,
    pub s: usize,
    pub n: usize,
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::Parse(format!("bad {what} {tok:?}")))
}

/// Header line `q m s n`, then `s` lines of `n` elements.
pub fn parse_word(text: &str) -> Result<(WordHeader, Field, WordMatrix)> {
    let mut lines = content_lines(text);
    let mut head = lines
        .next()
        .ok_or_else(|| Error::Parse("empty word file".into()))?
        .split_whitespace();
    let header = WordHeader {
        q: parse_num(head.next(), "q")?,
        m: parse_num(head.next(), "m")?,
        s: parse_num(head.next(), "s")?,
        n: parse_num(head.next(), "n")?,
    };
    if head.next().is_some() {
        return Err(Error::Parse("word header has more than four fields".into()));
    }
    let field = Field::new(header.q, header.m)?;
    let rows = lines
        .map(|l| {
            l.split_whitespace()
                .map(|t| parse_elem(&field, t))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != header.s || rows.iter().any(|r| r.len() != header.n) {
        return Err(Error::Parse(format!(
            "expected {} rows of {} elements",
            header.s, header.n
        )));
    }
    Ok((header, field, Matrix::from_rows(rows)))
}

pub fn format_word(field: &Field, w: &WordMatrix) -> String {
    let mut out = format!("{} {} {} {}\n", field.q(), field.m(), w.rows(), w.cols());
    for r in 0..w.rows() {
        out.push_str(&join(w.row(r)));
        out.push('\n');
    }
    out
}

/// Header `s gamma rho_1 .. rho_s`, then `gamma` rows of `n` base-field
/// digits, then `rho_i` elements for each row `i`. Tokens may be split over
/// lines freely, so an empty row-erasure set can be an empty line.
pub fn parse_erasures(field: &Field, text: &str, n: usize) -> Result<ErasureInfo> {
    let mut toks = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace);
    let s: usize = parse_num(toks.next(), "s")?;
    let gamma: usize = parse_num(toks.next(), "gamma")?;
    let rho = (0..s)
        .map(|_| parse_num::<usize>(toks.next(), "rho"))
        .collect::<Result<Vec<_>>>()?;
    let mut b_col = Matrix::zeros(gamma, n);
    for r in 0..gamma {
        for c in 0..n {
            let d: u32 = parse_num(toks.next(), "column-erasure digit")?;
            if d >= field.q() {
                return Err(Error::Parse(format!("digit {d} is not below q = {}", field.q())));
            }
            b_col.set(r, c, Elem(d));
        }
    }
    let a_row = rho
        .iter()
        .map(|&len| {
            (0..len)
                .map(|_| {
                    let tok = toks
                        .next()
                        .ok_or_else(|| Error::Parse("missing row-erasure element".into()))?;
                    parse_elem(field, tok)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = toks.next() {
        return Err(Error::Parse(format!("trailing token {extra:?} in erasure file")));
    }
    Ok(ErasureInfo { a_row, b_col })
}

pub fn format_erasures(info: &ErasureInfo) -> String {
    let mut out = format!("{} {}", info.a_row.len(), info.gamma());
    for r in info.rho() {
        let _ = write!(out, " {r}");
    }
    out.push('\n');
    for r in 0..info.gamma() {
        out.push_str(&join(info.b_col.row(r)));
        out.push('\n');
    }
    for a in &info.a_row {
        out.push_str(&join(a));
        out.push('\n');
    }
    out
}

/// Verdict line, then the message polynomials.
pub fn format_outcome(outcome: &DecodeOutcome) -> String {
    match outcome {
        DecodeOutcome::Unique(m) => format!("unique\n{}", format_messages(m)),
        DecodeOutcome::List(l) => {
            let mut out = format!("list {}\n", l.len());
            for m in l {
                out.push_str(&format_messages(m));
            }
            out
        }
        DecodeOutcome::Failure(r) => format!("failure {r}\n"),
    }
}
