//! CSV interchange formats.
//!
//! Matrices are written as `r,j,value`, one line per lower-triangular cell,
//! `r` ascending then `j` ascending. Studies are written as
//! `index,x,e,p,is_null` with a 1-based index and `is_null` as `0`/`1`.
//!
//! Numbers use the shortest decimal that parses back to the same `f64`;
//! magnitudes outside `[1e-5, 1e16)` switch to exponent notation, and
//! `+∞` is written `inf`.

use crate::discovery::TriMatrix;
use crate::error::{Error, Result};
use crate::sim::SimOutput;

pub const MATRIX_HEADER: &str = "r,j,value";
pub const STUDY_HEADER: &str = "index,x,e,p,is_null";

/// Shortest round-trip decimal for `v`.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn parse_f64(field: &str, line: usize, name: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(line, format!("{name}: cannot parse {field:?} as a number")))
}

fn parse_index(field: &str, line: usize, name: &str) -> Result<usize> {
    field
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("{name}: cannot parse {field:?} as an index")))
}

/// Non-blank lines with 1-based line numbers, header checked.
fn body<'a>(text: &'a str, header: &str) -> Result<impl Iterator<Item = (usize, &'a str)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == header => Ok(lines),
        Some((n, h)) => Err(Error::parse(n, format!("expected header {header:?}, found {h:?}"))),
        None => Err(Error::parse(1, "empty input")),
    }
}

fn fields<const N: usize>(line: &str, n: usize) -> Result<[&str; N]> {
    let parts: Vec<&str> = line.split(',').collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| Error::parse(n, format!("expected {N} fields, found {}", p.len())))
}

pub fn matrix_to_csv(m: impl AsRef<TriMatrix>) -> String {
    let m = m.as_ref();
    let mut out = String::with_capacity(16 * m.values().len() + 16);
    out.push_str(MATRIX_HEADER);
    out.push('\n');
    for (r, j, v) in m.iter() {
        out.push_str(&format!("{r},{j},{}\n", format_value(v)));
    }
    out
}

/// Parse a matrix CSV. Cells must be complete, in canonical order, and
/// nonnegative.
pub fn parse_matrix_csv(text: &str) -> Result<TriMatrix> {
    let mut data = Vec::new();
    let (mut next_r, mut next_j) = (1usize, 1usize);
    let mut last_line = 1;
    for (n, line) in body(text, MATRIX_HEADER)? {
        last_line = n;
        let [r, j, v] = fields::<3>(line, n)?;
        let r = parse_index(r, n, "r")?;
        let j = parse_index(j, n, "j")?;
        if (r, j) != (next_r, next_j) {
            return Err(Error::parse(
                n,
                format!("expected cell ({next_r},{next_j}), found ({r},{j})"),
            ));
        }
        let v = parse_f64(v, n, "value")?;
        if v.is_nan() || v < 0.0 {
            return Err(Error::parse(n, format!("value must be nonnegative, found {v}")));
        }
        data.push(v);
        if j == r {
            next_r += 1;
            next_j = 1;
        } else {
            next_j += 1;
        }
    }
    if next_j != 1 {
        return Err(Error::parse(last_line, format!("row {next_r} is incomplete")));
    }
    let k = next_r - 1;
    if k == 0 {
        return Err(Error::parse(last_line, "matrix has no cells"));
    }
    Ok(TriMatrix::from_rows(k, data).expect("complete rows"))
}

/// One row of the study CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRecord {
    pub index: usize,
    pub x: f64,
    pub e: f64,
    pub p: f64,
    pub is_null: bool,
}

pub fn study_records(out: &SimOutput) -> Vec<StudyRecord> {
    (0..out.len())
        .map(|k| StudyRecord {
            index: k + 1,
            x: out.x[k],
            e: out.e.as_slice()[k],
            p: out.p[k],
            is_null: out.is_null[k],
        })
        .collect()
}

pub fn study_to_csv(out: &SimOutput) -> String {
    let mut csv = String::from(STUDY_HEADER);
    csv.push('\n');
    for rec in study_records(out) {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            rec.index,
            format_value(rec.x),
            format_value(rec.e),
            format_value(rec.p),
            u8::from(rec.is_null)
        ));
    }
    csv
}

pub fn parse_study_csv(text: &str) -> Result<Vec<StudyRecord>> {
    let mut records = Vec::new();
    for (n, line) in body(text, STUDY_HEADER)? {
        let [index, x, e, p, is_null] = fields::<5>(line, n)?;
        let index = parse_index(index, n, "index")?;
        if index != records.len() + 1 {
            return Err(Error::parse(
                n,
                format!("expected index {}, found {index}", records.len() + 1),
            ));
        }
        let x = parse_f64(x, n, "x")?;
        let e = parse_f64(e, n, "e")?;
        let p = parse_f64(p, n, "p")?;
        if e.is_nan() || e < 0.0 {
            return Err(Error::parse(n, format!("e must be nonnegative, found {e}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::parse(n, format!("p must lie in [0, 1], found {p}")));
        }
        let is_null = match is_null.trim() {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(n, format!("is_null must be 0 or 1, found {other:?}"))),
        };
        records.push(StudyRecord {
            index,
            x,
            e,
            p,
            is_null,
        });
    }
    if records.is_empty() {
        return Err(Error::Empty);
    }
    Ok(records)
}
