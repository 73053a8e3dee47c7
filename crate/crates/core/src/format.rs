//! The plain-text matrix file format.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! DN 3 2
//! 2 3
//! 1 0 1
//! 1 1 0
//! ```
//!
//! Line one names the nearfield, line two gives `k m`, then `k` rows of `m`
//! whitespace-separated element tokens in either style.

use crate::error::{Error, Result};
use crate::nearfield::{Nearfield, Style};
use crate::nvspace::NfMatrix;

struct Lines<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        Lines { inner: Box::new(inner) }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next()
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Reads the `DN q n` header.
pub fn parse_header(text: &str) -> Result<(u64, u64)> {
    let mut lines = Lines::new(text);
    let (no, line) = lines.next().ok_or_else(|| parse_err(0, "empty file"))?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.as_slice() {
        ["DN", q, n] => {
            let q = q.parse().map_err(|_| parse_err(no, format!("bad q {q:?}")))?;
            let n = n.parse().map_err(|_| parse_err(no, format!("bad n {n:?}")))?;
            Ok((q, n))
        }
        _ => Err(parse_err(no, "expected header `DN <q> <n>`")),
    }
}

/// Parses a matrix over `nf`; the header must name `nf`.
pub fn parse_matrix(text: &str, nf: &Nearfield) -> Result<NfMatrix> {
    let (q, n) = parse_header(text)?;
    if (q, n) != (nf.q(), nf.n()) {
        return Err(parse_err(
            1,
            format!("header mismatch: file is DN {q} {n}, expected DN {} {}", nf.q(), nf.n()),
        ));
    }
    let mut lines = Lines::new(text);
    lines.next();
    let (no, dims) = lines.next().ok_or_else(|| parse_err(0, "missing `k m` line"))?;
    let dims: Vec<usize> = dims
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(no, format!("bad dimension {t:?}"))))
        .collect::<Result<_>>()?;
    let [k, m] = dims[..] else {
        return Err(parse_err(no, "expected `k m`"));
    };
    if k == 0 {
        return Err(parse_err(no, "no rows"));
    }
    if m == 0 {
        return Err(parse_err(no, "no columns"));
    }
    let mut rows = Vec::with_capacity(k);
    while let Some((no, line)) = lines.next() {
        if rows.len() == k {
            return Err(parse_err(no, format!("more than {k} rows")));
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != m {
            return Err(parse_err(no, format!("row has {} entries, expected {m}", toks.len())));
        }
        let row = nf.parse_vector(&toks).map_err(|e| parse_err(no, e.to_string()))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(no, "no rows"));
    }
    if rows.len() != k {
        return Err(parse_err(no, format!("expected {k} rows, found {}", rows.len())));
    }
    NfMatrix::new(m, rows)
}

/// Builds the nearfield named in the header, then parses the matrix.
pub fn load_matrix(text: &str, max_order: u64) -> Result<(Nearfield, NfMatrix)> {
    let (q, n) = parse_header(text)?;
    let nf = Nearfield::build(q, n, max_order)?;
    let m = parse_matrix(text, &nf)?;
    Ok((nf, m))
}

/// Renders a matrix file. Each comment is written as its own `# ` line.
pub fn format_matrix(nf: &Nearfield, m: &NfMatrix, style: Style, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("DN {} {}\n{} {}\n", nf.q(), nf.n(), m.nrows(), m.ncols()));
    for row in m.rows() {
        let toks: Vec<String> = row.entries().iter().map(|&a| nf.format_elem(a, style)).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}
