//! Plain-text polytope and basis files, plus their JSON mirrors.
//!
//! ```text
//! H 2 4          V 2 4          B 2
//! 1 0 1          1 1            1 0
//! -1 0 1         -1 1           0 1
//! 0 1 1          1 -1
//! 0 -1 1         -1 -1
//! ```
//!
//! Rationals are `p/q` or `p`. Blank lines and lines starting with `#` are
//! ignored.

use std::fmt;

use serde_json::{json, Value};

use crate::polytope::{HRep, Halfspace, Polytope, VRep};
use crate::ratgeom::{format_rational, parse_rational, QVector, Rational};
use crate::symmetry::OrthoBasis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    H,
    V,
}

impl Kind {
    pub fn tag(self) -> &'static str {
        match self {
            Kind::H => "H",
            Kind::V => "V",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeFile {
    H(HRep),
    V(VRep),
}

impl PolytopeFile {
    pub fn kind(&self) -> Kind {
        match self {
            PolytopeFile::H(_) => Kind::H,
            PolytopeFile::V(_) => Kind::V,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PolytopeFile::H(h) => h.dim(),
            PolytopeFile::V(v) => v.dim(),
        }
    }

    /// Rows as written: `normal..., offset` for H, coordinates for V.
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        match self {
            PolytopeFile::H(h) => h
                .halfspaces()
                .iter()
                .map(|hs| {
                    let mut r = hs.normal().coords().to_vec();
                    r.push(hs.offset().clone());
                    r
                })
                .collect(),
            PolytopeFile::V(v) => v.vertices().iter().map(|p| p.coords().to_vec()).collect(),
        }
    }

    pub fn build(&self) -> crate::error::Result<Polytope> {
        match self {
            PolytopeFile::H(h) => Polytope::from_hrep(h),
            PolytopeFile::V(v) => Polytope::from_vrep(v),
        }
    }

    pub fn to_text(&self) -> String {
        let rows = self.rows();
        let mut out = format!("{} {} {}\n", self.kind().tag(), self.dim(), rows.len());
        for r in rows {
            let cells: Vec<String> = r.iter().map(format_rational).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        json!({ "kind": self.kind().tag(), "dim": self.dim(), "rows": rows })
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Nonblank, non-comment lines as token lists.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut toks = Vec::new();
        let mut start = None;
        for (pos, ch) in line
            .char_indices()
            .chain(std::iter::once((line.len(), ' ')))
        {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    toks.push(Token {
                        text: &line[s..pos],
                        line: i + 1,
                        column: line[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            lines.push(toks);
        }
    }
    lines
}

fn parse_count(t: &Token<'_>, what: &str) -> Result<usize, ParseError> {
    t.text.parse::<usize>().map_err(|_| {
        err(
            t.line,
            t.column,
            format!("expected {what}, found {:?}", t.text),
        )
    })
}

fn parse_row(toks: &[Token<'_>], expected: usize) -> Result<Vec<Rational>, ParseError> {
    if toks.len() != expected {
        let t = toks.get(expected).unwrap_or(&toks[toks.len() - 1]);
        return Err(err(
            t.line,
            t.column,
            format!("expected {expected} values, found {}", toks.len()),
        ));
    }
    toks.iter()
        .map(|t| parse_rational(t.text).map_err(|m| err(t.line, t.column, m)))
        .collect()
}

/// Splits into header tokens and data lines, checking the declared count.
fn split_sections<'a>(
    lines: &'a [Vec<Token<'a>>],
    header_len: usize,
) -> Result<(&'a [Token<'a>], &'a [Vec<Token<'a>>]), ParseError> {
    let header = lines.first().ok_or_else(|| err(1, 1, "empty file"))?;
    if header.len() != header_len {
        let t = &header[header.len().min(header_len) - 1];
        return Err(err(
            t.line,
            t.column,
            format!("header must have {header_len} fields"),
        ));
    }
    Ok((header, &lines[1..]))
}

fn check_row_count(
    data: &[Vec<Token<'_>>],
    m: usize,
    header: &[Token<'_>],
) -> Result<(), ParseError> {
    if data.len() < m {
        let t = data.last().map(|l| &l[0]).unwrap_or(&header[0]);
        return Err(err(
            t.line + 1,
            1,
            format!("expected {m} rows, found {}", data.len()),
        ));
    }
    if data.len() > m {
        let t = &data[m][0];
        return Err(err(
            t.line,
            t.column,
            format!("unexpected extra row (header declares {m})"),
        ));
    }
    Ok(())
}

pub fn parse_polytope(text: &str) -> Result<PolytopeFile, ParseError> {
    let lines = tokenize(text);
    let (header, data) = split_sections(&lines, 3)?;
    let kind = match header[0].text {
        "H" => Kind::H,
        "V" => Kind::V,
        other => {
            return Err(err(
                header[0].line,
                header[0].column,
                format!("expected H or V, found {other:?}"),
            ));
        }
    };
    let d = parse_count(&header[1], "dimension")?;
    if d == 0 {
        return Err(err(
            header[1].line,
            header[1].column,
            "dimension must be at least 1",
        ));
    }
    let m = parse_count(&header[2], "row count")?;
    check_row_count(data, m, header)?;

    match kind {
        Kind::H => {
            let mut hs = Vec::with_capacity(m);
            for toks in data {
                let mut row = parse_row(toks, d + 1)?;
                let offset = row.pop().expect("d + 1 >= 2 values");
                let h = Halfspace::new(QVector::new(row), offset)
                    .map_err(|e| err(toks[0].line, toks[0].column, e.to_string()))?;
                hs.push(h);
            }
            Ok(PolytopeFile::H(
                HRep::new(d, hs).expect("rows have length d"),
            ))
        }
        Kind::V => {
            let pts = data
                .iter()
                .map(|toks| parse_row(toks, d).map(QVector::new))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PolytopeFile::V(
                VRep::new(d, pts).expect("rows have length d"),
            ))
        }
    }
}

/// Parses a basis without validating orthogonality, so a bad basis is
/// reported by the symmetry check rather than rejected here.
pub fn parse_basis(text: &str) -> Result<OrthoBasis, ParseError> {
    let lines = tokenize(text);
    let (header, data) = split_sections(&lines, 2)?;
    if header[0].text != "B" {
        return Err(err(
            header[0].line,
            header[0].column,
            format!("expected B, found {:?}", header[0].text),
        ));
    }
    let d = parse_count(&header[1], "dimension")?;
    if d == 0 {
        return Err(err(
            header[1].line,
            header[1].column,
            "dimension must be at least 1",
        ));
    }
    check_row_count(data, d, header)?;
    let vectors = data
        .iter()
        .map(|toks| parse_row(toks, d).map(QVector::new))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrthoBasis::new_unchecked(vectors))
}

pub fn basis_to_text(b: &OrthoBasis) -> String {
    let mut out = format!("B {}\n", b.dim());
    for v in b.vectors() {
        let cells: Vec<String> = v.coords().iter().map(format_rational).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::cube;
    use crate::ratgeom::ratio;

    #[test]
    fn parses_both_kinds() {
        let h = parse_polytope("H 2 4\n1 0 1\n-1 0 1\n0 1 1\n0 -1 1\n").unwrap();
        assert_eq!(h.build().unwrap(), cube(2).unwrap());
        let v = parse_polytope("# square\nV 2 4\n\n1 1\n-1 1\n1 -1\n-1/1 -2/2\n").unwrap();
        assert_eq!(v.build().unwrap(), cube(2).unwrap());
    }

    #[test]
    fn text_roundtrip() {
        let f = PolytopeFile::H(cube(3).unwrap().hrep().clone());
        assert_eq!(parse_polytope(&f.to_text()).unwrap(), f);
        let v = PolytopeFile::V(
            VRep::new(
                1,
                vec![
                    QVector::new(vec![ratio(-3, 7)]),
                    QVector::new(vec![ratio(3, 7)]),
                ],
            )
            .unwrap(),
        );
        assert_eq!(v.to_text(), "V 1 2\n-3/7\n3/7\n");
    }

    #[test]
    fn json_mirror() {
        let v = PolytopeFile::V(VRep::new(1, vec![QVector::new(vec![ratio(1, 2)])]).unwrap());
        assert_eq!(
            v.to_json().to_string(),
            r#"{"dim":1,"kind":"V","rows":[["1/2"]]}"#
        );
    }

    #[test]
    fn diagnostics_point_at_the_problem() {
        let e = parse_polytope("H 2 2\n1 0 1\n0 x 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_polytope("H 2 1\n1 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_polytope("Q 2 1\n1 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_polytope("V 2 1\n1 0\n2 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        let e = parse_polytope("V 2 3\n1 0\n").unwrap_err();
        assert!(e.message.contains("expected 3 rows"));
        let e = parse_polytope("H 2 1\n0 0 1\n").unwrap_err();
        assert!(e.message.contains("nonzero"));
        let e = parse_polytope("V 2 1\n  1 1/0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(parse_polytope("").is_err());
    }

    #[test]
    fn basis_files() {
        let b = parse_basis("B 2\n1 1\n1 -1\n").unwrap();
        assert_eq!(b.vectors()[1], QVector::from_ints(&[1, -1]));
        assert_eq!(parse_basis(&basis_to_text(&b)).unwrap(), b);
        assert!(parse_basis("B 2\n1 0\n").is_err());
        assert!(parse_basis("X 2\n1 0\n0 1\n").is_err());
    }
}
