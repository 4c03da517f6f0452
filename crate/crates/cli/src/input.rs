//! Reading records: either a weight system line or a matrix header followed by coordinates.

use std::io::BufRead;

use latpoly::cws::Cws;
use latpoly::Point;

use crate::{CliError, Console};

#[derive(Clone, Debug)]
pub enum RecordKind {
    Cws(Cws),
    Matrix { points: Vec<Point>, dim: usize },
}

#[derive(Clone, Debug)]
pub struct Record {
    pub kind: RecordKind,
    /// Line of the record header, 1-based.
    pub line: usize,
}

pub struct Reader<'a> {
    src: Box<dyn BufRead + 'a>,
    line: usize,
    /// Unconsumed tokens of the current line with their 1-based columns.
    pending: Vec<(usize, String)>,
}

impl<'a> Reader<'a> {
    pub fn new(src: Box<dyn BufRead + 'a>) -> Self {
        Reader {
            src,
            line: 0,
            pending: Vec::new(),
        }
    }

    /// Number of lines read so far.
    pub fn line(&self) -> usize {
        self.line
    }

    fn next_line(&mut self) -> Result<Option<String>, CliError> {
        let mut s = String::new();
        let n = self.src.read_line(&mut s).map_err(CliError::Io)?;
        if n == 0 {
            return Ok(None);
        }
        self.line += 1;
        Ok(Some(s.trim_end_matches(['\n', '\r']).to_string()))
    }

    fn parse_err(&self, col: usize, msg: impl Into<String>) -> CliError {
        CliError::Parse {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    /// Next record, `None` at end of input or on an empty line.
    pub fn read_record(&mut self, ratio: i64, console: &mut Console) -> Result<Option<Record>, CliError> {
        self.pending.clear();
        let Some(text) = self.next_line()? else {
            return Ok(None);
        };
        if text.trim().is_empty() {
            return Ok(None);
        }
        let line = self.line;
        let header: Vec<i64> = text
            .split_whitespace()
            .map_while(|t| t.parse::<i64>().ok())
            .collect();
        if header.len() == 2 && !text.contains("/Z") {
            let (a, b) = (header[0], header[1]);
            if a <= 0 || b <= 0 {
                return Err(self.parse_err(1, "matrix dimensions must be positive"));
            }
            let (a, b) = (a as usize, b as usize);
            let transposed = a <= b;
            if transposed {
                console.prompt(&format!(
                    "Type the {} coordinates as dim={a} lines with #pts={b} columns:\n",
                    a * b
                ));
            } else {
                console.prompt(&format!(
                    "Type the {} coordinates as #pts={a} lines with dim={b} columns:\n",
                    a * b
                ));
            }
            let mut vals = Vec::with_capacity(a * b);
            while vals.len() < a * b {
                vals.push(self.int_token("matrix entry")?);
            }
            self.pending.clear();
            let (np, dim) = if transposed { (b, a) } else { (a, b) };
            let points = (0..np)
                .map(|i| {
                    (0..dim)
                        .map(|j| if transposed { vals[j * np + i] } else { vals[i * dim + j] })
                        .collect()
                })
                .collect();
            return Ok(Some(Record {
                kind: RecordKind::Matrix { points, dim },
                line,
            }));
        }
        let body = cws_text(&text);
        if body.is_empty() {
            let (col, t) = tokens_with_columns(&text).remove(0);
            return Err(self.parse_err(col, format!("expected degree or matrix header, found `{t}`")));
        }
        match Cws::parse_with_ratio(&body, ratio) {
            Ok(c) => Ok(Some(Record {
                kind: RecordKind::Cws(c),
                line,
            })),
            Err(e) => Err(self.parse_err(1, e.to_string())),
        }
    }

    /// Next integer token, reading further lines as needed.
    pub fn int_token(&mut self, what: &str) -> Result<i64, CliError> {
        let (col, t) = self.token(what)?;
        t.parse::<i64>()
            .map_err(|_| self.parse_err(col, format!("expected integer {what}, found `{t}`")))
    }

    /// Next whitespace separated token, reading further lines as needed.
    pub fn token(&mut self, what: &str) -> Result<(usize, String), CliError> {
        loop {
            if !self.pending.is_empty() {
                return Ok(self.pending.remove(0));
            }
            match self.next_line()? {
                None => return Err(self.parse_err(1, format!("unexpected end of input, expected {what}"))),
                Some(l) => self.pending = tokens_with_columns(&l),
            }
        }
    }
}

/// The weight system part of a line: integer tokens and `/Z` quotient groups,
/// stopping at the first other token.
fn cws_text(line: &str) -> String {
    let mut out = Vec::new();
    for t in line.split_whitespace() {
        let is_quot = t.starts_with("/Z") && t.ends_with(':') && t[2..t.len() - 1].parse::<i64>().is_ok();
        if t.parse::<i64>().is_ok() || is_quot {
            out.push(t);
        } else {
            break;
        }
    }
    out.join(" ")
}

fn tokens_with_columns(line: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, line[s..i].to_string()));
                start = None;
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read_all(text: &str) -> Result<Vec<Record>, CliError> {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut console = Console::new(&mut out, &mut err, false);
        let mut r = Reader::new(Box::new(text.as_bytes()));
        let mut recs = Vec::new();
        while let Some(rec) = r.read_record(1, &mut console)? {
            recs.push(rec);
        }
        Ok(recs)
    }

    #[test]
    fn matrix_orientations() {
        let recs = read_all("3 2\n1 0\n0 1\n-1 -1\n2 3 trailing text\n1 0 -1\n0 1 -1\n").unwrap();
        assert_eq!(recs.len(), 2);
        for r in &recs {
            match &r.kind {
                RecordKind::Matrix { points, dim } => {
                    assert_eq!(*dim, 2);
                    assert_eq!(points, &vec![vec![1, 0], vec![0, 1], vec![-1, -1]]);
                }
                _ => panic!("expected matrix"),
            }
        }
    }

    #[test]
    fn weights_with_quotient_and_trailing_text() {
        let recs = read_all("5 1 1 1 1 1 /Z5: 0 1 2 3 4 quintic\n\n6 1 2 3\n").unwrap();
        assert_eq!(recs.len(), 1);
        match &recs[0].kind {
            RecordKind::Cws(c) => assert_eq!(c.to_string(), "5 1 1 1 1 1 /Z5: 0 1 2 3 4"),
            _ => panic!("expected weights"),
        }
    }

    #[test]
    fn bad_entry_reports_position() {
        match read_all("2 2\n1 x\n") {
            Err(CliError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_all("3 2\n1 0\n"), Err(CliError::Parse { .. })));
    }
}
