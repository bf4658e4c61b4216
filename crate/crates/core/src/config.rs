//! Line-oriented configuration files.
//!
//! ```text
//! # comment
//! chain b=[3,2,2] a=[1,1,2]
//! chain b=[2] a=[1]
//! sweep n=[2,10]
//! ```

use std::fmt;

use crate::error::Error;
use crate::plumbing::{ChainSpec, PlumbingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedLine,
    NonInteger,
    SelfIntersectionTooSmall,
    AmpleDegreeTooSmall,
    LengthMismatch,
    DuplicateSweep,
    InvalidSweepRange,
    NoChains,
}

impl ParseErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParseErrorKind::MalformedLine => "malformed-line",
            ParseErrorKind::NonInteger => "non-integer",
            ParseErrorKind::SelfIntersectionTooSmall => "b-too-small",
            ParseErrorKind::AmpleDegreeTooSmall => "a-too-small",
            ParseErrorKind::LengthMismatch => "length-mismatch",
            ParseErrorKind::DuplicateSweep => "duplicate-sweep",
            ParseErrorKind::InvalidSweepRange => "invalid-sweep",
            ParseErrorKind::NoChains => "no-chains",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {} ({})",
            self.line,
            self.column,
            self.message,
            self.kind.as_str()
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    pub config: PlumbingConfig,
    /// Inclusive `(n_min, n_max)`.
    pub sweep: Option<(u64, u64)>,
}

/// Column of the key, the key, and `(column, value)` per list entry.
type KeyedList = (usize, String, Vec<(usize, u64)>);

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        self.err_at(self.pos, kind, message)
    }

    fn err_at(&self, pos: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.text[..pos].chars().count() + 1,
            kind,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty()
    }

    fn word(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        self.pos += len;
        (start, &self.text[start..self.pos])
    }

    fn expect(&mut self, ch: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.rest().starts_with(ch) {
            self.pos += ch.len_utf8();
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::MalformedLine, format!("expected `{ch}`")))
        }
    }

    /// `[int, int, ...]`; returns each value with its byte offset.
    fn list(&mut self) -> Result<Vec<(usize, u64)>, ParseError> {
        self.expect('[')?;
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if out.is_empty() && self.rest().starts_with(']') {
                self.pos += 1;
                return Ok(out);
            }
            let start = self.pos;
            let len = self
                .rest()
                .find(|c: char| c == ',' || c == ']' || c.is_whitespace())
                .unwrap_or(self.rest().len());
            let token = &self.text[start..start + len];
            if token.is_empty() {
                return Err(self.err(ParseErrorKind::MalformedLine, "expected an integer"));
            }
            let value = match token.parse::<i128>() {
                Ok(v) if v < 0 => 0,
                Ok(v) => u64::try_from(v)
                    .map_err(|_| self.err_at(start, ParseErrorKind::NonInteger, format!("`{token}` is too large")))?,
                Err(_) => {
                    return Err(self.err_at(
                        start,
                        ParseErrorKind::NonInteger,
                        format!("`{token}` is not an integer"),
                    ))
                }
            };
            out.push((start, value));
            self.pos = start + len;
            self.skip_ws();
            if self.rest().starts_with(',') {
                self.pos += 1;
            } else if self.rest().starts_with(']') {
                self.pos += 1;
                return Ok(out);
            } else {
                return Err(self.err(ParseErrorKind::MalformedLine, "expected `,` or `]`"));
            }
        }
    }

    /// `key=[...]` pairs until end of line.
    fn keyed_lists(&mut self, allowed: &[&str]) -> Result<Vec<KeyedList>, ParseError> {
        let mut out: Vec<KeyedList> = Vec::new();
        while !self.at_end() {
            let (start, key) = self.word();
            if !allowed.contains(&key) {
                return Err(self.err_at(
                    start,
                    ParseErrorKind::MalformedLine,
                    format!("unexpected key `{key}`, expected one of {}", allowed.join(", ")),
                ));
            }
            if out.iter().any(|(_, k, _)| k == key) {
                return Err(self.err_at(start, ParseErrorKind::MalformedLine, format!("key `{key}` given twice")));
            }
            self.expect('=')?;
            let values = self.list()?;
            out.push((start, key.to_string(), values));
        }
        for key in allowed {
            if !out.iter().any(|(_, k, _)| k == key) {
                return Err(self.err(ParseErrorKind::MalformedLine, format!("missing `{key}=[...]`")));
            }
        }
        Ok(out)
    }
}

pub fn parse_config(text: &str) -> Result<ConfigFile, ParseError> {
    let mut chains = Vec::new();
    let mut sweep: Option<(u64, u64)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor {
            text: content,
            pos: 0,
            line: line_no,
        };
        if cur.at_end() {
            continue;
        }
        let (start, keyword) = cur.word();
        match keyword {
            "chain" => {
                let lists = cur.keyed_lists(&["b", "a"])?;
                let get = |k: &str| lists.iter().find(|(_, key, _)| key == k).expect("checked");
                let (b_pos, _, b) = get("b");
                let (_, _, a) = get("a");
                if b.is_empty() {
                    return Err(cur.err_at(
                        *b_pos,
                        ParseErrorKind::MalformedLine,
                        "chain must have at least one curve",
                    ));
                }
                if b.len() != a.len() {
                    return Err(cur.err_at(
                        start,
                        ParseErrorKind::LengthMismatch,
                        format!("`b` has {} entries but `a` has {}", b.len(), a.len()),
                    ));
                }
                if let Some(&(pos, v)) = b.iter().find(|(_, v)| *v < 2) {
                    return Err(cur.err_at(
                        pos,
                        ParseErrorKind::SelfIntersectionTooSmall,
                        format!("b must be >= 2, got {v}"),
                    ));
                }
                if let Some(&(pos, v)) = a.iter().find(|(_, v)| *v < 1) {
                    return Err(cur.err_at(
                        pos,
                        ParseErrorKind::AmpleDegreeTooSmall,
                        format!("a must be >= 1, got {v}"),
                    ));
                }
                let spec = ChainSpec::new(b.iter().map(|p| p.1).collect(), a.iter().map(|p| p.1).collect())
                    .map_err(|e| cur.err_at(start, ParseErrorKind::MalformedLine, e.to_string()))?;
                chains.push(spec);
            }
            "sweep" => {
                if sweep.is_some() {
                    return Err(cur.err_at(start, ParseErrorKind::DuplicateSweep, "sweep block given twice"));
                }
                let lists = cur.keyed_lists(&["n"])?;
                let (pos, _, n) = &lists[0];
                let [(_, lo), (_, hi)] = n.as_slice() else {
                    return Err(cur.err_at(*pos, ParseErrorKind::InvalidSweepRange, "sweep expects n=[lo,hi]"));
                };
                if *lo < 1 || lo > hi {
                    return Err(cur.err_at(
                        *pos,
                        ParseErrorKind::InvalidSweepRange,
                        format!("sweep range needs 1 <= lo <= hi, got [{lo},{hi}]"),
                    ));
                }
                sweep = Some((*lo, *hi));
            }
            other => {
                return Err(cur.err_at(
                    start,
                    ParseErrorKind::MalformedLine,
                    format!("unknown declaration `{other}`, expected `chain` or `sweep`"),
                ))
            }
        }
    }

    let config = PlumbingConfig::new(chains).map_err(|e| {
        debug_assert_eq!(e, Error::EmptyConfig);
        ParseError {
            line: last_line.max(1),
            column: 1,
            kind: ParseErrorKind::NoChains,
            message: "configuration declares no chains".into(),
        }
    })?;
    Ok(ConfigFile { config, sweep })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_chain() {
        let f = parse_config("chain b=[3,2,2] a=[1,1,2]").unwrap();
        assert_eq!(f.config.chain_count(), 1);
        assert_eq!(f.config.chains()[0].b(), &[3, 2, 2]);
        assert_eq!(f.config.chains()[0].a(), &[1, 1, 2]);
        assert_eq!(f.sweep, None);
    }

    #[test]
    fn two_chains_and_sweep() {
        let f = parse_config("chain b=[2] a=[1]\nchain b=[4] a=[3]\nsweep n=[2,10]").unwrap();
        assert_eq!(f.config.chain_count(), 2);
        assert_eq!(f.sweep, Some((2, 10)));
    }

    #[test]
    fn comments_whitespace_and_key_order() {
        let f = parse_config("# header\n\n  chain a=[1, 2]  b=[ 2 , 3 ]  # trailing\n").unwrap();
        assert_eq!(f.config.chains()[0].b(), &[2, 3]);
        assert_eq!(f.config.chains()[0].a(), &[1, 2]);
    }

    fn kind(text: &str) -> (ParseErrorKind, usize, usize) {
        let e = parse_config(text).unwrap_err();
        (e.kind, e.line, e.column)
    }

    #[test]
    fn error_categories() {
        assert_eq!(
            kind("chain b=[1] a=[1]"),
            (ParseErrorKind::SelfIntersectionTooSmall, 1, 10)
        );
        assert_eq!(kind("chain b=[2] a=[0]"), (ParseErrorKind::AmpleDegreeTooSmall, 1, 16));
        assert_eq!(kind("chain b=[2,x] a=[1,1]").0, ParseErrorKind::NonInteger);
        assert_eq!(kind("chain b=[2.5] a=[1]").0, ParseErrorKind::NonInteger);
        assert_eq!(kind("chain b=[2] a=[1,1]").0, ParseErrorKind::LengthMismatch);
        assert_eq!(kind("chain b=[2]").0, ParseErrorKind::MalformedLine);
        assert_eq!(kind("chain b=[2 a=[1]").0, ParseErrorKind::MalformedLine);
        assert_eq!(kind("curve b=[2] a=[1]").0, ParseErrorKind::MalformedLine);
        assert_eq!(
            kind("chain b=[2] a=[1]\nsweep n=[1,3]\nsweep n=[1,4]"),
            (ParseErrorKind::DuplicateSweep, 3, 1)
        );
        assert_eq!(
            kind("chain b=[2] a=[1]\nsweep n=[5,3]").0,
            ParseErrorKind::InvalidSweepRange
        );
        assert_eq!(
            kind("chain b=[2] a=[1]\nsweep n=[5]").0,
            ParseErrorKind::InvalidSweepRange
        );
        assert_eq!(kind("# nothing\n").0, ParseErrorKind::NoChains);
        assert_eq!(kind("chain b=[-3] a=[1]").0, ParseErrorKind::SelfIntersectionTooSmall);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_config("chain b=[2] a=[1]\n\nchain b=[3] a=[1,]").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.to_string().starts_with("line 3, column"));
    }
}
