//! Line-based update traces and recolor logs.
//!
//! ```text
//! # comment
//! I <id> <left> <right>
//! D <id>
//! R <id> <level> <index>
//! R <id> dummy
//! ```
//!
//! Traces contain only `I`/`D` lines. Logs written by the CLI interleave them
//! with `R` lines and end with a `SUMMARY` line.

use std::fmt::Write as _;

use crate::coloring::ColorEvent;
use crate::error::{Error, Result};
use crate::interval::{Color, Interval, IntervalId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpdateOp {
    Insert(Interval),
    Delete(IntervalId),
}

/// A parsed log line.
#[derive(Debug, Clone, PartialEq)]
pub enum LogLine {
    Op(UpdateOp),
    Recolor(ColorEvent),
    Other(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<IntervalId> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing id"))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad id `{tok}`")))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

fn parse_op(kind: &str, toks: &mut std::str::SplitWhitespace<'_>, line: usize) -> Result<UpdateOp> {
    match kind {
        "I" => {
            let id = parse_id(toks.next(), line)?;
            let left: f64 = parse_num(toks.next(), line, "left")?;
            let right: f64 = parse_num(toks.next(), line, "right")?;
            let iv = Interval::new(id, left, right).map_err(|e| parse_err(line, e.to_string()))?;
            Ok(UpdateOp::Insert(iv))
        }
        "D" => Ok(UpdateOp::Delete(parse_id(toks.next(), line)?)),
        other => Err(parse_err(line, format!("unknown op `{other}`"))),
    }
}

fn ensure_end(toks: &mut std::str::SplitWhitespace<'_>, line: usize) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(parse_err(line, format!("trailing token `{t}`"))),
    }
}

pub fn parse_trace(text: &str) -> Result<Vec<UpdateOp>> {
    let mut ops = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut toks = s.split_whitespace();
        let kind = toks.next().unwrap();
        let op = parse_op(kind, &mut toks, line)?;
        ensure_end(&mut toks, line)?;
        ops.push(op);
    }
    Ok(ops)
}

/// Parses an interleaved log, keeping line numbers for diagnostics.
pub fn parse_log(text: &str) -> Result<Vec<(usize, LogLine)>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut toks = s.split_whitespace();
        let kind = toks.next().unwrap();
        let parsed = match kind {
            "I" | "D" => {
                let op = parse_op(kind, &mut toks, line)?;
                ensure_end(&mut toks, line)?;
                LogLine::Op(op)
            }
            "R" => {
                let id = parse_id(toks.next(), line)?;
                let color = match toks.next() {
                    Some("dummy") => Color::Dummy,
                    Some(level) => {
                        let level: u32 = parse_num(Some(level), line, "level")?;
                        let index: u32 = parse_num(toks.next(), line, "index")?;
                        Color::palette(level, index)
                    }
                    None => return Err(parse_err(line, "missing color")),
                };
                ensure_end(&mut toks, line)?;
                LogLine::Recolor(ColorEvent { id, color })
            }
            _ => LogLine::Other(s.to_string()),
        };
        out.push((line, parsed));
    }
    Ok(out)
}

/// Shortest decimal that round-trips the coordinate.
pub fn fmt_coord(x: f64) -> String {
    let s = format!("{x}");
    if s.contains('e') || s.contains("inf") || s.contains("NaN") {
        format!("{x:.17}")
    } else {
        s
    }
}

pub fn format_op(op: &UpdateOp) -> String {
    match op {
        UpdateOp::Insert(iv) => {
            format!("I {} {} {}", iv.id, fmt_coord(iv.left), fmt_coord(iv.right))
        }
        UpdateOp::Delete(id) => format!("D {id}"),
    }
}

pub fn format_event(ev: &ColorEvent) -> String {
    format!("R {} {}", ev.id, ev.color)
}

pub fn format_trace(ops: &[UpdateOp]) -> String {
    let mut s = String::new();
    for op in ops {
        let _ = writeln!(s, "{}", format_op(op));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ops_and_comments() {
        let ops = parse_trace("# hi\nI 1 0 2.5\n\nD 1\n").unwrap();
        assert_eq!(
            ops,
            vec![
                UpdateOp::Insert(Interval::new(1, 0.0, 2.5).unwrap()),
                UpdateOp::Delete(1)
            ]
        );
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_trace("I 1 0 1\nX 2\n").unwrap_err();
        assert_eq!(err, parse_err(2, "unknown op `X`"));
        assert!(matches!(
            parse_trace("I 1 2 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_trace("D"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_trace("D 1 2"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn log_lines() {
        let log = parse_log("I 1 0 1\nR 1 0 0\nR 1 dummy\nSUMMARY colors=1\n").unwrap();
        assert_eq!(log.len(), 4);
        assert_eq!(
            log[1].1,
            LogLine::Recolor(ColorEvent {
                id: 1,
                color: Color::palette(0, 0)
            })
        );
        assert!(matches!(log[3].1, LogLine::Other(_)));
    }

    #[test]
    fn format_round_trip() {
        let ops = vec![
            UpdateOp::Insert(Interval::new(4, -1.25, 0.1).unwrap()),
            UpdateOp::Delete(4),
        ];
        assert_eq!(parse_trace(&format_trace(&ops)).unwrap(), ops);
    }
}
