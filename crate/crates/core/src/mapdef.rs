//! The `.map` text format.
//!
//! ```text
//! # comment
//! label Example
//! domain [0, inf)
//! piece [0, 4] rational: 1/2 x
//! piece [0, 4] irrational: 3/4 x
//! piece (4, inf) all: x - 2
//! override 0 -> 10
//! ```
//!
//! Interval endpoints and override numbers take the full `a + b*sqrt2`
//! form; branch coefficients are rational.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::exactnum::{parse_quad, ClassTag, NumberSyntaxError, QuadExt, Rational};
use crate::mapping::{AffineExpr, Interval, MappingSpec, Piece, PointOverride, Violation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A view of one line with byte offsets, for error positions.
struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        let column = self.text[..pos.min(self.text.len())].chars().count() + 1;
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.rest().trim().is_empty()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    /// Reads up to (not including) the first of `stops`.
    fn until(&mut self, stops: &[char]) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let len = rest.find(|c| stops.contains(&c)).unwrap_or(rest.len());
        self.pos += len;
        (start, rest[..len].trim_end())
    }

    fn number(&self, start: usize, text: &str) -> Result<QuadExt, ParseError> {
        if text.is_empty() {
            return Err(self.error_at(start, "expected a number"));
        }
        parse_quad(text).map_err(|e: NumberSyntaxError| self.error_at(start + e.offset, e.message))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

fn parse_interval(cur: &mut Cursor<'_>) -> Result<Interval, ParseError> {
    cur.skip_ws();
    let start = cur.pos;
    let lower_closed = if cur.eat('[') {
        true
    } else if cur.eat('(') {
        false
    } else {
        return Err(cur.error("expected `[` or `(` to open an interval"));
    };
    let (lo_at, lo_text) = cur.until(&[',']);
    let lower = match lo_text {
        "-inf" => None,
        t => Some(cur.number(lo_at, t)?),
    };
    cur.expect(',')?;
    let (hi_at, hi_text) = cur.until(&[']', ')']);
    let upper = match hi_text {
        "inf" | "+inf" => None,
        t => Some(cur.number(hi_at, t)?),
    };
    cur.skip_ws();
    let upper_closed = if cur.eat(']') {
        true
    } else if cur.eat(')') {
        false
    } else {
        return Err(cur.error("expected `]` or `)` to close the interval"));
    };
    if lower.is_none() && lower_closed || upper.is_none() && upper_closed {
        return Err(cur.error_at(start, "an infinite endpoint must be open"));
    }
    Interval::new(lower, lower_closed, upper, upper_closed).map_err(|e| cur.error_at(start, e.to_string()))
}

/// `[coef] x [+|- const]`, a bare constant, or any sum of such terms.
fn parse_affine(cur: &mut Cursor<'_>) -> Result<AffineExpr, ParseError> {
    let mut slope = Rational::zero();
    let mut intercept = Rational::zero();
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.at_end() {
            if first {
                return Err(cur.error("expected an affine expression"));
            }
            break;
        }
        let mut sign = Rational::one();
        if cur.eat('-') {
            sign = -sign;
        } else if !cur.eat('+') && !first {
            return Err(cur.error("expected `+` or `-`"));
        }
        cur.skip_ws();
        let term_at = cur.pos;
        let rest = cur.rest();
        let digits = rest
            .find(|c: char| !(c.is_ascii_digit() || c == '/' || c == ' '))
            .unwrap_or(rest.len());
        let coef_text = rest[..digits].trim_end();
        let coef = if coef_text.is_empty() {
            None
        } else {
            let q = cur.number(term_at, coef_text)?;
            cur.pos += coef_text.len();
            Some(q.as_rational().cloned().expect("digit-only text is rational"))
        };
        cur.skip_ws();
        let mut has_x = false;
        if cur.rest().starts_with('*') {
            cur.pos += 1;
            cur.skip_ws();
            if !cur.rest().starts_with('x') {
                return Err(cur.error("expected `x` after `*`"));
            }
        }
        if cur.rest().starts_with("sqrt2") {
            return Err(cur.error("branch coefficients must be rational"));
        }
        if cur.rest().starts_with('x') {
            cur.pos += 1;
            has_x = true;
        }
        let value = match (coef, has_x) {
            (None, false) => return Err(cur.error_at(term_at, "expected a coefficient or `x`")),
            (c, _) => sign * c.unwrap_or_else(Rational::one),
        };
        if has_x {
            slope += value;
        } else {
            intercept += value;
        }
        first = false;
    }
    Ok(AffineExpr::new(slope, intercept))
}

/// Reads a `.map` document and validates the resulting spec.
pub fn parse(text: &str) -> Result<MappingSpec, ParseError> {
    let mut domain: Option<(Interval, usize)> = None;
    let mut label = String::new();
    let mut pieces = Vec::new();
    let mut piece_lines = Vec::new();
    let mut overrides = Vec::new();
    let mut override_lines = Vec::new();

    for (k, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor {
            text: body,
            pos: 0,
            line: k + 1,
        };
        cur.skip_ws();
        let kw_at = cur.pos;
        match cur.word() {
            "label" => {
                label = cur.rest().trim().to_string();
                continue;
            }
            "domain" => {
                if domain.is_some() {
                    return Err(cur.error_at(kw_at, "duplicate `domain` directive"));
                }
                domain = Some((parse_interval(&mut cur)?, k + 1));
            }
            "piece" => {
                let over = parse_interval(&mut cur)?;
                cur.skip_ws();
                let class_at = cur.pos;
                let class = cur.word();
                cur.expect(':')?;
                let expr = parse_affine(&mut cur)?;
                let piece = match class {
                    "all" => Piece::all(over, expr),
                    "rational" => Piece::for_class(over, ClassTag::RationalPoint, expr),
                    "irrational" => Piece::for_class(over, ClassTag::IrrationalPoint, expr),
                    other => {
                        return Err(cur.error_at(
                            class_at,
                            format!("unknown class `{other}`, expected rational, irrational or all"),
                        ))
                    }
                };
                pieces.push(piece);
                piece_lines.push(k + 1);
            }
            "override" => {
                cur.skip_ws();
                let at_pos = cur.pos;
                let Some(arrow) = cur.rest().find("->").map(|o| cur.pos + o) else {
                    return Err(cur.error("expected `->`"));
                };
                let at = cur.number(at_pos, body[at_pos..arrow].trim())?;
                cur.pos = arrow + 2;
                cur.skip_ws();
                let value_at = cur.pos;
                let value = cur.number(value_at, cur.rest().trim())?;
                cur.pos = body.len();
                overrides.push(PointOverride { at, value });
                override_lines.push(k + 1);
            }
            "" => return Err(cur.error_at(kw_at, "expected a directive")),
            other => return Err(cur.error_at(kw_at, format!("unknown directive `{other}`"))),
        }
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing text"));
        }
    }

    let Some((domain, domain_line)) = domain else {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "missing `domain` directive".into(),
        });
    };
    let spec = MappingSpec::new(domain, pieces, overrides, label);
    if let Some(v) = spec.validate().into_iter().next() {
        return Err(violation_error(&v, text, domain_line, &piece_lines, &override_lines));
    }
    Ok(spec)
}

fn violation_error(
    v: &Violation,
    text: &str,
    domain_line: usize,
    piece_lines: &[usize],
    override_lines: &[usize],
) -> ParseError {
    let line = v
        .piece
        .map(|k| piece_lines[k])
        .or(v.override_index.map(|k| override_lines[k]))
        .unwrap_or(domain_line);
    let content = text.split('\n').nth(line - 1).unwrap_or("");
    let column = content.chars().take_while(|c| c.is_whitespace()).count() + 1;
    ParseError {
        line,
        column,
        message: v.message.clone(),
    }
}

/// Writes `spec` back as `.map` text. A piece with two different branches
/// becomes two lines over the same interval.
pub fn serialize(spec: &MappingSpec) -> String {
    let mut out = String::new();
    if !spec.label.is_empty() {
        let _ = writeln!(out, "label {}", spec.label);
    }
    let _ = writeln!(out, "domain {}", spec.domain);
    for piece in &spec.pieces {
        if piece.is_class_blind() {
            let _ = writeln!(out, "piece {} all: {}", piece.over, piece.rational.as_ref().unwrap());
            continue;
        }
        for (class, expr) in piece.branches() {
            let _ = writeln!(out, "piece {} {}: {}", piece.over, class, expr);
        }
    }
    for o in &spec.overrides {
        let _ = writeln!(out, "override {} -> {}", o.at, o.value);
    }
    out
}
