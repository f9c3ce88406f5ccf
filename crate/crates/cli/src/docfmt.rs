//! The structured text format used for problem specs, result documents and
//! the J-matrix cache.
//!
//! Grammar (one canonical serializer, strict parser):
//!
//! ```text
//! document  := { line }
//! line      := comment | blank | "key = value"
//! comment   := "#" ... end of line          (not data; ignored on parse)
//! key       := [A-Za-z_][A-Za-z0-9_]*
//! value     := scalar | list | map
//! list      := "[" [ value { "," value } ] "]"
//! map       := "{" [ pair { "," pair } ] "}"       pair := key "=" value
//! scalar    := float | int | rational | bool | string
//! float     := canonical form d.dddddddddddddddde[-]dd   (17 significant digits)
//! int       := -?[0-9]+
//! rational  := int "/" [0-9]+
//! string    := bare word or "double quoted"
//! ```
//!
//! Floats are serialized with 17 significant digits, which round-trips
//! `f64` exactly; `-0.0` is normalized to `0.0`. Serialization is
//! deterministic: the same document value always produces the same bytes.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    /// `p/q` as written in the input; consumers round to `f64` explicitly.
    Rational(i64, u64),
    Bool(bool),
    Str(String),
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(x) => Some(*x),
            Value::Int(n) => Some(*n as f64),
            Value::Rational(p, q) => Some(*p as f64 / *q as f64),
            _ => None,
        }
    }

    pub fn as_usize(&self) -> Option<usize> {
        match self {
            Value::Int(n) if *n >= 0 => Some(*n as usize),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_map(&self) -> Option<&[(String, Value)]> {
        match self {
            Value::Map(m) => Some(m),
            _ => None,
        }
    }

    pub fn get<'a>(&'a self, key: &str) -> Option<&'a Value> {
        self.as_map()?
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    /// True if the rational form was used anywhere in this value.
    pub fn contains_rational(&self) -> bool {
        match self {
            Value::Rational(..) => true,
            Value::List(v) => v.iter().any(Value::contains_rational),
            Value::Map(m) => m.iter().any(|(_, v)| v.contains_rational()),
            _ => false,
        }
    }
}

/// A document: ordered key/value pairs plus trailing comment lines that
/// carry volatile metadata (timings). Comments are not data: parsing
/// ignores them and `data_bytes` excludes them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    pub entries: Vec<(String, Value)>,
    pub trailing_comments: Vec<String>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: Value) {
        self.entries.push((key.to_string(), value));
    }

    pub fn comment(&mut self, text: &str) {
        self.trailing_comments.push(text.to_string());
    }

    pub fn get<'a>(&'a self, key: &str) -> Option<&'a Value> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    /// Canonical serialization including comment lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            write_value(&mut out, v);
            out.push('\n');
        }
        for c in &self.trailing_comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out
    }

    /// The data portion only (comment lines stripped) — the bytes that are
    /// guaranteed identical across reruns of the same problem.
    pub fn data_bytes(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            write_value(&mut out, v);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Document, ParseError> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut p = Parser {
                src: line.as_bytes(),
                pos: 0,
                lineno: lineno + 1,
            };
            let key = p.parse_key()?;
            p.skip_ws();
            p.expect(b'=')?;
            let value = p.parse_value()?;
            p.skip_ws();
            if p.pos != p.src.len() {
                return Err(p.err("trailing characters after value"));
            }
            entries.push((key, value));
        }
        Ok(Document {
            entries,
            trailing_comments: Vec::new(),
        })
    }
}

/// Serializes an `f64` with 17 significant digits (exact round-trip).
pub fn format_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0.0
    format!("{x:.16e}")
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Float(x) => {
            let _ = write!(out, "{}", format_f64(*x));
        }
        Value::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Value::Rational(p, q) => {
            let _ = write!(out, "{p}/{q}");
        }
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Str(s) => {
            if is_bare_word(s) {
                out.push_str(s);
            } else {
                let _ = write!(out, "{s:?}");
            }
        }
        Value::List(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Map(pairs) => {
            out.push('{');
            for (i, (k, item)) in pairs.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, " {k} = ");
                write_value(out, item);
            }
            out.push_str(" }");
        }
    }
}

fn is_bare_word(s: &str) -> bool {
    !s.is_empty()
        && s.bytes().next().unwrap().is_ascii_alphabetic()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
        && s != "true"
        && s != "false"
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    lineno: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            line: self.lineno,
            message: format!("{msg} (column {})", self.pos + 1),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn parse_key(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start || !self.src[start].is_ascii_alphabetic() && self.src[start] != b'_' {
            return Err(self.err("expected key"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn parse_value(&mut self) -> Result<Value, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("expected value")),
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                self.skip_ws();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                    return Ok(Value::List(items));
                }
                loop {
                    items.push(self.parse_value()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(Value::List(items));
                        }
                        _ => return Err(self.err("expected ',' or ']'")),
                    }
                }
            }
            Some(b'{') => {
                self.pos += 1;
                let mut pairs = Vec::new();
                self.skip_ws();
                if self.peek() == Some(b'}') {
                    self.pos += 1;
                    return Ok(Value::Map(pairs));
                }
                loop {
                    let k = self.parse_key()?;
                    self.skip_ws();
                    self.expect(b'=')?;
                    let v = self.parse_value()?;
                    pairs.push((k, v));
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        Some(b'}') => {
                            self.pos += 1;
                            return Ok(Value::Map(pairs));
                        }
                        _ => return Err(self.err("expected ',' or '}'")),
                    }
                }
            }
            Some(b'"') => {
                self.pos += 1;
                let start = self.pos;
                while let Some(b) = self.peek() {
                    if b == b'"' {
                        let s =
                            String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                        self.pos += 1;
                        return Ok(Value::Str(s));
                    }
                    self.pos += 1;
                }
                Err(self.err("unterminated string"))
            }
            Some(_) => self.parse_scalar(),
        }
    }

    fn parse_scalar(&mut self) -> Result<Value, ParseError> {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_alphanumeric() || matches!(b, b'.' | b'+' | b'-' | b'_' | b'/') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.err("expected scalar"));
        }
        let tok = std::str::from_utf8(&self.src[start..self.pos])
            .map_err(|_| self.err("invalid utf-8"))?;
        if tok == "true" {
            return Ok(Value::Bool(true));
        }
        if tok == "false" {
            return Ok(Value::Bool(false));
        }
        if let Some((num, den)) = tok.split_once('/') {
            if let (Ok(p), Ok(q)) = (num.parse::<i64>(), den.parse::<u64>()) {
                if q == 0 {
                    return Err(self.err("rational with zero denominator"));
                }
                return Ok(Value::Rational(p, q));
            }
        }
        if !tok.contains(['.', 'e', 'E']) {
            if let Ok(n) = tok.parse::<i64>() {
                return Ok(Value::Int(n));
            }
        }
        if let Ok(x) = tok.parse::<f64>() {
            if !x.is_finite() {
                return Err(self.err("non-finite number"));
            }
            return Ok(Value::Float(x));
        }
        if is_bare_word(tok) {
            return Ok(Value::Str(tok.to_string()));
        }
        Err(self.err(&format!("cannot parse scalar '{tok}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_round_trip_exact() {
        for &x in &[
            0.1,
            -3.0e-17,
            6.25e-2,
            std::f64::consts::PI,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            -0.0,
        ] {
            let s = format_f64(x);
            let back: f64 = s.parse().unwrap();
            let want = if x == 0.0 { 0.0 } else { x };
            assert_eq!(back.to_bits(), want.to_bits(), "{x} -> {s}");
        }
    }

    #[test]
    fn document_round_trip() {
        let mut doc = Document::new();
        doc.push("task", Value::Str("cheb1".into()));
        doc.push(
            "intervals",
            Value::List(vec![
                Value::List(vec![Value::Float(-1.0), Value::Rational(-1, 2)]),
                Value::List(vec![Value::Float(0.5), Value::Float(1.0)]),
            ]),
        );
        doc.push("degree", Value::Int(5));
        doc.push(
            "weight",
            Value::Map(vec![
                ("sigma".into(), Value::List(vec![Value::Int(1), Value::Int(0), Value::Int(1)])),
                ("basis".into(), Value::Str("monomial".into())),
            ]),
        );
        doc.comment("elapsed_ms = 42");
        let text = doc.to_text();
        let parsed = Document::parse(&text).unwrap();
        assert_eq!(parsed.entries, doc.entries);
        assert!(parsed.trailing_comments.is_empty());
        // comments are not part of the data bytes
        assert!(!doc.data_bytes().contains("elapsed_ms"));
    }

    #[test]
    fn canonical_serialization_is_stable() {
        let mut doc = Document::new();
        doc.push("x", Value::Float(0.062_5));
        doc.push("sign", Value::List(vec![Value::Int(1), Value::Int(-1)]));
        assert_eq!(
            doc.to_text(),
            "x = 6.2500000000000000e-2\nsign = [1, -1]\n"
        );
    }

    #[test]
    fn rationals_parse() {
        let doc = Document::parse("a = -1/2\nb = [1/3, 2]\n").unwrap();
        assert_eq!(doc.get("a"), Some(&Value::Rational(-1, 2)));
        assert!(doc.get("b").unwrap().contains_rational());
        assert_eq!(doc.get("a").unwrap().as_f64(), Some(-0.5));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Document::parse("ok = 1\nbad = [1, \n").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
