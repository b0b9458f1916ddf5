//! Recursive-descent parser for polynomial and vector-field expressions and
//! for the frame file format.
//!
//! Grammar:
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' uint)? | '-' factor | '(' expr ')' ('^' uint)?
//! atom     := rational | 'sqrt2' | 'x' uint | 'y[' uint ',' uint ']'
//!           | 'Dx' uint | 'Dy[' uint ',' uint ']'
//! rational := int ('/' uint)?
//! ```
//! `Dx`/`Dy` are accepted only where a vector field is expected, and must
//! occur linearly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::geometry::VectorField;
use crate::poly::Polynomial;
use crate::scalar::{Coefficient, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Sqrt2,
    X(usize),
    Y,
    Dx(usize),
    Dy,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str, line0: usize, col0: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    let read_digits = |i: &mut usize, col: &mut usize| -> Option<String> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
            *col += 1;
        }
        (*i > start).then(|| chars[start..*i].iter().collect())
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = simple {
            out.push(Token { tok: t, line: tl, col: tc });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let digits = read_digits(&mut i, &mut col).expect("at least one digit");
            out.push(Token { tok: Tok::Int(digits.parse().expect("digits")), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
                col += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "sqrt" => {
                    if chars.get(i) == Some(&'2') && !chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                        i += 1;
                        col += 1;
                        Tok::Sqrt2
                    } else {
                        return Err(Error::parse(tl, tc, "only the constant `sqrt2` is supported"));
                    }
                }
                "x" | "Dx" => {
                    let digits = read_digits(&mut i, &mut col)
                        .ok_or_else(|| Error::parse(tl, tc, format!("`{word}` must be followed by an index")))?;
                    let n: usize = digits
                        .parse()
                        .map_err(|_| Error::parse(tl, tc, "index too large"))?;
                    if word == "x" {
                        Tok::X(n)
                    } else {
                        Tok::Dx(n)
                    }
                }
                "y" => Tok::Y,
                "Dy" => Tok::Dy,
                _ => return Err(Error::parse(tl, tc, format!("unknown identifier `{word}`"))),
            };
            out.push(Token { tok, line: tl, col: tc });
            continue;
        }
        return Err(Error::parse(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

/// A value during evaluation: a polynomial part plus a vector-field part.
#[derive(Clone)]
struct Val {
    scalar: Polynomial,
    field: BTreeMap<usize, Polynomial>,
}

impl Val {
    fn poly(p: Polynomial) -> Self {
        Val { scalar: p, field: BTreeMap::new() }
    }

    fn is_field_free(&self) -> bool {
        self.field.is_empty()
    }

    fn add(mut self, other: Val, sign: i64) -> Val {
        let s = Scalar::from_int(sign);
        self.scalar.add_scaled(&other.scalar, &s);
        for (k, v) in other.field {
            let e = self.field.entry(k).or_insert_with(Polynomial::zero);
            e.add_scaled(&v, &s);
            if e.is_zero() {
                self.field.remove(&k);
            }
        }
        self
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    chart: Chart,
    allow_fields: bool,
    _src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(t.line, t.col, msg))
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            self.err(&t, format!("expected {what}, found {}", describe(&t.tok)))
        }
    }

    fn uint(&mut self) -> Result<(BigInt, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok((n.clone(), t.clone())),
            other => self.err(&t, format!("expected an unsigned integer, found {}", describe(other))),
        }
    }

    fn small_uint(&mut self) -> Result<(usize, Token)> {
        let (n, t) = self.uint()?;
        let v: usize = n.try_into().map_err(|_| Error::parse(t.line, t.col, "integer too large"))?;
        Ok((v, t))
    }

    fn expr(&mut self) -> Result<Val> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek().tok {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.next();
            let rhs = self.term()?;
            acc = acc.add(rhs, sign);
        }
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            let star = self.next();
            let rhs = self.factor()?;
            acc = self.multiply(acc, rhs, &star)?;
        }
        Ok(acc)
    }

    fn multiply(&self, a: Val, b: Val, at: &Token) -> Result<Val> {
        if !a.is_field_free() && !b.is_field_free() {
            return self.err(at, "product of two vector fields is not linear");
        }
        let (f, s, field) = if a.is_field_free() { (a.scalar, b.scalar, b.field) } else { (b.scalar, a.scalar, a.field) };
        let scalar = f.try_mul(&s).map_err(|e| Error::parse(at.line, at.col, e.to_string()))?;
        let field = field
            .into_iter()
            .map(|(k, v)| (k, &f * &v))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Ok(Val { scalar, field })
    }

    fn factor(&mut self) -> Result<Val> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Minus => {
                self.next();
                let v = self.factor()?;
                Ok(Val::poly(Polynomial::zero()).add(v, -1))
            }
            Tok::LParen => {
                self.next();
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                self.power(v)
            }
            _ => {
                let v = self.atom()?;
                self.power(v)
            }
        }
    }

    fn power(&mut self, v: Val) -> Result<Val> {
        if self.peek().tok != Tok::Caret {
            return Ok(v);
        }
        let caret = self.next();
        let (e, _) = self.small_uint()?;
        if !v.is_field_free() {
            if e == 1 {
                return Ok(v);
            }
            return self.err(&caret, "a vector field cannot be raised to a power");
        }
        Ok(Val::poly(v.scalar.pow(e as u32)))
    }

    fn index(&self, i: usize, t: &Token) -> Result<usize> {
        if i == 0 || i > self.chart.l() {
            return self.err(t, format!("index {i} out of range 1..={}", self.chart.l()));
        }
        Ok(i - 1)
    }

    fn pair(&mut self, head: &Token) -> Result<(usize, i64)> {
        self.expect(Tok::LBracket, "`[`")?;
        let (j, tj) = self.small_uint()?;
        self.expect(Tok::Comma, "`,`")?;
        let (k, tk) = self.small_uint()?;
        self.expect(Tok::RBracket, "`]`")?;
        let j = self.index(j, &tj)?;
        let k = self.index(k, &tk)?;
        match crate::chart::signed_pair(self.chart.l(), j, k) {
            Some((p, s)) => Ok((self.chart.l() + p, s)),
            None => self.err(head, "pair index must have two distinct entries"),
        }
    }

    fn atom(&mut self) -> Result<Val> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Int(n) => {
                let mut q = BigRational::from_integer(n);
                if self.peek().tok == Tok::Slash {
                    self.next();
                    let (d, td) = self.uint()?;
                    if d.is_zero() {
                        return self.err(&td, "zero denominator");
                    }
                    q /= BigRational::from_integer(d);
                }
                Ok(Val::poly(Polynomial::constant(Scalar::from_rational(q))))
            }
            Tok::Sqrt2 => Ok(Val::poly(Polynomial::constant(Scalar::sqrt2()))),
            Tok::X(i) => {
                let v = self.index(i, &t)?;
                Ok(Val::poly(Polynomial::var(self.chart, v)))
            }
            Tok::Y => {
                let (v, s) = self.pair(&t)?;
                Ok(Val::poly(Polynomial::var(self.chart, v).scale(&Scalar::from_int(s))))
            }
            Tok::Dx(_) | Tok::Dy if !self.allow_fields => {
                self.err(&t, "coordinate fields Dx/Dy are only allowed in vector-field expressions")
            }
            Tok::Dx(i) => {
                let v = self.index(i, &t)?;
                let mut field = BTreeMap::new();
                field.insert(v, Polynomial::from_int(1));
                Ok(Val { scalar: Polynomial::zero(), field })
            }
            Tok::Dy => {
                let (v, s) = self.pair(&t)?;
                let mut field = BTreeMap::new();
                field.insert(v, Polynomial::from_int(s));
                Ok(Val { scalar: Polynomial::zero(), field })
            }
            other => self.err(&t, format!("expected a number, coordinate or `(`, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::End => "end of input".into(),
        Tok::Int(n) => format!("`{n}`"),
        Tok::X(i) => format!("`x{i}`"),
        Tok::Dx(i) => format!("`Dx{i}`"),
        other => format!("{other:?}"),
    }
}

fn run(src: &str, chart: Chart, allow_fields: bool, line0: usize, col0: usize) -> Result<Val> {
    let toks = lex(src, line0, col0)?;
    let mut p = Parser { toks, pos: 0, chart, allow_fields, _src: src };
    if p.peek().tok == Tok::End {
        let t = p.peek().clone();
        return p.err(&t, "empty expression");
    }
    let v = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, format!("unexpected {}", describe(&t.tok)));
    }
    Ok(v)
}

/// Parses a polynomial expression on `chart`.
pub fn parse_expression(src: &str, chart: Chart) -> Result<Polynomial> {
    Ok(run(src, chart, false, 1, 1)?.scalar)
}

fn to_field(v: Val, chart: Chart, line: usize, col: usize) -> Result<VectorField> {
    if !v.scalar.is_zero() {
        return Err(Error::parse(line, col, "expression has a non-vector (scalar) part"));
    }
    Ok(VectorField::from_components(chart, v.field))
}

/// Parses a vector-field expression such as `Dx1 - x2*Dy[1,2]`.
pub fn parse_vector_field(src: &str, chart: Chart) -> Result<VectorField> {
    let v = run(src, chart, true, 1, 1)?;
    to_field(v, chart, 1, 1)
}

/// The contents of a frame file: the rank and the distribution fields.
#[derive(Debug, Clone)]
pub struct FrameSpec {
    pub chart: Chart,
    pub fields: Vec<VectorField>,
}

/// Parses the frame file format: a header `l: <int>` followed by lines
/// `X<i>: <vector-field expression>` for i = 1..l, in any order. Blank
/// lines and lines starting with `#` are ignored.
pub fn parse_frame_file(text: &str) -> Result<FrameSpec> {
    let mut chart: Option<Chart> = None;
    let mut fields: BTreeMap<usize, VectorField> = BTreeMap::new();
    let mut last_line = 0;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        let (key, rest) = trimmed
            .split_once(':')
            .ok_or_else(|| Error::parse(line, indent + 1, "expected `key: value`"))?;
        let key = key.trim();
        let value_col = indent + key.len() + 2 + (rest.len() - rest.trim_start().len());
        match (key, chart) {
            ("l", None) => {
                let l: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line, value_col, "rank must be a positive integer"))?;
                chart = Some(Chart::new(l).map_err(|e| Error::parse(line, value_col, e.to_string()))?);
            }
            ("l", Some(_)) => return Err(Error::parse(line, 1, "duplicate `l:` header")),
            (_, None) => return Err(Error::parse(line, 1, "the `l: <int>` header must come first")),
            (k, Some(c)) => {
                let idx: usize = k
                    .strip_prefix('X')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::parse(line, indent + 1, format!("unknown key `{k}`")))?;
                if idx == 0 || idx > c.l() {
                    return Err(Error::parse(line, indent + 1, format!("field index {idx} out of range 1..={}", c.l())));
                }
                if fields.contains_key(&idx) {
                    return Err(Error::parse(line, indent + 1, format!("field X{idx} given twice")));
                }
                let v = run(rest, c, true, line, value_col)?;
                fields.insert(idx, to_field(v, c, line, value_col)?);
            }
        }
    }
    let chart = chart.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `l: <int>` header"))?;
    for i in 1..=chart.l() {
        if !fields.contains_key(&i) {
            return Err(Error::parse(last_line.max(1), 1, format!("missing field X{i}")));
        }
    }
    Ok(FrameSpec { chart, fields: fields.into_values().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Coordinate;

    fn c4() -> Chart {
        Chart::new(4).unwrap()
    }

    fn var(c: Coordinate) -> Polynomial {
        Polynomial::coordinate(c4(), c).unwrap()
    }

    #[test]
    fn zero_literal() {
        assert!(parse_expression("0", c4()).unwrap().is_zero());
    }

    #[test]
    fn like_terms_collect() {
        assert_eq!(parse_expression("2*x1 - x1", c4()).unwrap(), var(Coordinate::X(1)));
    }

    #[test]
    fn rational_and_power() {
        let p = parse_expression("y[1,2]^2 + 3/2", c4()).unwrap();
        let want = &var(Coordinate::Y(1, 2)).pow(2) + &Polynomial::constant(Scalar::from_ratio(3, 2));
        assert_eq!(p, want);
    }

    #[test]
    fn precedence_of_unary_minus_and_power() {
        let p = parse_expression("-x1^2", c4()).unwrap();
        assert_eq!(p, -&var(Coordinate::X(1)).pow(2));
        let q = parse_expression("2*-x1", c4()).unwrap();
        assert_eq!(q, var(Coordinate::X(1)).scale(&Scalar::from_int(-2)));
    }

    #[test]
    fn reversed_pair_flips_sign() {
        assert_eq!(parse_expression("y[2,1]", c4()).unwrap(), -&var(Coordinate::Y(1, 2)));
    }

    #[test]
    fn errors_have_positions() {
        match parse_expression("x1 +\n  x5", c4()) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expression("x1 +", c4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("Dx1", c4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("y[2,2]", c4()), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("1/0", c4()), Err(Error::Parse { .. })));
    }

    #[test]
    fn vector_fields_must_be_linear() {
        assert!(parse_vector_field("Dx1*Dx2", c4()).is_err());
        assert!(parse_vector_field("Dx1 + 1", c4()).is_err());
        let v = parse_vector_field("Dx1 - x2*Dy[1,2] + x3*Dy[3,1]", c4()).unwrap();
        assert_eq!(v.component(c4().var_index(Coordinate::Y(1, 3)).unwrap()), -&var(Coordinate::X(3)));
    }

    #[test]
    fn frame_file_requires_all_fields() {
        let text = "l: 3\nX1: Dx1\nX2: Dx2\n";
        match parse_frame_file(text) {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("X3")),
            other => panic!("unexpected {other:?}"),
        }
        let ok = parse_frame_file("# comment\nl: 3\nX2: Dx2\nX1: Dx1\n\nX3: Dx3 + x1*Dy[1,2]\n").unwrap();
        assert_eq!(ok.fields.len(), 3);
    }
}
