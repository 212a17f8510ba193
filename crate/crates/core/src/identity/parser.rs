//! Lexer and recursive-descent parser for the identity language.
//!
//! ```text
//! file      := { statement }
//! statement := "identity" STRING [ "expect" ("pass"|"audit") ]
//!              [ "anchor" STRING ] [ "note" STRING ] ":" expr "==" expr ";"
//! expr      := term { ("+"|"-") term }
//! term      := [ "-" ] factor { "*" factor }
//! factor    := base [ "^" NAT ]
//! base      := RATIONAL | NAME | "(" expr ")" | FUNC "(" expr { "," NAT } ")"
//! ```

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{ParseError, ParseErrorKind};
use crate::generators::SeriesName;

use super::ast::{Expected, IdentityRecord, Literal, SeriesExpr, UnaryOp};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;
/// Largest dilation factor accepted by `dilate`.
pub const MAX_DILATION: usize = 1 << 20;

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    Punct(&'static str),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    err(line, column, ParseErrorKind::Syntax(msg.into()))
}

fn lex(text: &str) -> PResult<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
            }
            '"' => {
                i += 1;
                col += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None | Some('\n') | Some('\r') => {
                            return Err(syntax(start_line, start_col, "unterminated string literal"))
                        }
                        Some('"') => {
                            i += 1;
                            col += 1;
                            break;
                        }
                        Some('\\') => match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => {
                                s.push(e);
                                i += 2;
                                col += 2;
                            }
                            _ => return Err(syntax(line, col, "invalid escape in string literal")),
                        },
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                            col += 1;
                        }
                    }
                }
                out.push(Spanned { tok: Tok::Str(s), line: start_line, column: start_col });
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                col += i - start;
                let s: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Int(s), line: start_line, column: start_col });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                let s: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Ident(s), line: start_line, column: start_col });
            }
            _ => {
                let p = if c == '=' && chars.get(i + 1) == Some(&'=') {
                    "=="
                } else {
                    match c {
                        '(' => "(",
                        ')' => ")",
                        ',' => ",",
                        ':' => ":",
                        ';' => ";",
                        '+' => "+",
                        '-' => "-",
                        '*' => "*",
                        '/' => "/",
                        '^' => "^",
                        _ => return Err(syntax(line, col, format!("unexpected character `{c}`"))),
                    }
                };
                i += p.len();
                col += p.len();
                out.push(Spanned { tok: Tok::Punct(p), line: start_line, column: start_col });
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_punct(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let t = self.peek();
        syntax(t.line, t.column, format!("expected {wanted}, found {}", t.tok.describe()))
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.at_punct(p) {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    fn expect_string(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("string literal")),
        }
    }

    fn statement(&mut self) -> PResult<IdentityRecord> {
        if !self.at_ident("identity") {
            return Err(self.unexpected("`identity`"));
        }
        self.next();
        let name = self.expect_string()?;
        let mut expected = Expected::Pass;
        if self.at_ident("expect") {
            self.next();
            expected = if self.at_ident("pass") {
                Expected::Pass
            } else if self.at_ident("audit") {
                Expected::Audit
            } else {
                return Err(self.unexpected("`pass` or `audit`"));
            };
            self.next();
        }
        let mut anchor = None;
        if self.at_ident("anchor") {
            self.next();
            anchor = Some(self.expect_string()?);
        }
        let mut note = None;
        if self.at_ident("note") {
            self.next();
            note = Some(self.expect_string()?);
        }
        self.expect_punct(":")?;
        let lhs = self.expr()?;
        self.expect_punct("==")?;
        let rhs = self.expr()?;
        self.expect_punct(";")?;
        Ok(IdentityRecord { name, lhs, rhs, expected, anchor, note })
    }

    fn expr(&mut self) -> PResult<SeriesExpr> {
        let mut acc = self.term()?;
        loop {
            if self.at_punct("+") {
                self.next();
                acc = acc.add(self.term()?);
            } else if self.at_punct("-") {
                self.next();
                acc = acc.sub(self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<SeriesExpr> {
        let negate = self.at_punct("-");
        if negate {
            self.next();
        }
        let mut acc = self.factor()?;
        while self.at_punct("*") {
            self.next();
            acc = acc.mul(self.factor()?);
        }
        Ok(if negate { acc.neg() } else { acc })
    }

    fn factor(&mut self) -> PResult<SeriesExpr> {
        let base = self.base()?;
        if !self.at_punct("^") {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        let bad = |text: String| err(t.line, t.column, ParseErrorKind::NonIntegerExponent(text));
        match &t.tok {
            Tok::Int(digits) => {
                if self.at_punct("/") {
                    let mut text = format!("{digits}/");
                    self.next();
                    if let Tok::Int(d) = &self.peek().tok {
                        text.push_str(d);
                    }
                    return Err(bad(text));
                }
                match digits.parse::<u32>() {
                    Ok(e) if e <= MAX_EXPONENT => Ok(base.pow(e)),
                    _ => Err(syntax(t.line, t.column, format!("exponent {digits} exceeds {MAX_EXPONENT}"))),
                }
            }
            Tok::Punct("-") => {
                let text = match &self.peek().tok {
                    Tok::Int(d) => format!("-{d}"),
                    _ => "-".into(),
                };
                Err(bad(text))
            }
            Tok::Ident(s) => Err(bad(s.clone())),
            other => Err(syntax(t.line, t.column, format!("expected exponent, found {}", other.describe()))),
        }
    }

    fn nat(&mut self, what: &str) -> PResult<(BigInt, usize, usize)> {
        let t = self.next();
        match &t.tok {
            Tok::Int(d) => Ok((d.parse().expect("lexer yields digits"), t.line, t.column)),
            other => Err(syntax(t.line, t.column, format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn base(&mut self) -> PResult<SeriesExpr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(_) => {
                let (num, _, _) = self.nat("integer")?;
                if !self.at_punct("/") {
                    return Ok(SeriesExpr::Literal(Literal::integer(num)));
                }
                self.next();
                let (den, _, _) = self.nat("denominator")?;
                if den.is_zero() {
                    return Err(err(t.line, t.column, ParseErrorKind::ZeroDenominator));
                }
                Ok(SeriesExpr::Literal(Literal::ratio(num, den)))
            }
            Tok::Punct("(") => {
                self.next();
                let inner = self.expr()?;
                self.expect_punct(")")?;
                Ok(inner)
            }
            Tok::Ident(word) => {
                let op = match word.as_str() {
                    "D" => Some(UnaryOp::D),
                    "dilate" => Some(UnaryOp::Dilate(0)),
                    "alt" => Some(UnaryOp::Alt),
                    "even" => Some(UnaryOp::Even),
                    "odd" => Some(UnaryOp::Odd),
                    _ => None,
                };
                self.next();
                match op {
                    Some(op) => self.application(op, &t),
                    None => word
                        .parse::<SeriesName>()
                        .map(SeriesExpr::Name)
                        .map_err(|_| err(t.line, t.column, ParseErrorKind::UnknownName(word.clone()))),
                }
            }
            _ => Err(self.unexpected("expression")),
        }
    }

    fn application(&mut self, op: UnaryOp, head: &Spanned) -> PResult<SeriesExpr> {
        self.expect_punct("(")?;
        let arg = self.expr()?;
        let mut nats = Vec::new();
        while self.at_punct(",") {
            self.next();
            nats.push(self.nat("natural number argument")?);
        }
        self.expect_punct(")")?;
        let op = match op {
            UnaryOp::Dilate(_) => {
                let [(k, line, col)] = nats.as_slice() else {
                    return Err(syntax(head.line, head.column, "dilate takes one expression and one factor"));
                };
                match k.to_usize() {
                    Some(k) if (1..=MAX_DILATION).contains(&k) => UnaryOp::Dilate(k),
                    _ => return Err(syntax(*line, *col, format!("dilation factor must be in 1..={MAX_DILATION}"))),
                }
            }
            op => {
                if !nats.is_empty() {
                    return Err(syntax(head.line, head.column, format!("{} takes a single argument", op.keyword())));
                }
                op
            }
        };
        Ok(arg.apply(op))
    }
}

/// Parse a file of identity statements, preserving source order.
pub fn parse(text: &str) -> Result<Vec<IdentityRecord>, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut out = Vec::new();
    while p.peek().tok != Tok::Eof {
        out.push(p.statement()?);
    }
    Ok(out)
}

/// Parse a single expression with nothing trailing.
pub fn parse_expr(text: &str) -> Result<SeriesExpr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected("end of expression"));
    }
    Ok(e)
}
