//! Tokenizer for the JavaScript subset.

use super::ast::Span;
use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum TokKind {
    Num(f64),
    Str(String),
    /// Identifiers and reserved words alike; the parser tells them apart.
    Name(String),
    Punct(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub kind: TokKind,
    pub span: Span,
    /// A line terminator occurs between the previous token and this one.
    pub newline_before: bool,
}

// Longest first, so that maximal munch falls out of a linear scan.
const PUNCTUATORS: &[&str] = &[
    "===", "!==", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "{", "}",
    "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/", "%", "!", "?", ":", "=", ".",
];

const UNSUPPORTED_OPERATORS: &[&str] = &[">>>=", ">>>", "<<=", ">>=", "<<", ">>", "&=", "|=", "^=", "&", "|", "^", "~"];

/// Maps byte offsets to 1-based line and column numbers.
pub struct LineMap {
    starts: Vec<usize>,
}

impl LineMap {
    pub fn new(src: &str) -> LineMap {
        let mut starts = vec![0];
        starts.extend(src.match_indices('\n').map(|(i, _)| i + 1));
        LineMap { starts }
    }

    pub fn span(&self, start: usize, end: usize) -> Span {
        let line = self.starts.partition_point(|s| *s <= start);
        let column = start - self.starts[line - 1] + 1;
        Span { start, end, line: line as u32, column: column as u32 }
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let map = LineMap::new(src);
    let mut lx = Lexer { src, bytes: src.as_bytes(), pos: 0, map: &map };
    let mut out = Vec::new();
    loop {
        let newline_before = lx.skip_trivia()?;
        let start = lx.pos;
        let kind = lx.token()?;
        let eof = kind == TokKind::Eof;
        out.push(Token { kind, span: map.span(start, lx.pos), newline_before });
        if eof {
            return Ok(out);
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    map: &'a LineMap,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

fn is_line_terminator(c: char) -> bool {
    matches!(c, '\n' | '\r' | '\u{2028}' | '\u{2029}')
}

impl<'a> Lexer<'a> {
    fn error<T>(&self, start: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { span: self.map.span(start, self.pos.max(start)), message: message.into() })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(offset)
    }

    /// Skips whitespace and comments, reporting whether a line break was seen.
    fn skip_trivia(&mut self) -> Result<bool, ParseError> {
        let mut newline = false;
        while let Some(c) = self.peek() {
            if is_line_terminator(c) {
                newline = true;
                self.pos += c.len_utf8();
            } else if c.is_whitespace() || c == '\u{feff}' {
                self.pos += c.len_utf8();
            } else if self.src[self.pos..].starts_with("//") {
                while let Some(c) = self.peek().filter(|c| !is_line_terminator(*c)) {
                    self.pos += c.len_utf8();
                }
            } else if self.src[self.pos..].starts_with("/*") {
                let start = self.pos;
                match self.src[self.pos + 2..].find("*/") {
                    Some(end) => {
                        let body = &self.src[self.pos + 2..self.pos + 2 + end];
                        newline |= body.chars().any(is_line_terminator);
                        self.pos += end + 4;
                    }
                    None => {
                        self.pos = self.src.len();
                        return self.error(start, "unterminated comment");
                    }
                }
            } else {
                break;
            }
        }
        Ok(newline)
    }

    fn token(&mut self) -> Result<TokKind, ParseError> {
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(TokKind::Eof);
        };
        if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            return self.number();
        }
        if c == '"' || c == '\'' {
            return self.string(c);
        }
        if is_ident_start(c) || c == '\\' {
            if c == '\\' {
                self.pos += 1;
                return self.error(start, "unicode escapes in identifiers are not in the supported subset");
            }
            while let Some(c) = self.peek().filter(|c| is_ident_part(*c)) {
                self.pos += c.len_utf8();
            }
            return Ok(TokKind::Name(self.src[start..self.pos].to_string()));
        }
        let rest = &self.src[self.pos..];
        let punct = PUNCTUATORS.iter().find(|p| rest.starts_with(**p));
        let unsupported = UNSUPPORTED_OPERATORS.iter().find(|op| rest.starts_with(**op));
        if let Some(op) = unsupported.filter(|op| punct.map_or(true, |p| op.len() > p.len())) {
            self.pos += op.len();
            return self.error(start, format!("operator `{op}` is not in the supported subset"));
        }
        if let Some(p) = punct {
            self.pos += p.len();
            return Ok(TokKind::Punct(p));
        }
        self.pos += c.len_utf8();
        self.error(start, format!("unexpected character {c:?}"))
    }

    fn digits(&mut self, radix: u32) -> usize {
        let start = self.pos;
        while self.pos < self.bytes.len() && (self.bytes[self.pos] as char).is_digit(radix) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn number(&mut self) -> Result<TokKind, ParseError> {
        let start = self.pos;
        let rest = &self.src[self.pos..];
        if rest.starts_with("0x") || rest.starts_with("0X") {
            self.pos += 2;
            if self.digits(16) == 0 {
                return self.error(start, "malformed hexadecimal literal");
            }
            let value = self.src[start + 2..self.pos]
                .chars()
                .fold(0.0, |acc, c| acc * 16.0 + f64::from(c.to_digit(16).unwrap_or(0)));
            return self.finish_number(start, value);
        }
        self.digits(10);
        if self.peek() == Some('.') {
            self.pos += 1;
            self.digits(10);
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if self.digits(10) == 0 {
                return self.error(start, "malformed exponent");
            }
        }
        let text = &self.src[start..self.pos];
        match text.parse::<f64>() {
            Ok(v) => self.finish_number(start, v),
            Err(_) => self.error(start, format!("malformed number `{text}`")),
        }
    }

    fn finish_number(&mut self, start: usize, value: f64) -> Result<TokKind, ParseError> {
        if self.peek().is_some_and(|c| is_ident_start(c) || c.is_ascii_digit()) {
            self.pos += 1;
            return self.error(start, "identifier starts immediately after a number");
        }
        Ok(TokKind::Num(value))
    }

    fn string(&mut self, quote: char) -> Result<TokKind, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            let Some(c) = self.peek() else {
                return self.error(start, "unterminated string literal");
            };
            self.pos += c.len_utf8();
            match c {
                c if c == quote => return Ok(TokKind::Str(out)),
                '\n' | '\r' => return self.error(start, "unterminated string literal"),
                '\\' => {
                    let Some(e) = self.peek() else {
                        return self.error(start, "unterminated string literal");
                    };
                    self.pos += e.len_utf8();
                    match e {
                        'n' => out.push('\n'),
                        't' => out.push('\t'),
                        'r' => out.push('\r'),
                        'b' => out.push('\u{8}'),
                        'f' => out.push('\u{c}'),
                        'v' => out.push('\u{b}'),
                        '0' if !self.peek().is_some_and(|d| d.is_ascii_digit()) => out.push('\0'),
                        'x' => out.push(self.hex_escape(start, 2)?),
                        'u' => out.push(self.hex_escape(start, 4)?),
                        '\r' => {
                            if self.peek() == Some('\n') {
                                self.pos += 1;
                            }
                        }
                        c if is_line_terminator(c) => {}
                        c if c.is_ascii_digit() => {
                            return self.error(start, "octal escapes are not in the supported subset")
                        }
                        other => out.push(other),
                    }
                }
                other => out.push(other),
            }
        }
    }

    fn hex_escape(&mut self, start: usize, len: usize) -> Result<char, ParseError> {
        let end = self.pos + len;
        let text = self.src.get(self.pos..end).filter(|t| t.chars().all(|c| c.is_ascii_hexdigit()));
        let Some(text) = text else {
            return self.error(start, "malformed escape sequence");
        };
        let code = u32::from_str_radix(text, 16).expect("validated hex digits");
        self.pos = end;
        // Lone surrogates cannot live in a Rust string.
        char::from_u32(code).map_or_else(|| self.error(start, "unpaired surrogate escapes are not supported"), Ok)
    }
}
