//! Parser for the concrete syntax produced by `printer`.

use std::rc::Rc;

use thiserror::Error;

use super::printer::is_keyword;
use super::{Const, Expr, Label, Location, Term};
use crate::delta::PrimOp;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("core syntax error at byte {pos}: {message}")]
pub struct ReadError {
    pub pos: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Punct(char),
    Num(f64),
    Str(String),
    Ident(String),
    Keyword(String),
    Prim(String),
    Loc(usize),
    Eof,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ReadError> {
        Err(ReadError { pos: self.pos, message: message.into() })
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_trivia(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            if let Some(c) = rest.chars().next().filter(|c| c.is_whitespace()) {
                self.pos += c.len_utf8();
            } else if rest.starts_with("//") {
                self.pos += rest.find('\n').unwrap_or(rest.len());
            } else {
                return;
            }
        }
    }

    fn next(&mut self) -> Result<(usize, Tok), ReadError> {
        self.skip_trivia();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((start, Tok::Eof));
        };
        let tok = match c {
            '(' | ')' | '{' | '}' | '[' | ']' | ',' | ';' | ':' | '=' => {
                self.pos += 1;
                Tok::Punct(c)
            }
            '"' => self.string()?,
            '`' => self.quoted_ident()?,
            '#' => {
                self.pos += 1;
                let digits = self.take_while(|c| c.is_ascii_digit());
                match digits.parse() {
                    Ok(n) => Tok::Loc(n),
                    Err(_) => return self.err("expected a location number after `#`"),
                }
            }
            '@' => {
                self.pos += 1;
                Tok::Prim(self.take_while(|c| c.is_ascii_alphanumeric() || c == '-' || c == '>'))
            }
            '-' | '0'..='9' => self.number()?,
            c if c.is_ascii_alphabetic() || c == '_' || c == '$' || c == '%' => {
                let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$' || c == '%');
                if is_keyword(&word) {
                    Tok::Keyword(word)
                } else {
                    Tok::Ident(word)
                }
            }
            other => return self.err(format!("unexpected character {other:?}")),
        };
        Ok((start, tok))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while let Some(c) = self.peek_char().filter(|c| pred(*c)) {
            self.pos += c.len_utf8();
        }
        self.src[start..self.pos].to_string()
    }

    fn number(&mut self) -> Result<Tok, ReadError> {
        let start = self.pos;
        let negative = self.src[self.pos..].starts_with('-');
        if negative {
            self.pos += 1;
        }
        if self.src[self.pos..].starts_with("Infinity") {
            self.pos += "Infinity".len();
            return Ok(Tok::Num(if negative { f64::NEG_INFINITY } else { f64::INFINITY }));
        }
        self.take_while(|c| c.is_ascii_digit() || c == '.');
        if matches!(self.peek_char(), Some('e' | 'E')) {
            self.pos += 1;
            if matches!(self.peek_char(), Some('+' | '-')) {
                self.pos += 1;
            }
            self.take_while(|c| c.is_ascii_digit());
        }
        match self.src[start..self.pos].parse::<f64>() {
            Ok(n) => Ok(Tok::Num(n)),
            Err(_) => {
                self.pos = start;
                self.err("malformed number")
            }
        }
    }

    fn string(&mut self) -> Result<Tok, ReadError> {
        // Strings use JSON escapes; find the closing quote then let serde decode.
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start + 1;
        while i < bytes.len() {
            match bytes[i] {
                b'\\' => i += 2,
                b'"' => {
                    self.pos = i + 1;
                    return match serde_json::from_str::<String>(&self.src[start..=i]) {
                        Ok(s) => Ok(Tok::Str(s)),
                        Err(e) => {
                            self.pos = start;
                            self.err(format!("bad string literal: {e}"))
                        }
                    };
                }
                _ => i += 1,
            }
        }
        self.err("unterminated string")
    }

    fn quoted_ident(&mut self) -> Result<Tok, ReadError> {
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.peek_char() {
                None => return self.err("unterminated quoted identifier"),
                Some('`') => {
                    self.pos += 1;
                    return Ok(Tok::Ident(out));
                }
                Some('\\') => {
                    self.pos += 1;
                    match self.peek_char() {
                        Some(c) => {
                            out.push(c);
                            self.pos += c.len_utf8();
                        }
                        None => return self.err("unterminated quoted identifier"),
                    }
                }
                Some(c) => {
                    out.push(c);
                    self.pos += c.len_utf8();
                }
            }
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

/// Parses one expression in the canonical concrete syntax.
pub fn parse_expr(src: &str) -> Result<Term, ReadError> {
    let mut lexer = Lexer { src, pos: 0 };
    let mut toks = Vec::new();
    loop {
        let t = lexer.next()?;
        let eof = t.1 == Tok::Eof;
        toks.push(t);
        if eof {
            break;
        }
    }
    let mut p = Parser { toks, i: 0 };
    let e = p.seq()?;
    if p.peek() != &Tok::Eof {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ReadError> {
        Err(ReadError { pos: self.toks[self.i].0, message: message.into() })
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek() == &Tok::Punct(c)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Keyword(k) if k == kw)
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ReadError> {
        if self.is_punct(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {:?}", self.peek()))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ReadError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn ident(&mut self) -> Result<Rc<str>, ReadError> {
        match self.bump() {
            Tok::Ident(x) => Ok(Rc::from(x)),
            other => {
                self.i -= 1;
                self.err(format!("expected an identifier, found {other:?}"))
            }
        }
    }

    fn seq(&mut self) -> Result<Term, ReadError> {
        if self.is_kw("let") {
            return self.let_expr();
        }
        let (first, _) = self.assign()?;
        if self.is_punct(';') {
            self.bump();
            let rest = self.seq()?;
            return Ok(Rc::new(Expr::Seq(first, rest)));
        }
        Ok(first)
    }

    fn let_expr(&mut self) -> Result<Term, ReadError> {
        self.expect_kw("let")?;
        self.expect_punct('(')?;
        let x = self.ident()?;
        self.expect_punct('=')?;
        let rhs = self.seq()?;
        self.expect_punct(')')?;
        let body = self.seq()?;
        Ok(Rc::new(Expr::Let(x, rhs, body)))
    }

    /// The flag reports whether the result is an unparenthesized field
    /// access, which turns a following `=` into a field update.
    fn assign(&mut self) -> Result<(Term, bool), ReadError> {
        let (lhs, bare_index) = self.prefix()?;
        if !self.is_punct('=') {
            return Ok((lhs, bare_index));
        }
        self.bump();
        let (rhs, _) = self.assign()?;
        let e = match (&*lhs, bare_index) {
            (Expr::GetField(o, f), true) => Expr::UpdateField(o.clone(), f.clone(), rhs),
            _ => Expr::SetRef(lhs, rhs),
        };
        Ok((Rc::new(e), false))
    }

    fn prefix(&mut self) -> Result<(Term, bool), ReadError> {
        let kw = match self.peek() {
            Tok::Keyword(k) => k.clone(),
            _ => return self.postfix(),
        };
        let wrap = |e: Expr| Ok((Rc::new(e), false));
        match kw.as_str() {
            "ref" => {
                self.bump();
                wrap(Expr::Ref(self.prefix()?.0))
            }
            "deref" => {
                self.bump();
                wrap(Expr::Deref(self.prefix()?.0))
            }
            "throw" => {
                self.bump();
                wrap(Expr::Throw(self.prefix()?.0))
            }
            "err" => {
                self.bump();
                wrap(Expr::Err(self.prefix()?.0))
            }
            "break" => {
                self.bump();
                let l = self.ident()?;
                wrap(Expr::Break(Label(l), self.prefix()?.0))
            }
            "delete" => {
                self.bump();
                let (target, bare_index) = self.postfix()?;
                match (&*target, bare_index) {
                    (Expr::GetField(o, f), true) => wrap(Expr::DeleteField(o.clone(), f.clone())),
                    _ => self.err("`delete` expects a field access"),
                }
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<(Term, bool), ReadError> {
        let mut e = self.atom()?;
        let mut bare_index = false;
        loop {
            if self.is_punct('[') {
                self.bump();
                let f = self.seq()?;
                self.expect_punct(']')?;
                e = Rc::new(Expr::GetField(e, f));
                bare_index = true;
            } else if self.is_punct('(') {
                self.bump();
                let args = self.args(')')?;
                e = Rc::new(Expr::App(e, args));
                bare_index = false;
            } else {
                return Ok((e, bare_index));
            }
        }
    }

    fn args(&mut self, close: char) -> Result<Vec<Term>, ReadError> {
        let mut out = Vec::new();
        if self.is_punct(close) {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.assign()?.0);
            if self.is_punct(',') {
                self.bump();
            } else {
                self.expect_punct(close)?;
                return Ok(out);
            }
        }
    }

    fn block(&mut self) -> Result<Term, ReadError> {
        self.expect_punct('{')?;
        let e = self.seq()?;
        self.expect_punct('}')?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Term, ReadError> {
        let c = |c: Const| Ok(Rc::new(Expr::Const(c)));
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                c(Const::Num(n))
            }
            Tok::Str(s) => {
                self.bump();
                c(Const::Str(Rc::from(s)))
            }
            Tok::Loc(n) => {
                self.bump();
                Ok(Rc::new(Expr::Loc(Location(n))))
            }
            Tok::Prim(name) => {
                self.bump();
                let Some(op) = PrimOp::from_name(&name) else {
                    self.i -= 1;
                    return self.err(format!("unknown primitive @{name}"));
                };
                self.expect_punct('(')?;
                let args = self.args(')')?;
                Ok(Rc::new(Expr::Prim(op, args)))
            }
            Tok::Ident(x) => {
                self.bump();
                if self.is_punct(':') {
                    self.bump();
                    let body = self.block()?;
                    return Ok(Rc::new(Expr::Label(Label(Rc::from(x)), body)));
                }
                Ok(Rc::new(Expr::Id(Rc::from(x))))
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.seq()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Punct('{') => self.object(),
            Tok::Keyword(k) => match k.as_str() {
                "true" => {
                    self.bump();
                    c(Const::Bool(true))
                }
                "false" => {
                    self.bump();
                    c(Const::Bool(false))
                }
                "undefined" => {
                    self.bump();
                    c(Const::Undefined)
                }
                "null" => {
                    self.bump();
                    c(Const::Null)
                }
                "NaN" => {
                    self.bump();
                    c(Const::Num(f64::NAN))
                }
                "Infinity" => {
                    self.bump();
                    c(Const::Num(f64::INFINITY))
                }
                "let" => self.let_expr(),
                "func" => {
                    self.bump();
                    self.expect_punct('(')?;
                    let mut params = Vec::new();
                    if !self.is_punct(')') {
                        loop {
                            params.push(self.ident()?);
                            if self.is_punct(',') {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect_punct(')')?;
                    let body = self.block()?;
                    Ok(Rc::new(Expr::Func(params, body)))
                }
                "if" => {
                    self.bump();
                    self.expect_punct('(')?;
                    let cond = self.seq()?;
                    self.expect_punct(')')?;
                    let t = self.block()?;
                    self.expect_kw("else")?;
                    let f = self.block()?;
                    Ok(Rc::new(Expr::If(cond, t, f)))
                }
                "while" => {
                    self.bump();
                    self.expect_punct('(')?;
                    let cond = self.seq()?;
                    self.expect_punct(')')?;
                    let body = self.block()?;
                    Ok(Rc::new(Expr::While(cond, body)))
                }
                "try" => {
                    self.bump();
                    let body = self.block()?;
                    if self.is_kw("catch") {
                        self.bump();
                        self.expect_punct('(')?;
                        let x = self.ident()?;
                        self.expect_punct(')')?;
                        let handler = self.block()?;
                        Ok(Rc::new(Expr::TryCatch(body, x, handler)))
                    } else {
                        self.expect_kw("finally")?;
                        let fin = self.block()?;
                        Ok(Rc::new(Expr::TryFinally(body, fin)))
                    }
                }
                "ref" | "deref" | "throw" | "err" | "break" | "delete" => Ok(self.prefix()?.0),
                other => self.err(format!("unexpected keyword `{other}`")),
            },
            other => self.err(format!("unexpected token {other:?}")),
        }
    }

    fn object(&mut self) -> Result<Term, ReadError> {
        self.expect_punct('{')?;
        let mut fields = Vec::new();
        if self.is_punct('}') {
            self.bump();
            return Ok(Rc::new(Expr::Object(fields)));
        }
        loop {
            let key = match self.bump() {
                Tok::Str(s) => Rc::from(s),
                other => {
                    self.i -= 1;
                    return self.err(format!("expected a string key, found {other:?}"));
                }
            };
            self.expect_punct(':')?;
            let v = self.assign()?.0;
            fields.push((key, v));
            if self.is_punct(',') {
                self.bump();
            } else {
                self.expect_punct('}')?;
                return Ok(Rc::new(Expr::Object(fields)));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;
    use crate::syntax::print_expr;

    fn round_trip(e: Term) {
        let text = print_expr(&e);
        let back = parse_expr(&text).unwrap_or_else(|err| panic!("{err}\n{text}"));
        assert_eq!(back, e, "{text}");
    }

    #[test]
    fn reads_paper_style_terms() {
        let e = parse_expr("let (x = ref {\"a\": 1}) (deref x)[\"a\"]").unwrap();
        assert_eq!(e, let_("x", ref_(object(vec![("a", num(1.0))])), get(deref(id("x")), str("a"))));
        let e = parse_expr("x: { break x 1 }").unwrap();
        assert_eq!(e, label("x", break_("x", num(1.0))));
        let e = parse_expr("o[\"f\"] = 3").unwrap();
        assert_eq!(e, update(id("o"), str("f"), num(3.0)));
        let e = parse_expr("(o[\"f\"]) = 3").unwrap();
        assert_eq!(e, set(get(id("o"), str("f")), num(3.0)));
    }

    #[test]
    fn round_trips_every_form() {
        round_trip(seq(set(id("x"), num(1.0)), deref(id("x"))));
        round_trip(let_("x", seq(num(1.0), num(2.0)), app(id("f"), vec![seq(num(1.0), num(2.0)), id("x")])));
        round_trip(delete(app(id("f"), vec![]), str("x")));
        round_trip(update(deref(id("o")), str("x"), set(id("r"), num(2.0))));
        round_trip(set(get(id("o"), str("x")), num(1.0)));
        round_trip(get(set(id("r"), num(1.0)), str("k")));
        round_trip(break_("l", seq(num(1.0), num(2.0))));
        round_trip(throw(app(func(&["a", "b"], id("a")), vec![num(1.0), num(2.0)])));
        round_trip(try_catch(err(str("e")), "x", try_finally(id("x"), null())));
        round_trip(while_(boolean(false), label("l", break_("l", undefined()))));
        round_trip(prim(PrimOp::Add, vec![num(f64::NAN), num(f64::NEG_INFINITY)]));
        round_trip(object(vec![("a\"b", loc(3)), ("", let_("y", num(0.5), id("y")))]));
        round_trip(if_(deref(get(id("a"), str("b"))), ref_(deref(id("c"))), num(-0.0)));
        round_trip(app(get(id("o"), str("m")), vec![]));
        round_trip(seq(let_("x", num(1.0), id("x")), num(2.0)));
        round_trip(id("if"));
    }

    #[test]
    fn reports_errors() {
        assert!(parse_expr("let (x = 1").is_err());
        assert!(parse_expr("@nope(1)").is_err());
        assert!(parse_expr("{1: 2}").is_err());
        assert!(parse_expr("1 2").is_err());
    }
}
