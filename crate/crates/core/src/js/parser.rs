//! Recursive-descent parser with precedence climbing for binary operators.

use super::ast::*;
use super::lexer::{tokenize, TokKind, Token};
use super::ParseError;
use crate::delta::number_to_string;

const RESERVED: &[&str] = &[
    "break", "case", "catch", "continue", "debugger", "default", "delete", "do", "else", "finally", "for",
    "function", "if", "in", "instanceof", "new", "return", "switch", "this", "throw", "try", "typeof", "var",
    "void", "while", "with", "class", "const", "enum", "export", "extends", "import", "super", "implements",
    "interface", "let", "package", "private", "protected", "public", "static", "yield", "null", "true",
    "false",
];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

/// Parses a complete program.
pub fn parse(src: &str) -> Result<Program, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, i: 0, prev_end: 0 };
    let mut body = Vec::new();
    while !p.at_eof() {
        body.push(p.statement()?);
    }
    Ok(Program { body, span: p.span_from(0, 0) })
}

/// Parses a single expression (used by tests and tooling).
pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, i: 0, prev_end: 0 };
    let e = p.expression(false)?;
    if !p.at_eof() {
        return p.unexpected("end of input");
    }
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    prev_end: usize,
}

impl Parser {
    fn tok(&self) -> &Token {
        &self.toks[self.i]
    }

    fn kind(&self) -> &TokKind {
        &self.tok().kind
    }

    fn kind_at(&self, k: usize) -> &TokKind {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].kind
    }

    fn at_eof(&self) -> bool {
        self.kind() == &TokKind::Eof
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        self.prev_end = t.span.end;
        t
    }

    /// Span from the token starting at `start` (byte offset) through the
    /// last consumed token.
    fn span_from(&self, start_tok: usize, start: usize) -> Span {
        let first = &self.toks[start_tok.min(self.toks.len() - 1)].span;
        let start = if start_tok == 0 && start == 0 { 0 } else { first.start };
        Span { start, end: self.prev_end.max(start), line: first.line.max(1), column: first.column.max(1) }
    }

    fn mark(&self) -> usize {
        self.i
    }

    fn finish(&self, mark: usize) -> Span {
        let first = self.toks[mark].span;
        Span { start: first.start, end: self.prev_end.max(first.start), line: first.line, column: first.column }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { span: self.tok().span, message: message.into() })
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, ParseError> {
        let found = match self.kind() {
            TokKind::Num(n) => format!("number {}", number_to_string(*n)),
            TokKind::Str(s) => format!("string {s:?}"),
            TokKind::Name(n) => format!("`{n}`"),
            TokKind::Punct(p) => format!("`{p}`"),
            TokKind::Eof => "end of input".into(),
        };
        self.error(format!("expected {expected}, found {found}"))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.kind(), TokKind::Punct(q) if *q == p)
    }

    fn is_name(&self, n: &str) -> bool {
        matches!(self.kind(), TokKind::Name(m) if m == n)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.unexpected(&format!("`{p}`"))
        }
    }

    fn expect_name(&mut self, n: &str) -> Result<(), ParseError> {
        if self.is_name(n) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{n}`"))
        }
    }

    /// A binding or reference name: not reserved, not excluded.
    fn identifier(&mut self) -> Result<String, ParseError> {
        match self.kind().clone() {
            TokKind::Name(n) if is_reserved(&n) => self.error(format!("`{n}` is a reserved word")),
            TokKind::Name(n) if n == "arguments" => {
                self.error("the `arguments` object is not in the supported subset")
            }
            TokKind::Name(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    /// Automatic semicolon insertion, simplified: a statement may end at a
    /// newline, before `}`, or at end of input.
    fn semicolon(&mut self) -> Result<(), ParseError> {
        if self.eat_punct(";") || self.is_punct("}") || self.at_eof() || self.tok().newline_before {
            Ok(())
        } else {
            self.unexpected("`;`")
        }
    }

    fn block_body(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect_punct("{")?;
        let mut body = Vec::new();
        while !self.is_punct("}") {
            if self.at_eof() {
                return self.unexpected("`}`");
            }
            body.push(self.statement()?);
        }
        self.bump();
        Ok(body)
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let m = self.mark();
        let kind = self.statement_kind()?;
        Ok(Stmt::new(kind, self.finish(m)))
    }

    fn statement_kind(&mut self) -> Result<StmtKind, ParseError> {
        if self.is_punct("{") {
            return Ok(StmtKind::Block { body: self.block_body()? });
        }
        if self.eat_punct(";") {
            return Ok(StmtKind::Empty);
        }
        let TokKind::Name(word) = self.kind().clone() else {
            return self.expression_statement();
        };
        match word.as_str() {
            "var" => {
                self.bump();
                let decls = self.var_decls(false)?;
                self.semicolon()?;
                Ok(StmtKind::Var { decls })
            }
            "if" => {
                self.bump();
                let test = self.paren_expression()?;
                let consequent = Box::new(self.statement()?);
                let alternate = if self.is_name("else") {
                    self.bump();
                    Some(Box::new(self.statement()?))
                } else {
                    None
                };
                Ok(StmtKind::If { test, consequent, alternate })
            }
            "while" => {
                self.bump();
                let test = self.paren_expression()?;
                Ok(StmtKind::While { test, body: Box::new(self.statement()?) })
            }
            "do" => {
                self.bump();
                let body = Box::new(self.statement()?);
                self.expect_name("while")?;
                let test = self.paren_expression()?;
                self.eat_punct(";");
                Ok(StmtKind::DoWhile { body, test })
            }
            "for" => self.for_statement(),
            "continue" | "break" => {
                self.bump();
                let label = match self.kind().clone() {
                    TokKind::Name(n) if !self.tok().newline_before && !is_reserved(&n) => {
                        self.bump();
                        Some(n)
                    }
                    _ => None,
                };
                self.semicolon()?;
                Ok(if word == "break" { StmtKind::Break { label } } else { StmtKind::Continue { label } })
            }
            "return" => {
                self.bump();
                let value = if self.is_punct(";") || self.is_punct("}") || self.at_eof() || self.tok().newline_before {
                    None
                } else {
                    Some(self.expression(false)?)
                };
                self.semicolon()?;
                Ok(StmtKind::Return { value })
            }
            "throw" => {
                self.bump();
                if self.tok().newline_before {
                    return self.error("line break after `throw`");
                }
                let value = self.expression(false)?;
                self.semicolon()?;
                Ok(StmtKind::Throw { value })
            }
            "try" => {
                self.bump();
                let block = self.block_body()?;
                let handler = if self.is_name("catch") {
                    let m = self.mark();
                    self.bump();
                    self.expect_punct("(")?;
                    let param = self.identifier()?;
                    self.expect_punct(")")?;
                    let body = self.block_body()?;
                    Some(CatchClause { param, body, span: self.finish(m) })
                } else {
                    None
                };
                let finalizer = if self.is_name("finally") {
                    self.bump();
                    Some(self.block_body()?)
                } else {
                    None
                };
                if handler.is_none() && finalizer.is_none() {
                    return self.unexpected("`catch` or `finally`");
                }
                Ok(StmtKind::Try { block, handler, finalizer })
            }
            "switch" => self.switch_statement(),
            "with" => {
                self.bump();
                let object = self.paren_expression()?;
                Ok(StmtKind::With { object, body: Box::new(self.statement()?) })
            }
            "function" => {
                let func = self.function(true)?;
                Ok(StmtKind::Function { func })
            }
            "debugger" | "const" | "let" | "class" | "import" | "export" => {
                self.error(format!("`{word}` is not in the supported subset"))
            }
            _ if !is_reserved(&word) && self.kind_at(1) == &TokKind::Punct(":") => {
                self.bump();
                self.bump();
                Ok(StmtKind::Labeled { label: word, body: Box::new(self.statement()?) })
            }
            _ => self.expression_statement(),
        }
    }

    fn expression_statement(&mut self) -> Result<StmtKind, ParseError> {
        let expr = self.expression(false)?;
        self.semicolon()?;
        Ok(StmtKind::Expr { expr })
    }

    fn paren_expression(&mut self) -> Result<Expr, ParseError> {
        self.expect_punct("(")?;
        let e = self.expression(false)?;
        self.expect_punct(")")?;
        Ok(e)
    }

    fn var_decls(&mut self, no_in: bool) -> Result<Vec<VarDecl>, ParseError> {
        let mut decls = Vec::new();
        loop {
            let m = self.mark();
            let name = self.identifier()?;
            let init = if self.eat_punct("=") { Some(self.assignment(no_in)?) } else { None };
            decls.push(VarDecl { name, init, span: self.finish(m) });
            if !self.eat_punct(",") {
                return Ok(decls);
            }
        }
    }

    fn for_statement(&mut self) -> Result<StmtKind, ParseError> {
        self.bump();
        self.expect_punct("(")?;
        let mut init = None;
        if self.is_name("var") {
            self.bump();
            let decls = self.var_decls(true)?;
            if self.is_name("in") && decls.len() == 1 && decls[0].init.is_none() {
                self.bump();
                let object = self.expression(false)?;
                self.expect_punct(")")?;
                let body = Box::new(self.statement()?);
                let name = decls.into_iter().next().expect("one declaration").name;
                return Ok(StmtKind::ForIn { declared: true, name, object, body });
            }
            init = Some(ForInit::Var { decls });
        } else if !self.is_punct(";") {
            let expr = self.expression(true)?;
            if self.is_name("in") {
                let ExprKind::Ident { name } = expr.kind else {
                    return self.error("the left side of `for ... in` must be a variable");
                };
                self.bump();
                let object = self.expression(false)?;
                self.expect_punct(")")?;
                let body = Box::new(self.statement()?);
                return Ok(StmtKind::ForIn { declared: false, name, object, body });
            }
            init = Some(ForInit::Expr { expr });
        }
        self.expect_punct(";")?;
        let test = if self.is_punct(";") { None } else { Some(self.expression(false)?) };
        self.expect_punct(";")?;
        let update = if self.is_punct(")") { None } else { Some(self.expression(false)?) };
        self.expect_punct(")")?;
        let body = Box::new(self.statement()?);
        Ok(StmtKind::For { init, test, update, body })
    }

    fn switch_statement(&mut self) -> Result<StmtKind, ParseError> {
        self.bump();
        let discriminant = self.paren_expression()?;
        self.expect_punct("{")?;
        let mut cases = Vec::new();
        let mut seen_default = false;
        while !self.eat_punct("}") {
            let m = self.mark();
            let test = if self.is_name("case") {
                self.bump();
                Some(self.expression(false)?)
            } else if self.is_name("default") {
                if seen_default {
                    return self.error("more than one `default` clause");
                }
                seen_default = true;
                self.bump();
                None
            } else {
                return self.unexpected("`case`, `default` or `}`");
            };
            self.expect_punct(":")?;
            let mut body = Vec::new();
            while !(self.is_name("case") || self.is_name("default") || self.is_punct("}")) {
                if self.at_eof() {
                    return self.unexpected("`}`");
                }
                body.push(self.statement()?);
            }
            cases.push(SwitchCase { test, body, span: self.finish(m) });
        }
        Ok(StmtKind::Switch { discriminant, cases })
    }

    fn function(&mut self, declaration: bool) -> Result<Function, ParseError> {
        let m = self.mark();
        self.expect_name("function")?;
        let name = if declaration || !self.is_punct("(") { Some(self.identifier()?) } else { None };
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if !self.is_punct(")") {
            loop {
                params.push(self.identifier()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        let body = self.block_body()?;
        Ok(Function { name, params, body, span: self.finish(m) })
    }

    /// Comma expression. `no_in` keeps `in` free for `for (x in o)`.
    fn expression(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        let m = self.mark();
        let first = self.assignment(no_in)?;
        if !self.is_punct(",") {
            return Ok(first);
        }
        let mut exprs = vec![first];
        while self.eat_punct(",") {
            exprs.push(self.assignment(no_in)?);
        }
        Ok(Expr::new(ExprKind::Sequence { exprs }, self.finish(m)))
    }

    fn assignment(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        let m = self.mark();
        let target = self.conditional(no_in)?;
        let op = match self.kind() {
            TokKind::Punct("=") => None,
            TokKind::Punct("+=") => Some(BinOp::Add),
            TokKind::Punct("-=") => Some(BinOp::Sub),
            TokKind::Punct("*=") => Some(BinOp::Mul),
            TokKind::Punct("/=") => Some(BinOp::Div),
            TokKind::Punct("%=") => Some(BinOp::Mod),
            _ => return Ok(target),
        };
        if !target.is_assignable() {
            return self.error("invalid assignment target");
        }
        self.bump();
        let value = self.assignment(no_in)?;
        Ok(Expr::new(
            ExprKind::Assign { op, target: Box::new(target), value: Box::new(value) },
            self.finish(m),
        ))
    }

    fn conditional(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        let m = self.mark();
        let test = self.logical_or(no_in)?;
        if !self.eat_punct("?") {
            return Ok(test);
        }
        let consequent = self.assignment(false)?;
        self.expect_punct(":")?;
        let alternate = self.assignment(no_in)?;
        Ok(Expr::new(
            ExprKind::Cond { test: Box::new(test), consequent: Box::new(consequent), alternate: Box::new(alternate) },
            self.finish(m),
        ))
    }

    fn logical_or(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        let m = self.mark();
        let mut left = self.logical_and(no_in)?;
        while self.eat_punct("||") {
            let right = self.logical_and(no_in)?;
            left = Expr::new(
                ExprKind::Logical { op: LogicalOp::Or, left: Box::new(left), right: Box::new(right) },
                self.finish(m),
            );
        }
        Ok(left)
    }

    fn logical_and(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        let m = self.mark();
        let mut left = self.binary(5, no_in)?;
        while self.eat_punct("&&") {
            let right = self.binary(5, no_in)?;
            left = Expr::new(
                ExprKind::Logical { op: LogicalOp::And, left: Box::new(left), right: Box::new(right) },
                self.finish(m),
            );
        }
        Ok(left)
    }

    fn binary_op(&self, no_in: bool) -> Option<BinOp> {
        Some(match self.kind() {
            TokKind::Punct(p) => match *p {
                "+" => BinOp::Add,
                "-" => BinOp::Sub,
                "*" => BinOp::Mul,
                "/" => BinOp::Div,
                "%" => BinOp::Mod,
                "<" => BinOp::Lt,
                "<=" => BinOp::Le,
                ">" => BinOp::Gt,
                ">=" => BinOp::Ge,
                "==" => BinOp::Eq,
                "!=" => BinOp::NotEq,
                "===" => BinOp::StrictEq,
                "!==" => BinOp::StrictNotEq,
                _ => return None,
            },
            TokKind::Name(n) if n == "instanceof" => BinOp::InstanceOf,
            TokKind::Name(n) if n == "in" && !no_in => BinOp::In,
            _ => return None,
        })
    }

    /// Left-associative binary operators of precedence at least `min`.
    fn binary(&mut self, min: u8, no_in: bool) -> Result<Expr, ParseError> {
        let m = self.mark();
        let mut left = self.unary()?;
        while let Some(op) = self.binary_op(no_in).filter(|op| op.precedence() >= min) {
            self.bump();
            let right = self.binary(op.precedence() + 1, no_in)?;
            left = Expr::new(ExprKind::Binary { op, left: Box::new(left), right: Box::new(right) }, self.finish(m));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let m = self.mark();
        let op = match self.kind() {
            TokKind::Punct("!") => Some(UnaryOp::Not),
            TokKind::Punct("-") => Some(UnaryOp::Neg),
            TokKind::Name(n) if n == "typeof" => Some(UnaryOp::Typeof),
            TokKind::Name(n) if n == "delete" => Some(UnaryOp::Delete),
            TokKind::Name(n) if n == "void" => return self.error("`void` is not in the supported subset"),
            TokKind::Punct("+") => return self.error("unary `+` is not in the supported subset"),
            _ => None,
        };
        if let Some(op) = op {
            self.bump();
            let arg = self.unary()?;
            return Ok(Expr::new(ExprKind::Unary { op, arg: Box::new(arg) }, self.finish(m)));
        }
        let update = match self.kind() {
            TokKind::Punct("++") => Some(UpdateOp::Inc),
            TokKind::Punct("--") => Some(UpdateOp::Dec),
            _ => None,
        };
        if let Some(op) = update {
            self.bump();
            let target = self.unary()?;
            if !target.is_assignable() {
                return self.error("invalid increment/decrement target");
            }
            return Ok(Expr::new(ExprKind::Update { op, prefix: true, target: Box::new(target) }, self.finish(m)));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let m = self.mark();
        let target = self.call_member()?;
        let op = match self.kind() {
            TokKind::Punct("++") if !self.tok().newline_before => UpdateOp::Inc,
            TokKind::Punct("--") if !self.tok().newline_before => UpdateOp::Dec,
            _ => return Ok(target),
        };
        if !target.is_assignable() {
            return self.error("invalid increment/decrement target");
        }
        self.bump();
        Ok(Expr::new(ExprKind::Update { op, prefix: false, target: Box::new(target) }, self.finish(m)))
    }

    fn arguments(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if self.eat_punct(")") {
            return Ok(args);
        }
        loop {
            args.push(self.assignment(false)?);
            if self.eat_punct(")") {
                return Ok(args);
            }
            self.expect_punct(",")?;
        }
    }

    fn property_name(&mut self) -> Result<String, ParseError> {
        match self.kind().clone() {
            TokKind::Name(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.unexpected("a property name"),
        }
    }

    /// Member accesses, calls and `new`.
    fn call_member(&mut self) -> Result<Expr, ParseError> {
        let m = self.mark();
        let mut e = if self.is_name("new") {
            self.bump();
            let callee = self.new_callee()?;
            let args = if self.is_punct("(") { self.arguments()? } else { Vec::new() };
            Expr::new(ExprKind::New { callee: Box::new(callee), args }, self.finish(m))
        } else {
            self.primary()?
        };
        loop {
            if self.eat_punct(".") {
                let property = self.property_name()?;
                e = Expr::new(ExprKind::Member { object: Box::new(e), property }, self.finish(m));
            } else if self.eat_punct("[") {
                let index = self.expression(false)?;
                self.expect_punct("]")?;
                e = Expr::new(ExprKind::Index { object: Box::new(e), index: Box::new(index) }, self.finish(m));
            } else if self.is_punct("(") {
                if matches!(&e.kind, ExprKind::Ident { name } if name == "eval") {
                    return Err(ParseError { span: e.span, message: "`eval` is not in the supported subset".into() });
                }
                let args = self.arguments()?;
                e = Expr::new(ExprKind::Call { callee: Box::new(e), args }, self.finish(m));
            } else {
                return Ok(e);
            }
        }
    }

    /// The constructor position of `new`: member accesses without calls.
    fn new_callee(&mut self) -> Result<Expr, ParseError> {
        let m = self.mark();
        let mut e = if self.is_name("new") {
            self.bump();
            let callee = self.new_callee()?;
            let args = if self.is_punct("(") { self.arguments()? } else { Vec::new() };
            Expr::new(ExprKind::New { callee: Box::new(callee), args }, self.finish(m))
        } else {
            self.primary()?
        };
        loop {
            if self.eat_punct(".") {
                let property = self.property_name()?;
                e = Expr::new(ExprKind::Member { object: Box::new(e), property }, self.finish(m));
            } else if self.eat_punct("[") {
                let index = self.expression(false)?;
                self.expect_punct("]")?;
                e = Expr::new(ExprKind::Index { object: Box::new(e), index: Box::new(index) }, self.finish(m));
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let m = self.mark();
        let kind = match self.kind().clone() {
            TokKind::Num(value) => {
                self.bump();
                ExprKind::Num { value }
            }
            TokKind::Str(value) => {
                self.bump();
                ExprKind::Str { value }
            }
            TokKind::Punct("(") => {
                self.bump();
                let e = self.expression(false)?;
                self.expect_punct(")")?;
                // Parentheses leave no trace in the tree; widen the span only.
                return Ok(Expr::new(e.kind, self.finish(m)));
            }
            TokKind::Punct("[") => self.array()?,
            TokKind::Punct("{") => self.object()?,
            TokKind::Punct("/") | TokKind::Punct("/=") => {
                return self.error("regular expression literals are not in the supported subset")
            }
            TokKind::Name(n) => match n.as_str() {
                "this" => {
                    self.bump();
                    ExprKind::This
                }
                "null" => {
                    self.bump();
                    ExprKind::Null
                }
                "true" | "false" => {
                    self.bump();
                    ExprKind::Bool { value: n == "true" }
                }
                "function" => ExprKind::Function { func: self.function(false)? },
                _ => ExprKind::Ident { name: self.identifier()? },
            },
            _ => return self.unexpected("an expression"),
        };
        Ok(Expr::new(kind, self.finish(m)))
    }

    fn array(&mut self) -> Result<ExprKind, ParseError> {
        self.expect_punct("[")?;
        let mut elements = Vec::new();
        loop {
            if self.eat_punct("]") {
                return Ok(ExprKind::Array { elements });
            }
            if self.is_punct(",") {
                return self.error("array holes are not in the supported subset");
            }
            elements.push(self.assignment(false)?);
            if !self.is_punct("]") {
                self.expect_punct(",")?;
            }
        }
    }

    fn object(&mut self) -> Result<ExprKind, ParseError> {
        self.expect_punct("{")?;
        let mut props = Vec::new();
        loop {
            if self.eat_punct("}") {
                return Ok(ExprKind::Object { props });
            }
            let m = self.mark();
            let key = match self.kind().clone() {
                TokKind::Name(n) => {
                    if (n == "get" || n == "set") && !self.is_punct_at(1, ":") {
                        return self.error("getters and setters are not in the supported subset");
                    }
                    n
                }
                TokKind::Str(s) => s,
                TokKind::Num(v) => number_to_string(v),
                _ => return self.unexpected("a property name"),
            };
            self.bump();
            self.expect_punct(":")?;
            let value = self.assignment(false)?;
            props.push(Prop { key, value, span: self.finish(m) });
            if !self.is_punct("}") {
                self.expect_punct(",")?;
            }
        }
    }

    fn is_punct_at(&self, k: usize, p: &str) -> bool {
        matches!(self.kind_at(k), TokKind::Punct(q) if *q == p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(src: &str) -> ExprKind {
        parse_expression(src).unwrap_or_else(|e| panic!("{e}")).kind
    }

    #[test]
    fn precedence_and_associativity() {
        let ExprKind::Binary { op: BinOp::Add, left, .. } = expr("1 - 2 + 3 * 4") else { panic!() };
        assert!(matches!(left.kind, ExprKind::Binary { op: BinOp::Sub, .. }));
        let ExprKind::Assign { value, .. } = expr("a = b = c") else { panic!() };
        assert!(matches!(value.kind, ExprKind::Assign { .. }));
        assert!(matches!(expr("a || b && c"), ExprKind::Logical { op: LogicalOp::Or, .. }));
        assert!(matches!(expr("!a.b"), ExprKind::Unary { op: UnaryOp::Not, .. }));
        assert!(matches!(expr("a ? b : c = d"), ExprKind::Cond { .. }));
    }

    #[test]
    fn new_and_calls() {
        let ExprKind::New { callee, args } = expr("new a.B(1)") else { panic!() };
        assert!(matches!(callee.kind, ExprKind::Member { .. }));
        assert_eq!(args.len(), 1);
        let ExprKind::Member { object, .. } = expr("new F().x") else { panic!() };
        assert!(matches!(object.kind, ExprKind::New { .. }));
        assert!(matches!(expr("f(1)(2)"), ExprKind::Call { .. }));
    }

    #[test]
    fn asi_and_restricted_productions() {
        let p = parse("var a = 1\nvar b = 2\nreturn\nx").unwrap();
        assert_eq!(p.body.len(), 4);
        assert!(matches!(p.body[2].kind, StmtKind::Return { value: None }));
        let p = parse("a\n++b").unwrap();
        assert_eq!(p.body.len(), 2);
        assert!(parse("a b").is_err());
    }

    #[test]
    fn for_forms() {
        let p = parse("for (var k in o) {} for (k in o) ; for (var i = 0, j; i < 3; i++) {} for (;;) break;").unwrap();
        assert!(matches!(p.body[0].kind, StmtKind::ForIn { declared: true, .. }));
        assert!(matches!(p.body[1].kind, StmtKind::ForIn { declared: false, .. }));
        assert!(matches!(p.body[2].kind, StmtKind::For { init: Some(ForInit::Var { .. }), .. }));
        assert!(matches!(p.body[3].kind, StmtKind::For { init: None, test: None, update: None, .. }));
    }

    #[test]
    fn rejects_excluded_forms() {
        for (src, needle) in [
            ("eval('1')", "eval"),
            ("x = /ab/", "regular expression"),
            ("var o = { get x() { return 1 } }", "getters"),
            ("arguments[0]", "arguments"),
            ("var if = 1", "reserved"),
            ("x + ;", "expected an expression"),
            ("[1,,2]", "holes"),
            ("1 = 2", "assignment target"),
        ] {
            let err = parse(src).unwrap_err();
            assert!(err.message.contains(needle), "{src}: {}", err.message);
        }
    }

    #[test]
    fn error_points_at_offending_token() {
        let err = parse("x + ;").unwrap_err();
        assert_eq!((err.span.line, err.span.column), (1, 5));
    }

    #[test]
    fn spans_nest() {
        let p = parse("function f(a) { return a.b + 1 }").unwrap();
        let StmtKind::Function { func } = &p.body[0].kind else { panic!() };
        assert!(p.body[0].span.contains(&func.body[0].span));
        assert_eq!(&"function f(a) { return a.b + 1 }"[func.body[0].span.start..func.body[0].span.end], "return a.b + 1");
    }

    #[test]
    fn object_keys_normalise() {
        let ExprKind::Object { props } = expr("{ a: 1, 'b': 2, 3: 4, if: 5 }") else { panic!() };
        let keys: Vec<&str> = props.iter().map(|p| p.key.as_str()).collect();
        assert_eq!(keys, ["a", "b", "3", "if"]);
    }
}
