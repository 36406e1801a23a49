//! Abstract syntax for the supported JavaScript subset.

use serde::{Serialize, Serializer};

/// Source position of a node. Spans never take part in AST equality, so a
/// reparsed pretty-print compares equal to the original.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub column: u32,
}

impl PartialEq for Span {
    fn eq(&self, _other: &Span) -> bool {
        true
    }
}

impl Span {
    pub fn contains(&self, inner: &Span) -> bool {
        self.start <= inner.start && inner.end <= self.end
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Program {
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stmt {
    #[serde(flatten)]
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarDecl {
    pub name: String,
    pub init: Option<Expr>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatchClause {
    pub param: String,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwitchCase {
    /// `None` for `default:`.
    pub test: Option<Expr>,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Function {
    pub name: Option<String>,
    pub params: Vec<String>,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ForInit {
    Var { decls: Vec<VarDecl> },
    Expr { expr: Expr },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum StmtKind {
    Var { decls: Vec<VarDecl> },
    Expr { expr: Expr },
    If { test: Expr, consequent: Box<Stmt>, alternate: Option<Box<Stmt>> },
    While { test: Expr, body: Box<Stmt> },
    DoWhile { body: Box<Stmt>, test: Expr },
    For { init: Option<ForInit>, test: Option<Expr>, update: Option<Expr>, body: Box<Stmt> },
    /// `for (var x in e)` when `declared`, otherwise `for (x in e)`.
    ForIn { declared: bool, name: String, object: Expr, body: Box<Stmt> },
    Return { value: Option<Expr> },
    Break { label: Option<String> },
    Continue { label: Option<String> },
    Labeled { label: String, body: Box<Stmt> },
    Try { block: Vec<Stmt>, handler: Option<CatchClause>, finalizer: Option<Vec<Stmt>> },
    Throw { value: Expr },
    Switch { discriminant: Expr, cases: Vec<SwitchCase> },
    With { object: Expr, body: Box<Stmt> },
    Block { body: Vec<Stmt> },
    Function { func: Function },
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    NotEq,
    StrictEq,
    StrictNotEq,
    InstanceOf,
    In,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::NotEq => "!=",
            BinOp::StrictEq => "===",
            BinOp::StrictNotEq => "!==",
            BinOp::InstanceOf => "instanceof",
            BinOp::In => "in",
        }
    }

    /// Binding strength, higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Eq | BinOp::NotEq | BinOp::StrictEq | BinOp::StrictNotEq => 5,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::InstanceOf | BinOp::In => 6,
            BinOp::Add | BinOp::Sub => 7,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 8,
        }
    }

    /// Operators usable in compound assignment (`+=` and friends).
    pub const COMPOUND: [BinOp; 5] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LogicalOp {
    And,
    Or,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnaryOp {
    Typeof,
    Not,
    Neg,
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UpdateOp {
    Inc,
    Dec,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop {
    pub key: String,
    pub value: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expr {
    #[serde(flatten)]
    pub kind: ExprKind,
    pub span: Span,
}

fn finite_or_text<S: Serializer>(n: &f64, s: S) -> Result<S::Ok, S::Error> {
    if n.is_finite() {
        s.serialize_f64(*n)
    } else {
        s.serialize_str(&crate::delta::number_to_string(*n))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum ExprKind {
    Num {
        #[serde(serialize_with = "finite_or_text")]
        value: f64,
    },
    Str { value: String },
    Bool { value: bool },
    Null,
    Ident { name: String },
    This,
    Object { props: Vec<Prop> },
    Array { elements: Vec<Expr> },
    Function { func: Function },
    /// `object.property`
    Member { object: Box<Expr>, property: String },
    /// `object[index]`
    Index { object: Box<Expr>, index: Box<Expr> },
    Call { callee: Box<Expr>, args: Vec<Expr> },
    New { callee: Box<Expr>, args: Vec<Expr> },
    /// `target = value`, or `target op= value` when `op` is present.
    Assign { op: Option<BinOp>, target: Box<Expr>, value: Box<Expr> },
    Binary { op: BinOp, left: Box<Expr>, right: Box<Expr> },
    Logical { op: LogicalOp, left: Box<Expr>, right: Box<Expr> },
    Unary { op: UnaryOp, arg: Box<Expr> },
    Update { op: UpdateOp, prefix: bool, target: Box<Expr> },
    Cond { test: Box<Expr>, consequent: Box<Expr>, alternate: Box<Expr> },
    Sequence { exprs: Vec<Expr> },
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    /// True for the forms allowed on the left of `=` and under `++`/`--`.
    pub fn is_assignable(&self) -> bool {
        matches!(self.kind, ExprKind::Ident { .. } | ExprKind::Member { .. } | ExprKind::Index { .. })
    }
}

impl Stmt {
    pub fn new(kind: StmtKind, span: Span) -> Stmt {
        Stmt { kind, span }
    }
}

/// Expressions directly owned by `stmt` (not descending
/// into nested statements).
pub fn stmt_exprs(stmt: &Stmt) -> Vec<&Expr> {
    match &stmt.kind {
        StmtKind::Var { decls } => decls.iter().filter_map(|d| d.init.as_ref()).collect(),
        StmtKind::Expr { expr } | StmtKind::Throw { value: expr } => vec![expr],
        StmtKind::If { test, .. } | StmtKind::While { test, .. } | StmtKind::DoWhile { test, .. } => vec![test],
        StmtKind::For { init, test, update, .. } => {
            let mut out = Vec::new();
            match init {
                Some(ForInit::Var { decls }) => out.extend(decls.iter().filter_map(|d| d.init.as_ref())),
                Some(ForInit::Expr { expr }) => out.push(expr),
                None => {}
            }
            out.extend(test.iter());
            out.extend(update.iter());
            out
        }
        StmtKind::ForIn { object, .. } | StmtKind::With { object, .. } => vec![object],
        StmtKind::Return { value } => value.iter().collect(),
        StmtKind::Switch { discriminant, cases } => {
            std::iter::once(discriminant).chain(cases.iter().filter_map(|c| c.test.as_ref())).collect()
        }
        _ => vec![],
    }
}

/// Nested statements directly owned by `stmt`.
pub fn stmt_children(stmt: &Stmt) -> Vec<&Stmt> {
    match &stmt.kind {
        StmtKind::If { consequent, alternate, .. } => {
            std::iter::once(&**consequent).chain(alternate.as_deref()).collect()
        }
        StmtKind::While { body, .. }
        | StmtKind::DoWhile { body, .. }
        | StmtKind::For { body, .. }
        | StmtKind::ForIn { body, .. }
        | StmtKind::Labeled { body, .. }
        | StmtKind::With { body, .. } => vec![body],
        StmtKind::Try { block, handler, finalizer } => block
            .iter()
            .chain(handler.iter().flat_map(|h| h.body.iter()))
            .chain(finalizer.iter().flatten())
            .collect(),
        StmtKind::Switch { cases, .. } => cases.iter().flat_map(|c| c.body.iter()).collect(),
        StmtKind::Block { body } => body.iter().collect(),
        _ => vec![],
    }
}

/// Immediate subexpressions of an expression (function bodies excluded).
pub fn expr_children(e: &Expr) -> Vec<&Expr> {
    match &e.kind {
        ExprKind::Object { props } => props.iter().map(|p| &p.value).collect(),
        ExprKind::Array { elements } => elements.iter().collect(),
        ExprKind::Member { object, .. } => vec![object],
        ExprKind::Index { object, index } => vec![object, index],
        ExprKind::Call { callee, args } | ExprKind::New { callee, args } => {
            std::iter::once(&**callee).chain(args.iter()).collect()
        }
        ExprKind::Assign { target, value, .. } => vec![target, value],
        ExprKind::Binary { left, right, .. } | ExprKind::Logical { left, right, .. } => vec![left, right],
        ExprKind::Unary { arg, .. } => vec![arg],
        ExprKind::Update { target, .. } => vec![target],
        ExprKind::Cond { test, consequent, alternate } => vec![test, consequent, alternate],
        ExprKind::Sequence { exprs } => exprs.iter().collect(),
        _ => vec![],
    }
}

/// Rebuilds `e` with each immediate subexpression replaced by `f` of it.
/// Function bodies are left alone.
pub fn map_expr_children(e: &Expr, f: &mut dyn FnMut(&Expr) -> Expr) -> Expr {
    let b = |f: &mut dyn FnMut(&Expr) -> Expr, x: &Expr| Box::new(f(x));
    let kind = match &e.kind {
        ExprKind::Object { props } => {
            ExprKind::Object { props: props.iter().map(|p| Prop { value: f(&p.value), ..p.clone() }).collect() }
        }
        ExprKind::Array { elements } => ExprKind::Array { elements: elements.iter().map(|x| f(x)).collect() },
        ExprKind::Member { object, property } => {
            ExprKind::Member { object: b(f, object), property: property.clone() }
        }
        ExprKind::Index { object, index } => ExprKind::Index { object: b(f, object), index: b(f, index) },
        ExprKind::Call { callee, args } => {
            ExprKind::Call { callee: b(f, callee), args: args.iter().map(|x| f(x)).collect() }
        }
        ExprKind::New { callee, args } => ExprKind::New { callee: b(f, callee), args: args.iter().map(|x| f(x)).collect() },
        ExprKind::Assign { op, target, value } => ExprKind::Assign { op: *op, target: b(f, target), value: b(f, value) },
        ExprKind::Binary { op, left, right } => ExprKind::Binary { op: *op, left: b(f, left), right: b(f, right) },
        ExprKind::Logical { op, left, right } => ExprKind::Logical { op: *op, left: b(f, left), right: b(f, right) },
        ExprKind::Unary { op, arg } => ExprKind::Unary { op: *op, arg: b(f, arg) },
        ExprKind::Update { op, prefix, target } => ExprKind::Update { op: *op, prefix: *prefix, target: b(f, target) },
        ExprKind::Cond { test, consequent, alternate } => ExprKind::Cond {
            test: b(f, test),
            consequent: b(f, consequent),
            alternate: b(f, alternate),
        },
        ExprKind::Sequence { exprs } => ExprKind::Sequence { exprs: exprs.iter().map(|x| f(x)).collect() },
        other => other.clone(),
    };
    Expr::new(kind, e.span)
}

/// Rebuilds `s` with each directly owned expression replaced by `fe` of
/// it and each nested statement by `fs` of it.
pub fn map_stmt_children(
    s: &Stmt,
    fe: &mut dyn FnMut(&Expr) -> Expr,
    fs: &mut dyn FnMut(&Stmt) -> Stmt,
) -> Stmt {
    let decls = |fe: &mut dyn FnMut(&Expr) -> Expr, ds: &[VarDecl]| -> Vec<VarDecl> {
        ds.iter().map(|d| VarDecl { init: d.init.as_ref().map(|i| fe(i)), ..d.clone() }).collect()
    };
    let list = |fs: &mut dyn FnMut(&Stmt) -> Stmt, ss: &[Stmt]| -> Vec<Stmt> { ss.iter().map(|x| fs(x)).collect() };
    let kind = match &s.kind {
        StmtKind::Var { decls: ds } => StmtKind::Var { decls: decls(fe, ds) },
        StmtKind::Expr { expr } => StmtKind::Expr { expr: fe(expr) },
        StmtKind::If { test, consequent, alternate } => StmtKind::If {
            test: fe(test),
            consequent: Box::new(fs(consequent)),
            alternate: alternate.as_ref().map(|a| Box::new(fs(a))),
        },
        StmtKind::While { test, body } => StmtKind::While { test: fe(test), body: Box::new(fs(body)) },
        StmtKind::DoWhile { body, test } => StmtKind::DoWhile { body: Box::new(fs(body)), test: fe(test) },
        StmtKind::For { init, test, update, body } => StmtKind::For {
            init: init.as_ref().map(|i| match i {
                ForInit::Var { decls: ds } => ForInit::Var { decls: decls(fe, ds) },
                ForInit::Expr { expr } => ForInit::Expr { expr: fe(expr) },
            }),
            test: test.as_ref().map(|t| fe(t)),
            update: update.as_ref().map(|u| fe(u)),
            body: Box::new(fs(body)),
        },
        StmtKind::ForIn { declared, name, object, body } => StmtKind::ForIn {
            declared: *declared,
            name: name.clone(),
            object: fe(object),
            body: Box::new(fs(body)),
        },
        StmtKind::Return { value } => StmtKind::Return { value: value.as_ref().map(|v| fe(v)) },
        StmtKind::Labeled { label, body } => StmtKind::Labeled { label: label.clone(), body: Box::new(fs(body)) },
        StmtKind::Try { block, handler, finalizer } => StmtKind::Try {
            block: list(fs, block),
            handler: handler.as_ref().map(|h| CatchClause { body: list(fs, &h.body), ..h.clone() }),
            finalizer: finalizer.as_ref().map(|f| list(fs, f)),
        },
        StmtKind::Throw { value } => StmtKind::Throw { value: fe(value) },
        StmtKind::Switch { discriminant, cases } => StmtKind::Switch {
            discriminant: fe(discriminant),
            cases: cases
                .iter()
                .map(|c| SwitchCase { test: c.test.as_ref().map(|t| fe(t)), body: list(fs, &c.body), span: c.span })
                .collect(),
        },
        StmtKind::With { object, body } => StmtKind::With { object: fe(object), body: Box::new(fs(body)) },
        StmtKind::Block { body } => StmtKind::Block { body: list(fs, body) },
        other => other.clone(),
    };
    Stmt::new(kind, s.span)
}
