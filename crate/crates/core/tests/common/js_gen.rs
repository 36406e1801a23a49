//! Random syntactically valid JavaScript programs, as source text.

use rand::seq::SliceRandom;
use rand::Rng;

const VARS: &[&str] = &["a", "b", "c", "o", "f", "window", "print", "Object", "undefined"];
const PROPS: &[&str] = &["p", "q", "length", "prototype", "toString", "valueOf"];
const BINOPS: &[&str] = &[
    "+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=", "===", "!==", "&&", "||", "instanceof", "in",
];
const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%="];

#[derive(Clone, Default)]
struct Ctx {
    in_function: bool,
    /// Innermost breakable construct is a loop or switch.
    breakable: bool,
    in_loop: bool,
    labels: Vec<(String, bool)>,
}

pub struct JsGen<'r, R: Rng> {
    rng: &'r mut R,
    fresh: usize,
}

impl<'r, R: Rng> JsGen<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        JsGen { rng, fresh: 0 }
    }

    pub fn program(&mut self, statements: usize, depth: u32) -> String {
        let ctx = Ctx::default();
        (0..statements).map(|_| self.stmt(depth, &ctx)).collect::<Vec<_>>().join("\n")
    }

    fn name(&mut self) -> &'static str {
        VARS.choose(self.rng).unwrap()
    }

    fn label(&mut self) -> String {
        self.fresh += 1;
        format!("L{}", self.fresh)
    }

    fn block(&mut self, depth: u32, ctx: &Ctx) -> String {
        let n = self.rng.gen_range(0..3);
        let body: Vec<String> = (0..n).map(|_| self.stmt(depth, ctx)).collect();
        format!("{{ {} }}", body.join(" "))
    }

    fn stmt(&mut self, depth: u32, ctx: &Ctx) -> String {
        if depth == 0 {
            return self.expr_stmt(0, ctx);
        }
        let d = depth - 1;
        let looped = Ctx { breakable: true, in_loop: true, ..ctx.clone() };
        match self.rng.gen_range(0..22) {
            0..=3 => self.expr_stmt(d, ctx),
            4 => format!("var {} = {};", self.name(), self.expr(d, ctx)),
            5 => format!("var {}, {};", self.name(), self.name()),
            6 => format!("if ({}) {}", self.expr(d, ctx), self.block(d, ctx)),
            7 => format!("if ({}) {} else {}", self.expr(d, ctx), self.block(d, ctx), self.block(d, ctx)),
            8 => format!("while ({}) {}", self.expr(d, ctx), self.block(d, &looped)),
            9 => format!("do {} while ({});", self.block(d, &looped), self.expr(d, ctx)),
            10 => format!(
                "for (var {} = ({}); {}; {}) {}",
                self.name(),
                self.expr(d, ctx),
                self.expr(d, ctx),
                self.expr(d, ctx),
                self.block(d, &looped)
            ),
            11 => format!("for ({} in {}) {}", self.name(), self.expr(d, ctx), self.block(d, &looped)),
            12 => {
                let l = self.label();
                let mut inner = looped.clone();
                inner.labels.push((l.clone(), true));
                format!("{l}: while ({}) {}", self.expr(d, ctx), self.block(d, &inner))
            }
            13 => {
                let l = self.label();
                let mut inner = ctx.clone();
                inner.labels.push((l.clone(), false));
                format!("{l}: {}", self.block(d, &inner))
            }
            14 => {
                let sw = Ctx { breakable: true, ..ctx.clone() };
                let e = self.expr(d, ctx);
                let mut cases = String::new();
                for _ in 0..self.rng.gen_range(0..3) {
                    cases.push_str(&format!("case {}: {} ", self.expr(d, ctx), self.stmt(d, &sw)));
                }
                if self.rng.gen_bool(0.5) {
                    cases.push_str(&format!("default: {} ", self.stmt(d, &sw)));
                }
                format!("switch ({e}) {{ {cases}}}")
            }
            15 => match self.rng.gen_range(0..3) {
                0 => format!("try {} catch (e) {}", self.block(d, ctx), self.block(d, ctx)),
                1 => format!("try {} finally {}", self.block(d, ctx), self.block(d, ctx)),
                _ => format!(
                    "try {} catch (e) {} finally {}",
                    self.block(d, ctx),
                    self.block(d, ctx),
                    self.block(d, ctx)
                ),
            },
            16 => format!("throw {};", self.expr(d, ctx)),
            17 => format!("with ({}) {}", self.expr(d, ctx), self.block(d, ctx)),
            18 => {
                let inner = Ctx { in_function: true, ..Ctx::default() };
                format!("function {}(x, y) {}", self.name_fn(), self.block(d, &inner))
            }
            19 if ctx.in_function => format!("return {};", self.expr(d, ctx)),
            20 => self.jump(ctx),
            _ => ";".to_string(),
        }
    }

    /// An expression statement; a leading brace would start a block.
    fn expr_stmt(&mut self, depth: u32, ctx: &Ctx) -> String {
        let e = self.expr(depth, ctx);
        if e.starts_with('{') {
            format!("({e});")
        } else {
            format!("{e};")
        }
    }

    fn name_fn(&mut self) -> &'static str {
        ["f", "g", "h"].choose(self.rng).unwrap()
    }

    fn jump(&mut self, ctx: &Ctx) -> String {
        let mut options = Vec::new();
        if ctx.breakable {
            options.push("break;".to_string());
        }
        if ctx.in_loop {
            options.push("continue;".to_string());
        }
        for (l, is_loop) in &ctx.labels {
            options.push(format!("break {l};"));
            if *is_loop {
                options.push(format!("continue {l};"));
            }
        }
        options.choose(self.rng).cloned().unwrap_or_else(|| ";".to_string())
    }

    fn lvalue(&mut self, depth: u32, ctx: &Ctx) -> String {
        match self.rng.gen_range(0..3) {
            0 => self.name().to_string(),
            1 => format!("{}.{}", self.primary(depth, ctx), PROPS.choose(self.rng).unwrap()),
            _ => format!("{}[{}]", self.primary(depth, ctx), self.expr(depth, ctx)),
        }
    }

    fn primary(&mut self, depth: u32, ctx: &Ctx) -> String {
        if depth == 0 {
            self.name().to_string()
        } else {
            format!("({})", self.expr(depth - 1, ctx))
        }
    }

    fn expr(&mut self, depth: u32, ctx: &Ctx) -> String {
        if depth == 0 || self.rng.gen_ratio(1, 5) {
            return match self.rng.gen_range(0..8) {
                0 => self.rng.gen_range(0..10).to_string(),
                1 => "\"s\"".to_string(),
                2 => "true".to_string(),
                3 => "null".to_string(),
                4 => "this".to_string(),
                _ => self.name().to_string(),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..16) {
            0 => format!("{} {} {}", self.primary(d, ctx), BINOPS.choose(self.rng).unwrap(), self.primary(d, ctx)),
            1 => format!("{} {} {}", self.lvalue(d, ctx), ASSIGN_OPS.choose(self.rng).unwrap(), self.primary(d, ctx)),
            2 => {
                let op = ["++", "--"].choose(self.rng).unwrap();
                let lv = self.lvalue(d, ctx);
                if self.rng.gen_bool(0.5) {
                    format!("{op}{lv}")
                } else {
                    format!("{lv}{op}")
                }
            }
            3 => format!("{}({})", self.primary(d, ctx), self.args(d, ctx)),
            4 => format!("{}.{}({})", self.primary(d, ctx), PROPS.choose(self.rng).unwrap(), self.args(d, ctx)),
            5 => format!("new {}({})", self.name(), self.args(d, ctx)),
            6 => format!("{}.{}", self.primary(d, ctx), PROPS.choose(self.rng).unwrap()),
            7 => format!("{}[{}]", self.primary(d, ctx), self.expr(d, ctx)),
            8 => {
                let op = ["!", "-", "typeof ", "delete "].choose(self.rng).unwrap();
                let arg = if *op == "delete " { self.lvalue(d, ctx) } else { self.primary(d, ctx) };
                format!("{op}{arg}")
            }
            9 => format!("{} ? {} : {}", self.primary(d, ctx), self.primary(d, ctx), self.primary(d, ctx)),
            10 => format!("({}, {})", self.expr(d, ctx), self.expr(d, ctx)),
            11 => format!("{{p: {}, q: {}}}", self.expr(d, ctx), self.expr(d, ctx)),
            12 => format!("[{}]", self.args(d, ctx)),
            13 => {
                let inner = Ctx { in_function: true, ..Ctx::default() };
                format!("(function (x) {})", self.block(d, &inner))
            }
            _ => self.lvalue(d, ctx),
        }
    }

    fn args(&mut self, depth: u32, ctx: &Ctx) -> String {
        let n = self.rng.gen_range(0..3);
        (0..n).map(|_| self.expr(depth, ctx)).collect::<Vec<_>>().join(", ")
    }
}
