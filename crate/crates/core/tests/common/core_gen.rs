//! Random closed core terms.

use rand::seq::SliceRandom;
use rand::Rng;

use lambdajs::delta::{PrimOp, ALL_OPS};
use lambdajs::syntax::{build::*, Term};

const NAMES: &[&str] = &["a", "b", "c"];
const LABELS: &[&str] = &["l", "m"];
const STRINGS: &[&str] = &["x", "y", "", "1", "__proto__", "XMLHttpRequest"];

pub struct CoreGen<'r, R: Rng> {
    rng: &'r mut R,
    scope: Vec<String>,
}

impl<'r, R: Rng> CoreGen<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        CoreGen { rng, scope: Vec::new() }
    }

    /// A closed term of depth at most `depth`.
    pub fn term(&mut self, depth: u32) -> Term {
        if depth == 0 || self.rng.gen_ratio(1, 12) {
            return self.leaf();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..22) {
            0 => self.value(d),
            1 => {
                let x = *NAMES.choose(self.rng).unwrap();
                let rhs = self.term(d);
                self.scope.push(x.to_string());
                let body = self.term(d);
                self.scope.pop();
                let_(x, rhs, body)
            }
            2 => {
                let f = if self.rng.gen_bool(0.7) { self.func(d) } else { self.term(d) };
                let n = self.rng.gen_range(0..3);
                let args = (0..n).map(|_| self.term(d)).collect();
                app(f, args)
            }
            3 => get(self.object_ish(d), self.field(d)),
            4 => update(self.object_ish(d), self.field(d), self.term(d)),
            5 => delete(self.object_ish(d), self.field(d)),
            6 => ref_(self.term(d)),
            7 => deref(self.term(d)),
            8 => set(self.term(d), self.term(d)),
            9 => if_(self.cond(d), self.term(d), self.term(d)),
            10 => seq(self.term(d), self.term(d)),
            11 => {
                // Mostly loops that stop at once or after a few rounds.
                let c = if self.rng.gen_bool(0.6) { boolean(false) } else { self.cond(d) };
                while_(c, self.term(d))
            }
            12 => label(LABELS.choose(self.rng).unwrap(), self.term(d)),
            13 => break_(LABELS.choose(self.rng).unwrap(), self.term(d)),
            14 => {
                let x = *NAMES.choose(self.rng).unwrap();
                let body = self.term(d);
                self.scope.push(x.to_string());
                let h = self.term(d);
                self.scope.pop();
                try_catch(body, x, h)
            }
            15 => try_finally(self.term(d), self.term(d)),
            16 => throw(self.term(d)),
            17 | 18 => {
                let op = *ALL_OPS.choose(self.rng).unwrap();
                let args = (0..op.arity()).map(|_| self.term(d)).collect();
                prim(op, args)
            }
            19 => {
                let keys = self.keys();
                object(keys.into_iter().map(|k| (k, self.term(d))).collect())
            }
            20 => get(deref(ref_(self.value(d))), self.field(d)),
            _ => prim(PrimOp::StxEq, vec![self.term(d), self.term(d)]),
        }
    }

    fn leaf(&mut self) -> Term {
        if !self.scope.is_empty() && self.rng.gen_ratio(1, 3) {
            let x = self.scope.choose(self.rng).unwrap().clone();
            return id(&x);
        }
        self.constant()
    }

    fn constant(&mut self) -> Term {
        match self.rng.gen_range(0..6) {
            0 => num(self.rng.gen_range(-2..5) as f64),
            1 => str(STRINGS.choose(self.rng).unwrap()),
            2 => boolean(self.rng.gen()),
            3 => undefined(),
            4 => null(),
            _ => num(0.5),
        }
    }

    fn value(&mut self, depth: u32) -> Term {
        match self.rng.gen_range(0..3) {
            0 => self.constant(),
            1 => self.func(depth),
            _ => {
                let keys = self.keys();
                object(keys.into_iter().map(|k| (k, self.constant())).collect())
            }
        }
    }

    fn func(&mut self, depth: u32) -> Term {
        let n = self.rng.gen_range(0..3);
        let params: Vec<&str> = NAMES[..n].to_vec();
        let saved = self.scope.len();
        self.scope.extend(params.iter().map(|p| p.to_string()));
        let body = self.term(depth);
        self.scope.truncate(saved);
        func(&params, body)
    }

    fn keys(&mut self) -> Vec<&'static str> {
        let mut keys: Vec<&str> = ["x", "y", "__proto__"].into_iter().filter(|_| self.rng.gen_bool(0.5)).collect();
        keys.shuffle(self.rng);
        keys
    }

    fn object_ish(&mut self, depth: u32) -> Term {
        if self.rng.gen_bool(0.6) {
            self.value(depth)
        } else {
            self.term(depth)
        }
    }

    fn field(&mut self, depth: u32) -> Term {
        if self.rng.gen_bool(0.7) {
            str(STRINGS.choose(self.rng).unwrap())
        } else {
            self.term(depth)
        }
    }

    fn cond(&mut self, depth: u32) -> Term {
        if self.rng.gen_bool(0.5) {
            boolean(self.rng.gen())
        } else {
            self.term(depth)
        }
    }
}
