//! Small-step reduction of core configurations.
//!
//! Terms are decomposed into an evaluation context (a stack of frames) and a
//! redex. The pure `decompose`/`step` pair exposes single reductions on
//! whole configurations; `Machine` keeps the frame stack between steps so
//! that long runs do not re-traverse the term from the root each time.

mod rules;
pub mod sink;

use std::rc::Rc;

use crate::syntax::{Configuration, Expr, Label, Store, Term};

pub use rules::print_string;
pub use sink::{Discard, Sink, Stdout};

/// The shape of one evaluation-context layer, from the point of view of
/// exception and break propagation.
#[derive(Clone, Debug, PartialEq)]
pub enum FrameKind {
    /// Exceptions and breaks pass through.
    Plain,
    /// `l: { • }`: exceptions pass, breaks may stop here.
    LabelBody(Label),
    /// `break l •`: exceptions pass, an inner break replaces this one.
    BreakValue(Label),
    /// `try { • } catch`: breaks pass, exceptions stop here.
    CatchBody,
    /// `try { • } finally`: everything stops here.
    FinallyBody,
}

/// One layer of an evaluation context: `parent` with its `index`-th child
/// replaced by the hole.
#[derive(Clone, Debug)]
pub struct Frame {
    pub parent: Term,
    pub index: usize,
}

impl Frame {
    pub fn kind(&self) -> FrameKind {
        match &*self.parent {
            Expr::Label(l, _) => FrameKind::LabelBody(l.clone()),
            Expr::Break(l, _) => FrameKind::BreakValue(l.clone()),
            Expr::TryCatch(..) => FrameKind::CatchBody,
            Expr::TryFinally(..) => FrameKind::FinallyBody,
            _ => FrameKind::Plain,
        }
    }

    pub fn plug(&self, t: Term) -> Term {
        Rc::new(self.parent.with_child(self.index, t))
    }
}

/// Rebuilds a term from a frame stack (outermost first) and a focus.
pub fn plug_all(frames: &[Frame], focus: Term) -> Term {
    frames.iter().rev().fold(focus, |t, f| f.plug(t))
}

/// True when every frame is exception-transparent (an `F` context).
pub fn is_exception_context(frames: &[Frame]) -> bool {
    frames
        .iter()
        .all(|f| !matches!(f.kind(), FrameKind::CatchBody | FrameKind::FinallyBody))
}

/// True when every frame is break-transparent (a `G` context).
pub fn is_break_context(frames: &[Frame]) -> bool {
    frames.iter().all(|f| matches!(f.kind(), FrameKind::Plain | FrameKind::CatchBody))
}

#[derive(Clone, Debug)]
pub enum Decomposition {
    /// The whole expression is a value.
    Value,
    /// `frames` around an ordinary redex.
    Redex { frames: Vec<Frame>, redex: Term },
    /// An exception or break reached a frame that handles it. `frames`
    /// surrounds the handling node; `inner` lies between it and the signal.
    Signal { frames: Vec<Frame>, handler: Term, inner: Vec<Frame>, signal: Term },
    /// A signal with no handler below the root, but not yet at the root.
    Escaping { frames: Vec<Frame>, signal: Term },
    /// `err v` is the entire expression.
    Uncaught(Term),
    /// `break l v` is the entire expression.
    TopLevelBreak(Label, Term),
    /// No rule applies (a free identifier sits in redex position).
    Stuck { frames: Vec<Frame>, redex: Term },
}

/// Finds the first non-value child in an evaluation position.
fn next_eval_child(e: &Expr) -> Option<(usize, &Term)> {
    let n = e.eval_arity();
    e.children().into_iter().take(n).enumerate().find(|(_, c)| !c.is_value())
}

fn signal_of(e: &Expr) -> bool {
    matches!(e, Expr::Err(_) | Expr::Break(..))
}

/// Index of the innermost frame that stops `signal`, if any.
fn handler_index(frames: &[Frame], signal: &Expr) -> Option<usize> {
    frames.iter().rposition(|f| match (f.kind(), signal) {
        (FrameKind::CatchBody | FrameKind::FinallyBody, Expr::Err(_)) => true,
        (FrameKind::FinallyBody | FrameKind::LabelBody(_) | FrameKind::BreakValue(_), Expr::Break(..)) => true,
        _ => false,
    })
}

/// Descends from `focus` to the next redex, pushing frames as it goes.
fn descend(frames: &mut Vec<Frame>, mut focus: Term) -> Term {
    while let Some((i, child)) = next_eval_child(&focus) {
        let child = child.clone();
        frames.push(Frame { parent: focus, index: i });
        focus = child;
    }
    focus
}

/// Unique decomposition of an expression.
pub fn decompose(e: &Term) -> Decomposition {
    if e.is_value() {
        return Decomposition::Value;
    }
    let mut frames = Vec::new();
    let focus = descend(&mut frames, e.clone());
    classify(frames, focus)
}

fn classify(mut frames: Vec<Frame>, focus: Term) -> Decomposition {
    match &*focus {
        Expr::Id(_) => Decomposition::Stuck { frames, redex: focus },
        e if signal_of(e) => match handler_index(&frames, e) {
            Some(j) => {
                let inner = frames.split_off(j + 1);
                let handler = frames.pop().expect("handler frame").parent;
                Decomposition::Signal { frames, handler, inner, signal: focus }
            }
            None if frames.is_empty() => match e {
                Expr::Err(v) => Decomposition::Uncaught(v.clone()),
                Expr::Break(l, v) => Decomposition::TopLevelBreak(l.clone(), v.clone()),
                _ => unreachable!(),
            },
            None => Decomposition::Escaping { frames, signal: focus },
        },
        _ => Decomposition::Redex { frames, redex: focus },
    }
}

/// Why evaluation ended.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Value(Term),
    Uncaught(Term),
    TopLevelBreak(Label, Term),
    Stuck { expr: Term, reason: String },
    FuelExhausted(Term),
}

impl Outcome {
    pub fn is_value(&self) -> bool {
        matches!(self, Outcome::Value(_))
    }
}

/// A finished (or abandoned) run.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub outcome: Outcome,
    pub store: Store,
    pub steps: u64,
}

/// Result of a single step.
#[derive(Clone, Debug)]
pub enum Step {
    Next { config: Configuration, rule: &'static str },
    Done(Outcome),
}

/// One reduction on a whole configuration.
pub fn step(config: &Configuration, sink: &mut dyn Sink) -> Step {
    let mut m = Machine::new(config.clone());
    match m.step(sink) {
        Some(rule) => Step::Next { config: m.configuration(), rule },
        None => Step::Done(m.outcome().expect("machine finished")),
    }
}

/// Runs to completion or until `fuel` steps have been taken.
pub fn eval(config: Configuration, fuel: Option<u64>, sink: &mut dyn Sink) -> Evaluation {
    let mut m = Machine::new(config);
    while fuel.map_or(true, |f| m.steps < f) {
        if m.step(sink).is_none() {
            break;
        }
    }
    m.finish()
}

/// Like `eval`, but hands every intermediate configuration (including the
/// initial one) and the rule that produced it to `visit`. Returning `false`
/// from `visit` stops the run early with `FuelExhausted`.
pub fn trace(
    config: Configuration,
    fuel: Option<u64>,
    sink: &mut dyn Sink,
    mut visit: impl FnMut(&Configuration, Option<&'static str>) -> bool,
) -> Evaluation {
    let mut m = Machine::new(config);
    let mut keep_going = visit(&m.configuration(), None);
    while keep_going && fuel.map_or(true, |f| m.steps < f) {
        match m.step(sink) {
            Some(rule) => keep_going = visit(&m.configuration(), Some(rule)),
            None => break,
        }
    }
    m.finish()
}

/// An abstract machine state: a store, an evaluation context kept as a
/// frame stack, and the focused subterm.
pub struct Machine {
    pub store: Store,
    frames: Vec<Frame>,
    focus: Term,
    pub steps: u64,
    finished: Option<Outcome>,
}

impl Machine {
    pub fn new(config: Configuration) -> Machine {
        Machine { store: config.store, frames: Vec::new(), focus: config.expr, steps: 0, finished: None }
    }

    pub fn configuration(&self) -> Configuration {
        Configuration { store: self.store.clone(), expr: plug_all(&self.frames, self.focus.clone()) }
    }

    /// Packages the run, noticing a final state reached on the last step.
    fn finish(mut self) -> Evaluation {
        if self.finished.is_none() {
            self.finished = self.refocus();
        }
        let outcome = self
            .finished
            .take()
            .unwrap_or_else(|| Outcome::FuelExhausted(plug_all(&self.frames, self.focus.clone())));
        Evaluation { outcome, steps: self.steps, store: self.store }
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.finished.clone()
    }

    /// Moves the focus to the next redex, plugging finished values back into
    /// their frames. Returns the final outcome if there is nothing left to do.
    fn refocus(&mut self) -> Option<Outcome> {
        loop {
            if self.focus.is_value() {
                match self.frames.pop() {
                    Some(f) => {
                        self.focus = f.plug(self.focus.clone());
                        continue;
                    }
                    None => return Some(Outcome::Value(self.focus.clone())),
                }
            }
            self.focus = descend(&mut self.frames, self.focus.clone());
            if self.focus.is_value() {
                continue;
            }
            return match &*self.focus {
                Expr::Id(x) => Some(Outcome::Stuck {
                    expr: plug_all(&self.frames, self.focus.clone()),
                    reason: format!("unbound identifier `{x}`"),
                }),
                Expr::Err(v) if self.frames.is_empty() => Some(Outcome::Uncaught(v.clone())),
                Expr::Break(l, v) if self.frames.is_empty() => Some(Outcome::TopLevelBreak(l.clone(), v.clone())),
                _ => None,
            };
        }
    }

    /// Takes one step. Returns the name of the rule applied, or `None` once
    /// the machine has reached a final state.
    pub fn step(&mut self, sink: &mut dyn Sink) -> Option<&'static str> {
        if self.finished.is_some() {
            return None;
        }
        if let Some(done) = self.refocus() {
            self.finished = Some(done);
            return None;
        }
        let rule = if signal_of(&self.focus) {
            match handler_index(&self.frames, &self.focus) {
                Some(j) => {
                    self.frames.truncate(j + 1);
                    let handler = self.frames.pop().expect("handler frame").parent;
                    let (next, rule) = rules::handle_signal(&handler, &self.focus);
                    self.focus = next;
                    rule
                }
                None => {
                    self.frames.clear();
                    match &*self.focus {
                        Expr::Err(_) => "E-Uncaught-Exception",
                        _ => "E-Break-Escape",
                    }
                }
            }
        } else {
            let (next, rule) = rules::contract(&self.focus, &mut self.store, sink);
            self.focus = next;
            rule
        };
        self.steps += 1;
        Some(rule)
    }
}
