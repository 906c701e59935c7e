//! Evaluating first-order sentences on graph views, plus a small catalog of
//! named properties with fast specialized checkers.
//!
//! Evaluation is the textbook recursion over the quantifier prefix with
//! short-circuiting; the matrix is compiled once into a postfix program so
//! the innermost loop stays flat. Conventions on the empty view: a leading
//! universal quantifier is vacuously true, a leading existential is false.

use crate::formula::{Formula, Matrix, Quantifier, QuantifierKind};
use crate::graph::Subgraph;
use crate::set::VertexSet;

/// A graph view together with values for a formula's free variables, in
/// declaration order.
#[derive(Clone, Copy, Debug)]
pub struct Structure<'a> {
    view: Subgraph<'a>,
    frees: &'a [usize],
}

impl<'a> Structure<'a> {
    pub fn new(view: Subgraph<'a>) -> Structure<'a> {
        Structure { view, frees: &[] }
    }

    pub fn with_frees(view: Subgraph<'a>, frees: &'a [usize]) -> Structure<'a> {
        Structure { view, frees }
    }

    pub fn view(&self) -> Subgraph<'a> {
        self.view
    }

    /// Does the structure satisfy the formula? Free-variable values must
    /// match the formula's declarations and lie inside the view.
    pub fn models(&self, f: &Formula) -> bool {
        assert_eq!(
            self.frees.len(),
            f.free_slots().len(),
            "free-variable count mismatch"
        );
        for &v in self.frees {
            assert!(self.view.contains(v), "free value {v} outside the view");
        }
        let mut ev = Evaluator::new(self.view, f);
        for (&slot, &v) in f.free_slots().iter().zip(self.frees) {
            ev.env[slot] = v;
        }
        ev.run(0)
    }
}

/// Evaluate a sentence on a view.
pub fn models(view: Subgraph<'_>, f: &Formula) -> bool {
    assert!(f.is_sentence(), "models requires a sentence");
    Structure::new(view).models(f)
}

/// A decidable graph property. Formulas give the generic evaluator;
/// catalog entries substitute specialized checkers with identical answers.
pub trait Property {
    fn holds(&self, view: Subgraph<'_>) -> bool;
}

impl Property for Formula {
    fn holds(&self, view: Subgraph<'_>) -> bool {
        models(view, self)
    }
}

impl Property for CatalogFormula {
    fn holds(&self, view: Subgraph<'_>) -> bool {
        self.models(view)
    }
}

// --- compiled matrix ---

#[derive(Clone, Copy, Debug)]
enum Op {
    Eq(usize, usize),
    Adj(usize, usize),
    Not,
    And,
    Or,
    Implies,
    Iff,
}

fn compile(m: &Matrix, out: &mut Vec<Op>) {
    match m {
        Matrix::Eq(a, b) => out.push(Op::Eq(*a, *b)),
        Matrix::Adj(a, b) => out.push(Op::Adj(*a, *b)),
        Matrix::Not(x) => {
            compile(x, out);
            out.push(Op::Not);
        }
        Matrix::And(a, b) => {
            compile(a, out);
            compile(b, out);
            out.push(Op::And);
        }
        Matrix::Or(a, b) => {
            compile(a, out);
            compile(b, out);
            out.push(Op::Or);
        }
        Matrix::Implies(a, b) => {
            compile(a, out);
            compile(b, out);
            out.push(Op::Implies);
        }
        Matrix::Iff(a, b) => {
            compile(a, out);
            compile(b, out);
            out.push(Op::Iff);
        }
    }
}

struct Evaluator<'a> {
    view: Subgraph<'a>,
    domain: Vec<usize>,
    prefix: Vec<Quantifier>,
    ops: Vec<Op>,
    env: Vec<usize>,
    stack: Vec<bool>,
}

impl<'a> Evaluator<'a> {
    fn new(view: Subgraph<'a>, f: &Formula) -> Evaluator<'a> {
        let mut ops = Vec::new();
        compile(f.matrix(), &mut ops);
        Evaluator {
            view,
            domain: view.vertices().to_vec(),
            prefix: f.prefix().to_vec(),
            ops,
            env: vec![0; f.vars().len()],
            stack: Vec::with_capacity(16),
        }
    }

    fn run(&mut self, qi: usize) -> bool {
        if qi == self.prefix.len() {
            return self.leaf();
        }
        let Quantifier { kind, var } = self.prefix[qi];
        match kind {
            QuantifierKind::Forall => {
                for i in 0..self.domain.len() {
                    self.env[var] = self.domain[i];
                    if !self.run(qi + 1) {
                        return false;
                    }
                }
                true
            }
            QuantifierKind::Exists => {
                for i in 0..self.domain.len() {
                    self.env[var] = self.domain[i];
                    if self.run(qi + 1) {
                        return true;
                    }
                }
                false
            }
        }
    }

    fn leaf(&mut self) -> bool {
        self.stack.clear();
        for op in &self.ops {
            match *op {
                Op::Eq(a, b) => self.stack.push(self.env[a] == self.env[b]),
                Op::Adj(a, b) => self
                    .stack
                    .push(self.view.has_edge(self.env[a], self.env[b])),
                Op::Not => {
                    let x = self.stack.pop().unwrap();
                    self.stack.push(!x);
                }
                Op::And => {
                    let b = self.stack.pop().unwrap();
                    let a = self.stack.pop().unwrap();
                    self.stack.push(a && b);
                }
                Op::Or => {
                    let b = self.stack.pop().unwrap();
                    let a = self.stack.pop().unwrap();
                    self.stack.push(a || b);
                }
                Op::Implies => {
                    let b = self.stack.pop().unwrap();
                    let a = self.stack.pop().unwrap();
                    self.stack.push(!a || b);
                }
                Op::Iff => {
                    let b = self.stack.pop().unwrap();
                    let a = self.stack.pop().unwrap();
                    self.stack.push(a == b);
                }
            }
        }
        debug_assert_eq!(self.stack.len(), 1);
        self.stack[0]
    }
}

// --- exists-forall-exists evaluation hooks ---

/// Indices into the prefix of a padded sentence: [0, s_start) is the
/// leading exists block, [s_start, t_start) the forall block, the rest the
/// trailing exists block.
fn sigma3_splits(f: &Formula) -> (usize, usize) {
    let blocks = f.blocks();
    assert!(
        f.is_sentence()
            && blocks.len() == 3
            && blocks[0].0 == QuantifierKind::Exists
            && blocks[1].0 == QuantifierKind::Forall
            && blocks[2].0 == QuantifierKind::Exists,
        "formula must be a padded exists-forall-exists sentence"
    );
    (blocks[0].1.len(), blocks[0].1.len() + blocks[1].1.len())
}

/// Number of leading existential variables of a padded sentence.
pub fn lead_arity(f: &Formula) -> usize {
    sigma3_splits(f).0
}

/// With the leading exists block pinned to `lead`, find the
/// lexicographically first tuple for the forall block whose remainder
/// (trailing exists block plus matrix) evaluates false on the view.
/// None means the pinned formula holds.
pub fn first_failing_tuple(
    view: Subgraph<'_>,
    f: &Formula,
    lead: &[usize],
) -> Option<Vec<usize>> {
    let (s_start, t_start) = sigma3_splits(f);
    assert_eq!(lead.len(), s_start, "lead tuple arity mismatch");
    let mut ev = Evaluator::new(view, f);
    for (q, &v) in ev.prefix[..s_start].iter().zip(lead) {
        debug_assert!(view.contains(v));
        ev.env[q.var] = v;
    }
    let s = t_start - s_start;
    let mut tuple = vec![0usize; s];
    let domain = ev.domain.clone();
    if domain.is_empty() {
        // No forall witnesses exist; the pinned formula holds vacuously.
        return None;
    }
    fill_tuple(&mut ev, &domain, s_start, t_start, &mut tuple, 0)
}

fn fill_tuple(
    ev: &mut Evaluator<'_>,
    domain: &[usize],
    s_start: usize,
    t_start: usize,
    tuple: &mut Vec<usize>,
    pos: usize,
) -> Option<Vec<usize>> {
    if s_start + pos == t_start {
        if ev.run(t_start) {
            return None;
        }
        return Some(tuple.clone());
    }
    let var = ev.prefix[s_start + pos].var;
    for &v in domain {
        ev.env[var] = v;
        tuple[pos] = v;
        if let Some(t) = fill_tuple(ev, domain, s_start, t_start, tuple, pos + 1) {
            return Some(t);
        }
    }
    None
}

/// Does the padded sentence hold on the view with its leading exists block
/// pinned to `lead`?
pub fn models_with_lead(view: Subgraph<'_>, f: &Formula, lead: &[usize]) -> bool {
    first_failing_tuple(view, f, lead).is_none()
}

// --- catalog ---

/// Named properties shipped with the library. Each has a reference
/// first-order sentence and a specialized checker that agrees with it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogFormula {
    TriangleFree,
    DiameterLe2,
    NonadjacentPair,
    AllEqual,
    HardnessDist2Degree1,
}

impl CatalogFormula {
    pub const ALL: [CatalogFormula; 5] = [
        CatalogFormula::TriangleFree,
        CatalogFormula::DiameterLe2,
        CatalogFormula::NonadjacentPair,
        CatalogFormula::AllEqual,
        CatalogFormula::HardnessDist2Degree1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CatalogFormula::TriangleFree => "triangle_free",
            CatalogFormula::DiameterLe2 => "diameter_le_2",
            CatalogFormula::NonadjacentPair => "nonadjacent_pair",
            CatalogFormula::AllEqual => "all_equal",
            CatalogFormula::HardnessDist2Degree1 => "hardness_dist2_degree1",
        }
    }

    pub fn from_name(name: &str) -> Option<CatalogFormula> {
        CatalogFormula::ALL.into_iter().find(|c| c.name() == name)
    }

    /// The defining sentence, in the library's concrete syntax.
    pub fn source(&self) -> &'static str {
        match self {
            CatalogFormula::TriangleFree => {
                "A x A y A z ((x = y) | (y = z) | (x = z) | !(x ~ y) | !(y ~ z) | !(x ~ z))"
            }
            CatalogFormula::DiameterLe2 => {
                "A u A v E w ((u = v) | (u ~ v) | ((u ~ w) & (v ~ w)))"
            }
            CatalogFormula::NonadjacentPair => "E u E v (!(u = v) & !(u ~ v))",
            CatalogFormula::AllEqual => "A x A y (x = y)",
            // Every vertex sees, within its ball of radius two, some vertex
            // of degree at most one. Each disjunct carries its own pair of
            // universal variables so the shared prefix distributes.
            CatalogFormula::HardnessDist2Degree1 => {
                "A x E y1 E y2 A z1 A z2 A z3 A z4 A z5 A z6 \
                 ((((x ~ z1) & (x ~ z2)) -> (z1 = z2)) \
                 | ((x ~ y1) & (((y1 ~ z3) & (y1 ~ z4)) -> (z3 = z4))) \
                 | ((x ~ y1) & (y1 ~ y2) & (((y2 ~ z5) & (y2 ~ z6)) -> (z5 = z6))))"
            }
        }
    }

    pub fn formula(&self) -> Formula {
        Formula::parse(self.source()).expect("catalog source parses")
    }

    /// Specialized checker, equivalent to `models(view, self.formula())`.
    pub fn models(&self, view: Subgraph<'_>) -> bool {
        match self {
            CatalogFormula::TriangleFree => {
                for u in view.vertices().iter() {
                    for v in view.neighbors(u).iter() {
                        if v > u && !(view.neighbors(u) & view.neighbors(v)).is_empty() {
                            return false;
                        }
                    }
                }
                true
            }
            CatalogFormula::DiameterLe2 => {
                let verts = view.vertices();
                for u in verts.iter() {
                    for v in verts.iter() {
                        if v > u
                            && !view.has_edge(u, v)
                            && (view.neighbors(u) & view.neighbors(v)).is_empty()
                        {
                            return false;
                        }
                    }
                }
                true
            }
            CatalogFormula::NonadjacentPair => {
                let verts = view.vertices();
                verts
                    .iter()
                    .any(|u| view.neighbors(u) != verts.without(u))
            }
            CatalogFormula::AllEqual => view.len() <= 1,
            CatalogFormula::HardnessDist2Degree1 => {
                let verts = view.vertices();
                let low = VertexSet::from_iter(
                    verts.iter().filter(|&v| view.degree(v) <= 1),
                );
                verts.iter().all(|x| {
                    let ball1 = view.closed_neighborhood(VertexSet::singleton(x));
                    let ball2 = view.closed_neighborhood(ball1);
                    ball2.intersects(low)
                })
            }
        }
    }
}

impl std::fmt::Display for CatalogFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CatalogFormula {
    type Err = String;

    fn from_str(s: &str) -> Result<CatalogFormula, String> {
        CatalogFormula::from_name(s).ok_or_else(|| {
            let names: Vec<&str> = CatalogFormula::ALL.iter().map(|c| c.name()).collect();
            format!("unknown formula '{s}'; known: {}", names.join(", "))
        })
    }
}
