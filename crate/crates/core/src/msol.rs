//! MSOL formulas deciding "elimination distance at most k", plus a naive
//! evaluator used as a cross-oracle on tiny graphs.
//!
//! The emitted formulas follow the recursive characterizations of the three
//! distances. Writing phi[S] for the target sentence relativized to the
//! vertex set S:
//!
//! * conn, k = 0:  AX S (comp(S) -> phi[S]).
//! * conn, k >= 1: every component either models phi or has a vertex whose
//!   removal leaves conn-distance at most k-1. The per-component phi
//!   disjunct matters: with components of mixed difficulty a global
//!   "distance at most k-1" disjunct is not enough at tight budgets.
//! * prop, k = 0:  phi itself.
//! * prop, k >= 1: phi holds outright, or every component either models
//!   phi or loses a vertex to prop-distance at most k-1. The k-1 = 0 base
//!   inside the recursion accepts the empty region as well as regions
//!   modeling phi, matching the distance recursion bottoming out at 0 on
//!   the empty graph. The top-level k = 0 emission stays bare phi, so on
//!   the empty graph it can disagree with ed_prop = 0 for existential phi;
//!   evaluate it on nonempty graphs.
//! * depth, k: EX S (xi~(S) & phi[complement of S]) where xi~ says every
//!   component can eliminate its share of S in at most k rounds. The
//!   helper xi_j[A, R] ("A is eliminable within the connected region R in
//!   at most j rounds") is emitted once and referenced through macro
//!   calls, so formula size stays linear in k.
//!
//! The evaluator expands macros by their definitions and enumerates set
//! quantifiers over all subsets, so it is capped at 6 vertices.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::distance::Variant;
use crate::formula::Formula;
use crate::graph::{Graph, Subgraph};
use crate::modelcheck::CatalogFormula;
use crate::set::VertexSet;

/// eval_msol enumerates 2^n set assignments per quantifier.
pub const EVAL_VERTEX_CAP: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("msol evaluation is capped at {EVAL_VERTEX_CAP} vertices; the graph has {n}")]
pub struct MsolCapError {
    pub n: usize,
}

/// The sentence a formula relativizes; catalog entries evaluate through
/// their specialized checks, which keeps the wide hardness sentence usable
/// inside set-quantifier loops.
#[derive(Clone, Debug)]
pub enum PhiOracle {
    Plain(Formula),
    Catalog(CatalogFormula),
}

impl PhiOracle {
    fn holds(&self, view: Subgraph<'_>) -> bool {
        match self {
            PhiOracle::Plain(f) => crate::modelcheck::models(view, f),
            PhiOracle::Catalog(c) => c.models(view),
        }
    }

    pub fn source(&self) -> String {
        match self {
            PhiOracle::Plain(f) => f.to_string(),
            PhiOracle::Catalog(c) => c.source().to_string(),
        }
    }
}

/// Set-valued expressions appearing inside macro atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
enum SetExpr {
    Var(u32),
    Empty,
    Full,
    Minus(Box<SetExpr>, u32),
    Intersect(Box<SetExpr>, Box<SetExpr>),
    Complement(Box<SetExpr>),
}

#[derive(Debug)]
enum Node {
    ForallSet(u32, Rc<Node>),
    ExistsSet(u32, Rc<Node>),
    ExistsVertex(u32, Rc<Node>),
    And(Rc<Node>, Rc<Node>),
    Or(Rc<Node>, Rc<Node>),
    Implies(Rc<Node>, Rc<Node>),
    /// x in S
    Member(u32, SetExpr),
    /// S is the vertex set of a component of the region's induced subgraph.
    Comp { set: u32, region: SetExpr },
    /// phi relativized to the scope.
    Fol { scope: SetExpr },
    SetEq(SetExpr, SetExpr),
    /// |S| = 1
    Singleton(SetExpr),
    /// Macro call: evaluate the shared body with the named slots rebound.
    Call { name: Rc<str>, binds: Vec<(u32, SetExpr)>, body: Rc<Node> },
}

struct MacroDef {
    name: Rc<str>,
    slots: [u32; 2],
    body: Rc<Node>,
}

pub struct MsolFormula {
    root: Rc<Node>,
    defs: Vec<MacroDef>,
    phi: PhiOracle,
    set_names: Vec<String>,
    vertex_names: Vec<String>,
}

impl MsolFormula {
    pub fn phi(&self) -> &PhiOracle {
        &self.phi
    }

    /// Number of distinct AST nodes; macro bodies count once however many
    /// call sites reference them.
    pub fn node_count(&self) -> usize {
        fn walk(node: &Rc<Node>, seen: &mut HashMap<*const Node, ()>) {
            if seen.insert(Rc::as_ptr(node), ()).is_some() {
                return;
            }
            match node.as_ref() {
                Node::ForallSet(_, b) | Node::ExistsSet(_, b) | Node::ExistsVertex(_, b) => {
                    walk(b, seen)
                }
                Node::And(l, r) | Node::Or(l, r) | Node::Implies(l, r) => {
                    walk(l, seen);
                    walk(r, seen);
                }
                Node::Call { body, .. } => walk(body, seen),
                _ => {}
            }
        }
        let mut seen = HashMap::new();
        walk(&self.root, &mut seen);
        seen.len()
    }

    fn set_name(&self, id: u32) -> &str {
        &self.set_names[id as usize]
    }

    fn vertex_name(&self, id: u32) -> &str {
        &self.vertex_names[id as usize]
    }

    fn render_expr(&self, e: &SetExpr, out: &mut String) {
        match e {
            SetExpr::Var(id) => out.push_str(self.set_name(*id)),
            SetExpr::Empty => out.push_str("{}"),
            SetExpr::Full => out.push('V'),
            SetExpr::Minus(inner, v) => {
                out.push('(');
                self.render_expr(inner, out);
                out.push_str(" - ");
                out.push_str(self.vertex_name(*v));
                out.push(')');
            }
            SetExpr::Intersect(l, r) => {
                out.push('(');
                self.render_expr(l, out);
                out.push_str(" & ");
                self.render_expr(r, out);
                out.push(')');
            }
            SetExpr::Complement(inner) => {
                out.push_str("(V \\ ");
                self.render_expr(inner, out);
                out.push(')');
            }
        }
    }

    fn render(&self, node: &Node, out: &mut String) {
        match node {
            Node::ForallSet(id, body) => {
                out.push_str("AX ");
                out.push_str(self.set_name(*id));
                out.push(' ');
                self.render(body, out);
            }
            Node::ExistsSet(id, body) => {
                out.push_str("EX ");
                out.push_str(self.set_name(*id));
                out.push(' ');
                self.render(body, out);
            }
            Node::ExistsVertex(id, body) => {
                out.push_str("E ");
                out.push_str(self.vertex_name(*id));
                out.push(' ');
                self.render(body, out);
            }
            Node::And(l, r) => self.render_binary(l, "&", r, out),
            Node::Or(l, r) => self.render_binary(l, "|", r, out),
            Node::Implies(l, r) => self.render_binary(l, "->", r, out),
            Node::Member(v, set) => {
                out.push('(');
                out.push_str(self.vertex_name(*v));
                out.push_str(" in ");
                self.render_expr(set, out);
                out.push(')');
            }
            Node::Comp { set, region } => {
                out.push_str("comp(");
                out.push_str(self.set_name(*set));
                if *region != SetExpr::Full {
                    out.push_str(" | ");
                    self.render_expr(region, out);
                }
                out.push(')');
            }
            Node::Fol { scope } => {
                out.push_str("phi[");
                self.render_expr(scope, out);
                out.push(']');
            }
            Node::SetEq(l, r) => {
                out.push('(');
                self.render_expr(l, out);
                out.push_str(" = ");
                self.render_expr(r, out);
                out.push(')');
            }
            Node::Singleton(e) => {
                out.push_str("one(");
                self.render_expr(e, out);
                out.push(')');
            }
            Node::Call { name, binds, .. } => {
                out.push_str(name);
                out.push('[');
                for (i, (_, expr)) in binds.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.render_expr(expr, out);
                }
                out.push(']');
            }
        }
    }

    fn render_binary(&self, l: &Node, op: &str, r: &Node, out: &mut String) {
        out.push('(');
        self.render(l, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        self.render(r, out);
        out.push(')');
    }
}

impl fmt::Display for MsolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.render(&self.root, &mut out);
        for def in &self.defs {
            out.push_str("\nwhere ");
            out.push_str(&def.name);
            out.push('[');
            out.push_str(self.set_name(def.slots[0]));
            out.push_str(", ");
            out.push_str(self.set_name(def.slots[1]));
            out.push_str("] := ");
            self.render(&def.body, &mut out);
        }
        f.write_str(&out)
    }
}

struct Emitter {
    set_names: Vec<String>,
    vertex_names: Vec<String>,
}

impl Emitter {
    fn set_var(&mut self, name: String) -> u32 {
        self.set_names.push(name);
        (self.set_names.len() - 1) as u32
    }

    fn vertex_var(&mut self, name: String) -> u32 {
        self.vertex_names.push(name);
        (self.vertex_names.len() - 1) as u32
    }

    fn fresh_set(&mut self) -> u32 {
        let n = self.set_names.len();
        self.set_var(format!("S{n}"))
    }

    fn fresh_vertex(&mut self) -> u32 {
        let n = self.vertex_names.len();
        self.vertex_var(format!("v{n}"))
    }
}

fn rc(n: Node) -> Rc<Node> {
    Rc::new(n)
}

fn var(id: u32) -> SetExpr {
    SetExpr::Var(id)
}

/// Every component of the region satisfies `leaf`, phrased per component:
/// AX S (comp(S | region) -> inner(S)).
fn forall_components(
    e: &mut Emitter,
    region: SetExpr,
    inner: impl FnOnce(&mut Emitter, u32) -> Rc<Node>,
) -> Rc<Node> {
    let y = e.fresh_set();
    let body = inner(e, y);
    rc(Node::ForallSet(y, rc(Node::Implies(rc(Node::Comp { set: y, region }), body))))
}

fn conn_level(e: &mut Emitter, k: u32, region: SetExpr) -> Rc<Node> {
    forall_components(e, region, |e, y| {
        let phi_here = rc(Node::Fol { scope: var(y) });
        if k == 0 {
            return phi_here;
        }
        let x = e.fresh_vertex();
        let deeper = conn_level(e, k - 1, SetExpr::Minus(Box::new(var(y)), x));
        let pick = rc(Node::ExistsVertex(
            x,
            rc(Node::And(rc(Node::Member(x, var(y))), deeper)),
        ));
        rc(Node::Or(phi_here, pick))
    })
}

fn prop_level(e: &mut Emitter, k: u32, region: SetExpr) -> Rc<Node> {
    // Base inside the recursion: the region is empty or models phi.
    if k == 0 {
        return rc(Node::Or(
            rc(Node::SetEq(region.clone(), SetExpr::Empty)),
            rc(Node::Fol { scope: region }),
        ));
    }
    let phi_globally = rc(Node::Fol { scope: region.clone() });
    let per_component = forall_components(e, region, |e, y| {
        let phi_here = rc(Node::Fol { scope: var(y) });
        let x = e.fresh_vertex();
        let deeper = prop_level(e, k - 1, SetExpr::Minus(Box::new(var(y)), x));
        let pick = rc(Node::ExistsVertex(
            x,
            rc(Node::And(rc(Node::Member(x, var(y))), deeper)),
        ));
        rc(Node::Or(phi_here, pick))
    });
    rc(Node::Or(phi_globally, per_component))
}

/// xi_j[A, R]: A is eliminable within the connected region R in at most j
/// rounds (equivalently, A has an elimination forest of depth j - 1 there).
fn depth_defs(e: &mut Emitter, k: u32) -> Vec<MacroDef> {
    let mut defs: Vec<MacroDef> = Vec::new();
    for j in 0..=k {
        let a = e.set_var(format!("A{j}"));
        let r = e.set_var(format!("R{j}"));
        let name: Rc<str> = format!("xi{j}").into();
        let empty = rc(Node::SetEq(var(a), SetExpr::Empty));
        let body = match j {
            0 => empty,
            1 => rc(Node::Or(empty, rc(Node::Singleton(var(a))))),
            _ => {
                let prev = &defs[defs.len() - 1];
                let same_args = rc(Node::Call {
                    name: prev.name.clone(),
                    binds: vec![(prev.slots[0], var(a)), (prev.slots[1], var(r))],
                    body: prev.body.clone(),
                });
                let x = e.fresh_vertex();
                let recurse = {
                    let prev = &defs[defs.len() - 1];
                    let region = SetExpr::Minus(Box::new(var(r)), x);
                    forall_components(e, region, |_, y| {
                        rc(Node::Call {
                            name: prev.name.clone(),
                            binds: vec![
                                (
                                    prev.slots[0],
                                    SetExpr::Intersect(Box::new(var(a)), Box::new(var(y))),
                                ),
                                (prev.slots[1], var(y)),
                            ],
                            body: prev.body.clone(),
                        })
                    })
                };
                let pick = rc(Node::ExistsVertex(
                    x,
                    rc(Node::And(rc(Node::Member(x, var(a))), recurse)),
                ));
                rc(Node::Or(same_args, pick))
            }
        };
        defs.push(MacroDef { name, slots: [a, r], body });
    }
    defs
}

fn build(phi: PhiOracle, k: u32, variant: Variant) -> MsolFormula {
    let mut e = Emitter { set_names: Vec::new(), vertex_names: Vec::new() };
    let mut defs = Vec::new();
    let root = match variant {
        Variant::Conn => conn_level(&mut e, k, SetExpr::Full),
        Variant::Prop => {
            if k == 0 {
                rc(Node::Fol { scope: SetExpr::Full })
            } else {
                prop_level(&mut e, k, SetExpr::Full)
            }
        }
        Variant::Depth => {
            defs = depth_defs(&mut e, k);
            let x = e.set_var("X".to_string());
            let top = &defs[defs.len() - 1];
            let spread = forall_components(&mut e, SetExpr::Full, |_, y| {
                rc(Node::Call {
                    name: top.name.clone(),
                    binds: vec![
                        (top.slots[0], SetExpr::Intersect(Box::new(var(x)), Box::new(var(y)))),
                        (top.slots[1], var(y)),
                    ],
                    body: top.body.clone(),
                })
            });
            let eliminable = rc(Node::Or(rc(Node::SetEq(var(x), SetExpr::Empty)), spread));
            let rest_models = rc(Node::Fol { scope: SetExpr::Complement(Box::new(var(x))) });
            rc(Node::ExistsSet(x, rc(Node::And(eliminable, rest_models))))
        }
    };
    MsolFormula { root, defs, phi, set_names: e.set_names, vertex_names: e.vertex_names }
}

/// The MSOL sentence deciding ed_variant(G, f) <= k.
pub fn emit_msol(f: &Formula, k: u32, variant: Variant) -> MsolFormula {
    assert!(f.is_sentence(), "emit_msol needs a sentence");
    build(PhiOracle::Plain(f.clone()), k, variant)
}

/// Same construction with the catalog's specialized model checks.
pub fn emit_msol_catalog(f: CatalogFormula, k: u32, variant: Variant) -> MsolFormula {
    build(PhiOracle::Catalog(f), k, variant)
}

struct Evaluator<'a> {
    g: &'a Graph,
    phi: &'a PhiOracle,
    env_sets: Vec<u64>,
    env_vertices: Vec<usize>,
    comp_memo: HashMap<u64, Rc<Vec<u64>>>,
    fol_memo: HashMap<u64, bool>,
}

impl<'a> Evaluator<'a> {
    fn full_mask(&self) -> u64 {
        (1u64 << self.g.n()) - 1
    }

    fn expr(&self, e: &SetExpr) -> u64 {
        match e {
            SetExpr::Var(id) => self.env_sets[*id as usize],
            SetExpr::Empty => 0,
            SetExpr::Full => self.full_mask(),
            SetExpr::Minus(inner, v) => self.expr(inner) & !(1 << self.env_vertices[*v as usize]),
            SetExpr::Intersect(l, r) => self.expr(l) & self.expr(r),
            SetExpr::Complement(inner) => self.full_mask() & !self.expr(inner),
        }
    }

    fn components(&mut self, region: u64) -> Rc<Vec<u64>> {
        if let Some(c) = self.comp_memo.get(&region) {
            return c.clone();
        }
        let comps: Vec<u64> = self
            .g
            .full()
            .induced(VertexSet(region))
            .components()
            .into_iter()
            .map(|c| c.0)
            .collect();
        let rc = Rc::new(comps);
        self.comp_memo.insert(region, rc.clone());
        rc
    }

    fn fol(&mut self, scope: u64) -> bool {
        if let Some(&v) = self.fol_memo.get(&scope) {
            return v;
        }
        let value = self.phi.holds(self.g.full().induced(VertexSet(scope)));
        self.fol_memo.insert(scope, value);
        value
    }

    fn eval(&mut self, node: &Node) -> bool {
        match node {
            Node::ForallSet(id, body) => {
                let saved = self.env_sets[*id as usize];
                let all = self.full_mask();
                let mut result = true;
                for mask in 0..=all {
                    self.env_sets[*id as usize] = mask;
                    if !self.eval(body) {
                        result = false;
                        break;
                    }
                }
                self.env_sets[*id as usize] = saved;
                result
            }
            Node::ExistsSet(id, body) => {
                let saved = self.env_sets[*id as usize];
                let all = self.full_mask();
                let mut result = false;
                for mask in 0..=all {
                    self.env_sets[*id as usize] = mask;
                    if self.eval(body) {
                        result = true;
                        break;
                    }
                }
                self.env_sets[*id as usize] = saved;
                result
            }
            Node::ExistsVertex(id, body) => {
                let saved = self.env_vertices[*id as usize];
                let mut result = false;
                for v in 0..self.g.n() {
                    self.env_vertices[*id as usize] = v;
                    if self.eval(body) {
                        result = true;
                        break;
                    }
                }
                self.env_vertices[*id as usize] = saved;
                result
            }
            Node::And(l, r) => self.eval(l) && self.eval(r),
            Node::Or(l, r) => self.eval(l) || self.eval(r),
            Node::Implies(l, r) => !self.eval(l) || self.eval(r),
            Node::Member(v, set) => {
                self.expr(set) >> self.env_vertices[*v as usize] & 1 == 1
            }
            Node::Comp { set, region } => {
                let value = self.env_sets[*set as usize];
                let region = self.expr(region);
                self.components(region).contains(&value)
            }
            Node::Fol { scope } => {
                let mask = self.expr(scope);
                self.fol(mask)
            }
            Node::SetEq(l, r) => self.expr(l) == self.expr(r),
            Node::Singleton(e) => self.expr(e).count_ones() == 1,
            Node::Call { binds, body, .. } => {
                let values: Vec<(u32, u64)> =
                    binds.iter().map(|(slot, expr)| (*slot, self.expr(expr))).collect();
                let saved: Vec<u64> =
                    values.iter().map(|(slot, _)| self.env_sets[*slot as usize]).collect();
                for (slot, value) in &values {
                    self.env_sets[*slot as usize] = *value;
                }
                let result = self.eval(body);
                for ((slot, _), old) in values.iter().zip(saved) {
                    self.env_sets[*slot as usize] = old;
                }
                result
            }
        }
    }
}

/// Standard MSOL semantics by exhaustive set enumeration.
pub fn eval_msol(g: &Graph, m: &MsolFormula) -> Result<bool, MsolCapError> {
    if g.n() > EVAL_VERTEX_CAP {
        return Err(MsolCapError { n: g.n() });
    }
    let mut ev = Evaluator {
        g,
        phi: &m.phi,
        env_sets: vec![0; m.set_names.len()],
        env_vertices: vec![0; m.vertex_names.len()],
        comp_memo: HashMap::new(),
        fol_memo: HashMap::new(),
    };
    Ok(ev.eval(&m.root))
}
