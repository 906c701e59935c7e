//! Elimination sets and their representations.
//!
//! A representation of a vertex set X is a rooted forest T together with a
//! bijection alpha from the nodes of T onto X such that
//!
//! * for incomparable nodes x, y in the same tree with lowest common
//!   ancestor v, the images of v's ancestor set (v included) separate
//!   alpha(x) from alpha(y) in the graph, and
//! * nodes in different trees have their images in different connected
//!   components of the graph.
//!
//! The depth of X is the smallest depth of a forest representing it, with
//! the empty set at depth -1. On a connected graph every representation
//! collapses to a single tree. Deleting a set of depth d-1 is the witness
//! notion behind the depth variant of elimination distance, and the
//! condition-based search `prop_representation` is the witness notion
//! behind the property-first variant.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::Subgraph;
use crate::modelcheck::Property;
use crate::set::{VertexSet, MAX_VERTICES};

/// Rooted forest plus bijection onto a vertex set. Node ids are dense
/// indices; `parent[i]` is `None` exactly for roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    parent: Vec<Option<usize>>,
    alpha: Vec<usize>,
}

impl Representation {
    pub fn new(parent: Vec<Option<usize>>, alpha: Vec<usize>) -> Result<Representation, String> {
        if parent.len() != alpha.len() {
            return Err("parent and alpha must have equal length".into());
        }
        let n = parent.len();
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if *p >= n {
                    return Err(format!("node {i} has out-of-range parent {p}"));
                }
                if *p == i {
                    return Err(format!("node {i} is its own parent"));
                }
            }
        }
        // Walking to a root must terminate from every node.
        for start in 0..n {
            let mut hops = 0;
            let mut cur = start;
            while let Some(p) = parent[cur] {
                cur = p;
                hops += 1;
                if hops > n {
                    return Err("parent links contain a cycle".into());
                }
            }
        }
        let mut seen = VertexSet::EMPTY;
        for &v in &alpha {
            if v >= MAX_VERTICES {
                return Err(format!("vertex {v} out of range"));
            }
            if seen.contains(v) {
                return Err(format!("vertex {v} appears twice in alpha"));
            }
            seen.insert(v);
        }
        Ok(Representation { parent, alpha })
    }

    pub fn empty() -> Representation {
        Representation { parent: Vec::new(), alpha: Vec::new() }
    }

    pub fn singleton(v: usize) -> Representation {
        Representation { parent: vec![None], alpha: vec![v] }
    }

    /// Path-shaped tree listing vertices from root to leaf. Always a valid
    /// representation (a chain has no incomparable pairs).
    pub fn chain(order: &[usize]) -> Representation {
        let parent = (0..order.len())
            .map(|i| if i == 0 { None } else { Some(i - 1) })
            .collect();
        Representation { parent, alpha: order.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// The represented set X.
    pub fn set(&self) -> VertexSet {
        VertexSet::from_iter(self.alpha.iter().copied())
    }

    pub fn parent_of(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn vertex_of(&self, node: usize) -> usize {
        self.alpha[node]
    }

    pub fn node_of(&self, vertex: usize) -> Option<usize> {
        self.alpha.iter().position(|&v| v == vertex)
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.parent[i].is_none()).collect()
    }

    pub fn children(&self, node: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.parent[i] == Some(node)).collect()
    }

    /// Edges on the path from the node to its root.
    pub fn node_depth(&self, node: usize) -> usize {
        let mut d = 0;
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            cur = p;
            d += 1;
        }
        d
    }

    /// Maximum node depth; -1 for the empty representation.
    pub fn depth(&self) -> i32 {
        (0..self.len())
            .map(|i| self.node_depth(i) as i32)
            .max()
            .unwrap_or(-1)
    }

    /// Node ids of ancestors, the node itself included, root first.
    pub fn ancestors_including(&self, node: usize) -> Vec<usize> {
        let mut out = vec![node];
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// Images of the node's ancestor set, the node itself included.
    pub fn ancestor_vertices(&self, node: usize) -> VertexSet {
        VertexSet::from_iter(self.ancestors_including(node).into_iter().map(|i| self.alpha[i]))
    }

    pub fn root_of(&self, node: usize) -> usize {
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            cur = p;
        }
        cur
    }

    pub fn is_ancestor_of(&self, a: usize, b: usize) -> bool {
        let mut cur = b;
        loop {
            if cur == a {
                return true;
            }
            match self.parent[cur] {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.is_ancestor_of(a, b) || self.is_ancestor_of(b, a)
    }

    /// Lowest common ancestor within one tree; None across trees.
    pub fn lca(&self, a: usize, b: usize) -> Option<usize> {
        let pa = self.ancestors_including(a);
        let pb = self.ancestors_including(b);
        let mut best = None;
        for (x, y) in pa.iter().zip(pb.iter()) {
            if x == y {
                best = Some(*x);
            } else {
                break;
            }
        }
        best
    }

    /// Nodes of the subtree rooted at the node.
    pub fn subtree(&self, node: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_ancestor_of(node, i)).collect()
    }

    /// Does the defining separator property hold on the view?
    pub fn is_valid_for(&self, view: Subgraph<'_>) -> bool {
        let x = self.set();
        if !x.is_subset_of(view.vertices()) {
            return false;
        }
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.comparable(a, b) {
                    continue;
                }
                let (va, vb) = (self.alpha[a], self.alpha[b]);
                match self.lca(a, b) {
                    Some(v) => {
                        let sep = self.ancestor_vertices(v);
                        let rest = view.without(sep);
                        if rest.component_of(va).contains(vb) {
                            return false;
                        }
                    }
                    None => {
                        if view.component_of(va).contains(vb) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Valid, and additionally: each tree's image lies inside one component
    /// of the view with distinct trees in distinct components, and each
    /// node's child subtrees map into one component each of the view minus
    /// the node's ancestor images, pairwise distinct.
    pub fn is_nice_for(&self, view: Subgraph<'_>) -> bool {
        if !self.is_valid_for(view) {
            return false;
        }
        let roots = self.roots();
        let mut root_comps: Vec<VertexSet> = Vec::new();
        for &r in &roots {
            let comp = view.component_of(self.alpha[r]);
            if root_comps.contains(&comp) {
                return false;
            }
            for i in self.subtree(r) {
                if !comp.contains(self.alpha[i]) {
                    return false;
                }
            }
            root_comps.push(comp);
        }
        for v in 0..self.len() {
            let rest = view.without(self.ancestor_vertices(v));
            let mut child_comps: Vec<VertexSet> = Vec::new();
            for c in self.children(v) {
                let comp = rest.component_of(self.alpha[c]);
                if child_comps.contains(&comp) {
                    return false;
                }
                for i in self.subtree(c) {
                    if !comp.contains(self.alpha[i]) {
                        return false;
                    }
                }
                child_comps.push(comp);
            }
        }
        true
    }

    /// Disjoint union of forests.
    pub fn union(parts: Vec<Representation>) -> Representation {
        let mut parent = Vec::new();
        let mut alpha = Vec::new();
        for part in parts {
            let off = parent.len();
            parent.extend(part.parent.iter().map(|p| p.map(|q| q + off)));
            alpha.extend(part.alpha);
        }
        Representation { parent, alpha }
    }

    /// New tree: a root mapped to `v` whose children are the roots of the
    /// given forests.
    pub fn with_root(v: usize, subtrees: Vec<Representation>) -> Representation {
        let mut parent = vec![None];
        let mut alpha = vec![v];
        for part in subtrees {
            let off = parent.len();
            parent.extend(
                part.parent
                    .iter()
                    .map(|p| Some(p.map_or(0, |q| q + off))),
            );
            alpha.extend(part.alpha);
        }
        Representation { parent, alpha }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation(depth={}, ", self.depth())?;
        let items: Vec<String> = (0..self.len())
            .map(|i| match self.parent[i] {
                Some(p) => format!("{}<-{}", self.alpha[i], self.alpha[p]),
                None => format!("{}(root)", self.alpha[i]),
            })
            .collect();
        write!(f, "[{}])", items.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct ReprWire {
    tree: Vec<i64>,
    alpha: Vec<usize>,
}

impl Serialize for Representation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let wire = ReprWire {
            tree: self
                .parent
                .iter()
                .map(|p| p.map_or(-1, |q| q as i64))
                .collect(),
            alpha: self.alpha.clone(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Representation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Representation, D::Error> {
        let wire = ReprWire::deserialize(d)?;
        let mut parent = Vec::with_capacity(wire.tree.len());
        for &t in &wire.tree {
            if t < -1 {
                return Err(D::Error::custom(format!("bad parent entry {t}")));
            }
            parent.push(if t == -1 { None } else { Some(t as usize) });
        }
        Representation::new(parent, wire.alpha).map_err(D::Error::custom)
    }
}

/// Contract-level alias: does the forest represent its set on this graph?
pub fn validate_representation(view: Subgraph<'_>, rep: &Representation) -> bool {
    rep.is_valid_for(view)
}

// --- depth computation ---

/// Witness that X has a representation of depth at most d on the view, or
/// None. X = ∅ is accepted exactly when d >= -1. Components are independent:
/// each component's part of X needs a single tree of depth <= d.
pub fn depth_at_most(view: Subgraph<'_>, x: VertexSet, d: i32) -> Option<Representation> {
    assert!(
        x.is_subset_of(view.vertices()),
        "X must lie inside the view"
    );
    if x.is_empty() {
        return if d >= -1 { Some(Representation::empty()) } else { None };
    }
    if d < 0 {
        return None;
    }
    let mut parts = Vec::new();
    for comp in view.components() {
        let xi = x & comp;
        if xi.is_empty() {
            continue;
        }
        parts.push(connected_depth_at_most(view.induced(comp), xi, d as u32)?);
    }
    let rep = Representation::union(parts);
    debug_assert!(rep.is_valid_for(view) && rep.depth() <= d);
    Some(rep)
}

/// Single-tree search on a connected view: some root r in X, then each
/// component of the view minus r that meets X must admit a tree of depth
/// d-1. Roots are tried in ascending vertex order, so witnesses are
/// deterministic. Complete because minimum-depth representations of a
/// connected graph can be made nice: child subtrees then live in exactly
/// the components of the view minus the root.
fn connected_depth_at_most(view: Subgraph<'_>, x: VertexSet, d: u32) -> Option<Representation> {
    debug_assert!(view.is_connected() && !x.is_empty());
    if x.len() == 1 {
        return Some(Representation::singleton(x.min().unwrap()));
    }
    if d == 0 {
        return None;
    }
    'roots: for r in x.iter() {
        let rest = view.without_vertex(r);
        let mut subtrees = Vec::new();
        for comp in rest.components() {
            let xi = x & comp;
            if xi.is_empty() {
                continue;
            }
            match connected_depth_at_most(rest.induced(comp), xi, d - 1) {
                Some(t) => subtrees.push(t),
                None => continue 'roots,
            }
        }
        return Some(Representation::with_root(r, subtrees));
    }
    None
}

/// Minimum representation depth of X on the view; -1 for the empty set.
pub fn depth(view: Subgraph<'_>, x: VertexSet) -> i32 {
    let mut d = -1;
    loop {
        if depth_at_most(view, x, d).is_some() {
            return d;
        }
        d += 1;
        debug_assert!(d < x.len() as i32, "a chain always realizes depth |X|-1");
    }
}

/// Like `depth`, with the witness.
pub fn depth_with_witness(view: Subgraph<'_>, x: VertexSet) -> (i32, Representation) {
    let mut d = -1;
    loop {
        if let Some(rep) = depth_at_most(view, x, d) {
            return (d, rep);
        }
        d += 1;
    }
}

// --- anchors ---

/// For each component of the view minus the represented set, the deepest
/// node whose image neighbors the component. Ordered like
/// `Subgraph::components`. Components with no neighbors in X map to the
/// root whose image has the smallest vertex id.
pub fn anchors(view: Subgraph<'_>, rep: &Representation) -> Vec<(VertexSet, usize)> {
    debug_assert!(rep.is_valid_for(view));
    let x = rep.set();
    let rest = view.without(x);
    let default_root = rep
        .roots()
        .into_iter()
        .min_by_key(|&r| rep.vertex_of(r))
        .unwrap_or(0);
    let mut out = Vec::new();
    for comp in rest.components() {
        let nbrs = view.open_neighborhood(comp) & x;
        let anchor = if nbrs.is_empty() {
            assert!(!rep.is_empty(), "anchors need a nonempty representation");
            default_root
        } else {
            let deepest = nbrs
                .iter()
                .map(|v| rep.node_of(v).expect("neighbor lies in X"))
                .max_by_key(|&node| rep.node_depth(node))
                .unwrap();
            // Soundness: the whole neighborhood sits on the anchor's root path.
            assert!(
                nbrs.is_subset_of(rep.ancestor_vertices(deepest)),
                "component neighborhood escapes the anchor's ancestor chain"
            );
            deepest
        };
        out.push((comp, anchor));
    }
    out
}

// --- condition-based search for the property-first variant ---

/// Search for a nice representation of X with depth <= k-1 whose nodes
/// satisfy the property-first conditions: around every nonleaf node,
/// components of the view minus the node that contain no deeper X vertex
/// must satisfy f; a leaf with budget to spare may instead leave all its
/// components satisfying f; a leaf on the last level must leave its whole
/// remainder satisfying f.
///
/// The view must be connected and X nonempty; k >= 1.
pub fn prop_representation<P: Property + ?Sized>(
    view: Subgraph<'_>,
    x: VertexSet,
    k: u32,
    f: &P,
) -> Option<Representation> {
    assert!(view.is_connected(), "prop_representation needs a connected view");
    assert!(!x.is_empty() && k >= 1);
    assert!(x.is_subset_of(view.vertices()));
    let rep = prop_rep_rec(view, x, k, f)?;
    debug_assert!(rep.is_nice_for(view) && rep.depth() <= k as i32 - 1);
    Some(rep)
}

fn prop_rep_rec<P: Property + ?Sized>(
    view: Subgraph<'_>,
    x: VertexSet,
    k: u32,
    f: &P,
) -> Option<Representation> {
    if x.len() >= 2 && k == 1 {
        return None; // two or more nodes force tree depth >= 1 > k - 1
    }
    'roots: for r in x.iter() {
        let rest = view.without_vertex(r);
        if x.len() == 1 {
            // Leaf root: either the whole remainder satisfies f (an empty
            // remainder counts, matching the recursion bottoming out at 0
            // on the empty graph), or there is budget for a level below
            // this leaf and every component satisfies f.
            if rest.is_empty() || f.holds(rest) {
                return Some(Representation::singleton(r));
            }
            if k >= 2 && rest.components().iter().all(|&c| f.holds(rest.induced(c))) {
                return Some(Representation::singleton(r));
            }
            continue 'roots;
        }
        let mut subtrees = Vec::new();
        for comp in rest.components() {
            let xi = x & comp;
            if xi.is_empty() {
                // Anchored at this nonleaf root; the condition demands f.
                if !f.holds(rest.induced(comp)) {
                    continue 'roots;
                }
            } else {
                match prop_rep_rec(rest.induced(comp), xi, k - 1, f) {
                    Some(t) => subtrees.push(t),
                    None => continue 'roots,
                }
            }
        }
        return Some(Representation::with_root(r, subtrees));
    }
    None
}
