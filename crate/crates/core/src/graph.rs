//! Simple undirected graphs on at most 64 vertices, with bitset adjacency.
//!
//! Induced subgraphs are lightweight views: a reference to the base graph
//! plus a vertex set. Vertex identities inside a view are the base graph's,
//! so sets computed on a view compose with sets computed on the whole graph.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::{VertexSet, MAX_VERTICES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph has {n} vertices; at most {max} are supported", max = MAX_VERTICES)]
    TooLarge { n: usize },
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

/// An undirected graph on vertices 0..n without loops or parallel edges.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn new(n: usize) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge { n });
        }
        Ok(Graph { n, adj: vec![VertexSet::EMPTY; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        if u == v {
            return Err(GraphError::Parse { line: 0, msg: format!("self-loop at vertex {u}") });
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    /// Removes the edge if present; out-of-range endpoints are a no-op.
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.adj[u].remove(v);
            self.adj[v].remove(u);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    /// Adjacency set of v in the whole graph.
    pub fn adj(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// View of the whole graph.
    pub fn full(&self) -> Subgraph<'_> {
        Subgraph { graph: self, verts: VertexSet::full(self.n) }
    }

    /// View induced by `verts`.
    pub fn induced(&self, verts: VertexSet) -> Subgraph<'_> {
        debug_assert!(verts.is_subset_of(VertexSet::full(self.n)));
        Subgraph { graph: self, verts }
    }

    // --- constructors for standard graphs ---

    pub fn edgeless(n: usize) -> Graph {
        Graph::new(n).expect("size checked by caller")
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::edgeless(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::edgeless(n);
        for u in 1..n {
            g.add_edge(u - 1, u).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(0, n - 1).unwrap();
        }
        g
    }

    /// Star with `leaves` leaves; the center is vertex 0.
    pub fn star(leaves: usize) -> Graph {
        let mut g = Graph::edgeless(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v).unwrap();
        }
        g
    }

    /// Graph on n vertices whose edge set is selected by `mask` over pairs
    /// (0,1),(0,2),(1,2),(0,3),... i.e. pairs (u,v), u < v, ordered by (v,u).
    pub fn from_edge_mask(n: usize, mask: u64) -> Graph {
        let mut g = Graph::edgeless(n);
        let mut idx = 0;
        for v in 0..n {
            for u in 0..v {
                if mask & (1u64 << idx) != 0 {
                    g.add_edge(u, v).unwrap();
                }
                idx += 1;
            }
        }
        g
    }

    /// Disjoint union; vertex ids of later graphs are shifted.
    pub fn disjoint_union(parts: &[&Graph]) -> Result<Graph, GraphError> {
        let n: usize = parts.iter().map(|g| g.n).sum();
        let mut out = Graph::new(n)?;
        let mut off = 0;
        for g in parts {
            for (u, v) in g.edges() {
                out.add_edge(u + off, v + off)?;
            }
            off += g.n;
        }
        Ok(out)
    }

    // --- file formats ---

    /// Parse the edge-list format: optional `#` comments and blank lines, a
    /// header line `n m`, then m lines `u v` with 0 <= u < v < n.
    pub fn from_edge_list_str(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing header line 'n m'"))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(hline, "header must be 'n m'"))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(hline, "header must be 'n m'"))?;
        if it.next().is_some() {
            return Err(parse_err(hline, "header must be exactly 'n m'"));
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge { n });
        }
        let mut g = Graph::new(n)?;
        let mut seen = 0usize;
        for (lno, l) in lines {
            let mut it = l.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(lno, "edge line must be 'u v'"))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(lno, "edge line must be 'u v'"))?;
            if it.next().is_some() {
                return Err(parse_err(lno, "edge line must be exactly 'u v'"));
            }
            if u >= v {
                return Err(parse_err(lno, format!("edge ({u}, {v}) must satisfy u < v")));
            }
            if v >= n {
                return Err(parse_err(lno, format!("vertex {v} out of range (n = {n})")));
            }
            if g.has_edge(u, v) {
                return Err(parse_err(lno, format!("duplicate edge ({u}, {v})")));
            }
            g.add_edge(u, v).map_err(|_| parse_err(lno, "bad edge"))?;
            seen += 1;
        }
        if seen != m {
            return Err(parse_err(0, format!("header declares {m} edges, found {seen}")));
        }
        Ok(g)
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parse the DIMACS coloring format (read-only): `c` comments, one
    /// `p edge n m` line, then `e u v` lines with 1-indexed endpoints.
    /// Duplicate edges are tolerated.
    pub fn from_dimacs_str(text: &str) -> Result<Graph, GraphError> {
        let mut g: Option<Graph> = None;
        let mut declared = 0usize;
        for (i, raw) in text.lines().enumerate() {
            let lno = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('c') {
                continue;
            }
            if let Some(rest) = l.strip_prefix('p') {
                if g.is_some() {
                    return Err(parse_err(lno, "duplicate problem line"));
                }
                let mut it = rest.split_whitespace();
                match it.next() {
                    Some("edge") => {}
                    _ => return Err(parse_err(lno, "expected 'p edge n m'")),
                }
                let n: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lno, "expected 'p edge n m'"))?;
                declared = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lno, "expected 'p edge n m'"))?;
                if n > MAX_VERTICES {
                    return Err(GraphError::TooLarge { n });
                }
                g = Some(Graph::new(n)?);
            } else if let Some(rest) = l.strip_prefix('e') {
                let g = g
                    .as_mut()
                    .ok_or_else(|| parse_err(lno, "edge before problem line"))?;
                let mut it = rest.split_whitespace();
                let u: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lno, "expected 'e u v'"))?;
                let v: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lno, "expected 'e u v'"))?;
                if u == 0 || v == 0 || u > g.n || v > g.n {
                    return Err(parse_err(lno, format!("vertex out of range in 'e {u} {v}'")));
                }
                if u == v {
                    return Err(parse_err(lno, format!("self-loop at vertex {u}")));
                }
                // DIMACS is 1-indexed; duplicates are collapsed.
                let (u, v) = (u - 1, v - 1);
                if !g.has_edge(u, v) {
                    g.add_edge(u, v).map_err(|_| parse_err(lno, "bad edge"))?;
                }
            } else {
                return Err(parse_err(lno, format!("unrecognized line '{l}'")));
            }
        }
        let g = g.ok_or_else(|| parse_err(0, "missing problem line"))?;
        let _ = declared; // DIMACS files in the wild over/under-declare; don't enforce.
        Ok(g)
    }

    /// Is every separation of order <= q unable to split off two sides with
    /// more than p vertices each? Returns a witness separation if not.
    pub fn unbreakable_witness(&self, p: usize, q: usize) -> Option<Separation> {
        self.full().unbreakable_witness(p, q)
    }

    pub fn is_unbreakable(&self, p: usize, q: usize) -> bool {
        self.unbreakable_witness(p, q).is_none()
    }

    /// Torso of X: the graph induced on X plus a fill edge between every two
    /// X-vertices that both neighbor one component of G - X. Vertices are
    /// relabeled 0..|X|-1 in ascending order of their original ids.
    pub fn torso(&self, x: VertexSet) -> Graph {
        let ids = x.to_vec();
        let index: HashMap<usize, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut t = Graph::edgeless(ids.len());
        for (i, &u) in ids.iter().enumerate() {
            for v in (self.adj[u] & x).iter() {
                if v > u {
                    t.add_edge(i, index[&v]).unwrap();
                }
            }
        }
        let full = self.full();
        for comp in self.induced(VertexSet::full(self.n) - x).components() {
            let border = (full.open_neighborhood(comp) & x).to_vec();
            for (a, &u) in border.iter().enumerate() {
                for &v in &border[a + 1..] {
                    if !t.has_edge(index[&u], index[&v]) {
                        t.add_edge(index[&u], index[&v]).unwrap();
                    }
                }
            }
        }
        t
    }

    /// Tree-depth of the whole graph.
    pub fn tree_depth(&self) -> usize {
        self.full().tree_depth()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A separation (A, B): A cup B = V and no edge joins A minus B to B minus A.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Separation {
    pub fn order(&self) -> usize {
        let a = VertexSet::from_iter(self.a.iter().copied());
        let b = VertexSet::from_iter(self.b.iter().copied());
        (a & b).len()
    }
}

/// Induced subgraph view. All vertex ids refer to the base graph.
#[derive(Clone, Copy)]
pub struct Subgraph<'a> {
    graph: &'a Graph,
    verts: VertexSet,
}

impl<'a> Subgraph<'a> {
    pub fn base(&self) -> &'a Graph {
        self.graph
    }

    pub fn vertices(&self) -> VertexSet {
        self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.verts.contains(v)
    }

    /// Neighbors of v inside the view.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        debug_assert!(self.verts.contains(v));
        self.graph.adj[v] & self.verts
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.verts.contains(u) && self.verts.contains(v) && self.graph.adj[u].contains(v)
    }

    /// View induced by a subset of this view's vertices.
    pub fn induced(&self, verts: VertexSet) -> Subgraph<'a> {
        debug_assert!(verts.is_subset_of(self.verts));
        Subgraph { graph: self.graph, verts }
    }

    pub fn without(&self, removed: VertexSet) -> Subgraph<'a> {
        Subgraph { graph: self.graph, verts: self.verts - removed }
    }

    pub fn without_vertex(&self, v: usize) -> Subgraph<'a> {
        Subgraph { graph: self.graph, verts: self.verts.without(v) }
    }

    /// Open neighborhood of `s` inside the view: vertices outside s adjacent
    /// to s. Only the part of s inside the view contributes.
    pub fn open_neighborhood(&self, s: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for v in (s & self.verts).iter() {
            out |= self.graph.adj[v];
        }
        (out & self.verts) - s
    }

    pub fn closed_neighborhood(&self, s: VertexSet) -> VertexSet {
        self.open_neighborhood(s) | (s & self.verts)
    }

    /// Vertex set of the connected component containing v.
    pub fn component_of(&self, v: usize) -> VertexSet {
        debug_assert!(self.verts.contains(v));
        let mut comp = VertexSet::singleton(v);
        let mut frontier = VertexSet::singleton(v);
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for u in frontier.iter() {
                next |= self.graph.adj[u];
            }
            next = (next & self.verts) - comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    /// Connected components, ordered by their smallest vertex id.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut rest = self.verts;
        while let Some(v) = rest.min() {
            let comp = self.component_of(v);
            rest -= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        match self.verts.min() {
            None => false,
            Some(v) => self.component_of(v) == self.verts,
        }
    }

    /// Copy the view into a standalone graph on 0..len; the returned table
    /// maps new ids back to original ids (ascending).
    pub fn compact(&self) -> (Graph, Vec<usize>) {
        let ids = self.verts.to_vec();
        let index: HashMap<usize, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::edgeless(ids.len());
        for (i, &u) in ids.iter().enumerate() {
            for v in self.neighbors(u).iter() {
                if v > u {
                    g.add_edge(i, index[&v]).unwrap();
                }
            }
        }
        (g, ids)
    }

    /// Separation witness of (p,q)-breakability, or None if unbreakable.
    ///
    /// Enumerates candidate middles S of size <= q; a subset-sum scan over
    /// the component sizes of the view minus S decides whether the remainder
    /// splits into two groups of more than p vertices each. Cost O(n^q 2^c).
    pub fn unbreakable_witness(&self, p: usize, q: usize) -> Option<Separation> {
        let ids = self.verts.to_vec();
        let mut sep = None;
        self.unbreakable_rec(&ids, 0, VertexSet::EMPTY, q, p, &mut sep);
        sep
    }

    fn unbreakable_rec(
        &self,
        ids: &[usize],
        start: usize,
        s: VertexSet,
        room: usize,
        p: usize,
        out: &mut Option<Separation>,
    ) {
        if out.is_some() {
            return;
        }
        if let Some(sep) = self.split_witness(s, p) {
            *out = Some(sep);
            return;
        }
        if room == 0 {
            return;
        }
        for i in start..ids.len() {
            self.unbreakable_rec(ids, i + 1, s.with(ids[i]), room - 1, p, out);
            if out.is_some() {
                return;
            }
        }
    }

    /// Can the components of the view minus s be grouped into two sides of
    /// more than p vertices each? If so, build the separation (both sides
    /// include s).
    fn split_witness(&self, s: VertexSet, p: usize) -> Option<Separation> {
        let comps = self.without(s).components();
        let total: usize = comps.iter().map(|c| c.len()).sum();
        if total < 2 * (p + 1) {
            return None;
        }
        // reach[i] = sums achievable with components i.. (suffix DP, bitset).
        let mut reach = vec![0u128; comps.len() + 1];
        reach[comps.len()] = 1;
        for i in (0..comps.len()).rev() {
            reach[i] = reach[i + 1] | (reach[i + 1] << comps[i].len());
        }
        let want = (p + 1)..=(total - (p + 1));
        let target = want.clone().find(|&t| reach[0] & (1u128 << t) != 0)?;
        // Reconstruct a group achieving the target sum.
        let mut side_a = VertexSet::EMPTY;
        let mut rem = target;
        for i in 0..comps.len() {
            let c = comps[i].len();
            if rem >= c && reach[i + 1] & (1u128 << (rem - c)) != 0 {
                side_a |= comps[i];
                rem -= c;
            }
        }
        debug_assert_eq!(rem, 0);
        let side_b = (self.verts - s) - side_a;
        debug_assert!(side_a.len() > p && side_b.len() > p);
        Some(Separation { a: (side_a | s).to_vec(), b: (side_b | s).to_vec() })
    }

    /// Tree-depth: 0 on the empty view; max over components when
    /// disconnected; 1 + min over vertex deletions when connected.
    pub fn tree_depth(&self) -> usize {
        let mut memo = HashMap::new();
        self.td_rec(self.verts, &mut memo)
    }

    fn td_rec(&self, verts: VertexSet, memo: &mut HashMap<VertexSet, usize>) -> usize {
        if verts.is_empty() {
            return 0;
        }
        if let Some(&d) = memo.get(&verts) {
            return d;
        }
        let view = self.induced(verts);
        let comps = view.components();
        let d = if comps.len() > 1 {
            comps.iter().map(|&c| self.td_rec(c, memo)).max().unwrap()
        } else if verts.len() == 1 {
            1
        } else {
            1 + verts
                .iter()
                .map(|v| self.td_rec(verts.without(v), memo))
                .min()
                .unwrap()
        };
        memo.insert(verts, d);
        d
    }
}

impl fmt::Debug for Subgraph<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgraph({:?})", self.verts)
    }
}
