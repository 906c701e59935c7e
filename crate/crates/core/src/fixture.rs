//! Seeded fixture generators for tests and the CLI.
//!
//! Everything here is deterministic in the seed: random graphs, random
//! connected graphs, rejection-sampled (p,k)-unbreakable graphs, and the
//! planted instances that drive the branching subroutines end to end. The
//! planted constructions are engineered so the intended candidate is
//! provably reachable: a star core satisfying the diameter-2 property
//! behind a small boundary (for the big-component search), a pendant
//! triangle component whose removal costs no budget (for the anchored
//! search), and a two-vertex elimination set of depth one (for the direct
//! set search).

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fpt::Coloring;
use crate::graph::Graph;
use crate::modelcheck::CatalogFormula;
use crate::set::VertexSet;

/// G(n, prob) with every pair sampled independently.
pub fn random_graph(n: usize, prob: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::edgeless(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(prob) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Random connected graph: a random recursive tree plus independent extra
/// edges with the given probability.
pub fn random_connected_graph(n: usize, extra_prob: f64, rng: &mut ChaCha8Rng) -> Graph {
    assert!(n >= 1);
    let mut g = Graph::edgeless(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v).unwrap();
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(extra_prob) {
                let _ = g.add_edge(u, v);
            }
        }
    }
    g
}

/// Rejection-sample a (p,k)-unbreakable graph on n vertices, verified by
/// `is_unbreakable`. Dense graphs are unbreakable with high probability at
/// these scales; None after `tries` failures.
pub fn random_unbreakable(
    n: usize,
    p: usize,
    k: usize,
    tries: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Graph> {
    for _ in 0..tries {
        let g = random_graph(n, 0.55, rng);
        if g.is_unbreakable(p, k) {
            return Some(g);
        }
    }
    None
}

/// One verified-unbreakable instance for the solver-vs-oracle suite.
pub struct UnbreakableFixture {
    pub graph: Graph,
    pub p: usize,
    pub k: u32,
}

/// A deterministic batch of at least 50 (p,k)-unbreakable fixtures with
/// n <= 14, p <= 4, k <= 2, every one re-verified by `is_unbreakable`.
/// The batch mixes named graphs (cliques, cycles, paths, stars, a clique
/// with an isolated vertex) with random dense samples, including a block
/// of (1,1)-unbreakable graphs on 11..14 vertices, the only parameter
/// choice in range whose cutoff falls below n and therefore the only one
/// exercising the separating-family pipeline.
pub fn unbreakable_suite(seed: u64) -> Vec<UnbreakableFixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<UnbreakableFixture> = Vec::new();
    let push = |out: &mut Vec<UnbreakableFixture>, g: Graph, p: usize, k: u32| {
        assert!(g.n() <= 14 && p <= 4 && k <= 2);
        assert!(g.is_unbreakable(p, k as usize), "fixture failed verification");
        out.push(UnbreakableFixture { graph: g, p, k });
    };
    // Named graphs across the (p,k) grid.
    for (p, k) in [(1usize, 1u32), (2, 1), (2, 2), (3, 2), (4, 2)] {
        push(&mut out, Graph::complete(4), p, k);
        push(&mut out, Graph::complete(5), p, k);
        push(&mut out, Graph::cycle(5), p, k);
    }
    for (p, k) in [(2usize, 1u32), (2, 2), (3, 2)] {
        push(&mut out, Graph::path(6), p, k);
        push(&mut out, Graph::star(5), p, k);
        push(
            &mut out,
            Graph::disjoint_union(&[&Graph::complete(4), &Graph::edgeless(1)]).unwrap(),
            p,
            k,
        );
    }
    push(&mut out, Graph::cycle(6), 1, 1);
    push(&mut out, Graph::edgeless(3), 1, 2);
    push(&mut out, Graph::edgeless(4), 2, 2);
    // Random dense samples at moderate sizes (exact-fallback territory).
    for (n, p, k, want) in [
        (8usize, 2usize, 2u32, 4usize),
        (9, 3, 2, 4),
        (10, 4, 2, 4),
        (10, 2, 1, 3),
    ] {
        let mut got = 0;
        while got < want {
            if let Some(g) = random_unbreakable(n, p, k as usize, 50, &mut rng) {
                push(&mut out, g, p, k);
                got += 1;
            } else {
                break;
            }
        }
    }
    // The pipeline block: past the (1,1) cutoff of 10 vertices.
    for n in [11usize, 12, 13, 14] {
        let mut got = 0;
        while got < 3 {
            if let Some(g) = random_unbreakable(n, 1, 1, 80, &mut rng) {
                push(&mut out, g, 1, 1);
                got += 1;
            } else {
                break;
            }
        }
    }
    assert!(out.len() >= 50, "suite too small: {}", out.len());
    out
}

/// A planted instance for the big-component search: a star core C (hub +
/// leaves, diameter two) behind a boundary S of one or two vertices, with
/// a pendant path U attached to all of S. The whole graph and every
/// intermediate region keep diameter above two until exactly S is deleted,
/// so the search must emit (C, S).
pub struct BigComponentPlant {
    pub graph: Graph,
    /// The star core, the planted candidate region.
    pub core: VertexSet,
    /// S = N(core), the planted candidate boundary.
    pub boundary: VertexSet,
    /// The pendant path outside N[core].
    pub small_side: VertexSet,
    /// Lead tuple for the padded diameter formula (the dummy variable).
    pub lead: Vec<usize>,
    /// Budget: exactly |S|.
    pub k: u32,
}

impl BigComponentPlant {
    /// The colorful coloring: small side and lead red, everything else
    /// (including the boundary) blue.
    pub fn coloring(&self) -> Coloring {
        let red = self.small_side | VertexSet::from_iter(self.lead.iter().copied());
        Coloring::red_blue(self.graph.full().vertices(), red)
    }

    pub fn formula(&self) -> CatalogFormula {
        CatalogFormula::DiameterLe2
    }
}

/// Build one big-component plant. Layout: hub 0, leaves 1..=t, boundary
/// s_1.. (each adjacent to its own leaf and to the head of the pendant
/// path), pendant path last.
pub fn plant_big_component(rng: &mut ChaCha8Rng) -> BigComponentPlant {
    let t = rng.gen_range(3..=6);
    let boundary_size = rng.gen_range(1..=2usize);
    let path_len = rng.gen_range(1..=2usize);
    let s0 = t + 1;
    let a = s0 + boundary_size;
    let n = a + path_len;
    let mut edges = Vec::new();
    for leaf in 1..=t {
        edges.push((0, leaf));
    }
    for i in 0..boundary_size {
        edges.push((s0 + i, 1 + i));
        edges.push((s0 + i, a));
    }
    for i in 1..path_len {
        edges.push((a + i - 1, a + i));
    }
    let graph = Graph::from_edges(n, &edges).unwrap();
    BigComponentPlant {
        graph,
        core: VertexSet::from_iter(0..=t),
        boundary: VertexSet::from_iter(s0..s0 + boundary_size),
        small_side: VertexSet::from_iter(a..n),
        lead: vec![0],
        k: boundary_size as u32,
    }
}

/// A planted instance for the anchored search: deleting w leaves a red
/// attachment path A (the part the candidate must keep), a blue star B,
/// and a red pendant triangle D. The triangle is the only triangle, so
/// the triangle-freeness counterexample always points at D; cutting D
/// loose costs nothing (its neighborhood is w, already gone), after which
/// the remainder A + B is triangle-free and is emitted with boundary {w}.
pub struct DetachedPlant {
    pub graph: Graph,
    pub w: usize,
    /// The red attachment union handed to the search (the path A).
    pub attached: VertexSet,
    /// The planted candidate region: everything but w and the triangle.
    pub kept: VertexSet,
    pub lead: Vec<usize>,
    pub k: u32,
}

impl DetachedPlant {
    /// Red: attachment path, triangle, and the lead vertex. w and the
    /// star stay blue.
    pub fn coloring(&self) -> Coloring {
        let full = self.graph.full().vertices();
        let triangle = full - self.kept - VertexSet::singleton(self.w);
        let red = self.attached | triangle | VertexSet::from_iter(self.lead.iter().copied());
        Coloring::red_blue(full, red)
    }

    pub fn formula(&self) -> CatalogFormula {
        CatalogFormula::TriangleFree
    }
}

/// Build one detached plant. Layout: w = 0, path A = 1..=alen, star hub
/// a+1 with its leaves, triangle last; w joins A, the star hub, and one
/// triangle corner.
pub fn plant_detached(rng: &mut ChaCha8Rng) -> DetachedPlant {
    let alen = rng.gen_range(1..=2usize);
    let t = rng.gen_range(2..=4usize);
    let hub = alen + 1;
    let d0 = hub + t + 1;
    let n = d0 + 3;
    let mut edges = vec![(0, 1), (0, hub), (0, d0)];
    for i in 1..alen {
        edges.push((i, i + 1));
    }
    for leaf in (hub + 1)..=(hub + t) {
        edges.push((hub, leaf));
    }
    edges.push((d0, d0 + 1));
    edges.push((d0, d0 + 2));
    edges.push((d0 + 1, d0 + 2));
    let graph = Graph::from_edges(n, &edges).unwrap();
    let attached = VertexSet::from_iter(1..=alen);
    let kept = VertexSet::from_iter(1..d0);
    DetachedPlant { graph, w: 0, attached, kept, lead: vec![hub], k: 2 }
}

/// A planted instance for the direct set search: star core plus a
/// boundary vertex s and one pendant vertex behind it. The planted
/// elimination set {s, pendant} has depth one and restores diameter two.
pub struct EliminationSetPlant {
    pub graph: Graph,
    /// The planted solution (one valid set; the search may return another).
    pub solution: VertexSet,
    pub lead: Vec<usize>,
    pub k: u32,
    pub p: usize,
}

impl EliminationSetPlant {
    /// Red: the lead vertex. Yellow: the pendant (solution minus the
    /// boundary). Blue: everything else including s.
    pub fn coloring(&self) -> Coloring {
        let full = self.graph.full().vertices();
        let s = self.solution.min().unwrap();
        let yellow = self.solution.without(s);
        Coloring::red_yellow_blue(full, VertexSet::from_iter(self.lead.iter().copied()), yellow)
    }

    pub fn formula(&self) -> CatalogFormula {
        CatalogFormula::DiameterLe2
    }
}

/// Build one elimination-set plant. Layout: hub 0, leaves 1..=t, boundary
/// s = t+1 adjacent to leaf 1, pendant a = t+2 adjacent to s.
pub fn plant_elimination_set(rng: &mut ChaCha8Rng) -> EliminationSetPlant {
    let t = rng.gen_range(2..=6);
    let s = t + 1;
    let a = t + 2;
    let mut edges = vec![(s, 1), (s, a)];
    for leaf in 1..=t {
        edges.push((0, leaf));
    }
    let graph = Graph::from_edges(a + 1, &edges).unwrap();
    EliminationSetPlant {
        graph,
        solution: VertexSet::from_iter([s, a]),
        lead: vec![0],
        k: 2,
        p: 1,
    }
}

/// Derive a child seed for a named sub-stream, so independent generators
/// never share state.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut rng = StdRng::seed_from_u64(seed ^ label.bytes().fold(0u64, |a, b| a.wrapping_mul(131).wrapping_add(b as u64)));
    rng.gen()
}
