//! Set-Cover instances and their reduction to elimination-distance
//! questions, used as end-to-end fixtures.
//!
//! The target sentence asks that every vertex sees a vertex of degree at
//! most one within distance two. The reduction turns a cover question
//! "can k sets cover the universe" into "is the elimination distance of
//! the reduction graph at most k", and the three distance variants agree
//! on these graphs.

use thiserror::Error;

use crate::distance::{ed_le, Variant};
use crate::formula::Formula;
use crate::graph::Graph;
use crate::modelcheck::CatalogFormula;

/// Reduction graphs beyond this vertex count are not worth brute-forcing.
pub const REDUCTION_VERTEX_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("reduction graph has {vertices} vertices; the exact check is capped at {REDUCTION_VERTEX_CAP}")]
pub struct ReductionCapError {
    pub vertices: usize,
}

/// A Set-Cover question: do some k of the sets union to the universe?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
    k: usize,
}

impl SetCoverInstance {
    /// Universe {0,...,n-1} with n >= 2 and budget k <= number of sets.
    /// Sets are normalized to sorted distinct members.
    pub fn new(
        universe_size: usize,
        sets: Vec<Vec<usize>>,
        k: usize,
    ) -> Result<SetCoverInstance, String> {
        if universe_size < 2 {
            return Err(format!("universe must have at least 2 elements, got {universe_size}"));
        }
        if k > sets.len() {
            return Err(format!("budget {k} exceeds the {} sets", sets.len()));
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for (j, set) in sets.into_iter().enumerate() {
            if let Some(&bad) = set.iter().find(|&&u| u >= universe_size) {
                return Err(format!("set {j} contains {bad}, outside the universe"));
            }
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            normalized.push(set);
        }
        Ok(SetCoverInstance { universe_size, sets: normalized, k })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Exhaustive cover decision.
    pub fn has_cover(&self) -> bool {
        let m = self.sets.len();
        let full: u64 = (1 << self.universe_size) - 1;
        let masks: Vec<u64> = self
            .sets
            .iter()
            .map(|s| s.iter().fold(0u64, |acc, &u| acc | 1 << u))
            .collect();
        (0u64..1 << m)
            .filter(|choice| choice.count_ones() as usize <= self.k)
            .any(|choice| {
                let union = (0..m).filter(|j| choice >> j & 1 == 1).fold(0, |acc, j| acc | masks[j]);
                union == full
            })
    }

    /// Text form: header "n m k", then one space-separated line per set.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.universe_size, self.sets.len(), self.k);
        for set in &self.sets {
            let items: Vec<String> = set.iter().map(|u| u.to_string()).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SetCoverInstance, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty instance file")?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| format!("bad header entry '{w}'")))
            .collect::<Result<_, _>>()?;
        let [n, m, k] = nums[..] else {
            return Err("header must be 'n m k'".into());
        };
        let mut sets = Vec::with_capacity(m);
        for i in 0..m {
            let line = lines.next().ok_or(format!("missing set line {i}"))?;
            let set: Vec<usize> = line
                .split_whitespace()
                .map(|w| w.parse().map_err(|_| format!("bad element '{w}' in set {i}")))
                .collect::<Result<_, _>>()?;
            sets.push(set);
        }
        SetCoverInstance::new(n, sets, k)
    }
}

/// The Pi_3 sentence "every vertex has, within distance two, a vertex of
/// degree at most one".
pub fn hard_formula() -> Formula {
    Formula::parse(CatalogFormula::HardnessDist2Degree1.source())
        .expect("catalog sentence parses")
}

/// The reduction graph. Layout: k+2 pairwise-adjacent copies per universe
/// element, row-major by (element, copy); then per set j a path
/// s_j - v_j - w_j with s_j adjacent to every copy of the set's members.
pub fn setcover_to_graph(inst: &SetCoverInstance) -> Graph {
    let n = inst.universe_size;
    let copies = inst.k + 2;
    let clique = n * copies;
    let mut g = Graph::edgeless(clique + 3 * inst.sets.len());
    for a in 0..clique {
        for b in a + 1..clique {
            g.add_edge(a, b).unwrap();
        }
    }
    for (j, set) in inst.sets.iter().enumerate() {
        let s = clique + 3 * j;
        g.add_edge(s, s + 1).unwrap();
        g.add_edge(s + 1, s + 2).unwrap();
        for &element in set {
            for p in 0..copies {
                g.add_edge(s, element * copies + p).unwrap();
            }
        }
    }
    g
}

/// True when the cover decision and all three "elimination distance at
/// most k" decisions agree on the reduction graph.
pub fn reduction_equivalence_check(inst: &SetCoverInstance) -> Result<bool, ReductionCapError> {
    let g = setcover_to_graph(inst);
    if g.n() > REDUCTION_VERTEX_CAP {
        return Err(ReductionCapError { vertices: g.n() });
    }
    let cover = inst.has_cover();
    let phi = CatalogFormula::HardnessDist2Degree1;
    let k = inst.k as u32;
    Ok(Variant::ALL.iter().all(|&variant| ed_le(&g, &phi, variant, k) == cover))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelcheck::models;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hard_formula_shape_and_small_models() {
        let f = hard_formula();
        let class = f.prefix_class();
        assert_eq!((class.side, class.level), (crate::formula::Side::Pi, 3));

        let p3 = Graph::path(3);
        assert!(models(p3.full(), &f));
        assert!(CatalogFormula::HardnessDist2Degree1.models(p3.full()));

        let c5 = Graph::cycle(5);
        assert!(!models(c5.full(), &f));
        assert!(!CatalogFormula::HardnessDist2Degree1.models(c5.full()));
    }

    #[test]
    fn reduction_graph_layout() {
        let inst =
            SetCoverInstance::new(2, vec![vec![0], vec![1]], 1).unwrap();
        let g = setcover_to_graph(&inst);
        assert_eq!(g.n(), 12);
        // Copy clique: all 6 copy vertices pairwise adjacent.
        for a in 0..6 {
            for b in a + 1..6 {
                assert!(g.has_edge(a, b));
            }
        }
        // w_j has only v_j as neighbor.
        for j in 0..2 {
            let s = 6 + 3 * j;
            assert_eq!(g.full().degree(s + 2), 1);
            assert!(g.has_edge(s + 1, s + 2));
        }
        // s_0 sees exactly the three copies of element 0, plus v_0.
        assert_eq!(g.full().degree(6), 4);
        for p in 0..3 {
            assert!(g.has_edge(6, p));
            assert!(!g.has_edge(6, 3 + p));
        }
    }

    #[test]
    fn reduction_graph_counts_match_closed_forms() {
        for (n, sets, k) in [
            (2, vec![vec![0], vec![1], vec![0, 1]], 2),
            (3, vec![vec![0, 1], vec![2]], 1),
            (4, vec![vec![0, 1, 2, 3]], 1),
        ] {
            let member_total: usize = sets.iter().map(|s| s.len()).sum();
            let m = sets.len();
            let inst = SetCoverInstance::new(n, sets, k).unwrap();
            let g = setcover_to_graph(&inst);
            let clique = n * (k + 2);
            assert_eq!(g.n(), clique + 3 * m);
            assert_eq!(
                g.edge_count(),
                clique * (clique - 1) / 2 + 2 * m + (k + 2) * member_total
            );
        }
    }

    #[test]
    fn equivalence_on_the_two_spec_instances() {
        let no_cover = SetCoverInstance::new(2, vec![vec![0], vec![1]], 1).unwrap();
        assert!(!no_cover.has_cover());
        assert_eq!(reduction_equivalence_check(&no_cover), Ok(true));

        let cover = SetCoverInstance::new(2, vec![vec![0, 1]], 1).unwrap();
        assert!(cover.has_cover());
        assert_eq!(reduction_equivalence_check(&cover), Ok(true));
    }

    #[test]
    fn formula_is_component_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let phi = CatalogFormula::HardnessDist2Degree1;
        for _ in 0..60 {
            let n = rng.gen_range(1..=7);
            let mut g = Graph::edgeless(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.3) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let whole = phi.models(g.full());
            let per_component =
                g.full().components().iter().all(|&c| phi.models(g.full().induced(c)));
            assert_eq!(whole, per_component, "{}", g.to_edge_list_string());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let inst = SetCoverInstance::new(
            4,
            vec![vec![0], vec![1], vec![2], vec![3]],
            2,
        )
        .unwrap();
        // 4 elements x 4 copies + 12 = 28 vertices.
        assert_eq!(
            reduction_equivalence_check(&inst),
            Err(ReductionCapError { vertices: 28 })
        );
    }

    #[test]
    fn instance_validation_and_text_round_trip() {
        assert!(SetCoverInstance::new(1, vec![vec![0]], 1).is_err());
        assert!(SetCoverInstance::new(2, vec![vec![0]], 2).is_err());
        assert!(SetCoverInstance::new(2, vec![vec![5]], 1).is_err());

        let inst = SetCoverInstance::new(3, vec![vec![2, 0, 2], vec![], vec![1]], 2).unwrap();
        assert_eq!(inst.sets()[0], vec![0, 2]);
        let text = inst.to_text();
        assert_eq!(text, "3 3 2\n0 2\n\n1\n");
        assert_eq!(SetCoverInstance::from_text(&text).unwrap(), inst);
    }
}
