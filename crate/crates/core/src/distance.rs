//! Exact reference solvers for the three elimination distances, plus
//! independent oracles based on the elimination-set characterizations.
//!
//! The recursive definitions, for a sentence f:
//!
//! * `ed_conn(G)`: 0 on the empty graph; max over components when G is
//!   disconnected; 0 when a connected G satisfies f; otherwise
//!   1 + min over vertices v of ed_conn(G - v).
//! * `ed_prop(G)`: 0 on the empty graph or whenever G satisfies f;
//!   1 + min over v of ed_prop(G - v) for connected G; otherwise
//!   max(1, max over components of ed_prop).
//! * `ed_depth(G)`: least d such that some set X of elimination depth
//!   d - 1 has G - X satisfying f; infinite when no induced subgraph
//!   satisfies f.
//!
//! These are exponential-time and meant as ground truth for the branching
//! solvers, so everything here favors clarity and determinism over speed.
//! Witness searches scan subsets smallest-first in a fixed order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::elimination::{depth_at_most, Representation};
use crate::graph::{Graph, Subgraph};
use crate::modelcheck::Property;
use crate::set::VertexSet;

/// Which of the three elimination distances is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Conn,
    Prop,
    Depth,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Conn, Variant::Prop, Variant::Depth];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Conn => "conn",
            Variant::Prop => "prop",
            Variant::Depth => "depth",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Variant, String> {
        match s {
            "conn" => Ok(Variant::Conn),
            "prop" => Ok(Variant::Prop),
            "depth" => Ok(Variant::Depth),
            other => Err(format!("unknown variant '{other}' (expected conn, prop or depth)")),
        }
    }
}

/// An elimination set together with a forest representation certifying its
/// depth. Serializes flat: {"set": [...], "tree": [...], "alpha": [...]}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub set: Vec<usize>,
    #[serde(flatten)]
    pub representation: Representation,
}

impl Witness {
    fn new(x: VertexSet, representation: Representation) -> Witness {
        Witness { set: x.to_vec(), representation }
    }

    pub fn set_as_mask(&self) -> VertexSet {
        VertexSet::from_iter(self.set.iter().copied())
    }
}

// --- exact values by the recursive definitions ---

/// Exact connected-variant distance. Memoized on the vertex bitmask of the
/// induced subgraph; the memo lives and dies with one call.
pub fn ed_conn<P: Property + ?Sized>(g: &Graph, f: &P) -> u32 {
    let mut memo = HashMap::new();
    conn_rec(g.full().vertices(), g, f, &mut memo)
}

fn conn_rec<P: Property + ?Sized>(
    verts: VertexSet,
    g: &Graph,
    f: &P,
    memo: &mut HashMap<u64, u32>,
) -> u32 {
    if let Some(&v) = memo.get(&verts.0) {
        return v;
    }
    let view = g.full().induced(verts);
    let comps = view.components();
    let value = match comps.len() {
        0 => 0,
        1 => {
            if f.holds(view) {
                0
            } else {
                1 + verts
                    .iter()
                    .map(|v| conn_rec(verts.without(v), g, f, memo))
                    .min()
                    .unwrap()
            }
        }
        _ => comps.iter().map(|&c| conn_rec(c, g, f, memo)).max().unwrap(),
    };
    memo.insert(verts.0, value);
    value
}

/// Exact property-first distance, memoized like `ed_conn`.
pub fn ed_prop<P: Property + ?Sized>(g: &Graph, f: &P) -> u32 {
    let mut memo = HashMap::new();
    prop_rec(g.full().vertices(), g, f, &mut memo)
}

fn prop_rec<P: Property + ?Sized>(
    verts: VertexSet,
    g: &Graph,
    f: &P,
    memo: &mut HashMap<u64, u32>,
) -> u32 {
    if verts.is_empty() {
        return 0;
    }
    if let Some(&v) = memo.get(&verts.0) {
        return v;
    }
    let view = g.full().induced(verts);
    let value = if f.holds(view) {
        0
    } else {
        let comps = view.components();
        if comps.len() == 1 {
            1 + verts
                .iter()
                .map(|v| prop_rec(verts.without(v), g, f, memo))
                .min()
                .unwrap()
        } else {
            comps
                .iter()
                .map(|&c| prop_rec(c, g, f, memo))
                .max()
                .unwrap()
                .max(1)
        }
    };
    memo.insert(verts.0, value);
    value
}

/// Exact depth-variant distance: None means no deletion set at all leaves a
/// graph satisfying f, so the distance is infinite.
pub fn ed_depth<P: Property + ?Sized>(g: &Graph, f: &P) -> Option<u32> {
    ed_depth_with_witness(g, f).map(|(d, _)| d)
}

/// Like `ed_depth`, returning the first (minimum d, then smallest X) witness.
pub fn ed_depth_with_witness<P: Property + ?Sized>(g: &Graph, f: &P) -> Option<(u32, Witness)> {
    // d is capped by n: any X has a chain representation of depth |X| - 1.
    for d in 0..=g.n() as u32 {
        if let Some(w) = depth_witness_at(g, f, d) {
            return Some((d, w));
        }
    }
    None
}

fn depth_witness_at<P: Property + ?Sized>(g: &Graph, f: &P, d: u32) -> Option<Witness> {
    let full = g.full();
    for x in full.vertices().subsets_by_size() {
        // Depth filter first: it is far cheaper than model checking.
        if let Some(rep) = depth_at_most(full, x, d as i32 - 1) {
            if f.holds(full.without(x)) {
                return Some(Witness::new(x, rep));
            }
        }
    }
    None
}

/// Exact value per variant; None only for the depth variant's infinity.
pub fn ed_value<P: Property + ?Sized>(g: &Graph, f: &P, variant: Variant) -> Option<u32> {
    match variant {
        Variant::Conn => Some(ed_conn(g, f)),
        Variant::Prop => Some(ed_prop(g, f)),
        Variant::Depth => ed_depth(g, f),
    }
}

// --- budget-bounded decisions ---
//
// The same recursions, pruned at the budget. Used where the exact value is
// not needed: large instances answer "is the distance at most k" without
// visiting the whole subgraph lattice.

pub fn ed_conn_le<P: Property + ?Sized>(g: &Graph, f: &P, k: u32) -> bool {
    conn_le_rec(g.full(), f, k)
}

fn conn_le_rec<P: Property + ?Sized>(view: Subgraph<'_>, f: &P, k: u32) -> bool {
    let comps = view.components();
    match comps.len() {
        0 => true,
        1 => {
            f.holds(view)
                || (k > 0
                    && view
                        .vertices()
                        .iter()
                        .any(|v| conn_le_rec(view.without_vertex(v), f, k - 1)))
        }
        _ => comps.iter().all(|&c| conn_le_rec(view.induced(c), f, k)),
    }
}

pub fn ed_prop_le<P: Property + ?Sized>(g: &Graph, f: &P, k: u32) -> bool {
    prop_le_rec(g.full(), f, k)
}

fn prop_le_rec<P: Property + ?Sized>(view: Subgraph<'_>, f: &P, k: u32) -> bool {
    if view.is_empty() || f.holds(view) {
        return true;
    }
    if k == 0 {
        return false;
    }
    let comps = view.components();
    if comps.len() == 1 {
        view.vertices()
            .iter()
            .any(|v| prop_le_rec(view.without_vertex(v), f, k - 1))
    } else {
        comps.iter().all(|&c| prop_le_rec(view.induced(c), f, k))
    }
}

pub fn ed_depth_le<P: Property + ?Sized>(g: &Graph, f: &P, k: u32) -> bool {
    depth_witness_at(g, f, k).is_some()
}

/// Budget verdict per variant.
pub fn ed_le<P: Property + ?Sized>(g: &Graph, f: &P, variant: Variant, k: u32) -> bool {
    match variant {
        Variant::Conn => ed_conn_le(g, f, k),
        Variant::Prop => ed_prop_le(g, f, k),
        Variant::Depth => ed_depth_le(g, f, k),
    }
}

// --- characterization-based oracles ---

/// Does the connected graph g have an elimination set X of depth at most
/// k - 1 such that every component of g - X satisfies f? Equivalent to
/// ed_conn(g) <= k; decided without the recursive definition.
pub fn ed_conn_via_sets<P: Property + ?Sized>(g: &Graph, f: &P, k: u32) -> Option<Witness> {
    let full = g.full();
    assert!(full.is_connected(), "ed_conn_via_sets needs a connected graph");
    for x in full.vertices().subsets_by_size() {
        if let Some(rep) = depth_at_most(full, x, k as i32 - 1) {
            let rest = full.without(x);
            if rest.components().iter().all(|&c| f.holds(rest.induced(c))) {
                return Some(Witness::new(x, rep));
            }
        }
    }
    None
}

/// Does the connected graph g, already known not to satisfy f, have a
/// nonempty elimination set whose representation meets the property-first
/// side conditions at budget k? Equivalent to ed_prop(g) <= k when
/// ed_prop(g) > 0 and k >= 1.
pub fn ed_prop_via_sets<P: Property + ?Sized>(g: &Graph, f: &P, k: u32) -> Option<Witness> {
    let full = g.full();
    assert!(full.is_connected(), "ed_prop_via_sets needs a connected graph");
    assert!(k >= 1, "the property-first characterization starts at k = 1");
    debug_assert!(!f.holds(full), "caller must rule out ed_prop = 0 first");
    for x in full.vertices().subsets_by_size() {
        if x.is_empty() {
            continue;
        }
        if let Some(rep) = crate::elimination::prop_representation(full, x, k, f) {
            return Some(Witness::new(x, rep));
        }
    }
    None
}
