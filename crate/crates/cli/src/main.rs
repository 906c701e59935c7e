//! Command line front end for the elimination distance toolkit.
//!
//! Subcommands cover model checking, the three distance variants (exact
//! search and the branching method for unbreakable graphs), elimination
//! depth of a vertex set, unbreakability testing, artifact generators,
//! MSOL emission, and separating family verification.
//!
//! Exit codes: 0 for a true verdict or plain success, 1 for a false
//! verdict, 2 for usage, parse or capacity errors. Reports are JSON on
//! stdout; `wall_ms` is the only nondeterministic field.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use elimdist_core::distance::{
    ed_conn_via_sets, ed_depth_with_witness, ed_le, ed_prop_via_sets, ed_value,
};
use elimdist_core::elimination::{
    depth as elimination_depth, depth_at_most, prop_representation, validate_representation,
};
use elimdist_core::fixture::random_unbreakable;
use elimdist_core::fpt::{solve_unbreakable, SearchStats};
use elimdist_core::hardness::{hard_formula, setcover_to_graph, SetCoverInstance};
use elimdist_core::modelcheck::{models, Structure};
use elimdist_core::msol::emit_msol;
use elimdist_core::separation::{build_family, verify_family, SeparatingFamily};
use elimdist_core::{Formula, Graph, Representation, Variant, VertexSet, Witness};

const DEFAULT_SIZE_CAP: usize = 16;

#[derive(Parser)]
#[command(name = "elimdist", version, about = "Elimination distances to first order properties")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Fpt,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a formula on a graph, with values for its free variables
    Check {
        graph: PathBuf,
        formula: PathBuf,
        /// Comma separated vertex ids, one per declared free variable
        #[arg(long, value_delimiter = ',')]
        assign: Option<Vec<usize>>,
    },
    /// Compute an elimination distance or decide a bound on one
    Dist {
        graph: PathBuf,
        formula: PathBuf,
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        /// Bound to decide; omit to compute the exact value
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        /// Unbreakability parameter, required by the fpt method
        #[arg(long)]
        p: Option<usize>,
        /// Write the witness JSON here when the answer is yes
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Vertex limit for the exact method; ELIMDIST_SIZE_CAP overrides
        /// the default, this flag overrides both
        #[arg(long)]
        size_cap: Option<usize>,
    },
    /// Elimination depth of a vertex set, with a representation forest
    DepthOfSet {
        graph: PathBuf,
        /// Comma separated vertex ids
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Decide (p,q)-unbreakability; prints a separation when breakable
    Unbreakable {
        graph: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Generate instances and artifacts
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Emit the MSOL sentence expressing a distance bound
    Msol {
        formula: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
    },
    /// Check a separating family file
    FamilyVerify { family: PathBuf },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Set cover instance plus its graph reduction and hard formula
    Setcover {
        /// Universe size
        #[arg(long)]
        n: usize,
        /// Number of sets
        #[arg(long)]
        m: usize,
        /// Cover budget
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Base path; writes BASE.sc, BASE.el and BASE.fol
        #[arg(long)]
        out: PathBuf,
    },
    /// (n,a,b)-separating family file
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random graph that passes the unbreakability check
    Fixture {
        /// Required marker: only unbreakable fixtures are supported
        #[arg(long)]
        unbreakable: bool,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, String> {
    match cmd {
        Cmd::Check { graph, formula, assign } => cmd_check(&graph, &formula, assign),
        Cmd::Dist { graph, formula, variant, k, method, p, witness, size_cap } => {
            cmd_dist(&graph, &formula, variant, k, method, p, witness, size_cap)
        }
        Cmd::DepthOfSet { graph, set } => cmd_depth_of_set(&graph, &set),
        Cmd::Unbreakable { graph, p, q } => cmd_unbreakable(&graph, p, q),
        Cmd::Gen { what } => match what {
            GenCmd::Setcover { n, m, k, seed, out } => cmd_gen_setcover(n, m, k, seed, &out),
            GenCmd::Family { n, a, b, out } => cmd_gen_family(n, a, b, &out),
            GenCmd::Fixture { unbreakable, n, p, k, seed, out } => {
                cmd_gen_fixture(unbreakable, n, p, k, seed, &out)
            }
        },
        Cmd::Msol { formula, k, variant } => cmd_msol(&formula, k, variant),
        Cmd::FamilyVerify { family } => cmd_family_verify(&family),
    }
}

// --- input loading ---

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Edge list by default; DIMACS when the first meaningful line starts with
/// a DIMACS marker ('c' comment or 'p' problem line).
fn load_graph(path: &Path) -> Result<Graph, String> {
    let text = read_file(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    let dimacs = matches!(first, Some(l) if l.starts_with('c') || l.starts_with('p'));
    let parsed = if dimacs {
        Graph::from_dimacs_str(&text)
    } else {
        Graph::from_edge_list_str(&text)
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

fn load_formula(path: &Path) -> Result<Formula, String> {
    Formula::parse(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_report<T: Serialize>(report: &T) {
    println!("{}", serde_json::to_string_pretty(report).expect("report serialization"));
}

// --- check ---

fn cmd_check(graph: &Path, formula: &Path, assign: Option<Vec<usize>>) -> Result<u8, String> {
    let g = load_graph(graph)?;
    let f = load_formula(formula)?;
    let assign = assign.unwrap_or_default();
    let frees = f.free_slots();
    if assign.len() != frees.len() {
        return Err(format!(
            "formula declares {} free variable(s), --assign supplies {}",
            frees.len(),
            assign.len()
        ));
    }
    if let Some(&v) = assign.iter().find(|&&v| v >= g.n()) {
        return Err(format!("assigned vertex {v} is out of range for a {} vertex graph", g.n()));
    }
    let verdict = if assign.is_empty() {
        models(g.full(), &f)
    } else {
        Structure::with_frees(g.full(), &assign).models(&f)
    };
    println!("{verdict}");
    Ok(if verdict { 0 } else { 1 })
}

// --- dist ---

#[derive(Serialize)]
struct DistReport {
    command: &'static str,
    variant: Variant,
    method: &'static str,
    k: Option<u32>,
    p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<Option<u32>>,
    witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_valid: Option<bool>,
    counters: SearchStats,
    wall_ms: u128,
}

#[allow(clippy::too_many_arguments)]
fn cmd_dist(
    graph: &Path,
    formula: &Path,
    variant: Variant,
    k: Option<u32>,
    method: Method,
    p: Option<usize>,
    witness_out: Option<PathBuf>,
    size_cap: Option<usize>,
) -> Result<u8, String> {
    let start = Instant::now();
    let g = load_graph(graph)?;
    let f = load_formula(formula)?;
    if !f.is_sentence() {
        return Err("dist needs a sentence, but the formula declares free variables".into());
    }

    let mut verdict = None;
    let mut value = None;
    let mut witness = None;
    let mut counters = SearchStats::default();
    let method_name;

    match method {
        Method::Exact => {
            method_name = "exact";
            let cap = effective_size_cap(size_cap)?;
            if g.n() > cap {
                return Err(format!(
                    "graph has {} vertices, above the exact method cap {cap}; raise \
                     --size-cap or ELIMDIST_SIZE_CAP, or use --method fpt",
                    g.n()
                ));
            }
            match k {
                Some(k) => {
                    let yes = ed_le(&g, &f, variant, k);
                    verdict = Some(yes);
                    if yes {
                        witness = exact_witness(&g, &f, variant, k);
                    }
                }
                None => {
                    let v = ed_value(&g, &f, variant);
                    if let Some(v) = v {
                        witness = exact_witness(&g, &f, variant, v);
                    }
                    value = Some(v);
                }
            }
        }
        Method::Fpt => {
            method_name = "fpt";
            let k = k.ok_or("--method fpt requires --k")?;
            let p = p.ok_or("--method fpt requires --p")?;
            let padded = f
                .pad_to_sigma3()
                .map_err(|e| format!("--method fpt needs an exists-forall-exists sentence: {e}"))?;
            let outcome = solve_unbreakable(&g, &padded, k, p, variant)
                .map_err(|e| e.to_string())?;
            verdict = Some(outcome.holds);
            witness = outcome.witness;
            counters = outcome.stats;
        }
    }

    // The bound a witness must certify: the decided k, or the computed value.
    let witness_k = k.or(value.flatten());
    let mut witness_file = None;
    let mut witness_valid = None;
    if let (Some(w), Some(wk)) = (&witness, witness_k) {
        let ok = witness_is_valid(&g, &f, variant, wk, w);
        if let Some(path) = &witness_out {
            fs::write(path, serde_json::to_string_pretty(w).expect("witness serialization"))
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let reloaded: Witness = serde_json::from_str(&read_file(path)?)
                .map_err(|e| format!("witness reload: {e}"))?;
            if !witness_is_valid(&g, &f, variant, wk, &reloaded) {
                return Err("reloaded witness failed validation".into());
            }
            witness_file = Some(path.display().to_string());
        }
        witness_valid = Some(ok);
        if !ok {
            return Err("computed witness failed validation".into());
        }
    }

    let report = DistReport {
        command: "dist",
        variant,
        method: method_name,
        k,
        p,
        verdict,
        value,
        witness,
        witness_file,
        witness_valid,
        counters,
        wall_ms: start.elapsed().as_millis(),
    };
    print_report(&report);
    Ok(match verdict {
        Some(true) | None => 0,
        Some(false) => 1,
    })
}

fn effective_size_cap(flag: Option<usize>) -> Result<usize, String> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("ELIMDIST_SIZE_CAP") {
        Ok(s) => s.parse().map_err(|_| format!("ELIMDIST_SIZE_CAP: bad value '{s}'")),
        Err(_) => Ok(DEFAULT_SIZE_CAP),
    }
}

/// Witness for ed_* <= k, assembled per component so disconnected graphs
/// work. Callers only ask after a yes verdict, hence the expect calls.
fn exact_witness(g: &Graph, f: &Formula, variant: Variant, k: u32) -> Option<Witness> {
    let full = g.full();
    match variant {
        Variant::Conn => {
            let mut parts = Vec::new();
            for comp in full.components() {
                let view = full.induced(comp);
                if models(view, f) {
                    continue;
                }
                let (cg, ids) = view.compact();
                let local = ed_conn_via_sets(&cg, f, k).expect("verdict promised a witness");
                parts.push(remap_witness(local, &ids));
            }
            Some(merge_witnesses(parts))
        }
        Variant::Prop => {
            if full.components().into_iter().all(|c| models(full.induced(c), f)) {
                return Some(empty_witness());
            }
            let mut parts = Vec::new();
            for comp in full.components() {
                let view = full.induced(comp);
                if models(view, f) {
                    continue;
                }
                let (cg, ids) = view.compact();
                let local = ed_prop_via_sets(&cg, f, k).expect("verdict promised a witness");
                parts.push(remap_witness(local, &ids));
            }
            Some(merge_witnesses(parts))
        }
        Variant::Depth => {
            let (d, w) = ed_depth_with_witness(g, f)?;
            if d <= k {
                Some(w)
            } else {
                None
            }
        }
    }
}

fn empty_witness() -> Witness {
    Witness { set: Vec::new(), representation: Representation::empty() }
}

fn remap_witness(w: Witness, ids: &[usize]) -> Witness {
    let rep = &w.representation;
    let parent = (0..rep.len()).map(|i| rep.parent_of(i)).collect();
    let alpha = (0..rep.len()).map(|i| ids[rep.vertex_of(i)]).collect();
    Witness {
        set: w.set.into_iter().map(|v| ids[v]).collect(),
        representation: Representation::new(parent, alpha).expect("remap preserves validity"),
    }
}

fn merge_witnesses(parts: Vec<Witness>) -> Witness {
    let mut set: Vec<usize> = parts.iter().flat_map(|w| w.set.iter().copied()).collect();
    set.sort_unstable();
    let representation =
        Representation::union(parts.into_iter().map(|w| w.representation).collect());
    Witness { set, representation }
}

/// The reload check behind every emitted witness: the forest must be a
/// valid representation of exactly the claimed set, deep enough for the
/// bound, and the variant's own side condition must hold.
fn witness_is_valid(g: &Graph, f: &Formula, variant: Variant, k: u32, w: &Witness) -> bool {
    let full = g.full();
    let x = w.set_as_mask();
    if w.set.len() != x.len() || w.representation.set() != x {
        return false;
    }
    if !validate_representation(full, &w.representation) {
        return false;
    }
    let bound = k as i32 - 1;
    match variant {
        Variant::Conn => {
            let rest = full.without(x);
            w.representation.is_nice_for(full)
                && w.representation.depth() <= bound
                && rest.components().into_iter().all(|c| models(rest.induced(c), f))
        }
        Variant::Prop => {
            if x.is_empty() {
                return full.components().into_iter().all(|c| models(full.induced(c), f));
            }
            if k == 0 {
                return false;
            }
            full.components().into_iter().all(|c| {
                let xc = x & c;
                if xc.is_empty() {
                    models(full.induced(c), f)
                } else {
                    prop_representation(full.induced(c), xc, k, f).is_some()
                }
            })
        }
        Variant::Depth => {
            w.representation.depth() <= bound && models(full.without(x), f)
        }
    }
}

// --- depth-of-set ---

#[derive(Serialize)]
struct DepthReport {
    command: &'static str,
    set: Vec<usize>,
    depth: i32,
    representation: Representation,
    wall_ms: u128,
}

fn cmd_depth_of_set(graph: &Path, set: &[usize]) -> Result<u8, String> {
    let start = Instant::now();
    let g = load_graph(graph)?;
    if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
        return Err(format!("vertex {v} is out of range for a {} vertex graph", g.n()));
    }
    let x = VertexSet::from_iter(set.iter().copied());
    let d = elimination_depth(g.full(), x);
    let representation =
        depth_at_most(g.full(), x, d).expect("depth returned an attainable bound");
    let report = DepthReport {
        command: "depth-of-set",
        set: x.to_vec(),
        depth: d,
        representation,
        wall_ms: start.elapsed().as_millis(),
    };
    print_report(&report);
    Ok(0)
}

// --- unbreakable ---

#[derive(Serialize)]
struct SeparationReport {
    a: Vec<usize>,
    b: Vec<usize>,
    order: usize,
}

#[derive(Serialize)]
struct UnbreakableReport {
    command: &'static str,
    p: usize,
    q: usize,
    verdict: bool,
    separation: Option<SeparationReport>,
    wall_ms: u128,
}

fn cmd_unbreakable(graph: &Path, p: usize, q: usize) -> Result<u8, String> {
    let start = Instant::now();
    let g = load_graph(graph)?;
    let separation = g.unbreakable_witness(p, q).map(|s| SeparationReport {
        order: s.order(),
        a: s.a,
        b: s.b,
    });
    let verdict = separation.is_none();
    let report = UnbreakableReport {
        command: "unbreakable",
        p,
        q,
        verdict,
        separation,
        wall_ms: start.elapsed().as_millis(),
    };
    print_report(&report);
    Ok(if verdict { 0 } else { 1 })
}

// --- generators ---

#[derive(Serialize)]
struct GenReport {
    command: &'static str,
    files: Vec<String>,
    vertices: Option<usize>,
    edges: Option<usize>,
    family_size: Option<usize>,
    seed: Option<u64>,
    wall_ms: u128,
}

fn cmd_gen_setcover(n: usize, m: usize, k: usize, seed: u64, out: &Path) -> Result<u8, String> {
    let start = Instant::now();
    if n == 0 || n > 63 {
        return Err(format!("universe size {n} is outside 1..=63"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let mask: u64 = rng.gen_range(1..(1u64 << n));
            (0..n).filter(|&e| mask >> e & 1 == 1).collect()
        })
        .collect();
    let inst = SetCoverInstance::new(n, sets, k)?;
    let g = setcover_to_graph(&inst);
    let f = hard_formula();

    let sc = out.with_extension("sc");
    let el = out.with_extension("el");
    let fol = out.with_extension("fol");
    fs::write(&sc, inst.to_text()).map_err(|e| format!("{}: {e}", sc.display()))?;
    fs::write(&el, g.to_edge_list_string()).map_err(|e| format!("{}: {e}", el.display()))?;
    fs::write(&fol, format!("{f}\n")).map_err(|e| format!("{}: {e}", fol.display()))?;

    let report = GenReport {
        command: "gen-setcover",
        files: vec![
            sc.display().to_string(),
            el.display().to_string(),
            fol.display().to_string(),
        ],
        vertices: Some(g.n()),
        edges: Some(g.edge_count()),
        family_size: None,
        seed: Some(seed),
        wall_ms: start.elapsed().as_millis(),
    };
    print_report(&report);
    Ok(0)
}

fn cmd_gen_family(n: usize, a: usize, b: usize, out: &Path) -> Result<u8, String> {
    let start = Instant::now();
    let fam = build_family(n, a, b);
    fs::write(out, fam.to_text()).map_err(|e| format!("{}: {e}", out.display()))?;
    let report = GenReport {
        command: "gen-family",
        files: vec![out.display().to_string()],
        vertices: None,
        edges: None,
        family_size: Some(fam.size()),
        seed: None,
        wall_ms: start.elapsed().as_millis(),
    };
    print_report(&report);
    Ok(0)
}

fn cmd_gen_fixture(
    unbreakable: bool,
    n: usize,
    p: usize,
    k: usize,
    seed: u64,
    out: &Path,
) -> Result<u8, String> {
    let start = Instant::now();
    if !unbreakable {
        return Err("only unbreakable fixtures are supported; pass --unbreakable".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_unbreakable(n, p, k, 500, &mut rng).ok_or(format!(
        "no ({p},{k})-unbreakable graph on {n} vertices found in 500 tries; \
         try another --seed or --n"
    ))?;
    debug_assert!(g.is_unbreakable(p, k));
    fs::write(out, g.to_edge_list_string()).map_err(|e| format!("{}: {e}", out.display()))?;
    let report = GenReport {
        command: "gen-fixture",
        files: vec![out.display().to_string()],
        vertices: Some(g.n()),
        edges: Some(g.edge_count()),
        family_size: None,
        seed: Some(seed),
        wall_ms: start.elapsed().as_millis(),
    };
    print_report(&report);
    Ok(0)
}

// --- msol ---

fn cmd_msol(formula: &Path, k: u32, variant: Variant) -> Result<u8, String> {
    let f = load_formula(formula)?;
    if !f.is_sentence() {
        return Err("msol needs a sentence, but the formula declares free variables".into());
    }
    let m = emit_msol(&f, k, variant);
    println!("{m}");
    println!("where phi[S] := S induces a model of: {}", m.phi().source());
    Ok(0)
}

// --- family-verify ---

#[derive(Serialize)]
struct FamilyReport {
    command: &'static str,
    n: usize,
    a: usize,
    b: usize,
    size: usize,
    verdict: bool,
    wall_ms: u128,
}

fn cmd_family_verify(family: &Path) -> Result<u8, String> {
    let start = Instant::now();
    let fam = SeparatingFamily::from_text(&read_file(family)?)
        .map_err(|e| format!("{}: {e}", family.display()))?;
    let verdict = verify_family(&fam).map_err(|e| e.to_string())?;
    let report = FamilyReport {
        command: "family-verify",
        n: fam.n,
        a: fam.a,
        b: fam.b,
        size: fam.size(),
        verdict,
        wall_ms: start.elapsed().as_millis(),
    };
    print_report(&report);
    Ok(if verdict { 0 } else { 1 })
}
