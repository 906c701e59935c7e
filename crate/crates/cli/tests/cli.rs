//! End to end tests running the binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use elimdist_core::distance::ed_value;
use elimdist_core::elimination::validate_representation;
use elimdist_core::hardness::SetCoverInstance;
use elimdist_core::modelcheck::models;
use elimdist_core::{Formula, Graph, Variant, Witness};

const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const K3: &str = "3 3\n0 1\n0 2\n1 2\n";
const P3: &str = "3 2\n0 1\n1 2\n";
const P6: &str = "6 5\n0 1\n1 2\n2 3\n3 4\n4 5\n";
const EDGELESS3: &str = "3 0\n";

const NONADJ: &str = "E u E v (!(u = v) & !(u ~ v))\n";
const ALL_EQUAL: &str = "A x A y (x = y)\n";
const DIAM2: &str = "A u A v E w ((u = v) | (u ~ v) | ((u ~ w) & (v ~ w)))\n";
const TRIFREE: &str =
    "A x A y A z ((x = y) | (y = z) | (x = z) | !(x ~ y) | !(y ~ z) | !(x ~ z))\n";

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("elimdist-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn put(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elimdist"))
        .args(args)
        .env_remove("ELIMDIST_SIZE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("report is JSON")
}

#[test]
fn check_prints_the_verdict_and_maps_it_to_the_exit_code() {
    let d = workdir("check");
    let p3 = put(&d, "p3.el", P3);
    let k3 = put(&d, "k3.el", K3);
    let diam = put(&d, "diam.fol", DIAM2);
    let trifree = put(&d, "trifree.fol", TRIFREE);

    let yes = run(&["check", p3.to_str().unwrap(), diam.to_str().unwrap()]);
    assert_eq!(stdout(&yes).trim(), "true");
    assert_eq!(code(&yes), 0);

    let no = run(&["check", k3.to_str().unwrap(), trifree.to_str().unwrap()]);
    assert_eq!(stdout(&no).trim(), "false");
    assert_eq!(code(&no), 1);
}

#[test]
fn check_evaluates_free_variables_under_an_assignment() {
    let d = workdir("assign");
    let p3 = put(&d, "p3.el", P3);
    let adj = put(&d, "adj.fol", "F u F v (u ~ v)\n");

    let yes = run(&["check", p3.to_str().unwrap(), adj.to_str().unwrap(), "--assign", "0,1"]);
    assert_eq!(stdout(&yes).trim(), "true");
    let no = run(&["check", p3.to_str().unwrap(), adj.to_str().unwrap(), "--assign", "0,2"]);
    assert_eq!(stdout(&no).trim(), "false");

    // Arity mismatch and out-of-range ids are usage errors.
    let bad = run(&["check", p3.to_str().unwrap(), adj.to_str().unwrap(), "--assign", "0"]);
    assert_eq!(code(&bad), 2);
    let oob = run(&["check", p3.to_str().unwrap(), adj.to_str().unwrap(), "--assign", "0,9"]);
    assert_eq!(code(&oob), 2);
}

#[test]
fn malformed_inputs_exit_with_the_usage_code() {
    let d = workdir("malformed");
    let bad_graph = put(&d, "bad.el", "2 1\n0 5\n");
    let diam = put(&d, "diam.fol", DIAM2);
    let out = run(&["check", bad_graph.to_str().unwrap(), diam.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let p3 = put(&d, "p3.el", P3);
    let bad_formula = put(&d, "bad.fol", "A x (x =\n");
    let out = run(&["check", p3.to_str().unwrap(), bad_formula.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let out = run(&["check", d.join("absent.el").to_str().unwrap(), diam.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn dist_exact_values_match_the_library() {
    let d = workdir("distval");
    let k4 = put(&d, "k4.el", K4);
    let e3 = put(&d, "e3.el", EDGELESS3);
    let nonadj = put(&d, "nonadj.fol", NONADJ);
    let all_equal = put(&d, "allequal.fol", ALL_EQUAL);

    let out = run(&["dist", k4.to_str().unwrap(), nonadj.to_str().unwrap(), "--variant", "conn"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["value"], 4);

    let out = run(&[
        "dist",
        e3.to_str().unwrap(),
        all_equal.to_str().unwrap(),
        "--variant",
        "prop",
    ]);
    assert_eq!(report(&out)["value"], 1);

    // Depth of the clique against the all-different target is undefined.
    let out = run(&["dist", k4.to_str().unwrap(), nonadj.to_str().unwrap(), "--variant", "depth"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["value"], serde_json::Value::Null);
}

#[test]
fn dist_bound_verdicts_use_exit_codes_zero_and_one() {
    let d = workdir("distk");
    let k4 = put(&d, "k4.el", K4);
    let nonadj = put(&d, "nonadj.fol", NONADJ);
    let args = ["dist", k4.to_str().unwrap(), nonadj.to_str().unwrap(), "--variant", "conn"];

    let no = run(&[&args[..], &["--k", "3"]].concat());
    assert_eq!(code(&no), 1);
    assert_eq!(report(&no)["verdict"], false);

    let yes = run(&[&args[..], &["--k", "4"]].concat());
    assert_eq!(code(&yes), 0);
    assert_eq!(report(&yes)["verdict"], true);
}

#[test]
fn dist_witness_files_reload_and_validate() {
    let d = workdir("witness");
    let k4 = put(&d, "k4.el", K4);
    let trifree = put(&d, "trifree.fol", TRIFREE);
    let wpath = d.join("w.json");

    let out = run(&[
        "dist",
        k4.to_str().unwrap(),
        trifree.to_str().unwrap(),
        "--variant",
        "depth",
        "--k",
        "2",
        "--witness",
        wpath.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let rep = report(&out);
    assert_eq!(rep["verdict"], true);
    assert_eq!(rep["witness_valid"], true);

    let w: Witness = serde_json::from_str(&fs::read_to_string(&wpath).unwrap()).unwrap();
    let g = Graph::from_edge_list_str(K4).unwrap();
    let f = Formula::parse(TRIFREE).unwrap();
    assert!(validate_representation(g.full(), &w.representation));
    assert!(w.representation.depth() <= 1);
    assert!(models(g.full().without(w.set_as_mask()), &f));
}

#[test]
fn dist_fpt_mode_needs_its_parameters_and_matches_exact() {
    let d = workdir("fpt");
    let k4 = put(&d, "k4.el", K4);
    let nonadj = put(&d, "nonadj.fol", NONADJ);
    let base = ["dist", k4.to_str().unwrap(), nonadj.to_str().unwrap(), "--variant", "conn"];

    let missing_p = run(&[&base[..], &["--method", "fpt", "--k", "4"]].concat());
    assert_eq!(code(&missing_p), 2);
    let missing_k = run(&[&base[..], &["--method", "fpt", "--p", "1"]].concat());
    assert_eq!(code(&missing_k), 2);

    for k in ["3", "4"] {
        let fpt = run(&[&base[..], &["--method", "fpt", "--k", k, "--p", "1"]].concat());
        let exact = run(&[&base[..], &["--k", k]].concat());
        assert_eq!(code(&fpt), code(&exact));
        assert_eq!(report(&fpt)["verdict"], report(&exact)["verdict"]);
    }
}

#[test]
fn dist_enforces_the_exact_size_cap() {
    let d = workdir("cap");
    let k4 = put(&d, "k4.el", K4);
    let nonadj = put(&d, "nonadj.fol", NONADJ);
    let args = ["dist", k4.to_str().unwrap(), nonadj.to_str().unwrap(), "--variant", "conn"];

    let capped = Command::new(env!("CARGO_BIN_EXE_elimdist"))
        .args(args)
        .env("ELIMDIST_SIZE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 2);

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_elimdist"))
        .args([&args[..], &["--size-cap", "4"]].concat())
        .env("ELIMDIST_SIZE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&flag_wins), 0);
}

#[test]
fn gen_setcover_writes_the_instance_reduction_and_formula() {
    let d = workdir("setcover");
    let base = d.join("inst");
    let out = run(&[
        "gen", "setcover", "--n", "2", "--m", "2", "--k", "1", "--out",
        base.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let inst =
        SetCoverInstance::from_text(&fs::read_to_string(base.with_extension("sc")).unwrap())
            .unwrap();
    assert_eq!(inst.universe_size(), 2);
    let g =
        Graph::from_edge_list_str(&fs::read_to_string(base.with_extension("el")).unwrap())
            .unwrap();
    // (k + 2) copies of each element plus a 3-vertex tail per set.
    assert_eq!(g.n(), 12);
    let f =
        Formula::parse(&fs::read_to_string(base.with_extension("fol")).unwrap()).unwrap();
    assert!(f.is_sentence());
}

#[test]
fn gen_family_output_passes_family_verify() {
    let d = workdir("family");
    let fam = d.join("fam.txt");
    let gen = run(&["gen", "family", "--n", "10", "--a", "2", "--b", "2", "--out",
        fam.to_str().unwrap()]);
    assert_eq!(code(&gen), 0);

    let verify = run(&["family-verify", fam.to_str().unwrap()]);
    assert_eq!(code(&verify), 0);
    assert_eq!(report(&verify)["verdict"], true);
}

#[test]
fn gen_fixture_output_passes_the_unbreakable_command() {
    let d = workdir("fixture");
    let fix = d.join("fix.el");
    let gen = run(&[
        "gen", "fixture", "--unbreakable", "--n", "8", "--p", "2", "--k", "2", "--seed", "7",
        "--out", fix.to_str().unwrap(),
    ]);
    assert_eq!(code(&gen), 0);

    let check = run(&["unbreakable", fix.to_str().unwrap(), "--p", "2", "--q", "2"]);
    assert_eq!(code(&check), 0);
    assert_eq!(report(&check)["verdict"], true);

    // The marker flag is mandatory.
    let unmarked = run(&["gen", "fixture", "--n", "8", "--p", "2", "--k", "2", "--out",
        fix.to_str().unwrap()]);
    assert_eq!(code(&unmarked), 2);
}

#[test]
fn unbreakable_reports_a_separation_on_breakable_graphs() {
    let d = workdir("unbreakable");
    let p6 = put(&d, "p6.el", P6);
    let out = run(&["unbreakable", p6.to_str().unwrap(), "--p", "1", "--q", "1"]);
    assert_eq!(code(&out), 1);
    let rep = report(&out);
    assert_eq!(rep["verdict"], false);
    let order = rep["separation"]["order"].as_u64().unwrap();
    assert!(order <= 1);
}

#[test]
fn depth_of_set_reports_the_depth_with_a_forest() {
    let d = workdir("depth");
    let p3 = put(&d, "p3.el", P3);
    let out = run(&["depth-of-set", p3.to_str().unwrap(), "--set", "0,2"]);
    assert_eq!(code(&out), 0);
    let rep = report(&out);
    // Two singleton roots would need two components, so {0,2} takes a chain.
    assert_eq!(rep["depth"], 1);
    assert_eq!(rep["set"], serde_json::json!([0, 2]));
}

#[test]
fn msol_prints_the_sentence_with_its_macro_definitions() {
    let d = workdir("msol");
    let trifree = put(&d, "trifree.fol", TRIFREE);
    let all_equal = put(&d, "allequal.fol", ALL_EQUAL);

    let conn = run(&["msol", trifree.to_str().unwrap(), "--k", "1", "--variant", "conn"]);
    assert_eq!(code(&conn), 0);
    let text = stdout(&conn);
    assert!(text.contains("comp("));
    assert!(text.contains("where phi[S]"));

    // At bound zero the property variant needs no set quantifiers at all.
    let prop = run(&["msol", all_equal.to_str().unwrap(), "--k", "0", "--variant", "prop"]);
    assert_eq!(stdout(&prop).lines().next().unwrap(), "phi[V]");
}

#[test]
fn dimacs_graphs_load_transparently() {
    let d = workdir("dimacs");
    let dimacs = put(&d, "k3.col", "c complete triangle\np edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
    let trifree = put(&d, "trifree.fol", TRIFREE);
    let out = run(&["check", dimacs.to_str().unwrap(), trifree.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "false");
    assert_eq!(code(&out), 1);
}

#[test]
fn reports_strip_to_identical_text_across_repeat_runs() {
    let d = workdir("repeat");
    let k4 = put(&d, "k4.el", K4);
    let nonadj = put(&d, "nonadj.fol", NONADJ);
    let strip = |out: &Output| -> String {
        stdout(out)
            .lines()
            .filter(|l| !l.contains("wall_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };

    let args = ["dist", k4.to_str().unwrap(), nonadj.to_str().unwrap(), "--variant", "conn",
        "--k", "4"];
    assert_eq!(strip(&run(&args)), strip(&run(&args)));

    let base = d.join("rep");
    let gen = ["gen", "setcover", "--n", "3", "--m", "3", "--k", "2", "--seed", "11", "--out",
        base.to_str().unwrap()];
    let first = strip(&run(&gen));
    let first_el = fs::read_to_string(base.with_extension("el")).unwrap();
    assert_eq!(strip(&run(&gen)), first);
    assert_eq!(fs::read_to_string(base.with_extension("el")).unwrap(), first_el);
}

#[test]
fn exact_depth_values_agree_with_the_library_on_all_variants() {
    let d = workdir("variants");
    let p6 = put(&d, "p6.el", P6);
    let diam = put(&d, "diam.fol", DIAM2);
    let g = Graph::from_edge_list_str(P6).unwrap();
    let f = Formula::parse(DIAM2).unwrap();
    for variant in ["conn", "prop", "depth"] {
        let out = run(&["dist", p6.to_str().unwrap(), diam.to_str().unwrap(), "--variant",
            variant]);
        let want = ed_value(&g, &f, variant.parse::<Variant>().unwrap());
        let got = report(&out)["value"].as_u64().map(|v| v as u32);
        assert_eq!(got, want, "variant {variant}");
    }
}
