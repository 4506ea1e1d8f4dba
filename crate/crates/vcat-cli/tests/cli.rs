use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn vcat(args: &[&str]) -> Run {
    vcat_env(args, &[])
}

fn vcat_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vcat"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("vcat runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn json(run: &Run) -> Value {
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    serde_json::from_str(&run.stdout).unwrap()
}

#[test]
fn boolean_quantale_passes() {
    let r = vcat(&["check-quantale", "--quantale", "boolean-2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("all laws pass"));
    assert!(r.stdout.contains("integral: true"));
}

#[test]
fn closed_form_and_table_quantales_pass() {
    for q in ["lawvere", "ultrametric", "chain-3-e1", "chain-3-e2"] {
        assert_eq!(vcat(&["check-quantale", "--quantale", q]).code, 0, "{q}");
    }
    for f in ["diamond.json", "free_monoid.json"] {
        assert_eq!(vcat(&["check-quantale", "--quantale", &fixture(f)]).code, 0, "{f}");
    }
}

#[test]
fn broken_quantale_is_a_validation_failure() {
    let r = vcat(&["check-quantale", "--quantale", &fixture("broken_quantale.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("associativity fails at"));
}

#[test]
fn parse_errors_exit_with_one() {
    assert_eq!(vcat(&["check-space", "--space", &fixture("unknown_quantale.json")]).code, 1);
    assert_eq!(vcat(&["check-space", "--space", &fixture("missing.json")]).code, 1);
    assert_eq!(vcat(&["check-quantale", "--quantale", "hyperreal"]).code, 1);
    assert_eq!(vcat(&["extend", "--functor", "list", "--space", &fixture("lawvere_pair.json")]).code, 1);
    assert_eq!(vcat(&["frobnicate"]).code, 1);
}

#[test]
fn triangle_violation_names_the_triple() {
    let r = vcat(&["check-space", "--space", &fixture("triangle_violation.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("triangle fails at (a, b, c)"), "{}", r.stdout);
    let r = vcat(&["extend", "--functor", "powerset", "--space", &fixture("triangle_violation.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("(a, b, c)"));
}

#[test]
fn powerset_extension_is_the_hausdorff_matrix() {
    let pair = fixture("lawvere_pair.json");
    let ext = json(&vcat(&["extend", "--functor", "powerset", "--space", &pair]));
    let haus = json(&vcat(&["hausdorff", "--space", &pair]));
    assert_eq!(ext["objects"], haus["objects"]);
    assert_eq!(ext["dist"], haus["dist"]);
    assert_eq!(ext["meta"]["converged"], Value::Bool(true));
    let single = vcat(&["hausdorff", "--space", &pair, "--left", "a", "--right", "a,b"]);
    assert_eq!(single.stdout, "1.000000000\n");
}

#[test]
fn extension_methods_agree_and_outputs_reparse() {
    let dir = std::env::temp_dir().join(format!("vcat-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for space in ["lawvere_line.json", "chain3_space.json", "diamond_space.json", "boolean_poset.json"] {
        for functor in ["identity", "powerset", "multiset(2)", "power(2)", "coproduct(identity, const(p))"] {
            let path = fixture(space);
            let zigzag = json(&vcat(&["extend", "--functor", functor, "--space", &path]));
            let wpb = json(&vcat(&["extend", "--functor", functor, "--space", &path, "--method", "wpb"]));
            assert_eq!(zigzag["dist"], wpb["dist"], "{functor} on {space}");
            let out = dir.join("out.json");
            std::fs::write(&out, serde_json::to_string(&zigzag).unwrap()).unwrap();
            let check = vcat(&["check-space", "--space", out.to_str().unwrap()]);
            assert_eq!(check.code, 0, "{functor} on {space}: {}{}", check.stdout, check.stderr);
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["extend", "--functor", "product(powerset, multiset(2))", "--space", &fixture("lawvere_line.json")];
    let a = vcat(&args);
    let b = vcat(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn full_grid_needs_a_finite_quantale() {
    let r = vcat(&["extend", "--functor", "powerset", "--space", &fixture("lawvere_pair.json"), "--grid", "full"]);
    assert_eq!(r.code, 3);
    let ok = vcat(&["extend", "--functor", "powerset", "--space", &fixture("chain3_space.json"), "--grid", "full"]);
    assert_eq!(ok.code, 0);
}

#[test]
fn enumeration_cap_comes_from_the_environment() {
    let args = ["extend", "--functor", "powerset", "--space", &fixture("lawvere_line.json")];
    assert_eq!(vcat(&args).code, 0);
    let capped = vcat_env(&args, &[("VCAT_MAX_ENUM", "16")]);
    assert_eq!(capped.code, 3, "{}", capped.stderr);
}

#[test]
fn matching_and_kantorovich() {
    let r = vcat(&["matching", "--space", &fixture("lawvere_line.json"), "--left", "p0,p3", "--right", "p1,p1"]);
    assert_eq!(r.stdout, "2.000000000\n");
    let r = vcat(&["matching", "--space", &fixture("lawvere_line.json"), "--left", "p0", "--right", "p1,p1"]);
    assert_eq!(r.stdout, "inf\n");
    let k = json(&vcat(&["kantorovich", "--space", &fixture("boolean_chain.json"), "--compare"]));
    assert_eq!(k["meta"]["extension_below_lifting"], Value::Bool(true));
    assert_eq!(k["meta"]["v-monotone"], Value::Bool(true));
    assert_eq!(vcat(&["kantorovich", "--space", &fixture("lawvere_pair.json")]).code, 3);
}

#[test]
fn presheaf_round_trip() {
    for space in ["lawvere_line.json", "diamond_space.json", "chain3_space.json"] {
        let v = json(&vcat(&["presheaf-roundtrip", "--space", &fixture(space)]));
        assert_eq!(v["roundtrip"], Value::Bool(true), "{space}");
    }
}

#[test]
fn stream_behaviour() {
    let v = json(&vcat(&["behave", "--automaton", &fixture("stream.json"), "--method", "words", "--depth", "4"]));
    assert_eq!(v["dist"][0][1], "1.000000000");
    assert_eq!(v["dist"][1][0], "1.000000000");
    let it = json(&vcat(&["behave", "--automaton", &fixture("stream.json"), "--method", "iterate", "--max-steps", "30"]));
    assert_eq!(it["meta"]["converged"], Value::Bool(false));
}

#[test]
fn bisimilarity_classes() {
    let v = json(&vcat(&["bisim", "--automaton", &fixture("dfa.json")]));
    assert_eq!(v["classes"], serde_json::json!([["s0"], ["s1", "s2"]]));
    let t = vcat(&["bisim", "--kripke", &fixture("kripke.json"), "--format", "table"]);
    assert_eq!(t.stdout, "{k0} {k1,k2} {k3}\n");
    assert_eq!(vcat(&["bisim"]).code, 1);
}

#[test]
fn change_of_base() {
    let d = json(&vcat(&["base", "d", "--preorder", &fixture("chain_preorder.json"), "--quantale", "lawvere"]));
    assert_eq!(d["dist"][0], serde_json::json!(["0.000000000", "0.000000000", "inf"]));
    let v = json(&vcat(&["base", "v", "--space", &fixture("boolean_poset.json")]));
    assert_eq!(v["order_pairs"].as_array().unwrap().len(), 5);
    assert_eq!(vcat(&["base", "c", "--space", &fixture("chain3_space.json")]).code, 3);
    let c = json(&vcat(&["base", "components", "--preorder", &fixture("chain_preorder.json")]));
    assert_eq!(c["classes"], serde_json::json!([["x", "y", "z"]]));
}

#[test]
fn library_entry_point() {
    let out = vcat_cli::run(["vcat", "check-quantale", "--quantale", "ultrametric"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("all laws pass"));
}
