use proptest::prelude::*;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trivalent")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("json output"))
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&run(&["eval", "p -> q", "--assign", "p=1/2,q=1"])), "1/2\n");
    assert_eq!(stdout(&run(&["eval", "p -> q", "--assign", "p=1/2,q=1", "--logic", "j2"])), "1\n");
    assert_eq!(stdout(&run(&["eval", "T"])), "1\n");
    let (code, v) = json(&["eval", "~(p & q)", "--assign", "p=1/2,q=0"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "1");
    assert_eq!(v["schema"], 1);
}

#[test]
fn exit_codes() {
    let mp = ["-p", "p", "-p", "p -> q", "-c", "q"];
    let with = |extra: &[&str]| {
        let mut a = vec!["valid"];
        a.extend_from_slice(&mp);
        a.extend_from_slice(extra);
        run(&a).status.code().unwrap()
    };
    assert_eq!(with(&["--logic", "cc"]), 0);
    assert_eq!(with(&["--logic", "df"]), 1);
    assert_eq!(with(&["--logic", "df", "--scheme", "ss"]), 0);
    assert_eq!(with(&["--logic", "j1", "--via", "tableau"]), 2);
    assert_eq!(with(&["--scheme", "ss", "--via", "sequent"]), 2);
    assert_eq!(run(&["eval", "p ->"]).status.code(), Some(2));
    assert_eq!(run(&["valid", "-c", "p", "-c", "q", "--via", "tableau"]).status.code(), Some(2));
    assert_eq!(run(&["assert", "F -> T", data("dist.txt").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn countermodels_are_printed() {
    let o = run(&["valid", "-p", "p", "-p", "p -> q", "-c", "q", "--via", "tableau"]);
    assert!(stdout(&o).starts_with("invalid\ncountermodel: {p:1/2, q:0}\n"), "{}", stdout(&o));
    let (code, v) = json(&["valid", "-p", "p", "-p", "p -> q", "-c", "q"]);
    assert_eq!(code, 1);
    assert_eq!(v["countermodel"], serde_json::json!({"p": "1/2", "q": "0"}));
}

#[test]
fn sequent_and_tableau_output() {
    let o = run(&["sequent", "~(A -> B) | A -> ~B | A -> ~B", "--logic", "cc"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid: derivation found\n"));
    let o = run(&["tableau", "-p", "~(A -> B)", "-c", "A -> ~B", "--logic", "cc"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid: all 2 tableaux close\n"));
    let (_, v) = json(&["sequent", "-p", "p", "-c", "q"]);
    assert_eq!(v["valid"], false);
    assert!(v["open_branch_union"].is_object());
}

#[test]
fn algebra_files() {
    let o = run(&["algebra", "check", data("df3.alg").to_str().unwrap(), "--class", "lp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("✓ LP: inconsistent proper filter (filter {1/2, 1})"));
    assert!(text.ends_with("LP: pass\n"));

    let o = run(&["algebra", "check", data("bool2.alg").to_str().unwrap(), "--class", "definetti"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("× DeFinetti: -1/2 = 1/2 no element h with -h = h"));
    assert!(text.ends_with("DeFinetti: fail\n"));

    let (code, v) = json(&["algebra", "check", data("cc3.alg").to_str().unwrap(), "--class", "cooper-cantwell"]);
    assert_eq!((code, v["pass"].clone()), (0, serde_json::json!(true)));

    let o = run(&["algebra", "check", data("broken.alg").to_str().unwrap(), "--class", "lattice"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 8: missing `cond:` section"));
}

#[test]
fn assertability() {
    let dist = data("dist.txt");
    let dist = dist.to_str().unwrap();
    assert_eq!(stdout(&run(&["assert", "a -> c", dist, "--logic", "cc"])), "0.75 (= 3/4)\n");
    assert_eq!(stdout(&run(&["assert", "a -> c", dist, "--logic", "df"])), "0.75 (= 3/4)\n");
    assert_eq!(stdout(&run(&["assert", "a", dist])), "0.4 (= 2/5)\n");
}

#[test]
fn props_is_deterministic() {
    let a = run(&["props"]);
    let b = run(&["props"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("TT    | ×  | ✓        | ×"), "{text}");
    let (_, v) = json(&["props"]);
    assert_eq!(v["commutation"]["rows"][0][0], "CC");
}

fn small_formula() -> impl Strategy<Value = String> {
    let leaf = proptest::sample::select(vec!["p", "q", "T", "F"]).prop_map(String::from);
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| format!("~({a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) & ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) | ({b})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("({a}) -> ({b})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engines_agree(premise in small_formula(), conclusion in small_formula(), cc in proptest::bool::ANY) {
        let logic = if cc { "cc" } else { "df" };
        let codes: Vec<i32> = ["semantic", "tableau", "sequent"]
            .iter()
            .map(|via| run(&["valid", "-p", &premise, "-c", &conclusion, "--logic", logic, "--via", via]).status.code().unwrap())
            .collect();
        prop_assert!(codes[0] == 0 || codes[0] == 1);
        prop_assert!(codes.iter().all(|c| *c == codes[0]), "{:?}", codes);
    }
}
