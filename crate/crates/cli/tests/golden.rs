//! Runs the binary on fixed inputs and compares stdout and the exit status
//! with the files in `tests/golden`. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Stdio};

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    stdin: Option<&'static str>,
    status: i32,
}

const CASES: &[Case] = &[
    Case { name: "support_text", args: &["support", "--spec", "dlo", "{(x): 0<x & x<=5/2 | 3<=x}"], stdin: None, status: 0 },
    Case { name: "support_json", args: &["support", "--json", "--spec", "dlo", "{(x): 0<x & x<=5/2 | 3<=x}"], stdin: None, status: 0 },
    Case { name: "support_by", args: &["support", "--spec", "dlo", "--by", "(0, 3)", "{(x): 0<x & x<=5/2 | 3<=x}"], stdin: None, status: 1 },
    Case { name: "support_params", args: &["support", "--json", "--spec", "eq", "--params", "(a1, a2)", "{(x): x = y0 | x = y1 | x != y1}"], stdin: None, status: 0 },
    Case { name: "orbits_eq", args: &["orbits", "--spec", "eq", "--arity", "3"], stdin: None, status: 0 },
    Case { name: "orbits_json", args: &["orbits", "--json", "--spec", "dlo", "--arity", "4"], stdin: None, status: 0 },
    Case { name: "orbits_set", args: &["orbits", "--spec", "dlo", "{(x, y): x < y & 0 < x}"], stdin: None, status: 0 },
    Case { name: "typeof_equal", args: &["typeof", "--spec", "dlo", "(1,3)", "(2,7)"], stdin: None, status: 0 },
    Case { name: "typeof_different", args: &["typeof", "--spec", "dlo", "--params", "(2)", "(1,3)", "(2,7)"], stdin: None, status: 1 },
    Case { name: "typeof_json", args: &["typeof", "--json", "--spec", "dlo[cut<sqrt2]", "(1, 2, 1)"], stdin: None, status: 0 },
    Case { name: "eval_stdin", args: &["eval", "--spec", "dlo"], stdin: Some("forall z (z < x0 -> z < x1)\n"), status: 0 },
    Case { name: "eval_sentence", args: &["eval", "--json", "--spec", "dlo[const=0]", "exists z (z < 0 & forall w (w < 0 -> w <= z))"], stdin: None, status: 1 },
    Case { name: "eval_member", args: &["eval", "--spec", "dlo", "--params", "(5/2)", "{(x): 0 < x & x <= y0}", "(5/2)"], stdin: None, status: 0 },
    Case { name: "extend_json", args: &["extend", "--json", "--spec", "dlo[field=qsqrt2]", "(1, sqrt2)", "(2, 3)"], stdin: None, status: 0 },
    Case { name: "extend_rational", args: &["extend", "--spec", "dlo", "--rational", "(0, 1)", "(0, 5)"], stdin: None, status: 0 },
    Case { name: "extend_mismatch", args: &["extend", "--spec", "dlo", "(1, 2)", "(2, 1)"], stdin: None, status: 1 },
    Case { name: "absorb_json", args: &["absorb", "--json", "--spec", "dlo[field=qsqrt2]", "(1, 2)", "(sqrt2, 3 + sqrt2)"], stdin: None, status: 0 },
    Case { name: "mutual_json", args: &["mutual-symmetry", "--json", "dlo[const=0]", "dlo[const=1]"], stdin: None, status: 0 },
    Case { name: "one_way", args: &["mutual-symmetry", "dlo", "dlo[cut<sqrt2]"], stdin: None, status: 1 },
    Case {
        name: "forcing_json",
        args: &["forcing", "--json", "--scenario", "R_vs_Q", "--dense", "dom 0", "--dense", "dom 1", "--dense", "ran sqrt2", "--pairs", "2", "--seed", "1"],
        stdin: None,
        status: 0,
    },
    Case { name: "forcing_sum", args: &["forcing", "--scenario", "Rpp_vs_Qpp", "--dense", "dom 2", "--dense", "ran 0:sqrt2", "--pairs", "1", "--seed", "2"], stdin: None, status: 0 },
    Case { name: "cover_ffm_json", args: &["cover-check", "--json", "--scenario", "FFM", "--budget", "3", "--seed", "0"], stdin: None, status: 0 },
    Case { name: "cover_broken", args: &["cover-check", "--scenario", "Broken_bounded", "--budget", "5"], stdin: None, status: 1 },
    Case { name: "cover_file", args: &["cover-check", "--scenario", "tests/data/sum.json", "--budget", "5"], stdin: None, status: 0 },
    Case { name: "vstar_json", args: &["vstar", "--json", "--rank", "2"], stdin: None, status: 0 },
    Case { name: "vstar_set", args: &["vstar", "{{}, {{{}}}}"], stdin: None, status: 0 },
    Case { name: "selftest", args: &["selftest"], stdin: None, status: 0 },
    Case { name: "syntax_error", args: &["support", "--spec", "dlo", "{(x): 0 <"], stdin: None, status: 2 },
    Case { name: "unknown_scenario", args: &["cover-check", "--scenario", "Z_vs_N"], stdin: None, status: 2 },
    Case { name: "bad_spec", args: &["orbits", "--spec", "dlo[", "--arity", "2"], stdin: None, status: 2 },
];

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(case: &Case) -> (String, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_orbitlab"))
        .args(case.args)
        .current_dir(crate_dir())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    if let Some(text) = case.stdin {
        stdin.write_all(text.as_bytes()).unwrap();
    }
    drop(stdin);
    let out = child.wait_with_output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let dir = crate_dir().join("tests/golden");
    let mut failures = Vec::new();
    for case in CASES {
        let (stdout, status) = run(case);
        if status != case.status {
            failures.push(format!("{}: exit {status}, expected {}", case.name, case.status));
        }
        let path = dir.join(format!("{}.txt", case.name));
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &stdout).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == stdout => {}
            Ok(want) => failures.push(format!("{}: output differs\n--- expected\n{want}--- got\n{stdout}", case.name)),
            Err(_) => failures.push(format!("{}: missing {}", case.name, path.display())),
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn json_is_valid_and_tagged() {
    for case in CASES.iter().filter(|c| c.args.contains(&"--json")) {
        let (stdout, _) = run(case);
        let v: serde_json::Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{}: {e}", case.name));
        assert_eq!(v["command"], serde_json::Value::String(case.args[0].to_string()), "{}", case.name);
    }
}

#[test]
fn seeds_make_runs_repeatable() {
    let args = ["cover-check", "--json", "--scenario", "R_vs_Q", "--budget", "20", "--seed", "9"];
    let case = Case { name: "repeat", args: &[], stdin: None, status: 0 };
    let once = || {
        let out = Command::new(env!("CARGO_BIN_EXE_orbitlab")).args(args).output().unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(once(), once());
    assert_eq!(case.status, 0);
}
