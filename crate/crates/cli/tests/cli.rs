use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use bohm_core::corpus;

fn bohm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bohm-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn tree_of_m_is_a_spine() {
    let o = bohm(&["tree", "--depth", "6", r"(\m.\x.m m)(\m.\x.m m)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "\\x0. \\x1. \\x2. \\x3. \\x4. \\x5. bot\n");
}

#[test]
fn classify_bot() {
    let o = bohm(&["classify", "bot"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("rnf: No"), "{out}");
    assert!(out.contains("in-U: Yes"), "{out}");
}

#[test]
fn confluence_on_omega() {
    let o = bohm(&[
        "confluence",
        "--seed",
        "7",
        "--k",
        "8",
        "--depth",
        "10",
        r"(\x.x x)(\x.x x)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("equal: true"), "{out}");
    let j = json(&bohm(&[
        "--output",
        "json",
        "confluence",
        "--seed",
        "7",
        "--k",
        "8",
        "--depth",
        "10",
        r"(\x.x x)(\x.x x)",
    ]));
    assert_eq!(j["trees_text"], serde_json::json!(["bot", "bot"]));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bohm(&["parse", r"(\x."]).status.code(), Some(2));
    assert_eq!(bohm(&["parse"]).status.code(), Some(2));
    assert_eq!(bohm(&["--demo", "nope", "tree"]).status.code(), Some(2));
    assert_eq!(bohm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        bohm(&["converge", "--trace", "/nonexistent/trace.jsonl"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn tainted_results_exit_0_unless_strict() {
    let o = bohm(&["tree", "--demo", "Omega"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tainted"));
    assert_eq!(
        bohm(&["--strict", "tree", "--demo", "Omega"]).status.code(),
        Some(1)
    );
    assert_eq!(
        bohm(&["--strict", "tree", "--demo", "M"]).status.code(),
        Some(0)
    );
}

#[test]
fn strict_policy_fuel_failure_exits_1() {
    let o = bohm(&[
        "--policy",
        "strict",
        "--fuel",
        "20",
        "tree",
        "x ((\\x.x x)(\\x.x x))",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fuel"));
}

#[test]
fn exit_codes_follow_taint_over_the_corpus() {
    for (name, _, _) in corpus::NAMED {
        for cmd in ["classify", "tree", "crnf"] {
            let j = json(&bohm(&[
                "--output", "json", "--demo", name, "--fuel", "50", cmd,
            ]));
            let tainted = j["tainted"].as_bool().unwrap();
            let relaxed = bohm(&["--demo", name, "--fuel", "50", cmd]).status.code();
            let strict = bohm(&["--strict", "--demo", name, "--fuel", "50", cmd])
                .status
                .code();
            assert_eq!(relaxed, Some(0), "{cmd} {name}");
            assert_eq!(strict, Some(if tainted { 1 } else { 0 }), "{cmd} {name}");
        }
    }
}

#[test]
fn json_output_is_replayable() {
    let runs: &[&[&str]] = &[
        &["--output", "json", "--demo", "Y_f", "--depth", "5", "tree"],
        &[
            "--output",
            "json",
            "--seed",
            "0x2a",
            "--demo",
            "M",
            "confluence",
        ],
        &[
            "--output", "json", "--seed", "9", "axioms", "--trials", "30",
        ],
        &[
            "--output",
            "json",
            "--seed",
            "3",
            "--demo",
            "I_Omega",
            "reduce",
            "--strategy",
            "random:3",
        ],
    ];
    for args in runs {
        let a = bohm(args);
        let b = bohm(args);
        assert_eq!(a.status.code(), b.status.code(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let j = json(&bohm(runs[0]));
    assert_eq!(j["config"]["depth"], 5);
    assert_eq!(j["config"]["demo"], "Y_f");
    assert_eq!(j["config"]["seed"], 0xC0FFEE);
}

#[test]
fn reduce_then_converge() {
    let path = tmp("m.jsonl");
    let p = path.to_str().unwrap();
    let o = bohm(&[
        "--depth",
        "8",
        "--demo",
        "M",
        "reduce",
        "--strategy",
        "wh",
        "--k",
        "6",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = bohm(&["--depth", "5", "converge", "--trace", p]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    assert!(out.contains("stabilized up to depth 4"), "{out}");
    assert!(out.ends_with("up to 5: yes\n"), "{out}");

    // A snapshot that no longer matches the recomputed step is rejected.
    let text = fs::read_to_string(&path).unwrap();
    let tampered = tmp("tampered.jsonl");
    fs::write(
        &tampered,
        text.replacen("\"k\":\"lam\"", "\"k\":\"bot\"", 2),
    )
    .unwrap();
    let o = bohm(&["converge", "--trace", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    // Malformed JSON is a usage error.
    let broken = tmp("broken.jsonl");
    fs::write(&broken, "{not json").unwrap();
    assert_eq!(
        bohm(&["converge", "--trace", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn prepend_with_a_saved_trace() {
    let prefix = tmp("conf");
    let p = prefix.to_str().unwrap();
    let o = bohm(&[
        "--demo",
        "K_x_Omega",
        "confluence",
        "--s1",
        "lo",
        "--save-traces",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let trace = format!("{p}.2.jsonl");
    let o = bohm(&["--demo", "K_x_Omega", "prepend", "--trace", &trace]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).starts_with("holds: true"));
    // The trace does not start at a different term.
    let o = bohm(&["prepend", "--trace", &trace, "\\x.x"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn axioms_report_witnesses_for_head_ogre() {
    let o = bohm(&[
        "--oracle",
        "head-ogre",
        "--fuel",
        "50",
        "axioms",
        "--trials",
        "40",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&bohm(&[
        "--output",
        "json",
        "--oracle",
        "head-ogre",
        "--fuel",
        "50",
        "axioms",
        "--trials",
        "40",
    ]));
    let outcomes = j["outcomes"].as_array().unwrap();
    let expansion = outcomes
        .iter()
        .find(|o| o[0] == "expansion")
        .expect("expansion outcome");
    let w = &expansion[1]["fail_witnesses"][0];
    assert_eq!(w["conclusion"], r"(\x0. \x1. x0 x0) (\x0. \x1. x0 x0)");
    assert!(w["replay"]
        .as_str()
        .unwrap()
        .starts_with("bohm axioms --oracle head-ogre"));
    assert_eq!(bohm(&["axioms", "--trials", "40"]).status.code(), Some(0));
}

#[test]
fn parse_and_whnf() {
    let o = bohm(&["parse", r"\x. y (\z. z x)"]);
    assert_eq!(stdout(&o), "\\x0. y (\\x1. x1 x0)\n");
    let o = bohm(&["whnf", r"(\x. \y. x) a b"]);
    assert_eq!(stdout(&o), "a\nsteps: 2\n");
    let o = bohm(&["--fuel", "10", "whnf", "--demo", "Omega"]);
    assert!(stdout(&o).starts_with("no weak head normal form within 10 steps"));
    assert_eq!(
        bohm(&["--strict", "--fuel", "10", "whnf", "--demo", "Omega"])
            .status
            .code(),
        Some(1)
    );
}
