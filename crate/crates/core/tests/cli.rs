use std::path::PathBuf;
use std::process::Command as Process;

use kpw_core::cli::{run, Command, Detail, Output, OutputMode, WorkbenchConfig};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("kpw-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn text_of(command: Command) -> Output {
    run(&command, &WorkbenchConfig::default())
}

fn every_command() -> Vec<Command> {
    let g1 = fixture("G1.kg");
    let g2 = fixture("G2.kg");
    let g3 = fixture("G3.kg");
    let g4 = fixture("G4.kg");
    let e = |s: &str| s.to_string();
    vec![
        Command::Validate { graph: g3.clone() },
        Command::Eval {
            graph: g2.clone(),
            expr: e("p[v] - s[e] t[e]"),
        },
        Command::Mul {
            graph: g2.clone(),
            expr: vec![e("t[e]"), e("s[e.f]")],
        },
        Command::Nf {
            graph: g2.clone(),
            expr: e("p[v]"),
            m: Some(e("1")),
        },
        Command::Grade {
            graph: g3.clone(),
            expr: e("s[a]t[b] + p[v]"),
            n: None,
        },
        Command::Grade {
            graph: g3.clone(),
            expr: e("s[a]t[b] + p[v]"),
            n: Some(e("1,-1")),
        },
        Command::Star {
            graph: g2.clone(),
            expr: e("2 s[e.e]t[f]"),
        },
        Command::InD {
            graph: g2.clone(),
            expr: e("s[e]t[e] + 3 s[f.f]t[f.f]"),
        },
        Command::InD {
            graph: g2.clone(),
            expr: e("s[e]"),
        },
        Command::InM {
            graph: g1.clone(),
            expr: e("s[e.e] - p[v]"),
        },
        Command::InM {
            graph: g2.clone(),
            expr: e("s[e]t[f]"),
        },
        Command::Cycline {
            graph: g2.clone(),
            alpha: e("e"),
            beta: e("f"),
        },
        Command::Cycline {
            graph: g4.clone(),
            alpha: e("e.f"),
            beta: e("u"),
        },
        Command::CyclinePairs {
            graph: g4.clone(),
            max: e("2"),
        },
        Command::Aperiodic { graph: g2.clone() },
        Command::Aperiodic { graph: g1.clone() },
        Command::Compress {
            graph: g4.clone(),
            expr: e("s[e.f] - p[u]"),
            x: None,
        },
        Command::Compress {
            graph: g1.clone(),
            expr: e("s[e] - 2 p[v]"),
            x: Some(e("v;e")),
        },
        Command::RepValidate {
            graph: g4.clone(),
            family: fixture("G4_units.kpf"),
        },
        Command::RepValidate {
            graph: g2.clone(),
            family: fixture("G2_attempt.kpf"),
        },
        Command::RepApply {
            graph: g1.clone(),
            family: fixture("G1_swap.kpf"),
            expr: e("s[e]"),
        },
        Command::UniquenessCheck {
            graph: g1.clone(),
            family: Some(fixture("G1_swap.kpf")),
            expr: vec![],
            samples: 5,
        },
        Command::UniquenessCheck {
            graph: g2.clone(),
            family: None,
            expr: vec![e("s[e]")],
            samples: 5,
        },
        Command::Nf {
            graph: g2.clone(),
            expr: e("s[e]t[e.e]"),
            m: Some(e("0")),
        },
        Command::Validate {
            graph: fixture("missing.kg"),
        },
    ]
}

/// Reads text output back into `(result, details)`.
fn parse_text(text: &str) -> (String, Vec<(String, Detail)>) {
    let mut lines = text.lines();
    let result = lines.next().unwrap().to_string();
    let mut details: Vec<(String, Detail)> = Vec::new();
    for line in lines {
        if let Some(item) = line.strip_prefix("  ") {
            match details.last_mut() {
                Some((_, Detail::List(items))) => items.push(item.to_string()),
                _ => panic!("stray list item {line}"),
            }
        } else if let Some(key) = line.strip_suffix(':') {
            details.push((key.to_string(), Detail::List(Vec::new())));
        } else {
            let (k, v) = line.split_once(": ").unwrap();
            details.push((k.to_string(), Detail::Line(v.to_string())));
        }
    }
    (result, details)
}

#[test]
fn documented_examples() {
    let out = text_of(Command::Cycline {
        graph: fixture("G2.kg"),
        alpha: "e".into(),
        beta: "f".into(),
    });
    assert_eq!(
        (out.text().as_str(), out.code),
        ("not-cycline, witness γ=v", 1)
    );
    let out = text_of(Command::Nf {
        graph: fixture("G2.kg"),
        expr: "p[v]".into(),
        m: Some("1".into()),
    });
    assert_eq!((out.text().as_str(), out.code), ("s[e]t[e] + s[f]t[f]", 0));
    let out = text_of(Command::Validate {
        graph: fixture("G3.kg"),
    });
    assert_eq!(
        (out.text().as_str(), out.code),
        ("valid (k=2, 1 vertex, 2 edges, 1 square)", 0)
    );
}

#[test]
fn text_and_json_carry_the_same_fields() {
    for command in every_command() {
        let out = text_of(command.clone());
        let json_cfg = WorkbenchConfig {
            output: OutputMode::Json,
            ..WorkbenchConfig::default()
        };
        let json: Value =
            serde_json::from_str(&run(&command, &json_cfg).render(OutputMode::Json)).unwrap();
        let (result, details) = parse_text(&out.render(OutputMode::Text));
        assert_eq!(json["command"], command.name());
        assert_eq!(json["exit"], out.code);
        assert_eq!(json["result"], result);
        let obj = json.as_object().unwrap();
        assert_eq!(obj.len(), details.len() + 3, "{}", command.name());
        for (key, d) in details {
            let expected = match d {
                Detail::Line(v) => Value::from(v),
                Detail::List(items) => Value::from(items),
            };
            assert_eq!(obj[&key], expected, "{} {key}", command.name());
        }
    }
}

#[test]
fn exit_codes() {
    let codes: Vec<(String, i32)> = every_command()
        .into_iter()
        .map(|c| (c.name().to_string(), text_of(c).code))
        .collect();
    let expected = [
        0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 2, 2,
    ];
    let got: Vec<i32> = codes.iter().map(|(_, c)| *c).collect();
    assert_eq!(got, expected, "{codes:?}");
}

#[test]
fn sampling_commands_are_reproducible() {
    let command = Command::UniquenessCheck {
        graph: fixture("G2.kg"),
        family: None,
        expr: vec![],
        samples: 10,
    };
    let cfg = WorkbenchConfig {
        seed: 9,
        ..WorkbenchConfig::default()
    };
    let a = run(&command, &cfg).render(OutputMode::Text);
    let b = run(&command, &cfg).render(OutputMode::Text);
    assert_eq!(a, b);
    assert!(a.contains("seed: 9"));
}

#[test]
fn graph_file_errors() {
    let dup = scratch(
        "dup.kg",
        "kgraph k=1\nvertex v\nedge e v v 1\nedge e v v 1\n",
    );
    let out = text_of(Command::Validate { graph: dup });
    assert_eq!(out.code, 2);
    assert!(out.result.contains("line 4"), "{}", out.result);

    let bare = scratch(
        "bare.kg",
        "kgraph k=2\nvertex v\nedge a v v 1\nedge b v v 2\n",
    );
    let out = text_of(Command::Validate {
        graph: bare.clone(),
    });
    assert_eq!(out.code, 1);
    assert!(out.text().contains("missing square"), "{}", out.text());
    assert_eq!(text_of(Command::Aperiodic { graph: bare }).code, 2);
}

#[test]
fn ring_override() {
    let cfg = WorkbenchConfig {
        ring: Some("Z/2".parse().unwrap()),
        ..WorkbenchConfig::default()
    };
    let out = run(
        &Command::Eval {
            graph: fixture("G1.kg"),
            expr: "3 s[e] + s[e]".into(),
        },
        &cfg,
    );
    assert_eq!(out.result, "0");
    let out = run(
        &Command::RepValidate {
            graph: fixture("G1.kg"),
            family: fixture("G1_swap.kpf"),
        },
        &cfg,
    );
    assert_eq!(out.code, 2);
}

#[test]
fn mismatched_sources_warn() {
    let out = text_of(Command::Eval {
        graph: fixture("G4.kg"),
        expr: "s[e]t[f] + p[u]".into(),
    });
    assert_eq!(out.code, 0);
    assert_eq!(out.result, "p[u]");
    assert!(out.text().contains("warnings:"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kpw");
    let status = |args: &[&str]| Process::new(bin).args(args).output().unwrap();
    let g2 = fixture("G2.kg");
    let g2 = g2.to_str().unwrap();
    let out = status(&["cycline", g2, "--alpha", "e", "--beta", "f"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "not-cycline, witness γ=v"
    );
    let out = status(&["nf", g2, "-e", "p[v]", "-m", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"], "s[e]t[e] + s[f]t[f]");
    let out = status(&["eval", g2, "-e", "s[unknown]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = status(&["grade", g2, "-e", "s[e]t[e.e]", "-n", "-1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "s[e]t[e.e]");
}
