use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn abmorph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abmorph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    let value: Value = serde_json::from_slice(&out.stdout).expect("JSON output");
    assert_eq!(value["header"]["tool"], "abmorph");
    value["report"].clone()
}

#[test]
fn classify_thue_morse() {
    let out = abmorph(&["classify", "a->ab; b->ba"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["answer"], "PureAbelianPeriodic");
    assert_eq!(r["reason"]["code"], "ChunksEquivalent");
    assert_eq!(r["reason"]["K"], 1);
    assert_eq!(r["reason"]["period"], "2");
}

#[test]
fn unknown_answer_exits_with_two() {
    let out = abmorph(&["classify", "a->ab; b->bbaa"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["answer"], "Unknown");
    assert_eq!(r["witnesses"]["pure"]["outcome"], "NotPure");
    assert_eq!(r["witnesses"]["pure"]["iterations"], 2);
    assert_eq!(r["witnesses"]["pure"]["cycle_detected"], true);
}

#[test]
fn input_errors_exit_with_one() {
    for args in [
        vec!["classify", "a->; b->a"],
        vec!["classify", "a->ba; b->ab"],
        vec!["classify", "a->ab; c->ba"],
        vec!["classify", "a->ab; b->ba", "--no-such-flag"],
        vec!["dfao", "a->aab; b->bbaab"],
        vec!["complexity", "a->ab; b->ba", "--format", "dot"],
    ] {
        let out = abmorph(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("error"), "{args:?}: {stderr}");
    }
}

#[test]
fn dfao_dot_matches_the_transition_table() {
    let out = abmorph(&["dfao", "a->ab; b->bbaa", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    let expected = [[1, 2, 3], [4, 5, 6], [3, 4, 5], [6, 3, 4], [5, 6, 1], [2, 1, 2]];
    for (q, row) in expected.iter().enumerate() {
        for (digit, target) in row.iter().enumerate() {
            let edge = format!("  {} -> {} [label=\"{}\"];", q + 1, target, digit);
            assert!(dot.contains(&edge), "missing {edge}");
        }
    }
    assert_eq!(dot.matches("shape=circle").count(), 6);
}

#[test]
fn dfao_evaluates_big_indices() {
    let out = abmorph(&["dfao", "a->ab; b->bbaa", "--eval", "4", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "a\n");
    let out = abmorph(&["dfao", "a->ab; b->bbaa", "--eval", "123456789012345678901234567890"]);
    assert_eq!(out.status.code(), Some(0));
    let letter = report(&out)["letter"].as_str().unwrap().to_string();
    assert!(letter == "a" || letter == "b");
}

#[test]
fn output_is_byte_stable() {
    let args = ["classify", "a->aab; b->bbaab"];
    assert_eq!(abmorph(&args).stdout, abmorph(&args).stdout);
}

#[test]
fn json_reports_reparse_into_library_types() {
    let out = abmorph(&["classify", "a->aab; b->b"]);
    let r = report(&out);
    let verdict: abelian_morphic::Verdict = serde_json::from_value(r).expect("schema round trip");
    assert_eq!(verdict.answer, abelian_morphic::Answer::NotAbelianPeriodic);
    assert!(verdict.evidence.is_some());
}

#[test]
fn morphism_from_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "a -> abba\nb -> ab\n").unwrap();
    let out = abmorph(&["pure", path.to_str().unwrap()]);
    assert_eq!(report(&out)["outcome"], "PureAbelianPeriodic");
    let out = abmorph(&["pure", r#"{"a": "ab", "b": "bbaa"}"#]);
    assert_eq!(report(&out)["outcome"], "NotPure");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tm.csv");
    let out = abmorph(&[
        "complexity",
        "a->ab; b->ba",
        "--horizon",
        "4096",
        "--nmax",
        "4",
        "--format",
        "csv",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), "length,complexity,imbalance\n1,2,1\n2,3,2\n3,2,1\n4,3,2\n");
}

#[test]
fn path_csv() {
    let out = abmorph(&["path", "a->ab; b->bbaa", "--horizon", "6", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "index,height\n0,0\n1,1\n2,0\n3,-1\n4,-2\n5,-1\n6,0\n");
}

#[test]
fn remaining_verbs() {
    let out = abmorph(&["prefix", "a->ab; b->bbaa", "--horizon", "18", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "abbbaabbaabbaaabab\n");

    let out = abmorph(&["eventual", "a->ab; b->bbaa", "--kmax", "3"]);
    let r = report(&out);
    assert_eq!(r["witness"], Value::Null);
    assert_eq!(r["levels_without_witness"], 3);

    let out = abmorph(&["lift", "a->ab; b->bbaa", "--horizon", "1000"]);
    let r = report(&out);
    assert_eq!(r["verified"], true);
    assert_eq!(r["bijective"], true);

    let out = abmorph(&["oracle", "a->ab; b->ba", "--horizon", "2000", "--max-period", "8", "--max-preperiod", "8"]);
    let r = report(&out);
    assert_eq!(r["witness"]["period"], 2);
    assert_eq!(r["witness"]["preperiod"], 0);

    let out = abmorph(&["periodic", "a->ab; b->b", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "periodic: u=a w=b\n");

    let out = abmorph(&["residues", "a->ab; b->bbaa", "--modulus", "5", "--horizon", "19683"]);
    let r = report(&out);
    assert_eq!(r["complete"], true);
    let out = abmorph(&["residues", "a->ab; b->bbaa", "--modulus", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn corpus_runs_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.txt");
    fs::write(&path, "# golden\na->ab; b->ba\n\na->ab; b->a\na->ab; b->bbaa\n").unwrap();
    let out = abmorph(&["classify", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let items = report(&out);
    let answers: Vec<&str> = items
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["verdict"]["answer"].as_str().unwrap())
        .collect();
    assert_eq!(answers, ["PureAbelianPeriodic", "NotAbelianPeriodic", "Unknown"]);

    fs::write(&path, "a->ab; b->ba\nnot a morphism\n").unwrap();
    let out = abmorph(&["classify", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)[1]["error"].is_string());
}
