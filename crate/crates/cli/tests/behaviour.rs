use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinomlab"))
        .env_remove("TRINOMLAB_SIZE_CAP")
        .args(args)
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn verify_q17_has_two_permutations() {
    let out = run(&["verify", "--q", "17", "--all-t"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = lines(&out);
    assert_eq!(recs.len(), 16);
    let good: Vec<String> = recs
        .iter()
        .filter(|r| r["detail"]["predicted"] == "true" && r["detail"]["observed"] == "true")
        .map(|r| r["params"]["t"][0].as_str().unwrap().to_string())
        .collect();
    assert_eq!(good, vec!["7", "10"]);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--q", "2"],
        vec!["verify", "--q", "6"],
        vec!["verify", "--q", "9", "--t", "0"],
        vec!["verify", "--q", "9", "--t", "3,3,3"],
        vec!["congruence", "--q", "7"],
        vec!["lemmas", "--q", "8"],
        vec!["hseq", "--max", "50", "--a-cap", "10"],
        vec!["verify", "--q", "9", "--bogus"],
        vec!["verify", "--q", "9", "--size-cap", "0"],
        vec!["field-info", "--p", "4", "--n", "1"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn size_cap_precedence() {
    let env_only = Command::new(env!("CARGO_BIN_EXE_trinomlab"))
        .env("TRINOMLAB_SIZE_CAP", "100")
        .args(["verify", "--q", "11"])
        .output()
        .unwrap();
    assert_eq!(env_only.status.code(), Some(2));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_trinomlab"))
        .env("TRINOMLAB_SIZE_CAP", "100")
        .args(["verify", "--q", "11", "--size-cap", "200"])
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
}

#[test]
fn output_is_independent_of_jobs() {
    for args in [
        vec!["verify", "--q", "25"],
        vec!["conjecture", "--max", "40"],
        vec!["powersum", "--q", "7"],
    ] {
        let mut one = args.clone();
        one.extend(["--jobs", "1"]);
        let mut many = args.clone();
        many.extend(["--jobs", "4"]);
        assert_eq!(run(&one).stdout, run(&many).stdout, "{args:?}");
    }
}

#[test]
fn json_numbers_are_strings() {
    fn no_numbers(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Number(_) => false,
            serde_json::Value::Array(a) => a.iter().all(no_numbers),
            serde_json::Value::Object(o) => o.values().all(no_numbers),
            _ => true,
        }
    }
    for args in [
        vec!["hseq", "--max", "8", "--recurrence", "1"],
        vec!["preimage", "--q", "9", "--t", "2", "--y", "1,2,0,1"],
        vec!["lemmas", "--q", "7"],
    ] {
        for r in lines(&run(&args)) {
            assert!(no_numbers(&r), "{r}");
        }
    }
}

#[test]
fn every_record_names_its_field() {
    for args in [
        vec!["verify", "--q", "8"],
        vec!["congruence", "--q", "9"],
        vec!["conjecture", "--max", "3"],
        vec!["powersum", "--q", "3"],
    ] {
        for r in lines(&run(&args)) {
            for key in ["p", "n", "modulus"] {
                assert!(r["params"].get(key).is_some(), "{args:?}: {r}");
            }
        }
    }
}

#[test]
fn conjecture_always_exits_zero_and_ends_with_summary() {
    let out = run(&["conjecture", "--max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = lines(&out);
    assert_eq!(recs.len(), 12);
    assert!(recs.iter().all(|r| r["status"] == "report-only"));
    assert_eq!(recs.last().unwrap()["suite"], "conjecture-summary");
    let residues: Vec<&str> = recs[..9]
        .iter()
        .map(|r| r["detail"]["residue"].as_str().unwrap())
        .collect();
    assert_eq!(residues, ["0", "2", "2", "0", "0", "0", "0", "0", "0"]);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("trinomlab-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.jsonl");
    let out = run(&[
        "field-info",
        "--p",
        "3",
        "--n",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"suite\":\"field-info\""));
    std::fs::remove_dir_all(&dir).unwrap();
}
