//! One golden file per subcommand. Regenerate with `TRINOMLAB_BLESS=1 cargo test -p trinomlab`.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_trinomlab"));
    c.env_remove("TRINOMLAB_SIZE_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_golden(name: &str, args: &[&str], expect_code: i32) {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(expect_code),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = golden_path(name);
    if std::env::var_os("TRINOMLAB_BLESS").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let want =
        std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert!(
        out.stdout == want,
        "{name} differs from golden output:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn golden_verify() {
    check_golden("verify_q9.jsonl", &["verify", "--q", "9", "--all-t"], 0);
}

#[test]
fn golden_preimage() {
    check_golden(
        "preimage_q9_t1.jsonl",
        &["preimage", "--q", "9", "--t", "1", "--all-y"],
        0,
    );
}

#[test]
fn golden_preimage_non_permutation() {
    check_golden(
        "preimage_q5_t1.jsonl",
        &["preimage", "--q", "5", "--t", "1", "--all-y"],
        0,
    );
}

#[test]
fn golden_powersum() {
    check_golden("powersum_q5.jsonl", &["powersum", "--q", "5"], 0);
}

#[test]
fn golden_lemmas() {
    check_golden("lemmas_q9.jsonl", &["lemmas", "--q", "9"], 0);
}

#[test]
fn golden_hseq() {
    check_golden(
        "hseq_max12.jsonl",
        &["hseq", "--max", "12", "--recurrence", "3"],
        0,
    );
}

#[test]
fn golden_congruence() {
    check_golden("congruence_q17.jsonl", &["congruence", "--q", "17"], 0);
}

#[test]
fn golden_conjecture() {
    check_golden("conjecture_max30.jsonl", &["conjecture", "--max", "30"], 0);
}

#[test]
fn golden_field_info() {
    check_golden(
        "field_info_2_4.jsonl",
        &["field-info", "--p", "2", "--n", "4"],
        0,
    );
}

#[test]
fn golden_csv_format() {
    check_golden(
        "verify_q4.csv",
        &["verify", "--q", "4", "--format", "csv"],
        0,
    );
}

#[test]
fn golden_human_format() {
    check_golden(
        "hseq_max5.txt",
        &["hseq", "--max", "5", "--format", "human"],
        0,
    );
}
