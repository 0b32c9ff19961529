use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn bitsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn encode_diamond() {
    let d = data("diamond.tbox");
    let o = bitsim(&["encode", &d, "B"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "B\t0011\n");
    assert_eq!(stdout(&bitsim(&["encode", &d, "A"])), "A\t0001\n");
    assert_eq!(
        stdout(&bitsim(&["encode", &d])),
        "A\t0001\nB\t0011\nC\t0101\nD\t1111\n"
    );
}

#[test]
fn unknown_name_is_an_input_error() {
    let o = bitsim(&["encode", &data("diamond.tbox"), "Q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("undeclared name"));
}

#[test]
fn missing_file_and_bad_usage() {
    assert_eq!(
        bitsim(&["encode", "/nonexistent.tbox"]).status.code(),
        Some(2)
    );
    assert_eq!(bitsim(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        bitsim(&["sim", &data("diamond.tbox"), "B"]).status.code(),
        Some(1)
    );
    assert_eq!(
        bitsim(&["sim", &data("diamond.tbox"), "B", "C", "--chunk", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bitsim(&["--help"]).status.code(), Some(0));
}

#[test]
fn similarity_values() {
    let d = data("diamond.tbox");
    assert_eq!(stdout(&bitsim(&["sim", &d, "B", "C"])), "0.666667\n");
    assert_eq!(
        stdout(&bitsim(&["sim", &d, "B", "C", "--chunk", "1"])),
        "0.666667\n"
    );
    assert_eq!(stdout(&bitsim(&["sim", &d, "D", "B"])), "0.750000\n");
    assert_eq!(stdout(&bitsim(&["jaccard", &d, "B", "C"])), "0.416667\n");
    let verbose = stdout(&bitsim(&["sim", &d, "B", "C", "-v"]));
    assert!(verbose.starts_with("0.666667\nposition\ta\tb\tweight\tscore\n"));
    assert!(verbose.contains("4\t0\t0\t0\tignored"));
}

#[test]
fn penalty_flag() {
    let d = data("diamond.tbox");
    assert_eq!(
        stdout(&bitsim(&["sim", &d, "D", "A", "--penalty"])),
        "0.078125\n"
    );
}

#[test]
fn undefined_similarity_exits_3() {
    let o = bitsim(&["sim", &data("diamond.tbox"), "top", "A"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn subsume_lcs_fcg() {
    let d = data("diamond.tbox");
    assert_eq!(stdout(&bitsim(&["subsume", &d, "D", "B"])), "true\n");
    assert_eq!(stdout(&bitsim(&["subsume", &d, "B", "C"])), "false\n");
    assert_eq!(
        stdout(&bitsim(&["subsume", &d, "or(B,C)", "A"])),
        "unknown\n"
    );
    assert_eq!(stdout(&bitsim(&["lcs", &d, "B", "C"])), "0001\n");
    let g = data("generativity.tbox");
    assert_eq!(stdout(&bitsim(&["fcg", &g, "or(B, C)"])), "3\n");
    assert_eq!(stdout(&bitsim(&["fcg", &g, "(U:011|101)"])), "3\n");
    assert_eq!(bitsim(&["lcs", &d, "B", "or(B,C)"]).status.code(), Some(2));
}

#[test]
fn matrix_is_symmetric() {
    let out = stdout(&bitsim(&["matrix", &data("diamond.tbox")]));
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0], ["", "A", "B", "C", "D"]);
    assert_eq!(rows.len(), 5);
    for (i, row) in rows.iter().enumerate().skip(1) {
        assert_eq!(row[i], "1.000000");
        for (j, other) in rows.iter().enumerate().skip(1) {
            assert_eq!(row[j], other[i]);
        }
    }
    assert_eq!(rows[4][2], "0.750000");
}

#[test]
fn check_passes_on_diamond() {
    let o = bitsim(&["check", &data("diamond.tbox"), "--trials", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("property\ttrials\tviolations\tfirst_witness\n"));
    assert!(out
        .lines()
        .skip(1)
        .all(|l| l.split('\t').nth(2) == Some("0")));
}

#[test]
fn crosscheck_reports_tsv() {
    // the positionwise order cannot see negation-driven subsumptions, so
    // disagreements are expected here and the exit code signals them
    let o = bitsim(&["crosscheck", &data("diamond.tbox"), "--trials", "500"]);
    let out = stdout(&o);
    assert!(out.starts_with("kind\tinputs\tencoder\toracle\twitness\n"));
    let disagreements = out
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("documented incompleteness"))
        .count();
    assert_eq!(
        o.status.code(),
        Some(if disagreements == 0 { 0 } else { 4 })
    );
}

#[test]
fn output_is_deterministic() {
    let d = data("family.tbox");
    for args in [
        vec!["check", &d, "--trials", "200", "--seed", "7"],
        vec!["matrix", &d],
        vec!["encode", &d],
    ] {
        assert_eq!(bitsim(&args).stdout, bitsim(&args).stdout);
    }
}

#[test]
fn bench_lists_chunk_sizes() {
    let out = stdout(&bitsim(&["bench", &data("diamond.tbox")]));
    let chunks: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(chunks, ["1", "8", "64", "256"]);
}
