use std::path::PathBuf;
use std::process::{Command, Output};

use hurwitz_codes::graph::from_json;
use hurwitz_codes::ResidueTable;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz-codes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn residues_text_lists_every_z() {
    let s = stdout(&["residues", "--alpha", "3+2i"]);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("alpha = 3+2i, N = 13"));
    let header: Vec<_> = lines.next().unwrap().split_whitespace().collect();
    assert_eq!(header, ["z", "mu1", "N1", "mu2", "N2", "branch", "mu"]);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 13);
    assert_eq!(
        rows[3],
        ["3", "-2i", "4", "1/2+1/2i-1/2j-5/2k", "7", "1", "-2i"]
    );
    assert!(rows.iter().all(|r| r[5] == "1"));
}

#[test]
fn residues_doubled_and_text_alpha_agree() {
    let a = stdout(&[
        "--format",
        "json",
        "residues",
        "--alpha",
        "5/2+3/2i+3/2j+3/2k",
    ]);
    let b = stdout(&["--format", "json", "residues", "--alpha2", "5,3,3,3"]);
    assert_eq!(a, b);
    let t = ResidueTable::from_json(&a).unwrap();
    assert_eq!(t.len(), 13);
    assert_eq!(t.entries()[6].residue.to_string(), "-i-j-k");
}

#[test]
fn residues_csv_round_trips() {
    let s = stdout(&["--format", "csv", "residues", "--alpha", "3+i+j"]);
    assert!(s.starts_with("alpha,norm,z,branch,residue,norm1,norm2\n"));
    let t = ResidueTable::from_csv(&s).unwrap();
    assert_eq!(t.len(), 11);
    assert_eq!(t.entries()[5].residue.to_string(), "-1/2-1/2i+1/2j-3/2k");
}

#[test]
fn energy_outputs() {
    assert_eq!(stdout(&["energy", "--alpha", "3+2i"]), "28/13 ≈ 2.1539\n");
    assert_eq!(
        stdout(&["energy", "--alpha", "5/2+3/2i+3/2j+3/2k"]),
        "24/13 ≈ 1.8462\n"
    );
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--format", "json", "energy", "--alpha", "3+i+j"])).unwrap();
    assert_eq!(v["average_energy"], "24/11");
    assert_eq!(v["decimal"], "2.1818");
    assert_eq!(v["norm"], 11);
}

#[test]
fn rate_outputs() {
    assert_eq!(stdout(&["rate", "--p", "73"]), "(3,1)-code, R = 1/3\n");
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--format", "json", "rate", "--p", "97"])).unwrap();
    assert_eq!(
        (v["n"].as_u64(), v["rate"].as_str()),
        (Some(4), Some("1/4"))
    );
    let out = run(&["rate", "--p", "71"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn table1_formats() {
    let md = stdout(&["table1"]);
    let rows: Vec<_> = md.lines().skip(2).collect();
    assert_eq!(rows.len(), 6);
    assert!(
        rows[1].starts_with("| 13 | 2+2i+2j+k | 5/2+3/2i+3/2j+3/2k, 7/2+1/2i+1/2j+1/2k | 1.8462 |")
    );
    assert!(rows[5].contains("| 6.0000 |"));

    let csv = stdout(&["--format", "csv", "table1", "--max-norm", "20"]);
    assert!(csv.starts_with("norm,class,representative,listed,energy,decimal\n"));
    assert!(csv.contains("19,half-integer,5/2+5/2i+5/2j+1/2k,true,48/19,2.5263"));
    assert!(!csv.contains("\n31,"));
    assert_eq!(code(&["table1", "--max-norm", "5"]), 1);
}

#[test]
fn verify_exit_codes() {
    let s = stdout(&["verify", "--alpha", "3+2i"]);
    assert!(s.trim_end().ends_with("all checks passed"));
    assert_eq!(s.lines().filter(|l| l.contains(" PASS ")).count(), 5);

    let s = stdout(&["verify", "--thm2", "--prop7", "--norm-bound", "20"]);
    let names: Vec<_> = s
        .lines()
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    assert_eq!(&names[..2], ["bijection", "symmetry"]);

    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "verify",
        "--thm1",
        "--norm-bound",
        "13",
    ]))
    .unwrap();
    assert_eq!(v[0]["check"], "homomorphism");
    assert_eq!(v[0]["failures"], 0);
    assert!(v[0]["moduli"].as_u64().unwrap() > 0);
    assert_eq!(
        code(&["verify", "--alpha", "3+2i", "--norm-bound", "10"]),
        1
    );
}

#[test]
fn graph_formats() {
    let dot = stdout(&["graph", "--alpha", "3+2i", "--layout", "none"]);
    assert!(dot.starts_with("graph constellation {"));
    assert_eq!(dot.matches(" -- ").count(), 13);

    let dot = stdout(&[
        "--format", "dot", "graph", "--alpha", "3+2i", "--rule", "complete", "--layout", "spiral",
    ]);
    assert_eq!(dot.matches(" -- ").count(), 78);
    assert_eq!(dot.matches("pos=").count(), 13);

    let json = stdout(&[
        "--format",
        "json",
        "graph",
        "--alpha",
        "5/2+3/2i+3/2j+3/2k",
        "--dims",
        "3",
        "--seed",
        "4",
    ]);
    let (g, l) = from_json(&json).unwrap();
    assert_eq!(g.len(), 13);
    let l = l.unwrap();
    assert_eq!((l.dims, l.seed), (3, 4));
    assert_eq!(
        json,
        stdout(&[
            "--format",
            "json",
            "graph",
            "--alpha",
            "5/2+3/2i+3/2j+3/2k",
            "--dims",
            "3",
            "--seed",
            "4"
        ])
    );

    let svg = stdout(&["--format", "svg", "graph", "--alpha", "2+i"]);
    assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(
        code(&["--format", "svg", "graph", "--alpha", "2+i", "--dims", "3"]),
        1
    );

    let csv = stdout(&[
        "--format", "csv", "graph", "--alpha", "2+i", "--layout", "spiral",
    ]);
    assert!(csv.starts_with("index,z,branch,residue,degree,x,y\n"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn out_writes_a_file() {
    let path = tmp("energy.json");
    let _ = std::fs::remove_file(&path);
    let s = stdout(&[
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
        "energy",
        "--alpha",
        "3+2i",
    ]);
    assert!(s.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["average_energy"], "28/13");
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["energy"]), 1);
    assert_eq!(code(&["energy", "--alpha", "4"]), 1);
    assert_eq!(code(&["energy", "--alpha", "3+2q"]), 1);
    assert_eq!(
        code(&["residues", "--alpha", "3+2i", "--alpha2", "6,4,0,0"]),
        1
    );
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    let err = run(&["energy", "--alpha", "4"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("not prime"));
}
