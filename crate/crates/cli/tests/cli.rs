// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dcolor(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcolor"))
        .args(args)
        .current_dir(dir)
        .env_remove("DCOLOR_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

#[test]
fn gen_then_oracle_prints_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = dcolor(
        d,
        &[
            "gen",
            "bad-bipartite",
            "--delta",
            "2",
            "--out",
            "g.txt",
            "--coloring-out",
            "c.txt",
        ],
    );
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(d.join("c.txt")).unwrap(),
        "D=3 1 1 1 2\n"
    );
    write_config(
        d,
        "cfg.json",
        r#"{"graph": {"kind": "file", "path": "g.txt"}, "algorithm": "persistent",
            "start": {"kind": "file", "path": "c.txt"}}"#,
    );
    let o = dcolor(d, &["oracle", "cfg.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "9/2 (≈ 4.5)\n");

    write_config(
        d,
        "k3.json",
        r#"{"graph": {"kind": "clique", "n": 3}, "algorithm": "dc"}"#,
    );
    assert_eq!(stdout(&dcolor(d, &["oracle", "k3.json"])), "5/2 (≈ 2.5)\n");
}

#[test]
fn gen_writes_graph_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = dcolor(dir.path(), &["gen", "cycle", "--n", "3"]);
    assert_eq!(stdout(&o), "3 3\n0 1\n0 2\n1 2\n");
    assert_eq!(
        dcolor(dir.path(), &["gen", "clique"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dcolor(
            dir.path(),
            &["gen", "clique", "--n", "3", "--coloring-out", "x"]
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn run_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_config(
        d,
        "cfg.json",
        r#"{"graph": {"kind": "erdos_renyi", "n": 12, "p": 0.3, "seed": 4}, "algorithm": "dc",
            "trials": 2000, "seed": 17, "per_trial": true,
            "counters": ["total_draws", "step3_draws", "per_vertex"]}"#,
    );
    let a = dcolor(d, &["--out-dir", "a", "run", "cfg.json", "--threads", "1"]);
    let b = dcolor(d, &["--out-dir", "b", "run", "cfg.json", "--threads", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    for name in [
        "summary.csv",
        "summary.json",
        "trials.csv",
        "per_vertex.csv",
    ] {
        let x = fs::read(d.join("a").join(name)).unwrap();
        let y = fs::read(d.join("b").join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let c = dcolor(d, &["run", "cfg.json", "--seed", "18"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_dir_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_config(
        d,
        "cfg.json",
        r#"{"graph": {"kind": "cycle", "n": 4}, "algorithm": "dc", "trials": 10}"#,
    );
    let o = Command::new(env!("CARGO_BIN_EXE_dcolor"))
        .args(["run", "cfg.json"])
        .current_dir(d)
        .env("DCOLOR_OUT_DIR", "results")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(d.join("results/summary.csv").exists());
}

#[test]
fn trace_lists_selections() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("edge.txt"), "2 1\n0 1\n").unwrap();
    fs::write(d.join("start.txt"), "D=2 1 1\n").unwrap();
    write_config(
        d,
        "cfg.json",
        r#"{"graph": {"kind": "file", "path": "edge.txt"}, "algorithm": "dc"}"#,
    );
    let o = dcolor(
        d,
        &["run", "cfg.json", "--start-file", "start.txt", "--trace"],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(!text.is_empty());
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split(' ').collect();
        assert_eq!(fields.len(), 3, "{line}");
        assert_eq!(fields[0], i.to_string());
    }
}

#[test]
fn sweep_emits_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_config(
        d,
        "cfg.json",
        r#"{"graph": {"kind": "clique", "n": 4}, "algorithm": "dc", "trials": 500}"#,
    );
    let o = dcolor(
        d,
        &[
            "sweep", "cfg.json", "--axis", "n", "--values", "3,4,5", "--metric", "total",
        ],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4);
    let bad = dcolor(
        d,
        &["sweep", "cfg.json", "--axis", "delta", "--values", "3"],
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn drift_check_and_accept_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = dcolor(d, &["drift-check", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
    assert_eq!(report["fig2"]["tight"], true);

    let o = dcolor(d, &["--out-dir", "acc", "accept", "gadget"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("AC-9  PASS"));
    assert!(d.join("acc/acceptance.json").exists());

    assert_eq!(dcolor(d, &["accept", "nope"]).status.code(), Some(2));
    assert_eq!(dcolor(d, &["run", "missing.json"]).status.code(), Some(2));
    assert_eq!(dcolor(d, &["frobnicate"]).status.code(), Some(2));
}
