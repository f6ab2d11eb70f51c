//! End-to-end checks of the CLI contract: exit codes, output shapes, and
//! the file formats shared with the library.

use std::path::PathBuf;
use std::process::{Command, Output};

fn pencoder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pencoder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pencoder-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_clean_run_exits_zero() {
    let out = pencoder(&[
        "verify", "--arch", "tree", "--n", "1024", "--strategy", "random", "--count", "10000",
        "--seed", "0",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("10000 vectors: 0 mismatches"));
}

#[test]
fn verify_detects_tampered_netlist_with_exit_two() {
    let path = scratch("tampered.json");
    let out = pencoder(&[
        "generate", "--arch", "slpe", "--n", "8", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    // Swap the first two output nets: the function changes, the structure
    // stays valid.
    let text = std::fs::read_to_string(&path).unwrap();
    let nl: serde_json::Value = serde_json::from_str(&text).unwrap();
    let outs = nl["outputs"].as_array().unwrap().clone();
    let mut nl = nl;
    nl["outputs"][0] = outs[1].clone();
    nl["outputs"][1] = outs[0].clone();
    std::fs::write(&path, serde_json::to_string(&nl).unwrap()).unwrap();

    let out = pencoder(&[
        "verify", "--arch", "slpe", "--n", "8", "--strategy", "exhaustive", "--netlist",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn usage_errors_exit_one() {
    let out = pencoder(&["verify", "--arch", "nonesuch", "--n", "64"]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");

    let out = pencoder(&["verify", "--n", "64"]); // missing --arch
    assert_eq!(out.status.code(), Some(1), "{out:?}");

    let out = pencoder(&["cost", "--arch", "slpe", "--n", "63"]); // not a power of two
    assert_eq!(out.status.code(), Some(1), "{out:?}");

    let out = pencoder(&["nonesuch-subcommand"]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn io_and_schema_errors_exit_three() {
    let out = pencoder(&[
        "verify", "--arch", "slpe", "--n", "8", "--netlist", "/nonexistent/netlist.json",
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");

    let bad = scratch("bad.csv");
    std::fs::write(&bad, "wrong,header\n1,2\n").unwrap();
    let out = pencoder(&["fpga", "--csv", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(pencoder(&["--help"]).status.code(), Some(0));
    assert_eq!(pencoder(&["--version"]).status.code(), Some(0));
}

#[test]
fn cost_cross_check_agrees() {
    let out = pencoder(&["cost", "--arch", "2lpe", "--n", "2048", "--mode", "structural"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("analytical (structural): 26496"), "{text}");
    assert!(text.contains("netlist:                 26496"), "{text}");
}

#[test]
fn delay_objective_recommends_tree() {
    let out = pencoder(&["recommend", "--tech", "asic", "--objective", "delay"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        assert!(line.contains("Tree"), "{line}");
    }
}

#[test]
fn emit_writes_named_files() {
    let dir = scratch("hdl-out");
    let out = pencoder(&[
        "emit", "--arch", "tree", "--n", "16", "--dialect", "both", "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.join("pe_tree_16.vhd").exists());
    assert!(dir.join("pe_tree_16.v").exists());
}

#[test]
fn analyze_emits_csv_with_stable_header() {
    let out = pencoder(&["analyze", "--ns", "64,256"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "arch,n,m,mode,cost,delay,or_pct,mux_pct,pe_pct"
    );
    assert!(text.lines().any(|l| l.starts_with("Tree,64,")));
}

#[test]
fn fpga_pipeline_round_trips() {
    let csv = scratch("fpga.csv");
    std::fs::write(
        &csv,
        "arch,n,luts,muxfx,ffs,path_luts,path_muxfx\n\
         SLPE,512,511,194,0,12,3\n\
         3LPE-A,512,346,78,0,9,2\n",
    )
    .unwrap();
    let out = pencoder(&["fpga", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("SLPE,512,576,"), "{text}");
    assert!(text.contains("3LPE-A,512,372,"), "{text}");
}

#[test]
fn tables_are_deterministic() {
    let a = pencoder(&["tables"]);
    let b = pencoder(&["tables"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("Lowest delay"));
}
