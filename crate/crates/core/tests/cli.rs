//! Black-box tests of the command-line interface: exit codes, overrides,
//! determinism, and the self-describing CSV contract.

use linadv::output::parse_csv;
use std::path::Path;
use std::process::{Command, Output};

fn linadv(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linadv"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn linadv")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_is_byte_deterministic_and_overridable() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("job.cfg"),
        "case=a_x\nbasis=gl\nN=2\nK=8\nt_final=0.5\nsteps=200\nsamples=2\n",
    )
    .unwrap();
    let args = [
        "run", "--config", "job.cfg", "--K", "12", "--out", "a.csv",
    ];
    assert_eq!(linadv(&args, dir.path()).status.code(), Some(0));
    let args = [
        "run", "--config", "job.cfg", "--K", "12", "--out", "b.csv",
    ];
    assert_eq!(linadv(&args, dir.path()).status.code(), Some(0));

    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    // Identical apart from the self-recorded output path.
    assert_eq!(a.replace("out=a.csv", "out=b.csv"), b);

    let parsed = parse_csv(&a).unwrap();
    assert_eq!(parsed.config.elements, 12, "--K must override the file");
    assert_eq!(parsed.rows.len(), 3);
}

#[test]
fn csv_metadata_is_a_complete_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "run", "--case", "a_x2", "--basis", "gll", "--N", "3", "--K", "6",
        "--t-final", "0.4", "--steps", "150", "--samples", "3",
        "--out", "first.csv",
    ];
    assert_eq!(linadv(&args, dir.path()).status.code(), Some(0));
    let first = std::fs::read_to_string(dir.path().join("first.csv")).unwrap();

    // Strip the '#' prefixes and feed the metadata block back in as a
    // config file; it must reproduce the identical CSV.
    let config: String = first
        .lines()
        .take_while(|l| l.starts_with('#'))
        .filter(|l| l.contains('='))
        .map(|l| format!("{}\n", l.trim_start_matches('#').trim()))
        .collect();
    std::fs::write(dir.path().join("replay.cfg"), config).unwrap();
    std::fs::rename(
        dir.path().join("first.csv"),
        dir.path().join("original.csv"),
    )
    .unwrap();
    let args = ["run", "--config", "replay.cfg"];
    assert_eq!(linadv(&args, dir.path()).status.code(), Some(0));
    let replay = std::fs::read_to_string(dir.path().join("first.csv")).unwrap();
    let original = std::fs::read_to_string(dir.path().join("original.csv")).unwrap();
    assert_eq!(original, replay);
}

#[test]
fn config_errors_exit_2_and_name_the_offender() {
    let dir = tempfile::tempdir().unwrap();

    let out = linadv(&["run", "--case", "a_x", "--flux", "sideways"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sideways"), "{}", stderr(&out));

    std::fs::write(dir.path().join("bad.cfg"), "case=a_x\nwibble=1\n").unwrap();
    let out = linadv(&["run", "--config", "bad.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("wibble"), "{}", stderr(&out));

    let out = linadv(&["run", "--basis", "gll"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("case"), "{}", stderr(&out));

    // Unknown flags are a usage error too.
    let out = linadv(&["run", "--case", "a_x", "--colour", "blue"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_preset_exits_2_and_lists_the_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = linadv(&["preset", "fig99"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    for name in ["fig1", "fig8", "fd_cos"] {
        assert!(msg.contains(name), "{msg}");
    }
}

#[test]
fn preset_writes_curves_manifest_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = linadv(
        &["preset", "fig5", "--out-dir", "results", "--svg"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let results = dir.path().join("results");
    let manifest = std::fs::read_to_string(results.join("manifest.txt")).unwrap();
    assert_eq!(manifest.lines().count(), 4);
    for line in manifest.lines() {
        let file = line.split(',').next().unwrap();
        let text = std::fs::read_to_string(results.join(file)).unwrap();
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed.config.t_final, 9.9);
        assert_eq!(parsed.config.steps, Some(40000));
        // Desk-scale substitution is recorded in the metadata.
        assert!(parsed.note.as_deref().unwrap().contains("99000"));
        assert!(line.ends_with("completed"), "{line}");
    }
    assert!(results.join("fig5.svg").exists());
}

#[test]
fn aborting_run_exits_3_after_writing_the_truncated_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "run", "--case", "a_x2", "--variant", "neg_cos", "--N", "2", "--K", "6",
        "--t-final", "10", "--steps", "1500", "--samples", "10",
        "--out", "pole.csv",
    ];
    let out = linadv(&args, dir.path());
    assert_eq!(out.status.code(), Some(3));
    let text = std::fs::read_to_string(dir.path().join("pole.csv")).unwrap();
    let parsed = parse_csv(&text).unwrap();
    assert_eq!(parsed.aborted, Some(10.0));
    assert!(parsed.rows.len() <= 10);
}

#[test]
fn converge_prints_a_table_and_validates_the_mesh_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = linadv(
        &[
            "converge", "--case", "a_x2", "--basis", "gl", "--N", "2",
            "--flux", "split_upwind", "--k-list", "4,8", "--t-eval", "0.3",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(table.contains("oversampled_error"), "{table}");
    assert_eq!(table.lines().count(), 3);

    let out = linadv(
        &["converge", "--case", "a_x", "--k-list", "10", "--t-eval", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("two mesh sizes"), "{}", stderr(&out));
}

#[test]
fn verify_ops_reports_residuals_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = linadv(&["verify-ops", "--max-degree", "6"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.contains("gl N=6"));
    assert!(text.contains("fd order=4 nodes=100"));
    assert!(text.contains("verify-ops: OK"), "{text}");
}
