use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn steiner(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steiner"))
        .args(args)
        .current_dir(cwd)
        .env_remove("STEINER_NODE_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn with_fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = steiner(&["fixtures", "all", "--out", "fx"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    dir
}

fn manifest_lines(dir: &Path) -> Vec<serde_json::Value> {
    fs::read_to_string(dir.join("manifest.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn sha256_hex(path: &Path) -> String {
    hex::encode(Sha256::digest(fs::read(path).unwrap()))
}

#[test]
fn verify_reports_block_count() {
    let dir = with_fixtures();
    for (file, t, k, b) in [
        ("fx/s3-6-42.blocks", "3", "6", 574),
        ("fx/rosqs46.blocks", "3", "4", 3795),
        ("fx/fano.blocks", "2", "3", 7),
    ] {
        let o = steiner(&["verify", "--t", t, "--k", k, file], dir.path());
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert_eq!(stdout(&o).trim(), format!("valid, b={b}"));
    }
}

#[test]
fn verify_prints_witness_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.blocks"), "v=7 b=6\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n").unwrap();
    let o = steiner(&["verify", "--t", "2", "--k", "3", "bad.blocks"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "invalid: 2-subset {2,4} lies in 0 blocks");

    let o = steiner(&["--one-based", "verify", "--t", "2", "--k", "3", "bad.blocks"], dir.path());
    assert_eq!(o.status.code(), Some(2), "0 is not a 1-based point");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("junk.blocks"), "v=7 b=1\n0 1 x\n").unwrap();
    assert_eq!(steiner(&["verify", "--t", "2", "--k", "3", "junk.blocks"], dir.path()).status.code(), Some(2));
    assert_eq!(steiner(&["verify", "--t", "2", "--k", "3", "missing.blocks"], dir.path()).status.code(), Some(2));
    assert_eq!(steiner(&["verify", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(steiner(&["fixtures", "nope", "--out", "x"], dir.path()).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_steiner"))
        .args(["xc", "solve", "p.xc"])
        .current_dir(dir.path())
        .env("STEINER_NODE_LIMIT", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn admissible_table_for_strength_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = steiner(&["admissible", "--t", "3", "--vmax", "50"], dir.path());
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(rows.len(), 25);
    assert_eq!(rows[0], "8 4 14");
    assert!(rows.contains(&"26 6 130".to_string()));
    assert!(!rows.iter().any(|r| r.starts_with("22 7 ")));
}

#[test]
fn fixture_files_round_trip() {
    let dir = with_fixtures();
    let o = steiner(
        &["orbit-design", "--group", "fx/s3-6-42.grp", "--base", "fx/s3-6-42.base", "--out", "s.blocks"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read_to_string(dir.path().join("s.blocks")).unwrap(),
        fs::read_to_string(dir.path().join("fx/s3-6-42.blocks")).unwrap()
    );
    let o = steiner(&["orbit-design", "--group", "fx/rosqs46.grp", "--base", "fx/rosqs46.base"], dir.path());
    assert_eq!(stdout(&o), fs::read_to_string(dir.path().join("fx/rosqs46.blocks")).unwrap());
}

#[test]
fn derive_and_formats() {
    let dir = with_fixtures();
    let o = steiner(&["derive", "fx/rosqs46.blocks", "--point", "inf"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("v=45 b=330\n"));
    let o = steiner(&["derive", "fx/sqs8.blocks", "--point", "7", "--format", "json"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["v"], 7);
    let o = steiner(&["derive", "fx/sqs8.blocks", "--point", "7", "--format", "gap"], dir.path());
    assert!(stdout(&o).starts_with("BlockDesign(7, [["));
    fs::write(dir.path().join("fano1.blocks"), "v=7 b=7\n1 2 3\n1 4 5\n1 6 7\n2 4 6\n2 5 7\n3 4 7\n3 5 6\n").unwrap();
    let o = steiner(&["--one-based", "derive", "fano1.blocks", "--point", "1"], dir.path());
    assert!(stdout(&o).starts_with("v=6 b=3\n"), "{}", stdout(&o));
    assert_eq!(steiner(&["derive", "fx/sqs8.blocks", "--point", "8"], dir.path()).status.code(), Some(1));
}

#[test]
fn orbits_listing() {
    let dir = with_fixtures();
    let o = steiner(&["orbits", "--group", "fx/rosqs46.grp", "--s", "4"], dir.path());
    let total: u64 = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.rsplit('\t').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 163_185);
}

#[test]
fn km_writes_solutions_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("z7.grp"), "degree=7\n(0,1,2,3,4,5,6)\n").unwrap();
    let o = steiner(&["km", "--group", "z7.grp", "--v", "7", "--t", "2", "--k", "3", "--out", "run"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let run = dir.path().join("run");
    let sols: Vec<_> = fs::read_dir(&run)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("solution-"))
        .collect();
    assert_eq!(sols.len(), 2);
    for s in &sols {
        let path = s.path();
        let v = steiner(&["verify", "--t", "2", "--k", "3", path.to_str().unwrap()], dir.path());
        assert_eq!(stdout(&v).trim(), "valid, b=7");
    }
    let m = &manifest_lines(&run)[0];
    assert_eq!(m["subcommand"], "km");
    assert_eq!(m["inputs"]["z7.grp"], sha256_hex(&dir.path().join("z7.grp")));
    assert_eq!(m["stats"]["solutions"], 2);
    assert_eq!(m["stats"]["completed"], true);
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn extend_fans_out_over_groups() {
    let dir = with_fixtures();
    fs::write(dir.path().join("trivial.grp"), "degree=8\n").unwrap();
    fs::write(dir.path().join("c7.grp"), "degree=8\n(0,1,3,2,5,6,4)\n").unwrap();
    let o = steiner(
        &[
            "--jobs", "2", "extend", "--design", "fx/fano.blocks", "--group", "trivial.grp", "--group", "c7.grp",
            "--t", "2", "--k", "3", "--out", "ext",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ext = dir.path().join("ext");
    for (task, input) in [("task-000-trivial", "trivial.grp"), ("task-001-c7", "c7.grp")] {
        let d = ext.join(task);
        let m = &manifest_lines(&d)[0];
        assert_eq!(m["inputs"][input], sha256_hex(&dir.path().join(input)));
        assert_eq!(m["inputs"]["fx/fano.blocks"], sha256_hex(&dir.path().join("fx/fano.blocks")));
        let n = m["stats"]["solutions"].as_u64().unwrap();
        assert!(n >= 1);
        let first = d.join("extension-0000.blocks");
        let v = steiner(&["verify", "--t", "3", "--k", "4", first.to_str().unwrap()], dir.path());
        assert_eq!(stdout(&v).trim(), "valid, b=14");
    }
}

#[test]
fn emitted_instance_solves_to_the_same_count() {
    let dir = with_fixtures();
    fs::write(dir.path().join("trivial.grp"), "degree=7\n").unwrap();
    let o = steiner(
        &[
            "extend", "--design", "fx/fano.blocks", "--group", "trivial.grp", "--t", "2", "--k", "3", "--max", "0",
            "--emit-instance", "fano.xc", "--out", "ext",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = steiner(&["xc", "solve", "fano.xc", "--count-only", "--out", "xrun"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("solutions=1 "), "{}", stdout(&o));
    let m = &manifest_lines(&dir.path().join("xrun"))[0];
    assert_eq!(m["inputs"]["fano.xc"], sha256_hex(&dir.path().join("fano.xc")));

    let serial = steiner(&["xc", "solve", "fano.xc"], dir.path());
    let parallel = steiner(&["--jobs", "3", "xc", "solve", "fano.xc"], dir.path());
    assert_eq!(stdout(&serial), stdout(&parallel));
    assert!(String::from_utf8_lossy(&serial.stderr).starts_with("manifest: {"));

    let o = steiner(&["xc", "solve", "fano.xc", "--nodes", "3"], dir.path());
    assert!(stdout(&o).contains("completed=false"));
}

#[test]
fn iso_filter_and_aut() {
    let dir = with_fixtures();
    let o = steiner(
        &["iso-filter", "fx/sts13-both-1.blocks", "fx/sts13-both-2.blocks", "fx/sts13-both-1.blocks", "--out", "reps"],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
    assert_eq!(fs::read_dir(dir.path().join("reps")).unwrap().count(), 2);

    let o = steiner(&["aut", "fx/sqs8.blocks"], dir.path());
    assert_eq!(stdout(&o).lines().next(), Some("# order=1344"));
    let o = steiner(&["aut", "fx/s3-6-42.blocks", "--nodes", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
