use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sidonkit::constructions;
use sidonkit::io::read_family;
use sidonkit::verifier::CollisionRecord;

fn sidonkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sidonkit"))
        .args(args)
        .env_remove("SIDONKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn k2_construction_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k2.txt");
    let o = sidonkit(&["construct", "--kind", "k2", "--n", "10", "--out", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let f = read_family(&file).unwrap();
    assert_eq!(f.len(), 17);
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("# N=10 k=2\n# construction: k2 n=10\n"));

    let o = sidonkit(&["verify", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["sidon"], true);
    assert_eq!(v["size"], 17);
}

#[test]
fn verify_reports_one_collision_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    fs::write(&file, "1,2,3\n1,2,4\n1,3,4\n").unwrap();
    let o = sidonkit(&["verify", path_str(&file)]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1);
    let rec = CollisionRecord::from_json_line(lines[0]).unwrap();
    assert_eq!(rec.ell, 3);
    assert_eq!(rec.key.sums(), &[2, 3, 4, 5, 6, 7]);
}

#[test]
fn verify_cap_limits_output() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("all.txt");
    let rows: Vec<String> = sidonkit::family::all_ksets(1, 8, 2)
        .iter()
        .map(|s| format!("{},{}", s[0], s[1]))
        .collect();
    fs::write(&file, rows.join("\n")).unwrap();
    let o = sidonkit(&["verify", path_str(&file), "--cap", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn bounds_prints_formula_value() {
    let o = sidonkit(&["bounds", "--n", "5", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "7\n");
    let o = sidonkit(&["bounds", "--n", "10", "--k", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["upper_bound"], 43);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(sidonkit(&["bounds", "--n", "5"]).status.code(), Some(1));
    assert_eq!(sidonkit(&["bounds", "--n", "5", "--k", "2", "--bogus"]).status.code(), Some(1));
    assert_eq!(sidonkit(&["nonsense"]).status.code(), Some(1));
    assert_eq!(sidonkit(&["bounds", "--n", "2", "--k", "2"]).status.code(), Some(1));
    assert_eq!(sidonkit(&["verify", "/nonexistent/family.txt"]).status.code(), Some(1));
    assert_eq!(sidonkit(&["--help"]).status.code(), Some(0));
    assert_eq!(sidonkit(&["--version"]).status.code(), Some(0));
}

#[test]
fn randomized_commands_require_seed() {
    let o = sidonkit(&["sweep", "--n", "32", "--k", "2", "--p", "0.01", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--seed"));
    let o = sidonkit(&["bh-sweep", "--n", "32", "--k", "2", "--p", "0.01", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_files_report_lines() {
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.txt");
    fs::write(&dup, "1,2,3\n2,3,5\n1,2,3\n").unwrap();
    let o = sidonkit(&["verify", path_str(&dup)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let ambient = dir.path().join("ambient.txt");
    fs::write(&ambient, "# N=10 k=3\n1,2,3\n1,5,11\n").unwrap();
    let o = sidonkit(&["verify", path_str(&ambient)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"));

    let mismatch = dir.path().join("k.txt");
    fs::write(&mismatch, "1,2,3\n1,2\n").unwrap();
    let o = sidonkit(&["verify", path_str(&mismatch)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn constructions_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(Vec<&str>, sidonkit::Family)> = vec![
        (vec!["--kind", "k2", "--n", "30"], constructions::construct_k2(30).unwrap()),
        (vec!["--kind", "k3", "--n", "20"], constructions::construct_k3(20).unwrap()),
        (vec!["--kind", "k4", "--n", "64", "--k", "4"], constructions::construct_k4(64, 4, Some(&constructions::SidonBase::golomb(4).unwrap())).unwrap()),
        (vec!["--kind", "b2g", "--n", "40", "--k", "2", "--g", "2"], constructions::construct_b2g(40, 2, 2).unwrap()),
    ];
    for (i, (args, expected)) in cases.into_iter().enumerate() {
        let file = dir.path().join(format!("c{i}.txt"));
        let mut full = vec!["construct"];
        full.extend(args);
        full.extend(["--out", path_str(&file)]);
        let o = sidonkit(&full);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(read_family(&file).unwrap().sets(), expected.sets());
    }
}

#[test]
fn bhg_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("b.txt");
    let o = sidonkit(&["construct", "--kind", "b2g", "--n", "40", "--k", "2", "--g", "2", "--out", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let o = sidonkit(&["bhg-verify", path_str(&file), "--h", "2", "--g", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(sidonkit(&["bhg-verify", path_str(&file), "--h", "2", "--g", "1"]).status.code(), Some(2));
}

#[test]
fn oracle_commands() {
    let o = sidonkit(&["exact-fk", "--n", "5", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["value"], 7);
    assert_eq!(v["witness"].as_array().unwrap().len(), 7);

    let o = sidonkit(&["enum3", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);

    let o = sidonkit(&["classify3", "--n", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(v["unclassified"], 0);

    let o = sidonkit(&["count-cl", "--n", "5,6", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,k,ell,count"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn multirep_demo() {
    let o = sidonkit(&["multirep", "--parts", "1,2,4,8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["representation_count"], 3);
    assert_eq!(sidonkit(&["multirep", "--parts", "1,2,3,4"]).status.code(), Some(1));
}

#[test]
fn sweeps_are_deterministic_across_thread_counts() {
    let args = ["sweep", "--n", "32,48", "--k", "2", "--relative", "--grid", "4", "--samples", "60", "--seed", "11"];
    let a = sidonkit(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let b = Command::new(env!("CARGO_BIN_EXE_sidonkit"))
        .args(args)
        .env("SIDONKIT_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.starts_with("n,k,h,p,samples,p_hat,ci,mean_collisions\n"));
    assert_eq!(out.lines().count(), 9);
    let summary: Value = serde_json::from_str(stderr(&a).trim()).unwrap();
    assert_eq!(summary["seed"], 11);

    let o = sidonkit(&["--format", "json", "bh-sweep", "--n", "16", "--k", "2", "--h", "3", "--p", "0.05", "--samples", "20", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["seed"], 2);
    assert_eq!(v["h"], 3);
    assert_eq!(v["points"].as_array().unwrap().len(), 1);
}
