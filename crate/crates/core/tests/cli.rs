use std::path::PathBuf;
use std::process::{Command, Output};

fn bilin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bilin")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn gen_then_solve_planted() {
    let path = scratch("planted_4_4_12.json");
    let p = path.to_str().unwrap();
    let out = bilin(&["--seed", "7", "--nx", "4", "--ny", "4", "--m", "12", "gen", "--planted", "-o", p]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for alg in ["yxl", "ymxl", "yhxl"] {
        let out = bilin(&["solve", "-i", p, "--alg", alg, "--ax", "1"]);
        assert_eq!(out.status.code(), Some(0), "{alg}: {}", String::from_utf8_lossy(&out.stderr));
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["status"]["kind"], "solution_found", "{alg}");
    }
    let out = bilin(&["solve", "-i", p, "--alg", "brute"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_is_deterministic() {
    let args = ["--seed", "3", "--q", "5", "--nx", "2", "--ny", "3", "--m", "6", "gen"];
    let (a, b) = (bilin(&args), bilin(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn no_solution_exits_one() {
    let path = fixture("inconsistent.json");
    for alg in ["yxl", "ymxl", "brute"] {
        let out = bilin(&["solve", "-i", &path, "--alg", alg, "--format", "csv"]);
        assert_eq!(out.status.code(), Some(1), "{alg}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("no_solution"));
    }
}

#[test]
fn estimate_row() {
    let out = bilin(&["--q", "5", "--nx", "20", "--ny", "20", "--m", "42", "estimate"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("q,nx,ny,m,mxl,hxl,a_x,a_y,alg"));
    assert!(lines.next().unwrap().starts_with("5,20,20,42,110,59,19,0,S,"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bilin(&["solve", "--alg", "nope"]).status.code(), Some(2));
    assert_eq!(bilin(&["--nx", "2", "gen"]).status.code(), Some(2));
    assert_eq!(bilin(&["--q", "12", "--nx", "2", "--ny", "2", "--m", "4", "gen"]).status.code(), Some(2));
    let out = bilin(&["solve", "-i", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn formula_table_from_tables_command() {
    let dir = scratch("tables");
    std::fs::create_dir_all(&dir).unwrap();
    let out = bilin(&["tables", "--which", "4", "--out-dir", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("table4.csv")).unwrap();
    assert!(csv.starts_with("experiment,q,nx,ny,m,statistic"));
    assert_eq!(csv.lines().filter(|l| l.contains(",hxl_cost,")).count(), 36);
}
