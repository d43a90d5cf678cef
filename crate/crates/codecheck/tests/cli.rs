//! End-to-end checks of the command-line surface: exit-code contract
//! (0 accept / 1 reject / 2 error), file formats, and report shapes.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use codecheck::cli;
use codecheck::code::LinearCode;
use codecheck::linalg::Vector;

fn run(args: &[&str]) -> (i32, String) {
    let argv: Vec<String> = std::iter::once("codecheck".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    let mut out = Vec::new();
    let code = cli::run(&argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Artifacts {
    _dir: tempfile::TempDir,
    code: PathBuf,
    ts: PathBuf,
}

/// RM₂(1,3) plus an MDS test set, built through the CLI.
fn small_artifacts() -> Artifacts {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("rm.code");
    let ts = dir.path().join("rm.ts");
    let (status, out) = run(&["build", "rm", "--q", "2", "--r", "1", "--m", "3", "--out", path_str(&code)]);
    assert_eq!(status, 0, "{out}");
    assert!(out.contains("n=8 k=4 d=4"), "{out}");
    let (status, out) = run(&["testset", path_str(&code), "--mds", "1/2", "3", "--out", path_str(&ts)]);
    assert_eq!(status, 0, "{out}");
    assert!(out.contains("designed_p=1/2"), "{out}");
    Artifacts { _dir: dir, code, ts }
}

fn load_code(path: &Path) -> LinearCode {
    let mut r = std::io::BufReader::new(fs::File::open(path).unwrap());
    LinearCode::read_text(&mut r).unwrap()
}

#[test]
fn build_writes_loadable_files_and_prints_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let rs = dir.path().join("rs.code");
    let (status, out) = run(&["build", "rs", "--q", "8", "--n", "7", "--k", "3", "--out", path_str(&rs)]);
    assert_eq!(status, 0);
    assert!(out.contains("rs[7,3,5]"), "{out}");
    assert!(out.contains("d=5"), "{out}");
    let code = load_code(&rs);
    assert_eq!((code.n(), code.k()), (7, 3));

    let rnd = dir.path().join("rnd.code");
    let (status, out) = run(&[
        "build", "random", "--q", "8", "--n", "12", "--k", "4", "--seed", "1", "--out", path_str(&rnd),
    ]);
    assert_eq!(status, 0);
    // small random codes get their distance certified by enumeration
    assert!(out.contains("d=6"), "{out}");
    let (status2, _) = run(&[
        "build", "random", "--q", "8", "--n", "12", "--k", "4", "--seed", "1", "--out", path_str(&rnd),
    ]);
    assert_eq!(status2, 0);
    let again = load_code(&rnd);
    assert_eq!(again.generator(), load_code(&rnd).generator(), "same seed, same code");
}

#[test]
fn build_rejects_invalid_parameters_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.code");
    // more evaluation points than field elements
    let (status, _) = run(&["build", "rs", "--q", "8", "--n", "9", "--k", "2", "--out", path_str(&out_path)]);
    assert_eq!(status, 2);
    // not a prime power
    let (status, _) = run(&["build", "rs", "--q", "6", "--n", "5", "--k", "2", "--out", path_str(&out_path)]);
    assert_eq!(status, 2);
    // unknown flags
    let (status, _) = run(&["build", "rs", "--qq", "8", "--out", path_str(&out_path)]);
    assert_eq!(status, 2);
}

#[test]
fn testset_admissibility_error_names_the_inequality() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("rm.code");
    run(&["build", "rm", "--q", "2", "--r", "1", "--m", "3", "--out", path_str(&code)]);
    let ts = dir.path().join("rm.ts");
    // u = 1 over GF(2): (n−k−1)/(q^u−1) = 3/1 ≥ any p in (0,1)
    let (status, _) = run(&["testset", path_str(&code), "--mds", "1/100", "1", "--out", path_str(&ts)]);
    assert_eq!(status, 2);
}

#[test]
fn verify_exit_codes_accept_reject_error() {
    let art = small_artifacts();
    let code = load_code(&art.code);
    let dir = tempfile::tempdir().unwrap();

    // a codeword accepts with exit 0
    let cw = code.random_codeword(5).unwrap();
    let vpath = dir.path().join("cw.vec");
    cli::write_vector_file(&vpath, &cw).unwrap();
    let (status, out) = run(&[
        "verify", path_str(&art.ts), path_str(&vpath), "--rounds", "7", "--seed", "3",
    ]);
    assert_eq!(status, 0, "{out}");
    assert!(out.starts_with("accept 7 - -"), "{out}");

    // flip one coordinate: reject with exit 1 and a witness row
    let mut data: Vec<u64> = (0..cw.len()).map(|i| cw.get(i).value()).collect();
    data[0] ^= 1;
    let bad = Vector::from_packed(code.field(), data).unwrap();
    let bpath = dir.path().join("bad.vec");
    cli::write_vector_file(&bpath, &bad).unwrap();
    let (status, out) = run(&[
        "verify", path_str(&art.ts), path_str(&bpath), "--rounds", "10", "--seed", "3", "--json",
    ]);
    assert_eq!(status, 1, "{out}");
    let j: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(j["verdict"], "reject");
    assert!(j["witness_row"].is_u64());

    // malformed vector file: exit 2
    let mpath = dir.path().join("malformed.vec");
    fs::write(&mpath, "VECTOR GF(2^1) mod 2 8\n1 0 zz 0 0 0 0 1\n").unwrap();
    let (status, _) = run(&["verify", path_str(&art.ts), path_str(&mpath)]);
    assert_eq!(status, 2);

    // field mismatch: exit 2
    let f8 = codecheck::field::Field::base(2, 3, None).unwrap();
    let wrong = Vector::zeros(&f8, 8);
    let wpath = dir.path().join("wrong.vec");
    cli::write_vector_file(&wpath, &wrong).unwrap();
    let (status, _) = run(&["verify", path_str(&art.ts), path_str(&wpath)]);
    assert_eq!(status, 2);
}

#[test]
fn verify_reads_stdin_through_the_binary() {
    let art = small_artifacts();
    let exe = env!("CARGO_BIN_EXE_codecheck");

    let mut child = Command::new(exe)
        .args(["verify", path_str(&art.ts), "--stdin", "--rounds", "5", "--seed", "1"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    // the zero vector is a codeword of every linear code
    child.stdin.take().unwrap().write_all(b"0 0 0 0 0 0 0 0\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("accept"));

    let mut child = Command::new(exe)
        .args(["verify", path_str(&art.ts), "--stdin", "--rounds", "12", "--seed", "1"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"1 0 0 0 0 0 0 0\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_single_round_costs_n_muls() {
    let art = small_artifacts();
    let (status, out) = run(&[
        "bench", "--code", path_str(&art.code), "--testset", path_str(&art.ts),
        "--rounds", "1", "--seed", "2", "--json",
    ]);
    assert_eq!(status, 0, "{out}");
    let j: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    // u = 3, n = 8: one round is u·n = 24 muls, u·(n−1) = 21 adds
    assert_eq!(j["testset_mul"], 24);
    assert_eq!(j["testset_add"], 21);
    assert_eq!(j["syndrome_mul"], 32); // (n−k)·n = 4·8
    assert_eq!(j["syndrome_add"], 28);
    assert_eq!(j["designed_p"], "1/2");
}

#[test]
fn mc_reports_rates_and_rejects_unknown_adversaries() {
    let art = small_artifacts();
    let (status, out) = run(&[
        "mc", "--testset", path_str(&art.ts), "--code", path_str(&art.code),
        "--adversary", "codeword", "--trials", "200", "--rounds", "3", "--seed", "9", "--json",
    ]);
    assert_eq!(status, 0, "{out}");
    let j: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(j["accept_rate"], 1.0, "codewords always accept");

    let (status, out) = run(&[
        "mc", "--testset", path_str(&art.ts), "--code", path_str(&art.code),
        "--adversary", "unit-syndrome", "--trials", "2000", "--rounds", "1", "--seed", "9", "--json",
    ]);
    assert_eq!(status, 0, "{out}");
    let j: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let accept = j["accept_rate"].as_f64().unwrap();
    let naive = j["naive_accept_rate"].as_f64().unwrap();
    assert!(accept < 0.6, "test set accept {accept}");
    assert!(naive > accept, "naive baseline must accept more often: {naive} vs {accept}");

    let (status, _) = run(&[
        "mc", "--testset", path_str(&art.ts), "--code", path_str(&art.code),
        "--adversary", "nonsense", "--trials", "10",
    ]);
    assert_eq!(status, 2);
}

#[test]
fn omitted_seed_is_drawn_and_printed() {
    let art = small_artifacts();
    let code = load_code(&art.code);
    let dir = tempfile::tempdir().unwrap();
    let vpath = dir.path().join("cw.vec");
    cli::write_vector_file(&vpath, &code.random_codeword(1).unwrap()).unwrap();
    let (status, out) = run(&["verify", path_str(&art.ts), path_str(&vpath)]);
    assert_eq!(status, 0);
    assert!(out.contains("seed="), "{out}");
}
