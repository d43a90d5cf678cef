//! Command-line front end: `build`, `testset`, `verify`, `bench`, `mc`.
//!
//! Exit codes are a stable contract: 0 for success (or an accept verdict),
//! 1 for a reject verdict, 2 for usage and data errors. All commands are
//! deterministic given explicit seeds; omitting `--seed` draws one and
//! prints it.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num::rational::Ratio;
use num::BigRational;
use num::ToPrimitive;

use crate::code::{Distance, LinearCode};
use crate::error::{Error, Result};
use crate::field::{parse_ext_tokens, parse_field_tokens, Field};
use crate::linalg::{read_nonempty_line, Vector};
use crate::testset::TestSet;
use crate::verify::{
    determine_codeword, error_bound, naive_row_verifier, random_coset_vector, unit_syndrome_vector,
    OpCounter, VerifierConfig,
};

#[derive(Parser)]
#[command(name = "codecheck", version, about = "Randomized codeword membership testing")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a code and write it to a code file.
    Build {
        #[command(subcommand)]
        family: BuildCmd,
    },
    /// Build a test set for a code, from an MDS outer code or an explicit one.
    Testset {
        /// Code file providing the parity-check matrix.
        code: PathBuf,
        /// MDS construction: target probability (a fraction like 1/3) and
        /// extension degree u.
        #[arg(long, num_args = 2, value_names = ["P", "U"])]
        mds: Option<Vec<String>>,
        /// Code file with the outer code (over the extension field).
        #[arg(long, conflicts_with = "mds")]
        outer: Option<PathBuf>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the randomized membership test on one vector.
    Verify {
        /// Test-set file.
        testset: PathBuf,
        /// Vector file (header `VECTOR <field> <n>` plus one hex line).
        vector: Option<PathBuf>,
        /// Read one bare line of hex entries from standard input instead.
        #[arg(long, conflicts_with = "vector")]
        stdin: bool,
        #[arg(long, default_value_t = 7)]
        rounds: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Operation-count benchmark: full-round verification on a codeword
    /// versus the direct syndrome computation.
    Bench {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        testset: PathBuf,
        #[arg(long, default_value_t = 7)]
        rounds: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Monte-Carlo study: empirical accept rates for an adversary versus the
    /// exact prediction and the p^R bound, with a naive row-sampling
    /// baseline.
    Mc {
        #[arg(long)]
        testset: PathBuf,
        #[arg(long)]
        code: PathBuf,
        /// unit-syndrome | random-coset | codeword | file:<path>
        #[arg(long)]
        adversary: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        rounds: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Reed–Solomon code over GF(q).
    Rs {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Override the default field modulus (hex, packed).
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Reed–Muller code RM_q(r, m).
    Rm {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Seeded random code in systematic form.
    Random {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long, short)]
        out: PathBuf,
    },
}

/// Entry point for the thin binary: parse `std::env::args`, write to stdout.
pub fn main_from_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    run(&args, &mut std::io::stdout())
}

/// Runs the CLI against explicit arguments and an output sink. Returns the
/// process exit code (0 ok/accept, 1 reject, 2 usage or data error).
pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage; version/help requests exit 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.cmd {
        Cmd::Build { family } => cmd_build(family, out),
        Cmd::Testset { code, mds, outer, out: path } => cmd_testset(&code, mds, outer, &path, out),
        Cmd::Verify { testset, vector, stdin, rounds, seed, json } => {
            cmd_verify(&testset, vector.as_deref(), stdin, rounds, seed, json, out)
        }
        Cmd::Bench { code, testset, rounds, seed, json } => {
            cmd_bench(&code, &testset, rounds, seed, json, out)
        }
        Cmd::Mc { testset, code, adversary, trials, rounds, seed, json } => {
            cmd_mc(&testset, &code, &adversary, trials, rounds, seed, json, out)
        }
    }
}

// ---- build ----------------------------------------------------------------

fn cmd_build(family: BuildCmd, out: &mut dyn Write) -> Result<i32> {
    let (code, path) = match family {
        BuildCmd::Rs { q, n, k, modulus, out: path } => {
            let field = field_of_order(q, modulus.as_deref())?;
            (LinearCode::rs(&field, n, k)?, path)
        }
        BuildCmd::Rm { q, r, m, modulus, out: path } => {
            let field = field_of_order(q, modulus.as_deref())?;
            (LinearCode::reed_muller(&field, r, m)?, path)
        }
        BuildCmd::Random { q, n, k, seed, modulus, out: path } => {
            let field = field_of_order(q, modulus.as_deref())?;
            (LinearCode::random(&field, n, k, seed)?, path)
        }
    };
    // certify random-code distances when the enumeration stays small
    let code = match code.distance() {
        Distance::Unknown if code.codeword_count() <= 1 << 20 => {
            let d = code.min_distance_exhaustive()?;
            code.with_distance(Distance::Exact(d))
        }
        _ => code,
    };
    let dist = match code.distance() {
        Distance::Exact(d) => format!("{d}"),
        Distance::Assumed(d) => format!(">={d} (assumed)"),
        Distance::Unknown => "unknown".into(),
    };
    writeln!(
        out,
        "built {} over {}: n={} k={} d={}",
        code.label(),
        code.field().text_form(),
        code.n(),
        code.k(),
        dist
    )?;
    let mut w = BufWriter::new(File::create(&path)?);
    code.write_text(&mut w)?;
    w.flush()?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(0)
}

// ---- testset ---------------------------------------------------------------

fn cmd_testset(
    code_path: &Path,
    mds: Option<Vec<String>>,
    outer: Option<PathBuf>,
    out_path: &Path,
    out: &mut dyn Write,
) -> Result<i32> {
    let code = load_code(code_path)?;
    let ts = match (mds, outer) {
        (Some(args), None) => {
            let p = parse_ratio(&args[0])?;
            let u: u32 = args[1]
                .parse()
                .map_err(|e| Error::Parse(format!("bad extension degree: {e}")))?;
            TestSet::mds(code.parity_check(), p, u)?
        }
        (None, Some(outer_path)) => {
            let outer_code = load_code(&outer_path)?;
            TestSet::from_outer_code(code.parity_check(), &outer_code)?
        }
        _ => {
            return Err(Error::InvalidParams(
                "exactly one of --mds or --outer is required".into(),
            ))
        }
    };
    writeln!(
        out,
        "built test set for {}: nbar={} designed_p={} u={} outer={}{}",
        code.label(),
        ts.row_count(),
        ts.designed_p(),
        ts.ext_degree(),
        ts.outer_label(),
        if ts.distance_assumed() { " (distance assumed)" } else { "" },
    )?;
    let mut w = BufWriter::new(File::create(out_path)?);
    ts.save(&mut w)?;
    w.flush()?;
    writeln!(out, "wrote {}", out_path.display())?;
    Ok(0)
}

// ---- verify ----------------------------------------------------------------

fn cmd_verify(
    ts_path: &Path,
    vector: Option<&Path>,
    stdin: bool,
    rounds: u32,
    seed: Option<u64>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let ts = load_testset(ts_path)?;
    let x = if stdin {
        let mut line = String::new();
        std::io::stdin().read_to_string(&mut line)?;
        parse_bare_vector(&line, ts.base_field(), ts.n())?
    } else {
        let path = vector.ok_or_else(|| {
            Error::InvalidParams("provide a vector file or --stdin".into())
        })?;
        let v = read_vector_file(path)?;
        if v.field() != ts.base_field() {
            return Err(Error::FieldMismatch);
        }
        v
    };
    let seed = announce_seed(seed, out)?;
    let report = determine_codeword(&x, &ts, &VerifierConfig::new(rounds, seed))?;
    if json {
        let j = serde_json::json!({
            "verdict": if report.accepted() { "accept" } else { "reject" },
            "rounds_run": report.rounds_run,
            "reject_round": report.reject_round,
            "witness_row": report.witness_row,
            "mul": report.ops.base_mul(),
            "add": report.ops.base_add(),
            "seed": seed,
        });
        writeln!(out, "{j}")?;
    } else {
        writeln!(out, "{}", report.summary_line())?;
    }
    Ok(if report.accepted() { 0 } else { 1 })
}

// ---- bench -----------------------------------------------------------------

/// Operation-count report for one code/test-set pair.
pub struct BenchReport {
    pub code_label: String,
    pub n: usize,
    pub k: usize,
    pub testset_label: String,
    pub rounds: u32,
    pub ext_degree: u32,
    /// Test-set verifier cost (full R rounds on a codeword).
    pub mul: u64,
    pub add: u64,
    /// Direct-syndrome baseline cost.
    pub syndrome_mul: u64,
    pub syndrome_add: u64,
    pub designed_p: Ratio<u64>,
    pub bound: BigRational,
    pub wall_time: f64,
}

/// Runs the benchmark: a full-R verification on a codeword input (codewords
/// never reject, so all R rounds are charged, making the counts comparable
/// run to run) plus one direct syndrome computation.
pub fn bench(code: &LinearCode, ts: &TestSet, rounds: u32, seed: u64) -> Result<BenchReport> {
    if ts.n() != code.n() || ts.base_field() != code.field() {
        return Err(Error::InvalidParams(
            "test set does not match the code".into(),
        ));
    }
    let start = Instant::now();
    let cw = code.random_codeword(seed)?;
    let report = determine_codeword(&cw, ts, &VerifierConfig::new(rounds, seed))?;
    if !report.accepted() {
        return Err(Error::InvalidParams(
            "benchmark input was rejected; the test set is inconsistent with the code".into(),
        ));
    }
    let mut counter = OpCounter::default();
    code.syndrome_direct(&cw, &mut counter)?;
    let wall_time = start.elapsed().as_secs_f64();

    let u = u64::from(ts.ext_degree());
    let n = code.n() as u64;
    assert_eq!(report.ops.base_mul(), u64::from(rounds) * u * n, "counter identity");
    assert_eq!(report.ops.base_add(), u64::from(rounds) * u * (n - 1), "counter identity");

    Ok(BenchReport {
        code_label: code.label().to_string(),
        n: code.n(),
        k: code.k(),
        testset_label: ts.outer_label().to_string(),
        rounds,
        ext_degree: ts.ext_degree(),
        mul: report.ops.base_mul(),
        add: report.ops.base_add(),
        syndrome_mul: counter.base_mul(),
        syndrome_add: counter.base_add(),
        designed_p: ts.designed_p(),
        bound: error_bound(ts.designed_p(), rounds),
        wall_time,
    })
}

fn cmd_bench(
    code_path: &Path,
    ts_path: &Path,
    rounds: u32,
    seed: Option<u64>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let code = load_code(code_path)?;
    let ts = load_testset(ts_path)?;
    let seed = announce_seed(seed, out)?;
    let r = bench(&code, &ts, rounds, seed)?;
    if json {
        let j = serde_json::json!({
            "code": r.code_label,
            "n": r.n,
            "k": r.k,
            "testset": r.testset_label,
            "rounds": r.rounds,
            "u": r.ext_degree,
            "testset_mul": r.mul,
            "testset_add": r.add,
            "syndrome_mul": r.syndrome_mul,
            "syndrome_add": r.syndrome_add,
            "designed_p": r.designed_p.to_string(),
            "bound": r.bound.to_string(),
            "bound_approx": big_to_f64(&r.bound),
            "wall_time": r.wall_time,
        });
        writeln!(out, "{j}")?;
    } else {
        writeln!(
            out,
            "bench code={} [{},{}] testset={} R={} u={}",
            r.code_label, r.n, r.k, r.testset_label, r.rounds, r.ext_degree
        )?;
        writeln!(out, "{:<18} {:>10} {:>10}", "method", "mul", "add")?;
        writeln!(out, "{:<18} {:>10} {:>10}", "test-set", r.mul, r.add)?;
        writeln!(
            out,
            "{:<18} {:>10} {:>10}",
            "direct-syndrome", r.syndrome_mul, r.syndrome_add
        )?;
        writeln!(
            out,
            "designed_p={} bound=p^R={} (~{:.3e}) wall={:.4}s",
            r.designed_p,
            r.bound,
            big_to_f64(&r.bound),
            r.wall_time
        )?;
    }
    Ok(0)
}

// ---- mc --------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_mc(
    ts_path: &Path,
    code_path: &Path,
    adversary: &str,
    trials: u64,
    rounds: u32,
    seed: Option<u64>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let ts = load_testset(ts_path)?;
    let code = load_code(code_path)?;
    if ts.n() != code.n() || ts.base_field() != code.field() {
        return Err(Error::InvalidParams("test set does not match the code".into()));
    }
    let seed = announce_seed(seed, out)?;
    let x = match adversary {
        "unit-syndrome" => unit_syndrome_vector(&code, 0)?,
        "random-coset" => random_coset_vector(&code, seed)?,
        "codeword" => code.random_codeword(seed)?,
        other => match other.strip_prefix("file:") {
            Some(path) => {
                let v = read_vector_file(Path::new(path))?;
                if v.field() != code.field() {
                    return Err(Error::FieldMismatch);
                }
                v
            }
            None => {
                return Err(Error::InvalidParams(format!(
                    "unknown adversary {adversary:?} (expected unit-syndrome, random-coset, codeword, or file:<path>)"
                )))
            }
        },
    };

    let exact_fraction = ts.non_orthogonal_fraction(&x)?;
    let rates = crate::verify::mc_error_rate(&ts, std::slice::from_ref(&x), trials, rounds, seed)?;
    let accept_rate = rates[0];
    let bound = error_bound(ts.designed_p(), rounds);

    // naive baseline: sample rows of H itself
    let mut naive_accepts = 0u64;
    for t in 0..trials {
        let cfg = VerifierConfig {
            rounds,
            seed: crate::rng::derive_seed(seed ^ 0x6e61697665, t),
            count_ops: false,
        };
        if naive_row_verifier(&x, code.parity_check(), &cfg)?.accepted() {
            naive_accepts += 1;
        }
    }
    let naive_rate = Ratio::new(naive_accepts, trials);

    if json {
        let j = serde_json::json!({
            "adversary": adversary,
            "trials": trials,
            "rounds": rounds,
            "seed": seed,
            "accept_rate": ratio_to_f64(accept_rate),
            "accept_rate_exact": accept_rate.to_string(),
            "exact_fraction": exact_fraction.to_string(),
            "designed_p": ts.designed_p().to_string(),
            "bound": big_to_f64(&bound),
            "naive_accept_rate": ratio_to_f64(naive_rate),
        });
        writeln!(out, "{j}")?;
    } else {
        writeln!(
            out,
            "mc adversary={adversary} trials={trials} R={rounds} seed={seed}"
        )?;
        writeln!(
            out,
            "test-set accept rate: {} (~{:.5}); exact non-orthogonal fraction {} ⇒ per-round accept {}",
            accept_rate,
            ratio_to_f64(accept_rate),
            exact_fraction,
            Ratio::new(
                exact_fraction.denom() - exact_fraction.numer(),
                *exact_fraction.denom()
            ),
        )?;
        writeln!(
            out,
            "designed_p={} bound p^R ≈ {:.3e}",
            ts.designed_p(),
            big_to_f64(&bound)
        )?;
        writeln!(
            out,
            "naive row-sampling accept rate: {} (~{:.5})",
            naive_rate,
            ratio_to_f64(naive_rate)
        )?;
    }
    Ok(0)
}

// ---- shared helpers ---------------------------------------------------------

/// Factors a field order into (p, d) and builds GF(p^d).
fn field_of_order(q: u64, modulus_hex: Option<&str>) -> Result<Arc<Field>> {
    if q < 2 {
        return Err(Error::InvalidParams(format!("{q} is not a prime power")));
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q; // q itself is prime
    }
    let mut d = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        d += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidParams(format!("{q} is not a prime power")));
    }
    let modulus = match modulus_hex {
        Some(h) => {
            Some(u64::from_str_radix(h, 16).map_err(|e| Error::Parse(format!("bad modulus: {e}")))?)
        }
        None => None,
    };
    let field = Field::base(p, d, modulus)?;
    field.enable_tables();
    Ok(field)
}

fn load_code(path: &Path) -> Result<LinearCode> {
    let mut r = BufReader::new(File::open(path)?);
    let code = LinearCode::read_text(&mut r)?;
    code.field().enable_tables();
    Ok(code)
}

fn load_testset(path: &Path) -> Result<TestSet> {
    let mut r = BufReader::new(File::open(path)?);
    let ts = TestSet::load(&mut r)?;
    ts.work_field().enable_tables();
    Ok(ts)
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected a fraction like 1/3, got {s:?}")))?;
    let num: u64 = num.trim().parse().map_err(|e| Error::Parse(format!("bad numerator: {e}")))?;
    let den: u64 = den.trim().parse().map_err(|e| Error::Parse(format!("bad denominator: {e}")))?;
    if den == 0 {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Ratio::new(num, den))
}

/// Vector file: `VECTOR <field> <n>` header plus one line of hex entries.
pub fn read_vector_file(path: &Path) -> Result<Vector> {
    let mut r = BufReader::new(File::open(path)?);
    let header = read_nonempty_line(&mut r)?;
    let mut toks = header.split_whitespace();
    match toks.next() {
        Some("VECTOR") => {}
        other => return Err(Error::Parse(format!("expected VECTOR header, got {other:?}"))),
    }
    let mut field = parse_field_tokens(&mut toks)?;
    let mut next = toks.next();
    if next == Some("ext") {
        let u: u32 = toks
            .next()
            .ok_or_else(|| Error::Parse("missing ext degree".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad ext degree: {e}")))?;
        field = parse_ext_tokens(&field, u, &mut toks)?;
        next = toks.next();
    }
    let n: usize = next
        .ok_or_else(|| Error::Parse("missing vector length".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad vector length: {e}")))?;
    Vector::read_text(&mut r, &field, n)
}

pub fn write_vector_file(path: &Path, v: &Vector) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "VECTOR {} {}", v.field().text_form(), v.len())?;
    v.write_text(&mut w)?;
    w.flush()?;
    Ok(())
}

fn parse_bare_vector(line: &str, field: &Arc<Field>, n: usize) -> Result<Vector> {
    let data: Vec<u64> = line
        .split_whitespace()
        .map(|tok| {
            u64::from_str_radix(tok, 16).map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    if data.len() != n {
        return Err(Error::Parse(format!("expected {n} entries, got {}", data.len())));
    }
    Vector::from_packed(field, data)
}

fn announce_seed(seed: Option<u64>, out: &mut dyn Write) -> Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None => {
            let s = entropy_seed();
            writeln!(out, "seed={s}")?;
            Ok(s)
        }
    }
}

fn entropy_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    crate::rng::derive_seed(nanos, u64::from(std::process::id()))
}

fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn big_to_f64(b: &BigRational) -> f64 {
    b.to_f64().unwrap_or(f64::NAN)
}
