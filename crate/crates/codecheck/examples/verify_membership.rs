//! Running the randomized membership test and reading its reports.
//!
//! Run with: cargo run --example verify_membership

use codecheck::code::LinearCode;
use codecheck::field::Field;
use codecheck::testset::TestSet;
use codecheck::verify::{determine_codeword, rounds_for_target, VerifierConfig};
use num::rational::Ratio;

fn main() -> codecheck::Result<()> {
    let f256 = Field::base(2, 8, None)?;
    f256.enable_tables();
    let code = LinearCode::rs(&f256, 255, 223)?;
    let outer = LinearCode::rs(&f256, 255, 32)?;
    let ts = TestSet::from_outer_code(code.parity_check(), &outer)?;
    println!(
        "test set for {}: {} rows, designed_p = {}",
        code.label(),
        ts.row_count(),
        ts.designed_p()
    );

    // How many rounds for a 4e-7 error target? Exact rational arithmetic.
    let rounds = rounds_for_target(ts.designed_p(), Ratio::new(4, 10_000_000))?;
    println!("rounds for error ≤ 4e-7: R = {rounds}");

    // A codeword is always accepted, and a full run costs R·u·n mults.
    let cw = code.random_codeword(7)?;
    let report = determine_codeword(&cw, &ts, &VerifierConfig::new(rounds, 1))?;
    println!("codeword:    {}", report.summary_line());

    // Corrupt one coordinate: rejection comes with a witness row, and the
    // report re-checks it, so reject verdicts are always correct.
    let mut data: Vec<u64> = (0..cw.len()).map(|i| cw.get(i).value()).collect();
    data[100] ^= 0x1d;
    let bad = codecheck::linalg::Vector::from_packed(&f256, data)?;
    let report = determine_codeword(&bad, &ts, &VerifierConfig::new(rounds, 1))?;
    println!("corrupted:   {}", report.summary_line());
    println!(
        "witness row {} re-checks nonzero: {}",
        report.witness_row.unwrap(),
        report.recheck_witness(&bad, &ts)
    );

    // Same seed, same report: every run is reproducible.
    let again = determine_codeword(&bad, &ts, &VerifierConfig::new(rounds, 1))?;
    println!("deterministic rerun matches: {}", again.summary_line() == report.summary_line());
    Ok(())
}
