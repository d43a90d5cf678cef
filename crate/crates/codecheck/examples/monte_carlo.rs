//! Monte-Carlo studies: empirical accept rates against the exact per-round
//! fraction and the p^R bound, with the naive row-sampling baseline.
//!
//! Run with: cargo run --release --example monte_carlo

use codecheck::code::LinearCode;
use codecheck::field::Field;
use codecheck::testset::TestSet;
use codecheck::verify::{
    error_bound, mc_error_rate, naive_row_verifier, random_coset_vector, unit_syndrome_vector,
    VerifierConfig,
};
use num::ToPrimitive;

fn main() -> codecheck::Result<()> {
    let f256 = Field::base(2, 8, None)?;
    f256.enable_tables();
    let code = LinearCode::rs(&f256, 255, 223)?;
    let outer = LinearCode::rs(&f256, 255, 32)?;
    let ts = TestSet::from_outer_code(code.parity_check(), &outer)?;
    let trials = 20_000u64;

    // The adversary that defeats naive row sampling: an error whose syndrome
    // has weight one, so only 1 of the 32 parity rows can expose it.
    let e = unit_syndrome_vector(&code, 0)?;
    println!("unit-syndrome adversary, single round, {trials} trials");
    let exact = ts.non_orthogonal_fraction(&e)?;
    let accept = mc_error_rate(&ts, std::slice::from_ref(&e), trials, 1, 7)?[0];
    println!("  test set:  reject rate {:.5}, exact fraction {exact}", 1.0 - accept.to_f64().unwrap());

    let mut rejects = 0;
    for t in 0..trials {
        let cfg = VerifierConfig { rounds: 1, seed: t, count_ops: false };
        if !naive_row_verifier(&e, code.parity_check(), &cfg)?.accepted() {
            rejects += 1;
        }
    }
    println!(
        "  naive rows: reject rate {:.5}, exact 1/(n−k) = 1/32 = {:.5}",
        rejects as f64 / trials as f64,
        1.0 / 32.0
    );

    // Random non-codewords against the R-round verifier vs. the p^R bound.
    let rounds = 7;
    let bound = error_bound(ts.designed_p(), rounds).to_f64().unwrap();
    let inputs: Vec<_> = (0..4).map(|s| random_coset_vector(&code, s)).collect::<Result<_, _>>()?;
    let rates = mc_error_rate(&ts, &inputs, trials, rounds, 11)?;
    println!("\nrandom-coset adversaries, R = {rounds}, {trials} trials each");
    for (i, rate) in rates.iter().enumerate() {
        println!(
            "  input {i}: accept rate {} (bound p^R ≈ {bound:.3e})",
            rate.to_f64().unwrap()
        );
    }
    println!("\ncodeword sanity: accept rate {}", {
        let cw = code.random_codeword(3)?;
        mc_error_rate(&ts, &[cw], 1000, rounds, 13)?[0]
    });
    Ok(())
}
