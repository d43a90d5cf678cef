//! Building test sets and checking their defining properties exhaustively.
//!
//! Run with: cargo run --example test_sets

use codecheck::code::{Distance, LinearCode};
use codecheck::field::Field;
use codecheck::linalg::{Matrix, Vector};
use codecheck::testset::TestSet;
use num::rational::Ratio;

fn main() -> codecheck::Result<()> {
    let f2 = Field::prime(2)?;
    #[rustfmt::skip]
    let g = Matrix::from_packed(&f2, 4, 7, vec![
        1, 0, 0, 0, 1, 1, 0,
        0, 1, 0, 0, 1, 0, 1,
        0, 0, 1, 0, 0, 1, 1,
        0, 0, 0, 1, 1, 1, 1,
    ])?;
    let code = LinearCode::from_generator(g, "hamming[7,4]", Distance::Exact(3))?;
    println!("code: {} with n−k = {} parity rows", code.label(), code.parity_check().rows());

    // Using the parity rows themselves is the trivial test set: its designed
    // probability 1 − 1/(n−k) is nearly useless.
    let trivial = TestSet::from_outer_code(
        code.parity_check(),
        &LinearCode::full_space(code.field(), 3),
    )?;
    println!("trivial row-sampling set: designed_p = {}", trivial.designed_p());

    // The MDS construction drives the probability down to any admissible
    // target: here 1/3 via an RS[6,3,4] outer code over GF(8).
    let ts = TestSet::mds(code.parity_check(), Ratio::new(1, 3), 3)?;
    println!(
        "MDS test set: {} rows over {}, outer {}, designed_p = {}",
        ts.row_count(),
        ts.work_field(),
        ts.outer_label(),
        ts.designed_p()
    );

    // Exhaustive check of the two defining properties over all 2^7 vectors.
    let mut worst = Ratio::new(1u64, 1);
    let (mut members, mut outsiders) = (0, 0);
    for bits in 0u64..128 {
        let x = Vector::from_packed(&f2, (0..7).map(|i| (bits >> i) & 1).collect())?;
        let frac = ts.non_orthogonal_fraction(&x)?;
        if code.contains(&x)? {
            assert_eq!(frac, Ratio::new(0, 1));
            members += 1;
        } else {
            worst = worst.min(frac);
            outsiders += 1;
        }
    }
    println!("  all {members} codewords orthogonal to every row");
    println!("  all {outsiders} non-codewords non-orthogonal on ≥ {worst} of the rows");
    println!("  1 − designed_p = {}", Ratio::new(1u64, 1) - ts.designed_p());

    // Inadmissible targets are refused with the violated inequality.
    match TestSet::mds(code.parity_check(), Ratio::new(1, 100), 1) {
        Err(e) => println!("target 1/100 at u = 1: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
