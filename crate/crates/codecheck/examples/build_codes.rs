//! Code constructions: Reed–Solomon, Reed–Muller, and seeded random codes,
//! with exhaustively certified minimum distances.
//!
//! Run with: cargo run --example build_codes

use codecheck::code::{Distance, LinearCode};
use codecheck::field::Field;
use codecheck::linalg::Vector;

fn main() -> codecheck::Result<()> {
    let f8 = Field::base(2, 3, None)?;

    let rs = LinearCode::rs(&f8, 7, 3)?;
    println!("{}: [{}, {}] over {}", rs.label(), rs.n(), rs.k(), f8);
    println!("  MDS distance n−k+1 = {:?}", rs.distance());
    println!("  exhaustive check over 8³ codewords: d = {}", rs.min_distance_exhaustive()?);

    let f2 = Field::prime(2)?;
    let rm = LinearCode::reed_muller(&f2, 1, 3)?;
    println!("\n{}: [{}, {}], distance {:?}", rm.label(), rm.n(), rm.k(), rm.distance());
    let mut weights = vec![0usize; rm.n() + 1];
    rm.for_each_codeword(|cw| weights[cw.iter().filter(|&&v| v != 0).count()] += 1)?;
    println!("  weight distribution: {weights:?}");

    let rnd = LinearCode::random(&f8, 12, 4, 1)?;
    let d = rnd.min_distance_exhaustive()?;
    println!("\n{}: systematic [12, 4], certified d = {d}", rnd.label());
    println!("  same seed rebuild is identical: {}", {
        let again = LinearCode::random(&f8, 12, 4, 1)?;
        again.generator() == rnd.generator()
    });

    // every code carries a parity check with G·Hᵀ = 0
    let rnd = rnd.with_distance(Distance::Exact(d));
    let msg = Vector::from_packed(&f8, vec![1, 5, 0, 7])?;
    let cw = rnd.encode(&msg)?;
    println!("  encode {:?} -> {:?}", msg, cw);
    println!("  syndrome of the codeword: {:?}", rnd.syndrome(&cw)?);

    // subfield subcodes and trace codes connect codes across a tower
    let f8t = Field::build(2, 1, 3, None, None)?;
    let big = LinearCode::rs_all_points(&f8t, 5)?;
    let sub = big.subfield_subcode(&f8t.base_subfield())?;
    println!(
        "\nsubfield subcode of {} over GF(2): [{}, {}] with d = {}",
        big.label(),
        sub.n(),
        sub.k(),
        sub.min_distance_exhaustive()?
    );
    let tr = big.trace_code()?;
    println!("trace code of {}: [{}, {}]", big.label(), tr.n(), tr.k());
    Ok(())
}
