//! Reed–Muller list decoding through the Reed–Solomon view: list-decode over
//! the big field, keep base-field words, and let the randomized membership
//! test weed out non-Reed–Muller candidates.
//!
//! Run with: cargo run --example rm_list_decoding

use codecheck::field::Field;
use codecheck::linalg::Vector;
use codecheck::rmlist::{rm_rs_params, RmListDecoder};
use codecheck::verify::VerifierConfig;
use num::rational::Ratio;

fn main() -> codecheck::Result<()> {
    let f2 = Field::prime(2)?;
    let params = rm_rs_params(2, 1, 3)?;
    println!(
        "RM_2(1,3): length {}, inside RS({}, {}) over GF(2^3), shared distance D = {}",
        params.length, params.length, params.rs_dimension, params.min_distance
    );

    let dec = RmListDecoder::new(&f2, 1, 3)?;
    println!(
        "verifier test set: designed_p = {}, {} rows over {}",
        dec.test_set().designed_p(),
        dec.test_set().row_count(),
        dec.test_set().work_field()
    );

    // One flipped bit stays within half the distance: the list recovers the
    // transmitted codeword.
    let msg = Vector::from_packed(&f2, vec![1, 0, 1, 1])?;
    let cw = dec.rm_code().encode(&msg)?;
    let mut data: Vec<u64> = (0..8).map(|i| cw.get(i).value()).collect();
    data[5] ^= 1;
    let received = Vector::from_packed(&f2, data)?;
    let res = dec.decode(&received, Ratio::new(1, 8), 8, &VerifierConfig::new(12, 1))?;
    println!("\nreceived one flipped bit; decoded list = {:?}", res.list);
    println!("contains the transmitted codeword: {}", res.list.contains(&cw));

    // Over GF(3) at (r,m) = (2,3) the subfield subcode is strictly larger
    // than RM, so the RS stage can emit base-field words outside RM; the
    // verifier rejects them (error probability p^R per candidate).
    let f3 = Field::prime(3)?;
    let dec3 = RmListDecoder::new(&f3, 2, 3)?;
    let ssc = dec3.rs_code().subfield_subcode(&f3)?;
    println!(
        "\nGF(3), (r,m)=(2,3): RM dimension {}, subfield-subcode dimension {}",
        dec3.rm_code().k(),
        ssc.k()
    );
    let gap_word = (0..ssc.k())
        .map(|i| ssc.generator().row(i))
        .find(|row| !dec3.rm_code().contains(row).unwrap())
        .expect("dimension gap guarantees a non-RM word");
    let res = dec3.decode(&gap_word, Ratio::new(0, 1), 8, &VerifierConfig::new(40, 5))?;
    println!(
        "fed a subcode word outside RM at radius 0: list = {:?} (verifier rejected it)",
        res.list
    );
    Ok(())
}
