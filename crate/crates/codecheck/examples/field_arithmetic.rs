//! Finite field construction and arithmetic: prime fields, extensions,
//! towers, and the trace map.
//!
//! Run with: cargo run --example field_arithmetic

use codecheck::field::Field;

fn main() -> codecheck::Result<()> {
    // GF(256) with its pinned default modulus x^8 + x^4 + x^3 + x^2 + 1
    let f256 = Field::base(2, 8, None)?;
    println!("built {f256}");
    let a = f256.fe(0x53)?;
    let b = f256.fe(0xca)?;
    println!("  a = {a}, b = {b}");
    println!("  a + b = {}", &a + &b);
    println!("  a · b = {}", &a * &b);
    println!("  a⁻¹   = {}, a·a⁻¹ = {}", a.inv()?, &a * &a.inv()?);
    println!("  a^255 = {} (Fermat: the group has order 255)", a.pow(255));

    // GF(8) as a tower over GF(2); α = x is a generator
    let f8 = Field::build(2, 1, 3, None, None)?;
    println!("\nbuilt {f8} (tower over GF(2))");
    let alpha = f8.fe(2)?;
    println!("  α   = {alpha}");
    println!("  α²  = {}", alpha.pow(2));
    println!("  α³  = {} (= α + 1 modulo x³ + x + 1)", alpha.pow(3));

    // The trace maps the tower down to its base field, F_q-linearly.
    println!("  traces down to GF(2):");
    for v in f8.elements() {
        let t = f8.fe(v)?.trace();
        print!(" Tr({v:x})={t}");
    }
    println!();

    // Embedding is a field homomorphism with unchanged packed values.
    let f2 = f8.base_subfield();
    let one = f2.one();
    let lifted = one.embed(&f8)?;
    println!("  embed(1) + embed(1) = {} (characteristic 2)", &lifted + &lifted);

    // Mixed-field arithmetic is refused.
    let f4 = Field::base(2, 2, None)?;
    let err = f4.one().checked_add(&f256.one()).unwrap_err();
    println!("\nmixing GF(4) with GF(256): {err}");
    Ok(())
}
