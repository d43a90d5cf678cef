//! Operation-count benchmark: the randomized verifier versus direct syndrome
//! computation, at the two standard Reed–Solomon settings.
//!
//! Run with: cargo run --release --example operation_counts

use codecheck::cli::bench;
use codecheck::code::LinearCode;
use codecheck::field::Field;
use codecheck::testset::TestSet;
use num::ToPrimitive;

fn main() -> codecheck::Result<()> {
    println!("{:<16} {:>6} {:>12} {:>10} {:>10}", "code", "R", "method", "mul", "add");
    for (q, d, n, k, outer_k) in [(2u64, 8u32, 255usize, 223usize, 32usize), (2, 10, 1023, 895, 128)] {
        let field = Field::base(q, d, None)?;
        field.enable_tables();
        let code = LinearCode::rs(&field, n, k)?;
        let outer = LinearCode::rs(&field, n, outer_k)?;
        let ts = TestSet::from_outer_code(code.parity_check(), &outer)?;
        let r = bench(&code, &ts, 7, 42)?;
        println!(
            "{:<16} {:>6} {:>12} {:>10} {:>10}",
            format!("RS({n},{k})"),
            r.rounds,
            "test-set",
            r.mul,
            r.add
        );
        println!(
            "{:<16} {:>6} {:>12} {:>10} {:>10}",
            "", "", "syndrome", r.syndrome_mul, r.syndrome_add
        );
        println!(
            "{:<16} designed_p = {}, p^R ≈ {:.3e}, wall {:.4}s",
            "",
            r.designed_p,
            r.bound.to_f64().unwrap(),
            r.wall_time
        );
    }
    println!("\ncounts are exact identities: R·u·n and R·u·(n−1) for the verifier,");
    println!("(n−k)·n and (n−k)·(n−1) for the direct syndrome.");
    Ok(())
}
