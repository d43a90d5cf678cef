//! Persisting codes, test sets, and vectors as text files, bit-exactly.
//!
//! Run with: cargo run --example artifacts

use codecheck::cli::{read_vector_file, write_vector_file};
use codecheck::code::LinearCode;
use codecheck::field::Field;
use codecheck::testset::TestSet;
use num::rational::Ratio;

fn main() -> codecheck::Result<()> {
    let dir = std::env::temp_dir().join("codecheck_artifacts");
    std::fs::create_dir_all(&dir)?;

    let f8 = Field::base(2, 3, None)?;
    let code = LinearCode::rs(&f8, 7, 3)?;
    let code_path = dir.join("rs7_3.code");
    code.write_text(&mut std::io::BufWriter::new(std::fs::File::create(&code_path)?))?;
    println!("wrote {}", code_path.display());

    let loaded = LinearCode::read_text(&mut std::io::BufReader::new(std::fs::File::open(&code_path)?))?;
    println!(
        "loaded {} [{}, {}], matrices identical: {}",
        loaded.label(),
        loaded.n(),
        loaded.k(),
        loaded.generator() == code.generator() && loaded.parity_check() == code.parity_check()
    );

    let ts = TestSet::mds(code.parity_check(), Ratio::new(1, 3), 2)?;
    let ts_path = dir.join("rs7_3.ts");
    ts.save(&mut std::io::BufWriter::new(std::fs::File::create(&ts_path)?))?;
    let ts_back = TestSet::load(&mut std::io::BufReader::new(std::fs::File::open(&ts_path)?))?;
    println!(
        "test set round trip: designed_p = {}, identical: {}",
        ts_back.designed_p(),
        ts_back == ts
    );
    println!("file header:");
    let text = std::fs::read_to_string(&ts_path)?;
    println!("  {}", text.lines().next().unwrap());

    let v = code.random_codeword(9)?;
    let v_path = dir.join("cw.vec");
    write_vector_file(&v_path, &v)?;
    let v_back = read_vector_file(&v_path)?;
    println!("vector round trip identical: {}", v_back == v);

    // Tampered files are rejected at load time.
    let tampered = text.replacen(" 1 3 ", " 1 2 ", 1);
    match TestSet::load(&mut tampered.as_bytes()) {
        Err(e) => println!("tampered designed_p rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
