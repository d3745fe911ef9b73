// Symbolic pentagon frieze: every entry is a Laurent polynomial in the path.

use spherical_frieze::frieze::Step;
use spherical_frieze::numeric::qr;
use spherical_frieze::symbolic::{laurent_verify, SymbolicOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rep = laurent_verify(5, &qr(1, 49), 0, &Step::parse_word("UUU")?, &SymbolicOptions::default())?;
    for e in rep.entries.iter().take(4) {
        println!("{:<10} {:?} {:?}", e.index, e.status, e.atom_exponents);
    }
    println!("{} entries, clean: {}, {} ms", rep.entries.len(), rep.clean, rep.elapsed_ms);
    if !rep.clean {
        return Err("non-Laurent entry".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
