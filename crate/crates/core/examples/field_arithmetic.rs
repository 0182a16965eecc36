//! Galois-field arithmetic and the underlying systematic MDS code.

use std::sync::Arc;

use stair::gf::Field;
use stair::mds::{Codeword, GenMatrix};

fn main() -> stair::Result<()> {
    for w in [8, 16, 32] {
        let f = Field::with_width(w)?;
        let a = 0x53;
        let inv = f.inv(a).expect("nonzero");
        println!("GF(2^{w}) poly {:#x}: {a:#x} * {inv:#x} = {}", f.poly(), f.mul(a, inv));
    }

    // 4 data symbols, 3 parities; any 4 of the 7 recover the rest
    let code = GenMatrix::systematic(4, 7, Arc::new(Field::gf256()))?;
    let data: Vec<Vec<u8>> = (0..4u8).map(|i| vec![i * 17 + 1; 8]).collect();
    let mut full = data.clone();
    full.extend(code.encode(&data)?);
    let mut word = Codeword::complete(full.clone());
    for pos in [0, 2, 5] {
        word.erase(pos);
    }
    code.decode(&mut word)?;
    assert_eq!(word.symbols.into_iter().map(Option::unwrap).collect::<Vec<_>>(), full);
    println!("recovered symbols 0, 2 and 5 from the other four");
    Ok(())
}
