//! Inverse Kazhdan-Lusztig polynomials, their parity, and the inversion
//! identity tying them to h_(y,x).

use std::sync::Arc;

use kllab::coxeter::{CoxeterMatrix, GroupTable};
use kllab::hecke::KlTable;

fn main() -> kllab::Result<()> {
    let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec("B3")?, None)?);
    let kl = KlTable::build(g.clone())?;
    let w0 = g.elements().last().unwrap();
    println!("h^(y, w0) for B3:");
    for y in g.elements().take(8) {
        println!("  {:>10}  {}", g.display(y), kl.inverse_kl_poly(y, w0));
    }
    let mut pairs = 0;
    let mut parity = 0;
    let mut inversion = 0;
    for x in g.elements() {
        for y in g.lower_interval(x) {
            pairs += 1;
            parity += kl.check_parity(y, x) as usize;
            inversion += kl.check_inversion_identity(y, x)? as usize;
        }
    }
    println!("{pairs} pairs: parity holds for {parity}, inversion identity for {inversion}");
    Ok(())
}
