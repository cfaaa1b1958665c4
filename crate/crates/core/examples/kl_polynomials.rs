//! Kazhdan-Lusztig basis and polynomials, by the mu-recursion and by
//! solving for bar-invariance.

use std::sync::Arc;

use kllab::coxeter::{CoxeterMatrix, GroupTable};
use kllab::hecke::{kl_basis_by_solve, BarTable, KlTable};

fn main() -> kllab::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "A3".into());
    let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec(&spec)?, None)?);
    let kl = KlTable::build(g.clone())?;
    let bars = BarTable::build(g.clone())?;

    let x = g.elements().last().unwrap();
    println!("b_w0 in {spec} has {} terms", kl.kl_basis_element(x).terms().count());

    if spec == "A3" {
        let y = g.parse_element("2")?;
        let x = g.parse_element("2,1,3,2")?;
        println!("h(2, 2132) = {}", kl.kl_poly(y, x));
        println!("mu(2, 2132) = {}", kl.mu(y, x));
        println!("b_2132 = {}", kl.kl_basis_element(x).display(&g));
        println!(
            "same by solve: {}",
            kl_basis_by_solve(&bars, x)? == *kl.kl_basis_element(x)
        );
    }

    let nontrivial = g
        .elements()
        .flat_map(|x| g.lower_interval(x).into_iter().map(move |y| (y, x)))
        .filter(|&(y, x)| kl.kl_poly(y, x).len() > 1)
        .count();
    println!("pairs y <= x with more than one term in h_(y,x): {nontrivial}");
    Ok(())
}
