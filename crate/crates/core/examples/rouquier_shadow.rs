//! Graded multiplicities of Rouquier complexes read from h^(y,x), and the
//! check that their alternating sum gives back delta_x.

use std::sync::Arc;

use kllab::coxeter::{CoxeterMatrix, GroupTable};
use kllab::hecke::{HeckeElt, KlTable};
use kllab::verify::rouquier_multiplicities;

fn main() -> kllab::Result<()> {
    let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec("B2")?, None)?);
    let kl = KlTable::build(g.clone())?;
    for x in g.elements() {
        let r = rouquier_multiplicities(&kl, x)?;
        let terms: Vec<String> = r
            .mult
            .iter()
            .map(|(&(y, i), &m)| format!("B_{}({i})^{m}", g.display(y)))
            .collect();
        let back = r.grothendieck_sum(&kl)? == HeckeElt::delta(x);
        println!(
            "Delta_{:<8} {:<60} [Delta] = delta: {back}",
            g.display(x),
            terms.join(" ")
        );
    }
    Ok(())
}
