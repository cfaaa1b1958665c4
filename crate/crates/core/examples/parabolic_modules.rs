//! Spherical and antispherical modules and their canonical bases.

use std::sync::Arc;

use kllab::coxeter::{CoxeterMatrix, GeneratorSet, GroupTable};
use kllab::hecke::{BarTable, KlTable};
use kllab::parabolic::{check_soergel_identification, Flavor, ParabolicContext, ParabolicKlTable};

fn main() -> kllab::Result<()> {
    let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec("A3")?, None)?);
    let bars = BarTable::build(g.clone())?;
    let kl = KlTable::build(g.clone())?;
    let subset = GeneratorSet::parse("2", 3)?;

    for flavor in [Flavor::Spherical, Flavor::Antispherical] {
        let ctx = ParabolicContext::new(g.clone(), subset, flavor)?;
        let table = ParabolicKlTable::build(ctx, &bars)?;
        let reps = table.context().reps();
        println!(
            "{flavor} module for I = {subset}: {} standard basis elements",
            reps.len()
        );
        let top = *reps.last().unwrap();
        println!(
            "  canonical element at {}: {}",
            g.display(top),
            table.parabolic_kl_basis(top)?.display(&g)
        );
        println!("  inverse column: {}", table.inverse_column(top)?.display(&g));
        if flavor == Flavor::Antispherical {
            let mismatches = check_soergel_identification(&table, &kl)?;
            println!("  n^ = h^ on all pairs: {}", mismatches.is_empty());
        }
    }
    Ok(())
}
