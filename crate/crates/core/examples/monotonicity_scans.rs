//! The four monotonicity scans on one group.

use std::sync::Arc;

use kllab::coxeter::{CoxeterMatrix, GeneratorSet, GroupTable};
use kllab::hecke::{BarTable, KlTable};
use kllab::parabolic::{Flavor, ParabolicContext, ParabolicKlTable};
use kllab::verify::{
    scan_monotonicity_antispherical, scan_monotonicity_classical, scan_monotonicity_inverse,
    scan_monotonicity_spherical,
};

fn main() -> kllab::Result<()> {
    let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec("A3")?, None)?);
    let kl = KlTable::build(g.clone())?;
    let bars = BarTable::build(g.clone())?;

    let inv = scan_monotonicity_inverse(&kl)?;
    println!(
        "inverse:   {} triples, {} violations",
        inv.triples_checked,
        inv.violations.len()
    );
    let cl = scan_monotonicity_classical(&kl)?;
    println!(
        "classical: {} triples, {} violations",
        cl.triples_checked,
        cl.violations.len()
    );

    let subset = GeneratorSet::parse("1,2", 3)?;
    let anti = ParabolicKlTable::build(ParabolicContext::new(g.clone(), subset, Flavor::Antispherical)?, &bars)?;
    let out = scan_monotonicity_antispherical(&anti)?;
    println!(
        "antispherical I={subset}: {} triples, {} violations",
        out.triples_checked,
        out.violations.len()
    );

    // Here ^I W is a chain and every consecutive triple fails.
    let sph = ParabolicKlTable::build(ParabolicContext::new(g.clone(), subset, Flavor::Spherical)?, &bars)?;
    let out = scan_monotonicity_spherical(&sph)?;
    println!(
        "spherical I={subset}: {} triples, {} violations",
        out.triples_checked,
        out.violations.len()
    );
    for v in &out.violations {
        println!(
            "  z={} y={} x={}: {} vs {} (fails at v^{})",
            g.display(v.z),
            g.display(v.y),
            g.display(v.x),
            v.lhs,
            v.rhs,
            v.witness_exponent
        );
    }
    Ok(())
}
