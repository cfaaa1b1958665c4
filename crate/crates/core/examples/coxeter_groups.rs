//! Enumerating Coxeter groups: words, lengths, descents, Bruhat order and
//! cosets.

use kllab::coxeter::{CoxeterMatrix, GeneratorSet, GroupTable, Side};

fn main() -> kllab::Result<()> {
    for spec in ["A3", "B3", "H3", "D4", "F4", "I2(7)"] {
        let g = GroupTable::enumerate(CoxeterMatrix::parse_spec(spec)?, None)?;
        println!(
            "{spec:>6}: order {:>5}, longest length {:>2}, by length {:?}",
            g.len(),
            g.max_length(),
            g.length_counts()
        );
    }

    // Infinite groups need a length cap.
    let affine = CoxeterMatrix::parse_spec("Aff-A2")?;
    println!(
        "Aff-A2 without a cap: {}",
        GroupTable::enumerate(affine.clone(), None).unwrap_err()
    );
    let g = GroupTable::enumerate(affine, Some(4))?;
    println!("Aff-A2 up to length 4: {:?}", g.length_counts());

    // Custom matrices: "rank N" followed by "s t m" lines.
    let m = CoxeterMatrix::parse_matrix_text("rank 3\n1 2 4\n2 3 3\n")?;
    let g = GroupTable::enumerate(m, None)?;
    println!("custom rank 3: order {}", g.len());

    let g = GroupTable::enumerate(CoxeterMatrix::parse_spec("A3")?, None)?;
    let x = g.parse_element("2,1,3,2,1")?;
    println!(
        "2,1,3,2,1 is {} in ShortLex normal form, length {}",
        g.display(x),
        g.length(x)
    );
    println!(
        "  right descents {}, left descents {}",
        g.descent_set(x, Side::Right),
        g.descent_set(x, Side::Left)
    );
    let below: Vec<String> = g
        .lower_interval(g.parse_element("1,2")?)
        .into_iter()
        .map(|y| g.display(y))
        .collect();
    println!("  [e, 1,2] = {below:?}");

    let subset = GeneratorSet::parse("1,2", 3)?;
    let reps: Vec<String> = g.min_coset_reps(subset).into_iter().map(|y| g.display(y)).collect();
    println!("  minimal coset representatives for I = {subset}: {reps:?}");
    let (rep, k) = g.coset_decompose(x, subset);
    println!("  {} = u * {} with l(u) = {k}", g.display(x), g.display(rep));
    Ok(())
}
