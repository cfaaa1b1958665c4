//! Exact Laurent polynomial arithmetic in Z[v, v^-1].

use kllab::laurent::LaurentPoly;

fn main() -> kllab::Result<()> {
    let v = LaurentPoly::v();
    let q = v.checked_add(&LaurentPoly::v_inv())?;
    println!("v + v^-1         = {q}");
    println!("(v + v^-1)^2     = {}", q.checked_mul(&q)?);
    println!(
        "bar(v^-1 - 2v^3) = {}",
        LaurentPoly::from_terms([(-1, 1), (3, -2)])?.bar()
    );

    let p: LaurentPoly = "1*v^1+1*v^3".parse()?;
    println!("parsed           = {p}, term string {}", p.to_term_string());
    println!("json             = {}", serde_json::to_string(&p).unwrap());

    // p ⪯ q coefficientwise, with the first failing exponent as a witness.
    let small = LaurentPoly::v();
    println!("v <= v + v^3     : {}", small.leq_coefficientwise(&p));
    println!("witness for v^3+v <= v: {:?}", p.first_excess(&small));

    let big = LaurentPoly::constant(i64::MAX);
    println!("overflow         : {:?}", big.checked_add(&LaurentPoly::one()));
    Ok(())
}
