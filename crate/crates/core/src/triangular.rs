//! Unitriangular solves shared by the Hecke algebra and the parabolic
//! modules. Basis elements are indexed by [`ElementId`], whose order is a
//! linear extension of the Bruhat order.

use std::collections::BTreeMap;

use crate::coxeter::ElementId;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

pub(crate) type Terms = BTreeMap<ElementId, LaurentPoly>;

/// Finds the unique `c = Σ_y h_y e_y` with `h_x = 1`, `h_y ∈ vZ[v]` for
/// `y ≠ x`, and `bar(c) = c`, where `bar(e_z) = Σ_y r(y, z) e_y`.
///
/// `below` lists every `y < x` that may carry a nonzero coefficient.
/// Coefficients are determined from the top down: comparing the `e_y`
/// coefficients of `c` and `bar(c)` gives `h_y - bar(h_y) = q` with
/// `q = Σ_{z > y} bar(h_z) r(y, z)`, and `h_y` is the positive part of
/// `q`.
pub(crate) fn self_dual_column<'a, R>(
    x: ElementId,
    below: &[ElementId],
    r: R,
    name: impl Fn(ElementId) -> String,
) -> Result<Terms>
where
    R: Fn(ElementId, ElementId) -> Option<&'a LaurentPoly>,
{
    let mut order: Vec<ElementId> = below.iter().copied().filter(|&y| y < x).collect();
    order.sort_unstable_by(|a, b| b.cmp(a));
    order.dedup();
    let mut solved: Vec<(ElementId, LaurentPoly)> = vec![(x, LaurentPoly::one())];
    for y in order {
        let mut q = LaurentPoly::zero();
        for (z, hz) in &solved {
            if let Some(ryz) = r(y, *z) {
                q.add_assign_checked(&hz.bar().checked_mul(ryz)?)?;
            }
        }
        let fail = |reason: &str| Error::SolveFailed {
            y: name(y),
            x: name(x),
            reason: reason.to_string(),
        };
        if q.coefficient(0) != 0 {
            return Err(fail("nonzero constant term"));
        }
        if q.bar() != q.checked_neg()? {
            return Err(fail("correction term is not anti-invariant"));
        }
        let h = q.positive_part();
        if !h.is_zero() {
            solved.push((y, h));
        }
    }
    Ok(solved.into_iter().collect())
}

/// Given the unitriangular columns `c_z = e_z + Σ_{y<z} (...) e_y`,
/// expresses `e_x = Σ_y (-1)^{ℓ(x)-ℓ(y)} p_y c_y` and returns the `p_y`.
///
/// Works from the top down: the largest remaining basis index `z` has
/// coefficient `(-1)^{ℓ(x)-ℓ(z)} p_z`, and subtracting that multiple of
/// `c_z` eliminates it.
pub(crate) fn invert_column<'a, C, L>(x: ElementId, column: C, length: L) -> Result<Terms>
where
    C: Fn(ElementId) -> &'a Terms,
    L: Fn(ElementId) -> usize,
{
    let mut remainder: Terms = BTreeMap::new();
    remainder.insert(x, LaurentPoly::one());
    let mut out = Terms::new();
    while let Some((z, coeff)) = remainder.pop_last() {
        for (&y, p) in column(z).iter().filter(|(&y, _)| y != z) {
            let mut entry = remainder.remove(&y).unwrap_or_default();
            entry.add_scaled(&coeff.checked_mul(p)?, -1, 0)?;
            if !entry.is_zero() {
                remainder.insert(y, entry);
            }
        }
        let sign = (length(x) + length(z)) % 2;
        let p = if sign == 0 { coeff } else { coeff.checked_neg()? };
        out.insert(z, p);
    }
    Ok(out)
}
