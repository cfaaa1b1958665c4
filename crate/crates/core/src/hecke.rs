//! The Hecke algebra in the standard basis `{δ_x}`, its bar involution,
//! the Kazhdan-Lusztig basis `{b_x}` (normalized so that `b_s = δ_s + v`),
//! and the polynomials `h_{y,x}`, `h^{y,x}` and `μ(y,x)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coxeter::{ElementId, Generator, GroupTable, Side};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::triangular::{self, Terms};

/// A Hecke algebra element `Σ p_x δ_x`, stored sparsely.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElt {
    terms: Terms,
}

impl HeckeElt {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The standard basis element `δ_x`.
    pub fn delta(x: ElementId) -> Self {
        Self::monomial(x, LaurentPoly::one())
    }

    /// `p · δ_x`.
    pub fn monomial(x: ElementId, p: LaurentPoly) -> Self {
        let mut terms = Terms::new();
        if !p.is_zero() {
            terms.insert(x, p);
        }
        HeckeElt { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ElementId, LaurentPoly)>) -> Result<Self> {
        let mut h = HeckeElt::zero();
        for (x, p) in terms {
            h.add_term(x, &p, 1, 0)?;
        }
        Ok(h)
    }

    pub(crate) fn from_map(terms: Terms) -> Self {
        debug_assert!(terms.values().all(|p| !p.is_zero()));
        HeckeElt { terms }
    }

    pub(crate) fn as_map(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in ascending element order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (ElementId, &LaurentPoly)> {
        self.terms.iter().map(|(&x, p)| (x, p))
    }

    pub fn support(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.terms.keys().copied()
    }

    /// The coefficient of `δ_x`.
    pub fn coefficient(&self, x: ElementId) -> LaurentPoly {
        self.terms.get(&x).cloned().unwrap_or_default()
    }

    pub fn get(&self, x: ElementId) -> Option<&LaurentPoly> {
        self.terms.get(&x)
    }

    /// `self += c · v^shift · p · δ_x`.
    pub fn add_term(&mut self, x: ElementId, p: &LaurentPoly, c: i64, shift: i32) -> Result<()> {
        let mut entry = self.terms.remove(&x).unwrap_or_default();
        entry.add_scaled(p, c, shift)?;
        if !entry.is_zero() {
            self.terms.insert(x, entry);
        }
        Ok(())
    }

    /// `self += p · other`.
    pub fn add_multiple(&mut self, other: &HeckeElt, p: &LaurentPoly) -> Result<()> {
        for (x, q) in other.terms() {
            self.add_term(x, &p.checked_mul(q)?, 1, 0)?;
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &HeckeElt) -> Result<HeckeElt> {
        let mut out = self.clone();
        out.add_multiple(other, &LaurentPoly::one())?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &HeckeElt) -> Result<HeckeElt> {
        let mut out = self.clone();
        out.add_multiple(other, &LaurentPoly::constant(-1))?;
        Ok(out)
    }

    /// Multiplication by a scalar polynomial.
    pub fn scale(&self, p: &LaurentPoly) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        out.add_multiple(self, p)?;
        Ok(out)
    }

    /// Multiplication by `δ_s` on the given side:
    /// `δ_x δ_s = δ_{xs}` if `xs > x`, else `δ_{xs} + (v^{-1} - v) δ_x`.
    pub fn mult_delta_gen(&self, table: &GroupTable, s: Generator, side: Side) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (x, p) in self.terms() {
            let xs = table.mult_gen(x, s, side)?;
            out.add_term(xs, p, 1, 0)?;
            if xs < x {
                out.add_term(x, p, 1, -1)?;
                out.add_term(x, p, -1, 1)?;
            }
        }
        Ok(out)
    }

    /// Multiplication by `b_s = δ_s + v` on the given side:
    /// `δ_x b_s = δ_{xs} + v δ_x` if `xs > x`, else `δ_{xs} + v^{-1} δ_x`.
    pub fn mult_b_gen(&self, table: &GroupTable, s: Generator, side: Side) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (x, p) in self.terms() {
            let xs = table.mult_gen(x, s, side)?;
            out.add_term(xs, p, 1, 0)?;
            out.add_term(x, p, 1, if xs > x { 1 } else { -1 })?;
        }
        Ok(out)
    }

    /// `self · δ_x`, multiplying along the canonical word of `x`.
    pub fn mult_delta(&self, table: &GroupTable, x: ElementId) -> Result<HeckeElt> {
        table
            .word(x)
            .iter()
            .try_fold(self.clone(), |h, &s| h.mult_delta_gen(table, s, Side::Right))
    }

    /// The product `self · other` in `H`.
    pub fn mul(&self, other: &HeckeElt, table: &GroupTable) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (y, q) in other.terms() {
            out.add_multiple(&self.mult_delta(table, y)?, q)?;
        }
        Ok(out)
    }

    /// The bar involution, computing each `bar(δ_x)` from scratch. Use
    /// [`BarTable`] when many images are needed.
    pub fn bar(&self, table: &GroupTable) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (x, p) in self.terms() {
            out.add_multiple(&bar_delta_along(table, table.word(x))?, &p.bar())?;
        }
        Ok(out)
    }

    /// Render as `p·δ[x] + ...` with elements in table notation.
    pub fn display(&self, table: &GroupTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .rev()
            .map(|(x, p)| format!("({p})·δ[{}]", table.display(x)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `bar(δ_x) = δ_{x^{-1}}^{-1}` for `x = s_1 ⋯ s_k` reduced, as the
/// product of the `δ_{s_i}^{-1} = δ_{s_i} + v - v^{-1}`.
pub fn bar_delta_along(table: &GroupTable, word: &[Generator]) -> Result<HeckeElt> {
    let shift = LaurentPoly::v() - LaurentPoly::v_inv();
    let mut h = HeckeElt::delta(ElementId::IDENTITY);
    for &s in word {
        let mut next = h.mult_delta_gen(table, s, Side::Right)?;
        next.add_multiple(&h, &shift)?;
        h = next;
    }
    Ok(h)
}

/// Memoized `bar(δ_x)` for every enumerated `x`.
#[derive(Debug)]
pub struct BarTable {
    group: Arc<GroupTable>,
    images: Vec<HeckeElt>,
}

impl BarTable {
    pub fn build(group: Arc<GroupTable>) -> Result<Self> {
        let shift = LaurentPoly::v() - LaurentPoly::v_inv();
        let mut images: Vec<HeckeElt> = Vec::with_capacity(group.len());
        for x in group.elements() {
            let image = match group.word(x).split_last() {
                None => HeckeElt::delta(x),
                Some((&s, _)) => {
                    let prefix = group.mult_gen(x, s, Side::Right)?;
                    let prev = &images[prefix.index()];
                    let mut next = prev.mult_delta_gen(&group, s, Side::Right)?;
                    next.add_multiple(prev, &shift)?;
                    next
                }
            };
            images.push(image);
        }
        Ok(BarTable { group, images })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    /// `bar(δ_x)`.
    pub fn bar_delta(&self, x: ElementId) -> &HeckeElt {
        &self.images[x.index()]
    }

    /// The bar involution on an arbitrary element.
    pub fn bar_element(&self, h: &HeckeElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (x, p) in h.terms() {
            out.add_multiple(self.bar_delta(x), &p.bar())?;
        }
        Ok(out)
    }
}

/// Computes `b_x` as the unique bar-invariant element of
/// `δ_x + Σ_{y<x} vZ[v] δ_y`, by a triangular solve against the `bar(δ)`
/// expansions. Independent of the recursion in [`KlTable`].
pub fn kl_basis_by_solve(bars: &BarTable, x: ElementId) -> Result<HeckeElt> {
    let group = bars.group();
    let below = group.lower_interval(x);
    let terms = triangular::self_dual_column(x, &below, |y, z| bars.bar_delta(z).get(y), |e| group.display(e))?;
    Ok(HeckeElt::from_map(terms))
}

/// Kazhdan-Lusztig basis, polynomials, `μ`-coefficients and inverse
/// polynomials for every enumerated element. Frozen after [`KlTable::build`].
#[derive(Debug)]
pub struct KlTable {
    group: Arc<GroupTable>,
    basis: Vec<HeckeElt>,
    mu: Vec<Vec<(ElementId, i64)>>,
    inverse: Vec<HeckeElt>,
}

impl KlTable {
    /// Builds `b_x` for all `x` in increasing length along canonical words:
    /// for `x < xs`, `b_{xs} = b_x b_s - Σ_{y : ys < y} μ(y, x) b_y`. Then
    /// each inverse column by a descending triangular solve.
    pub fn build(group: Arc<GroupTable>) -> Result<Self> {
        let n = group.len();
        let mut basis: Vec<HeckeElt> = Vec::with_capacity(n);
        let mut mu: Vec<Vec<(ElementId, i64)>> = Vec::with_capacity(n);
        for x in group.elements() {
            let b = match group.word(x).split_last() {
                None => HeckeElt::delta(x),
                Some((&s, _)) => {
                    let prefix = group.mult_gen(x, s, Side::Right)?;
                    let mut b = basis[prefix.index()].mult_b_gen(&group, s, Side::Right)?;
                    for &(y, m) in &mu[prefix.index()] {
                        if group.is_descent(y, s, Side::Right) {
                            b.add_multiple(&basis[y.index()], &LaurentPoly::constant(-m))?;
                        }
                    }
                    b
                }
            };
            for (y, p) in b.terms() {
                let ok = if y == x {
                    *p == LaurentPoly::one()
                } else {
                    y < x && p.in_v_z_v()
                };
                if !ok {
                    return Err(Error::Invariant(format!(
                        "b_{} has coefficient {p} at {}",
                        group.display(x),
                        group.display(y)
                    )));
                }
                if !p.is_nonnegative() {
                    return Err(Error::Invariant(format!(
                        "negative coefficient in h_{{{},{}}} = {p}",
                        group.display(y),
                        group.display(x)
                    )));
                }
            }
            mu.push(
                b.terms()
                    .filter(|&(y, _)| y != x)
                    .map(|(y, p)| (y, p.coefficient(1)))
                    .filter(|&(_, m)| m != 0)
                    .collect(),
            );
            basis.push(b);
        }
        let mut inverse = Vec::with_capacity(n);
        for x in group.elements() {
            let col = triangular::invert_column(x, |z| basis[z.index()].as_map(), |z| group.length(z))?;
            inverse.push(HeckeElt::from_map(col));
        }
        Ok(KlTable {
            group,
            basis,
            mu,
            inverse,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    /// `b_x` in the standard basis.
    pub fn kl_basis_element(&self, x: ElementId) -> &HeckeElt {
        &self.basis[x.index()]
    }

    /// `h_{y,x}`.
    pub fn kl_poly(&self, y: ElementId, x: ElementId) -> LaurentPoly {
        self.basis[x.index()].coefficient(y)
    }

    pub fn kl_poly_ref(&self, y: ElementId, x: ElementId) -> Option<&LaurentPoly> {
        self.basis[x.index()].get(y)
    }

    /// `μ(y,x)`, the coefficient of `v` in `h_{y,x}`.
    pub fn mu(&self, y: ElementId, x: ElementId) -> i64 {
        self.mu[x.index()].iter().find(|&&(z, _)| z == y).map_or(0, |&(_, m)| m)
    }

    /// Nonzero `μ(y,x)` for `y < x`.
    pub fn mu_column(&self, x: ElementId) -> &[(ElementId, i64)] {
        &self.mu[x.index()]
    }

    /// `h^{y,x}`.
    pub fn inverse_kl_poly(&self, y: ElementId, x: ElementId) -> LaurentPoly {
        self.inverse[x.index()].coefficient(y)
    }

    pub fn inverse_kl_poly_ref(&self, y: ElementId, x: ElementId) -> Option<&LaurentPoly> {
        self.inverse[x.index()].get(y)
    }

    /// The column `y ↦ h^{y,x}`.
    pub fn inverse_column(&self, x: ElementId) -> &HeckeElt {
        &self.inverse[x.index()]
    }

    /// Every exponent of `h^{y,x}` is congruent to `ℓ(x) - ℓ(y)` mod 2.
    pub fn check_parity(&self, y: ElementId, x: ElementId) -> bool {
        let parity = (self.group.length(x) + self.group.length(y)) as i32 % 2;
        self.inverse_kl_poly_ref(y, x)
            .is_none_or(|p| p.exponents_have_parity(parity))
    }

    /// `Σ_{y≤z≤x} (-1)^{ℓ(z)-ℓ(y)} h^{y,z} h_{z,x} = [y = x]`.
    pub fn check_inversion_identity(&self, y: ElementId, x: ElementId) -> Result<bool> {
        let mut sum = LaurentPoly::zero();
        for (z, hzx) in self.basis[x.index()].terms() {
            if let Some(hyz) = self.inverse_kl_poly_ref(y, z) {
                let sign = if (self.group.length(z) + self.group.length(y)).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                sum.add_scaled(&hyz.checked_mul(hzx)?, sign, 0)?;
            }
        }
        Ok(if y == x {
            sum == LaurentPoly::one()
        } else {
            sum.is_zero()
        })
    }
}

/// Expands `Σ_y p_y b_y` in the standard basis.
pub fn expand_kl_combination(table: &KlTable, coeffs: &BTreeMap<ElementId, LaurentPoly>) -> Result<HeckeElt> {
    let mut out = HeckeElt::zero();
    for (&y, p) in coeffs {
        out.add_multiple(table.kl_basis_element(y), p)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;

    fn group(spec: &str) -> Arc<GroupTable> {
        Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec(spec).unwrap(), None).unwrap())
    }

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied()).unwrap()
    }

    #[test]
    fn delta_products() {
        let g = group("A2");
        let e = ElementId::IDENTITY;
        let s = g.parse_element("1").unwrap();
        let de = HeckeElt::delta(e);
        assert_eq!(de.mult_delta_gen(&g, 0, Side::Right).unwrap(), HeckeElt::delta(s));
        // δ_s δ_s = δ_e + (v^{-1} - v) δ_s
        let sq = HeckeElt::delta(s).mult_delta_gen(&g, 0, Side::Right).unwrap();
        let expected = HeckeElt::from_terms([(e, LaurentPoly::one()), (s, lp(&[(-1, 1), (1, -1)]))]).unwrap();
        assert_eq!(sq, expected);
        // b_s δ_s = (δ_s + v) δ_s = δ_e + v^{-1} δ_s
        let bs = HeckeElt::from_terms([(s, LaurentPoly::one()), (e, LaurentPoly::v())]).unwrap();
        let bs_ds = bs.mult_delta_gen(&g, 0, Side::Right).unwrap();
        let expected = HeckeElt::from_terms([(e, LaurentPoly::one()), (s, LaurentPoly::v_inv())]).unwrap();
        assert_eq!(bs_ds, expected);
    }

    #[test]
    fn b_products() {
        let g = group("B2");
        let e = ElementId::IDENTITY;
        let s = g.parse_element("2").unwrap();
        let bs = HeckeElt::from_terms([(s, LaurentPoly::one()), (e, LaurentPoly::v())]).unwrap();
        assert_eq!(HeckeElt::delta(e).mult_b_gen(&g, 1, Side::Right).unwrap(), bs);
        let ds_bs = HeckeElt::delta(s).mult_b_gen(&g, 1, Side::Right).unwrap();
        let expected = HeckeElt::from_terms([(e, LaurentPoly::one()), (s, LaurentPoly::v_inv())]).unwrap();
        assert_eq!(ds_bs, expected);
        let bs_bs = bs.mult_b_gen(&g, 1, Side::Right).unwrap();
        assert_eq!(bs_bs, bs.scale(&(LaurentPoly::v() + LaurentPoly::v_inv())).unwrap());
        // Left and right agree on b_s b_s.
        assert_eq!(bs.mult_b_gen(&g, 1, Side::Left).unwrap(), bs_bs);
    }

    #[test]
    fn bar_examples() {
        let g = group("A2");
        let e = ElementId::IDENTITY;
        let s = g.parse_element("1").unwrap();
        assert_eq!(HeckeElt::delta(e).bar(&g).unwrap(), HeckeElt::delta(e));
        let expected = HeckeElt::from_terms([(s, LaurentPoly::one()), (e, lp(&[(-1, -1), (1, 1)]))]).unwrap();
        assert_eq!(HeckeElt::delta(s).bar(&g).unwrap(), expected);
        let bs = HeckeElt::from_terms([(s, LaurentPoly::one()), (e, LaurentPoly::v())]).unwrap();
        assert_eq!(bs.bar(&g).unwrap(), bs);
        let bars = BarTable::build(g.clone()).unwrap();
        for x in g.elements() {
            assert_eq!(bars.bar_delta(x), &HeckeElt::delta(x).bar(&g).unwrap());
        }
    }

    #[test]
    fn kl_basis_small() {
        let g = group("A2");
        let t = KlTable::build(g.clone()).unwrap();
        let e = ElementId::IDENTITY;
        let s = g.parse_element("1").unwrap();
        assert_eq!(t.kl_basis_element(e), &HeckeElt::delta(e));
        assert_eq!(t.kl_poly(e, s), LaurentPoly::v());
        assert_eq!(t.mu(e, s), 1);
        assert_eq!(t.mu(s, s), 0);
        // b_{s1 s2} = δ_{s1s2} + v δ_{s1} + v δ_{s2} + v^2 δ_e, fixed by the solve.
        let x = g.parse_element("1,2").unwrap();
        let bars = BarTable::build(g.clone()).unwrap();
        let solved = kl_basis_by_solve(&bars, x).unwrap();
        let expected = HeckeElt::from_terms([
            (x, LaurentPoly::one()),
            (s, LaurentPoly::v()),
            (g.parse_element("2").unwrap(), LaurentPoly::v()),
            (e, lp(&[(2, 1)])),
        ])
        .unwrap();
        assert_eq!(solved, expected);
        assert_eq!(t.kl_basis_element(x), &expected);
    }

    #[test]
    fn inverse_small() {
        let g = group("A2");
        let t = KlTable::build(g.clone()).unwrap();
        let e = ElementId::IDENTITY;
        let s = g.parse_element("1").unwrap();
        assert_eq!(t.inverse_kl_poly(e, e), LaurentPoly::one());
        assert_eq!(t.inverse_kl_poly(s, s), LaurentPoly::one());
        assert_eq!(t.inverse_kl_poly(e, s), LaurentPoly::v());
        // δ_{s1 s2} = (b_{s1} - v)(b_{s2} - v) gives h^{e, s1s2} = v^2.
        let x = g.parse_element("1,2").unwrap();
        assert_eq!(t.inverse_kl_poly(e, x), lp(&[(2, 1)]));
        assert!(t.check_parity(e, x));
        assert!(t.check_inversion_identity(e, s).unwrap());
        assert!(t.check_inversion_identity(x, x).unwrap());
    }

    #[test]
    fn first_nontrivial_polynomial_in_a3() {
        let g = group("A3");
        let t = KlTable::build(g.clone()).unwrap();
        let y = g.parse_element("2").unwrap();
        let x = g.parse_element("2,1,3,2").unwrap();
        assert_eq!(t.kl_poly(y, x), lp(&[(1, 1), (3, 1)]));
        assert_eq!(t.mu(y, x), 1);
    }

    #[test]
    fn out_of_range_propagates() {
        let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec("I2(inf)").unwrap(), Some(2)).unwrap());
        let top = g.parse_element("1,2").unwrap();
        assert!(matches!(
            HeckeElt::delta(top).mult_delta_gen(&g, 0, Side::Right),
            Err(Error::OutOfRange { .. })
        ));
        // Tables stay within the cap.
        assert!(KlTable::build(g.clone()).is_ok());
        assert!(BarTable::build(g).is_ok());
    }
}
