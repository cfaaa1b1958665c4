//! Deodhar's spherical and antispherical modules.
//!
//! For `I ⊆ S`, the right `H`-modules induced from the rank one
//! `H_I`-modules on which every `δ_t` (`t ∈ I`) acts by `v^{-1}`
//! (spherical) or by `-v` (antispherical). Both have the standard basis
//! `δ^I_x = 1 ⊗ δ_x` indexed by the minimal coset representatives `^I W`,
//! an induced bar involution, and a canonical basis (`c_x` resp. `d_x`)
//! found here by a bar-invariance solve.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coxeter::{ElementId, Generator, GeneratorSet, GroupTable, Side};
use crate::error::{Error, Result};
use crate::hecke::{BarTable, HeckeElt, KlTable};
use crate::laurent::LaurentPoly;
use crate::triangular::{self, Terms};

/// Which rank one `H_I`-module is induced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `δ_t` acts by `v^{-1}`; canonical basis `c_x`, polynomials `m`.
    Spherical,
    /// `δ_t` acts by `-v`; canonical basis `d_x`, polynomials `n`.
    Antispherical,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Spherical => "spherical",
            Flavor::Antispherical => "antispherical",
        }
    }

    /// The scalar by which `δ_t` acts for `t ∈ I`.
    pub fn scalar(self) -> LaurentPoly {
        match self {
            Flavor::Spherical => LaurentPoly::v_inv(),
            Flavor::Antispherical => LaurentPoly::monomial(-1, 1),
        }
    }

    /// `scalar^k`.
    pub fn scalar_power(self, k: usize) -> LaurentPoly {
        let k = k as i32;
        match self {
            Flavor::Spherical => LaurentPoly::monomial(1, -k),
            Flavor::Antispherical => LaurentPoly::monomial(if k % 2 == 0 { 1 } else { -1 }, k),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spherical" => Ok(Flavor::Spherical),
            "antispherical" => Ok(Flavor::Antispherical),
            _ => Err(format!("unknown flavor {s:?} (expected spherical or antispherical)")),
        }
    }
}

const NOT_REP: u32 = u32::MAX;

/// A parabolic subset, its coset representatives and a flavor.
#[derive(Debug, Clone)]
pub struct ParabolicContext {
    group: Arc<GroupTable>,
    subset: GeneratorSet,
    flavor: Flavor,
    reps: Vec<ElementId>,
    rep_index: Vec<u32>,
}

impl ParabolicContext {
    pub fn new(group: Arc<GroupTable>, subset: GeneratorSet, flavor: Flavor) -> Result<Self> {
        if let Some(bad) = subset.iter().find(|&s| s >= group.rank()) {
            return Err(Error::InvalidGenerator {
                generator: bad + 1,
                rank: group.rank(),
            });
        }
        let reps = group.min_coset_reps(subset);
        let mut rep_index = vec![NOT_REP; group.len()];
        for (i, x) in reps.iter().enumerate() {
            rep_index[x.index()] = i as u32;
        }
        Ok(ParabolicContext {
            group,
            subset,
            flavor,
            reps,
            rep_index,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn subset(&self) -> GeneratorSet {
        self.subset
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `^I W` within the enumerated range, in length-then-ShortLex order.
    pub fn reps(&self) -> &[ElementId] {
        &self.reps
    }

    pub fn is_rep(&self, x: ElementId) -> bool {
        self.rep_index[x.index()] != NOT_REP
    }

    fn rep_position(&self, x: ElementId) -> Result<usize> {
        match self.rep_index[x.index()] {
            NOT_REP => Err(Error::NotCosetRep(self.group.display(x))),
            i => Ok(i as usize),
        }
    }

    /// `1 ⊗ h`: writing `w = u·x` with `u ∈ W_I` and `x ∈ ^I W`,
    /// `δ_w ↦ scalar^{ℓ(u)} δ^I_x`.
    pub fn project(&self, h: &HeckeElt) -> Result<ParabolicElt> {
        let mut out = ParabolicElt::zero();
        for (w, p) in h.terms() {
            let (x, k) = self.group.coset_decompose(w, self.subset);
            out.add_term(x, &p.checked_mul(&self.flavor.scalar_power(k))?)?;
        }
        Ok(out)
    }

    /// Right action of `δ_s`. For `x ∈ ^I W`: if `xs ∈ ^I W` it acts as in
    /// `H`; otherwise `xs = tx` with `t ∈ I` and `δ_s` acts by the flavor
    /// scalar.
    pub fn act_delta_gen(&self, m: &ParabolicElt, s: Generator) -> Result<ParabolicElt> {
        let mut out = ParabolicElt::zero();
        for (x, p) in m.terms() {
            self.rep_position(x)?;
            let xs = self.group.mult_gen(x, s, Side::Right)?;
            if self.is_rep(xs) {
                out.add_term(xs, p)?;
                if xs < x {
                    out.add_term(x, &p.shift(-1)?)?;
                    out.add_term(x, &p.shift(1)?.checked_neg()?)?;
                }
            } else {
                out.add_term(x, &p.checked_mul(&self.flavor.scalar())?)?;
            }
        }
        Ok(out)
    }

    /// `bar(δ^I_x) = 1 ⊗ bar(δ_x)`, extended semilinearly.
    pub fn bar_parabolic(&self, m: &ParabolicElt, bars: &BarTable) -> Result<ParabolicElt> {
        let mut out = ParabolicElt::zero();
        for (x, p) in m.terms() {
            self.rep_position(x)?;
            let image = self.project(bars.bar_delta(x))?;
            out.add_multiple(&image, &p.bar())?;
        }
        Ok(out)
    }
}

/// An element `Σ p_x δ^I_x` of a parabolic module.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParabolicElt {
    terms: Terms,
}

impl ParabolicElt {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `δ^I_x`.
    pub fn delta(x: ElementId) -> Self {
        let mut terms = Terms::new();
        terms.insert(x, LaurentPoly::one());
        ParabolicElt { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ElementId, LaurentPoly)>) -> Result<Self> {
        let mut m = ParabolicElt::zero();
        for (x, p) in terms {
            m.add_term(x, &p)?;
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (ElementId, &LaurentPoly)> {
        self.terms.iter().map(|(&x, p)| (x, p))
    }

    pub fn coefficient(&self, x: ElementId) -> LaurentPoly {
        self.terms.get(&x).cloned().unwrap_or_default()
    }

    pub fn get(&self, x: ElementId) -> Option<&LaurentPoly> {
        self.terms.get(&x)
    }

    pub fn add_term(&mut self, x: ElementId, p: &LaurentPoly) -> Result<()> {
        let mut entry = self.terms.remove(&x).unwrap_or_default();
        entry.add_assign_checked(p)?;
        if !entry.is_zero() {
            self.terms.insert(x, entry);
        }
        Ok(())
    }

    /// `self += p · other`.
    pub fn add_multiple(&mut self, other: &ParabolicElt, p: &LaurentPoly) -> Result<()> {
        for (x, q) in other.terms() {
            self.add_term(x, &p.checked_mul(q)?)?;
        }
        Ok(())
    }

    pub(crate) fn as_map(&self) -> &Terms {
        &self.terms
    }

    pub fn display(&self, table: &GroupTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .rev()
            .map(|(x, p)| format!("({p})·δI[{}]", table.display(x)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Canonical basis and both polynomial families of one parabolic module:
/// `m_{y,x}`, `m^{y,x}` (spherical) or `n_{y,x}`, `n^{y,x}`
/// (antispherical).
#[derive(Debug)]
pub struct ParabolicKlTable {
    ctx: ParabolicContext,
    bar_images: Vec<ParabolicElt>,
    basis: Vec<ParabolicElt>,
    inverse: Vec<ParabolicElt>,
}

impl ParabolicKlTable {
    pub fn build(ctx: ParabolicContext, bars: &BarTable) -> Result<Self> {
        let group = ctx.group().clone();
        let bar_images = ctx
            .reps()
            .iter()
            .map(|&x| ctx.project(bars.bar_delta(x)))
            .collect::<Result<Vec<_>>>()?;
        let mut basis = Vec::with_capacity(ctx.reps().len());
        for &x in ctx.reps() {
            let below: Vec<ElementId> = group.lower_interval(x).into_iter().filter(|&y| ctx.is_rep(y)).collect();
            let terms = triangular::self_dual_column(
                x,
                &below,
                |y, z| bar_images[ctx.rep_index[z.index()] as usize].get(y),
                |e| group.display(e),
            )?;
            basis.push(ParabolicElt { terms });
        }
        let mut inverse = Vec::with_capacity(ctx.reps().len());
        for &x in ctx.reps() {
            let terms = triangular::invert_column(
                x,
                |z| basis[ctx.rep_index[z.index()] as usize].as_map(),
                |z| group.length(z),
            )?;
            inverse.push(ParabolicElt { terms });
        }
        Ok(ParabolicKlTable {
            ctx,
            bar_images,
            basis,
            inverse,
        })
    }

    pub fn context(&self) -> &ParabolicContext {
        &self.ctx
    }

    pub fn flavor(&self) -> Flavor {
        self.ctx.flavor()
    }

    /// `bar(δ^I_x)`.
    pub fn bar_delta(&self, x: ElementId) -> Result<&ParabolicElt> {
        Ok(&self.bar_images[self.ctx.rep_position(x)?])
    }

    /// `c_x` or `d_x` in the standard basis.
    pub fn parabolic_kl_basis(&self, x: ElementId) -> Result<&ParabolicElt> {
        Ok(&self.basis[self.ctx.rep_position(x)?])
    }

    /// `m_{y,x}` or `n_{y,x}`.
    pub fn parabolic_kl_poly(&self, y: ElementId, x: ElementId) -> Result<LaurentPoly> {
        self.ctx.rep_position(y)?;
        Ok(self.parabolic_kl_basis(x)?.coefficient(y))
    }

    /// `m^{y,x}` or `n^{y,x}`.
    pub fn parabolic_inverse_kl_poly(&self, y: ElementId, x: ElementId) -> Result<LaurentPoly> {
        self.ctx.rep_position(y)?;
        Ok(self.inverse[self.ctx.rep_position(x)?].coefficient(y))
    }

    pub(crate) fn inverse_ref(&self, y: ElementId, x: ElementId) -> Option<&LaurentPoly> {
        self.inverse[self.ctx.rep_index[x.index()] as usize].get(y)
    }

    /// The column `y ↦ m^{y,x}` (or `n^{y,x}`).
    pub fn inverse_column(&self, x: ElementId) -> Result<&ParabolicElt> {
        Ok(&self.inverse[self.ctx.rep_position(x)?])
    }

    /// `Σ_{y≤z≤x, z ∈ ^I W} (-1)^{ℓ(z)-ℓ(y)} p^{y,z} p_{z,x} = [y = x]`.
    pub fn check_inversion_identity(&self, y: ElementId, x: ElementId) -> Result<bool> {
        let group = self.ctx.group();
        let mut sum = LaurentPoly::zero();
        for (z, pzx) in self.parabolic_kl_basis(x)?.terms() {
            if let Some(pyz) = self.inverse[self.ctx.rep_position(z)?].get(y) {
                let sign = if (group.length(z) + group.length(y)).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                sum.add_scaled(&pyz.checked_mul(pzx)?, sign, 0)?;
            }
        }
        Ok(if y == x {
            sum == LaurentPoly::one()
        } else {
            sum.is_zero()
        })
    }
}

/// A pair where `n^{z,x}` and `h^{z,x}` differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentificationMismatch {
    pub z: ElementId,
    pub x: ElementId,
    pub parabolic: LaurentPoly,
    pub classical: LaurentPoly,
}

/// Compares `n^{z,x}` with `h^{z,x}` for every pair of coset
/// representatives. Both sides come from separate computations: the
/// parabolic table from its own bar-invariance solve, the classical one
/// from the `μ`-recursion.
pub fn check_soergel_identification(table: &ParabolicKlTable, hecke: &KlTable) -> Result<Vec<IdentificationMismatch>> {
    if table.flavor() != Flavor::Antispherical {
        return Err(Error::FlavorMismatch {
            expected: Flavor::Antispherical.name(),
            found: table.flavor().name(),
        });
    }
    let reps = table.context().reps();
    let mut out = Vec::new();
    for &x in reps {
        for &z in reps {
            let parabolic = table.parabolic_inverse_kl_poly(z, x)?;
            let classical = hecke.inverse_kl_poly(z, x);
            if parabolic != classical {
                out.push(IdentificationMismatch {
                    z,
                    x,
                    parabolic,
                    classical,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;

    fn setup(spec: &str, subset: &[usize], flavor: Flavor) -> (ParabolicContext, BarTable) {
        let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec(spec).unwrap(), None).unwrap());
        let bars = BarTable::build(g.clone()).unwrap();
        let ctx = ParabolicContext::new(g, GeneratorSet::from_generators(subset.iter().copied()), flavor).unwrap();
        (ctx, bars)
    }

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let (ctx, _) = setup("A2", &[0], Flavor::Antispherical);
        let g = ctx.group().clone();
        let e = ElementId::IDENTITY;
        let s2 = g.parse_element("2").unwrap();
        let t = g.parse_element("1").unwrap();
        assert_eq!(ctx.project(&HeckeElt::delta(s2)).unwrap(), ParabolicElt::delta(s2));
        assert_eq!(
            ctx.project(&HeckeElt::delta(t)).unwrap(),
            ParabolicElt::from_terms([(e, lp(&[(1, -1)]))]).unwrap()
        );
        let (sph, _) = setup("A2", &[0], Flavor::Spherical);
        assert_eq!(
            sph.project(&HeckeElt::delta(t)).unwrap(),
            ParabolicElt::from_terms([(e, LaurentPoly::v_inv())]).unwrap()
        );
    }

    #[test]
    fn action_cases() {
        let (ctx, _) = setup("A2", &[0], Flavor::Antispherical);
        let g = ctx.group().clone();
        let e = ElementId::IDENTITY;
        let s2 = g.parse_element("2").unwrap();
        // xs ∈ ^I W, length-additive
        assert_eq!(
            ctx.act_delta_gen(&ParabolicElt::delta(e), 1).unwrap(),
            ParabolicElt::delta(s2)
        );
        // xs ∉ ^I W
        assert_eq!(
            ctx.act_delta_gen(&ParabolicElt::delta(e), 0).unwrap(),
            ParabolicElt::from_terms([(e, lp(&[(1, -1)]))]).unwrap()
        );
        // xs < x
        assert_eq!(
            ctx.act_delta_gen(&ParabolicElt::delta(s2), 1).unwrap(),
            ParabolicElt::from_terms([(e, LaurentPoly::one()), (s2, lp(&[(-1, 1), (1, -1)]))]).unwrap()
        );
        // Coset reps only.
        let t = g.parse_element("1").unwrap();
        assert!(matches!(
            ctx.act_delta_gen(&ParabolicElt::delta(t), 0),
            Err(Error::NotCosetRep(_))
        ));
    }

    #[test]
    fn bar_of_simple_rep() {
        // bar(δ_{s2}) = δ_{s2} + (v - v^{-1}) δ_e projects unchanged.
        let (ctx, bars) = setup("A2", &[0], Flavor::Antispherical);
        let g = ctx.group().clone();
        let e = ElementId::IDENTITY;
        let s2 = g.parse_element("2").unwrap();
        assert_eq!(
            ctx.bar_parabolic(&ParabolicElt::delta(e), &bars).unwrap(),
            ParabolicElt::delta(e)
        );
        let expected = ParabolicElt::from_terms([(s2, LaurentPoly::one()), (e, lp(&[(-1, -1), (1, 1)]))]).unwrap();
        assert_eq!(ctx.bar_parabolic(&ParabolicElt::delta(s2), &bars).unwrap(), expected);
    }

    #[test]
    fn canonical_basis_a2() {
        let (ctx, bars) = setup("A2", &[0], Flavor::Antispherical);
        let g = ctx.group().clone();
        let e = ElementId::IDENTITY;
        let s2 = g.parse_element("2").unwrap();
        let s21 = g.parse_element("2,1").unwrap();
        let t = ParabolicKlTable::build(ctx, &bars).unwrap();
        assert_eq!(t.parabolic_kl_basis(e).unwrap(), &ParabolicElt::delta(e));
        assert_eq!(
            t.parabolic_kl_basis(s2).unwrap(),
            &ParabolicElt::from_terms([(s2, LaurentPoly::one()), (e, LaurentPoly::v())]).unwrap()
        );
        // d_{s2 s1} = δ_{s2 s1} + v δ_{s2}: the δ_e terms of b_{s2 s1} cancel.
        assert!(t.parabolic_kl_poly(e, s21).unwrap().is_zero());
        assert_eq!(t.parabolic_kl_poly(s2, s21).unwrap(), LaurentPoly::v());
        assert_eq!(t.parabolic_inverse_kl_poly(e, s21).unwrap(), lp(&[(2, 1)]));
        assert_eq!(t.parabolic_inverse_kl_poly(s21, s21).unwrap(), LaurentPoly::one());

        let (sph, bars) = setup("A2", &[0], Flavor::Spherical);
        let t = ParabolicKlTable::build(sph, &bars).unwrap();
        assert_eq!(t.parabolic_kl_poly(e, s21).unwrap(), lp(&[(2, 1)]));
        assert_eq!(t.parabolic_inverse_kl_poly(e, s2).unwrap(), LaurentPoly::v());
        assert!(t.parabolic_inverse_kl_poly(e, s21).unwrap().is_zero());
        assert_eq!(t.parabolic_inverse_kl_poly(s2, s21).unwrap(), LaurentPoly::v());
    }

    #[test]
    fn soergel_flavor_check() {
        let (ctx, bars) = setup("A2", &[0], Flavor::Spherical);
        let kl = KlTable::build(ctx.group().clone()).unwrap();
        let t = ParabolicKlTable::build(ctx, &bars).unwrap();
        assert!(matches!(
            check_soergel_identification(&t, &kl),
            Err(Error::FlavorMismatch { .. })
        ));
    }

    #[test]
    fn invalid_subset() {
        let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec("A2").unwrap(), None).unwrap());
        assert!(ParabolicContext::new(g, GeneratorSet::from_generators([4]), Flavor::Spherical).is_err());
    }
}
