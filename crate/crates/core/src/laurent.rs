//! Exact Laurent polynomials in `v` with integer coefficients.
//!
//! Every polynomial value in the crate lives here: Kazhdan-Lusztig
//! polynomials, their inverses, the parabolic families and the structure
//! constants of the Hecke algebra. Coefficients are `i64` and every
//! arithmetic operation is checked; overflow is reported as
//! [`Error::Overflow`] and never wraps.
//!
//! The `checked_*` methods return a [`Result`]. The operator impls
//! (`+`, `-`, `*`) are shorthands for them that panic on overflow, which is
//! convenient in tests and examples.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Laurent polynomial `Σ a_k v^k` stored sparsely, keyed by exponent.
///
/// The map never holds a zero coefficient, so structural equality is value
/// equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<i32, i64>", into = "BTreeMap<i32, i64>")]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The indeterminate `v`.
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    /// `v^{-1}`.
    pub fn v_inv() -> Self {
        Self::monomial(1, -1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · v^k`.
    pub fn monomial(c: i64, k: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Result<Self> {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c)?;
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    /// The coefficient of `v^k`.
    pub fn coefficient(&self, k: i32) -> i64 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Adds `c · v^k` in place.
    pub fn add_term(&mut self, k: i32, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        match self.coeffs.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(c).ok_or(Error::Overflow)?;
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    /// `self += c · v^shift · other`.
    pub fn add_scaled(&mut self, other: &LaurentPoly, c: i64, shift: i32) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for (k, a) in other.terms() {
            let k = k.checked_add(shift).ok_or(Error::Overflow)?;
            let a = a.checked_mul(c).ok_or(Error::Overflow)?;
            self.add_term(k, a)?;
        }
        Ok(())
    }

    /// `self += other`.
    pub fn add_assign_checked(&mut self, other: &LaurentPoly) -> Result<()> {
        self.add_scaled(other, 1, 0)
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = self.clone();
        out.add_assign_checked(other)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = self.clone();
        out.add_scaled(other, -1, 0)?;
        Ok(out)
    }

    pub fn checked_neg(&self) -> Result<LaurentPoly> {
        self.checked_scale(-1)
    }

    /// Multiplies every coefficient by `c`.
    pub fn checked_scale(&self, c: i64) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        out.add_scaled(self, c, 0)?;
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (k, c) in self.terms() {
            out.add_scaled(other, c, k)?;
        }
        Ok(out)
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Result<LaurentPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&e, &c)| e.checked_add(k).map(|e| (e, c)).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(LaurentPoly { coeffs })
    }

    /// The involution `v ↦ v^{-1}`.
    pub fn bar(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (-k, c)).collect(),
        }
    }

    /// Coefficient-wise comparison: `self ⪯ other` iff `other - self` has
    /// no negative coefficient.
    pub fn leq_coefficientwise(&self, other: &LaurentPoly) -> bool {
        self.first_excess(other).is_none()
    }

    /// The smallest exponent `k` at which `other - self` has a negative
    /// coefficient, if any.
    pub fn first_excess(&self, other: &LaurentPoly) -> Option<i32> {
        let mut exps: Vec<i32> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        exps.sort_unstable();
        exps.dedup();
        exps.into_iter()
            .find(|&k| (other.coefficient(k) as i128) - (self.coefficient(k) as i128) < 0)
    }

    /// The smallest exponent `k` at which `v^shift · other - self` has a
    /// negative coefficient, if any. Same as
    /// `self.first_excess(&other.shift(shift)?)` without the allocation.
    pub fn first_excess_shifted(&self, other: &LaurentPoly, shift: i32) -> Option<i32> {
        let other_at = |k: i32| k.checked_sub(shift).map_or(0, |j| other.coefficient(j));
        let from_self = self.terms().find(|&(k, c)| c > other_at(k)).map(|(k, _)| k);
        let from_other = other
            .terms()
            .filter(|&(_, c)| c < 0)
            .filter_map(|(j, c)| j.checked_add(shift).map(|k| (k, c)))
            .find(|&(k, c)| self.coefficient(k) > c)
            .map(|(k, _)| k);
        match (from_self, from_other) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// True iff every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|&c| c > 0)
    }

    /// Membership in `Z_{≥0}[v]`.
    pub fn is_nonnegative_polynomial(&self) -> bool {
        self.is_nonnegative() && self.min_exponent().is_none_or(|k| k >= 0)
    }

    /// Membership in `vZ[v]`.
    pub fn in_v_z_v(&self) -> bool {
        self.min_exponent().is_none_or(|k| k >= 1)
    }

    /// True iff every exponent is congruent to `parity` modulo 2.
    pub fn exponents_have_parity(&self, parity: i32) -> bool {
        self.coeffs.keys().all(|&k| (k - parity).rem_euclid(2) == 0)
    }

    /// The part of `self` with strictly positive exponents.
    pub fn positive_part(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.range(1..).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    /// Compact machine-readable form: `c*v^k` terms joined by `+` in
    /// ascending exponent order, `0` for the zero polynomial.
    pub fn to_term_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(k, c)| format!("{c}*v^{k}"))
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Inverse of [`LaurentPoly::to_term_string`].
    pub fn parse_term_string(s: &str) -> Result<LaurentPoly> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentPoly::zero());
        }
        let bad = || Error::MalformedMatrix(format!("bad polynomial term string {s:?}"));
        let mut p = LaurentPoly::zero();
        for term in s.split('+') {
            let (c, k) = term.split_once("*v^").ok_or_else(bad)?;
            let c: i64 = c.parse().map_err(|_| bad())?;
            let k: i32 = k.parse().map_err(|_| bad())?;
            if c == 0 || p.coefficient(k) != 0 {
                return Err(bad());
            }
            p.add_term(k, c)?;
        }
        Ok(p)
    }
}

impl TryFrom<BTreeMap<i32, i64>> for LaurentPoly {
    type Error = String;

    fn try_from(coeffs: BTreeMap<i32, i64>) -> std::result::Result<Self, String> {
        if coeffs.values().any(|&c| c == 0) {
            return Err("zero coefficient in Laurent polynomial".to_string());
        }
        Ok(LaurentPoly { coeffs })
    }
}

impl From<LaurentPoly> for BTreeMap<i32, i64> {
    fn from(p: LaurentPoly) -> Self {
        p.coeffs
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LaurentPoly::parse_term_string(s)
    }
}

impl fmt::Display for LaurentPoly {
    /// Human-readable form, ascending exponents, e.g. `v^-1 + 2v - 3v^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag != 1 || k == 0 {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "v")?,
                _ => write!(f, "v^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("Laurent coefficient overflow")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("Laurent coefficient overflow")
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("Laurent coefficient overflow")
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.checked_neg().expect("Laurent coefficient overflow")
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied()).unwrap()
    }

    #[test]
    fn add_examples() {
        let v = LaurentPoly::v();
        let vi = LaurentPoly::v_inv();
        assert_eq!(&v + &vi, p(&[(-1, 1), (1, 1)]));
        assert!((&v + &(-&v)).is_zero());
        let s = &v + &vi;
        assert_eq!(&s + &s, p(&[(-1, 2), (1, 2)]));
    }

    #[test]
    fn mul_examples() {
        let s = LaurentPoly::v() + LaurentPoly::v_inv();
        assert_eq!(&s * &LaurentPoly::one(), s);
        assert_eq!(&s * &s, p(&[(-2, 1), (0, 2), (2, 1)]));
    }

    #[test]
    fn quadratic_roots() {
        // (x + v)(x - v^{-1}) vanishes at x = v^{-1} and at x = -v.
        let quad = |x: &LaurentPoly| (x + &LaurentPoly::v()) * (x - &LaurentPoly::v_inv());
        assert!(quad(&LaurentPoly::v_inv()).is_zero());
        assert!(quad(&-LaurentPoly::v()).is_zero());
        assert!(!quad(&LaurentPoly::v()).is_zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentPoly::v().bar(), LaurentPoly::v_inv());
        assert_eq!(LaurentPoly::constant(3).bar(), LaurentPoly::constant(3));
        let s = LaurentPoly::v() + LaurentPoly::v_inv();
        assert_eq!(s.bar(), s);
    }

    #[test]
    fn order_examples() {
        let q = p(&[(0, 2), (4, 1)]);
        assert!(LaurentPoly::zero().leq_coefficientwise(&q));
        assert!(LaurentPoly::v().leq_coefficientwise(&p(&[(1, 1), (3, 1)])));
        let lhs = p(&[(-1, 1), (1, 1)]);
        assert!(!lhs.leq_coefficientwise(&LaurentPoly::v()));
        assert_eq!(lhs.first_excess(&LaurentPoly::v()), Some(-1));
    }

    #[test]
    fn coefficient_examples() {
        let q = p(&[(1, 1), (3, 2)]);
        assert_eq!(q.coefficient(3), 2);
        assert_eq!(LaurentPoly::v().coefficient(0), 0);
        assert_eq!(LaurentPoly::v().coefficient(1), 1);
    }

    #[test]
    fn overflow_is_an_error() {
        let big = LaurentPoly::constant(i64::MAX);
        assert_eq!(big.checked_add(&LaurentPoly::one()), Err(Error::Overflow));
        assert_eq!(big.checked_mul(&LaurentPoly::constant(2)), Err(Error::Overflow));
        assert_eq!(LaurentPoly::monomial(1, i32::MAX).shift(1), Err(Error::Overflow));
        assert_eq!(LaurentPoly::constant(i64::MIN).checked_neg(), Err(Error::Overflow));
    }

    #[test]
    fn display_and_term_string() {
        let q = p(&[(-1, 1), (1, 2), (4, -3), (0, -1)]);
        assert_eq!(q.to_string(), "v^-1 - 1 + 2v - 3v^4");
        assert_eq!(q.to_term_string(), "1*v^-1+-1*v^0+2*v^1+-3*v^4");
        assert_eq!(LaurentPoly::parse_term_string(&q.to_term_string()).unwrap(), q);
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::zero().to_term_string(), "0");
        assert!(LaurentPoly::parse_term_string("1*v^1+x").is_err());
        assert!(LaurentPoly::parse_term_string("0*v^1").is_err());
    }

    #[test]
    fn json_uses_string_exponent_keys() {
        let q = p(&[(-2, 1), (3, 5)]);
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(json, r#"{"-2":1,"3":5}"#);
        let back: LaurentPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"1":0}"#).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i32..=6, -20i64..=20), 0..6).prop_map(|t| LaurentPoly::from_terms(t).unwrap())
    }

    fn arb_nonneg() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i32..=6, 0i64..=20), 0..6).prop_map(|t| LaurentPoly::from_terms(t).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn bar_is_ring_involution(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
            prop_assert_eq!(a.bar().bar(), a);
        }

        #[test]
        fn order_is_partial_order(a in arb_poly(), b in arb_poly(), n in arb_nonneg()) {
            prop_assert!(a.leq_coefficientwise(&a));
            prop_assert!(a.leq_coefficientwise(&(&a + &n)));
            if a.leq_coefficientwise(&b) && b.leq_coefficientwise(&a) {
                prop_assert_eq!(&a, &b);
            }
            if a.leq_coefficientwise(&b) {
                prop_assert!((&a + &n).leq_coefficientwise(&(&b + &n)));
                let bn = &b + &n;
                prop_assert!(a.leq_coefficientwise(&bn));
            }
        }

        #[test]
        fn shifted_excess_matches_allocating_version(a in arb_poly(), b in arb_poly(), k in -4i32..=4) {
            prop_assert_eq!(a.first_excess_shifted(&b, k), a.first_excess(&b.shift(k).unwrap()));
        }

        #[test]
        fn canonical_form_is_stable(a in arb_poly()) {
            prop_assert!(a.terms().all(|(_, c)| c != 0));
            let renormalized = LaurentPoly::from_terms(a.terms()).unwrap();
            prop_assert_eq!(&renormalized, &a);
            prop_assert_eq!(LaurentPoly::parse_term_string(&a.to_term_string()).unwrap(), a);
        }
    }
}
