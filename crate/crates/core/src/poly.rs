//! Exact integer Laurent polynomials in one variable.
//!
//! Two formal variables are used throughout the crate: the Conway variable
//! `z`, and `t^{1/2}`. In the second case exponents are stored in units of
//! `t^{1/2}`, so `t^j` is stored under the key `2j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The formal variable a [`LaurentPoly`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Conway variable `z`; exponents are powers of `z`.
    Z,
    /// Alexander variable; exponents count powers of `t^{1/2}`.
    HalfT,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Z => write!(f, "z"),
            Scale::HalfT => write!(f, "half_t"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("scale mismatch: {0} vs {1}")]
    ScaleMismatch(Scale, Scale),
    #[error("evaluation at zero of a polynomial with negative exponents")]
    ZeroEvaluation,
    #[error("polynomial has half-integer powers of t")]
    NonIntegerExponent,
    #[error("{0} is not the square of a rational number")]
    NotASquare(BigRational),
    #[error("operation requires a polynomial in {expected}, got {got}")]
    WrongScale { expected: Scale, got: Scale },
}

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
///
/// No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    scale: Scale,
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero(scale: Scale) -> Self {
        Self { scale, terms: BTreeMap::new() }
    }

    pub fn one(scale: Scale) -> Self {
        Self::monomial(scale, 0, 1)
    }

    pub fn constant(scale: Scale, c: impl Into<BigInt>) -> Self {
        Self::monomial(scale, 0, c)
    }

    pub fn monomial(scale: Scale, exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(scale);
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(scale: Scale, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero(scale);
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Polynomial in integer powers of `t`, given as `(j, a_j)` pairs.
    pub fn from_t_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        Self::from_terms(Scale::HalfT, terms.into_iter().map(|(j, c)| (2 * j, c)))
    }

    /// The Conway variable `z`.
    pub fn z() -> Self {
        Self::monomial(Scale::Z, 1, 1)
    }

    /// `q(t) = t^{1/2} - t^{-1/2}`.
    pub fn q() -> Self {
        Self::from_terms(Scale::HalfT, [(1, 1), (-1, -1)])
    }

    /// `r(t) = -(t - 2 + t^{-1})`, the Euler characteristic of the
    /// `V ⊗ V` factor in the second skein case.
    pub fn r() -> Self {
        Self::from_t_terms([(1, -1), (0, 2), (-1, -1)])
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterates `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    fn check_scale(&self, other: &Self) -> Result<(), PolyError> {
        if self.scale == other.scale {
            Ok(())
        } else {
            Err(PolyError::ScaleMismatch(self.scale, other.scale))
        }
    }

    fn require_scale(&self, expected: Scale) -> Result<(), PolyError> {
        if self.scale == expected {
            Ok(())
        } else {
            Err(PolyError::WrongScale { expected, got: self.scale })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_scale(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_scale(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_scale(other)?;
        let mut out = Self::zero(self.scale);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.scale);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Self::from_terms(self.scale, self.terms.iter().map(|(e, c)| (*e, c * k)))
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self {
            scale: self.scale,
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Substitutes `x ↦ x^{-1}`.
    pub fn inverted(&self) -> Self {
        Self {
            scale: self.scale,
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Substitutes `x ↦ -x`.
    pub fn negate_variable(&self) -> Self {
        Self::from_terms(
            self.scale,
            self.terms.iter().map(|(e, c)| (*e, if e.is_odd() { -c } else { c.clone() })),
        )
    }

    /// `p(x) == p(x^{-1})`.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.terms.get(&-e) == Some(c))
    }

    pub fn sum_abs_coeffs(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn has_integer_t_exponents(&self) -> bool {
        self.scale == Scale::HalfT && self.terms.keys().all(|e| e.is_even())
    }

    /// Exact division in `Z[x, x^{-1}]`. Returns `None` when `divisor` does
    /// not divide `self` (or is zero).
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if self.scale != divisor.scale || divisor.is_zero() {
            return None;
        }
        let (d_lo, d_hi) = (divisor.min_exp()?, divisor.max_exp()?);
        let d_lead = divisor.leading_coeff()?.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.scale);
        while let (Some(r_lo), Some(r_hi)) = (rem.min_exp(), rem.max_exp()) {
            if r_hi - r_lo < d_hi - d_lo {
                return None;
            }
            let (q, r) = rem.terms[&r_hi].div_rem(&d_lead);
            if !r.is_zero() {
                return None;
            }
            let e = r_hi - d_hi;
            for (de, dc) in &divisor.terms {
                rem.add_term(de + e, -(dc * &q));
            }
            quot.add_term(e, q);
        }
        Some(quot)
    }

    /// Substitutes `z = t^{1/2} - t^{-1/2}` into a Conway polynomial.
    pub fn conway_to_alexander(&self) -> Result<Self, PolyError> {
        self.require_scale(Scale::Z)?;
        let q = Self::q();
        let mut out = Self::zero(Scale::HalfT);
        let mut power = Self::one(Scale::HalfT);
        let mut k = 0;
        for (e, c) in &self.terms {
            assert!(*e >= 0, "Conway polynomial with negative exponent");
            while k < *e {
                power = &power * &q;
                k += 1;
            }
            out = &out + &power.scaled(c);
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    ///
    /// In the `half_t` scale `x` is the value of `t`. When some exponent is
    /// odd (a half-integer power of `t`), `x` must be the square of a
    /// rational, and its nonnegative root is used for `t^{1/2}`.
    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational, PolyError> {
        if x.is_zero() {
            if self.min_exp().is_some_and(|e| e < 0) {
                return Err(PolyError::ZeroEvaluation);
            }
            return Ok(BigRational::from_integer(self.coeff(0)));
        }
        match self.scale {
            Scale::Z => Ok(self.eval_raw(x, 1)),
            Scale::HalfT if self.has_integer_t_exponents() => Ok(self.eval_raw(x, 2)),
            Scale::HalfT => {
                let root = rational_sqrt(x).ok_or_else(|| PolyError::NotASquare(x.clone()))?;
                Ok(self.eval_raw(&root, 1))
            }
        }
    }

    /// Evaluates at `t^{1/2} = s` (half_t scale) or `z = s`.
    pub fn evaluate_at_root(&self, s: &BigRational) -> Result<BigRational, PolyError> {
        if s.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(PolyError::ZeroEvaluation);
        }
        Ok(self.eval_raw(s, 1))
    }

    fn eval_raw(&self, x: &BigRational, step: i64) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| BigRational::from_integer(c.clone()) * pow_rational(x, e / step))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Value at `t = -1`: the alternating sum `Σ (-1)^j a_j`.
    pub fn det_from_alexander(&self) -> Result<BigInt, PolyError> {
        self.require_scale(Scale::HalfT)?;
        if !self.has_integer_t_exponents() {
            return Err(PolyError::NonIntegerExponent);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| if (e / 2).is_odd() { -c } else { c.clone() })
            .sum())
    }

    /// JSON form `{"scale": ..., "terms": {"<exp>": coeff}}`; exponents are in
    /// units of the scale's variable (`t^{1/2}` for `half_t`).
    pub fn to_json(&self) -> serde_json::Value {
        let terms: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| (e.to_string(), bigint_to_json(c)))
            .collect();
        serde_json::json!({ "scale": self.scale, "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let scale: Scale = serde_json::from_value(v.get("scale")?.clone()).ok()?;
        let mut p = Self::zero(scale);
        for (k, c) in v.get("terms")?.as_object()? {
            let e: i64 = k.parse().ok()?;
            let c = match c {
                serde_json::Value::Number(n) => BigInt::from(n.as_i64()?),
                serde_json::Value::String(s) => s.parse().ok()?,
                _ => return None,
            };
            p.add_term(e, c);
        }
        Some(p)
    }
}

pub fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    match i64::try_from(c) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::String(c.to_string()),
    }
}

fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = match self.scale {
            Scale::Z => "z",
            Scale::HalfT => "t",
        };
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let exp = match self.scale {
                Scale::Z => Some(e.to_string()),
                Scale::HalfT if e.is_even() => Some((e / 2).to_string()),
                Scale::HalfT => None,
            };
            if *e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match exp {
                Some(s) if s == "1" => write!(f, "{var}")?,
                Some(s) => write!(f, "{var}^{s}")?,
                None => write!(f, "{var}^({e}/2)")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// # Panics
            /// On scale mismatch; use the `checked_*` form to get an error.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            scale: self.scale,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
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

    fn t(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_t_terms(terms.iter().copied())
    }

    fn zp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(Scale::Z, terms.iter().copied())
    }

    #[test]
    fn q_squared_is_minus_r() {
        let q = LaurentPoly::q();
        assert_eq!(&q * &q, t(&[(1, 1), (0, -2), (-1, 1)]));
        assert_eq!(&q * &q, -LaurentPoly::r());
    }

    #[test]
    fn difference_of_squares() {
        let plus = LaurentPoly::from_terms(Scale::HalfT, [(1, 1), (-1, 1)]);
        assert_eq!(&LaurentPoly::q() * &plus, t(&[(1, 1), (-1, -1)]));
    }

    #[test]
    fn adding_zero() {
        let p = t(&[(2, 3), (-1, -4)]);
        assert_eq!(&p + &LaurentPoly::zero(Scale::HalfT), p);
    }

    #[test]
    fn scale_mismatch_is_an_error() {
        let err = LaurentPoly::z().checked_add(&LaurentPoly::q()).unwrap_err();
        assert_eq!(err, PolyError::ScaleMismatch(Scale::Z, Scale::HalfT));
        assert!(LaurentPoly::z().checked_mul(&LaurentPoly::q()).is_err());
    }

    #[test]
    fn conway_substitution() {
        let one = LaurentPoly::one(Scale::Z);
        assert_eq!(one.conway_to_alexander().unwrap(), LaurentPoly::one(Scale::HalfT));
        assert_eq!(zp(&[(2, 1), (0, 1)]).conway_to_alexander().unwrap(), t(&[(1, 1), (0, -1), (-1, 1)]));
        assert_eq!(zp(&[(2, -1), (0, 1)]).conway_to_alexander().unwrap(), t(&[(1, -1), (0, 3), (-1, -1)]));
        assert!(LaurentPoly::q().conway_to_alexander().is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(t(&[(1, 1), (0, -1), (-1, 1)]).det_from_alexander().unwrap(), BigInt::from(-3));
        assert_eq!(LaurentPoly::one(Scale::HalfT).det_from_alexander().unwrap(), BigInt::from(1));
        assert_eq!(t(&[(1, -1), (0, 3), (-1, -1)]).det_from_alexander().unwrap(), BigInt::from(5));
        assert_eq!(LaurentPoly::q().det_from_alexander(), Err(PolyError::NonIntegerExponent));
    }

    #[test]
    fn evaluation() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let trefoil = t(&[(1, 1), (0, -1), (-1, 1)]);
        assert_eq!(trefoil.evaluate(&r(1, 1)).unwrap(), r(1, 1));
        assert_eq!(trefoil.evaluate(&r(2, 1)).unwrap(), r(3, 2));
        assert_eq!(LaurentPoly::zero(Scale::HalfT).evaluate(&r(7, 3)).unwrap(), r(0, 1));
        assert_eq!(trefoil.evaluate(&r(0, 1)), Err(PolyError::ZeroEvaluation));
        // q(4) = 2 - 1/2
        assert_eq!(LaurentPoly::q().evaluate(&r(4, 1)).unwrap(), r(3, 2));
        assert!(matches!(LaurentPoly::q().evaluate(&r(2, 1)), Err(PolyError::NotASquare(_))));
        assert_eq!(LaurentPoly::q().evaluate_at_root(&r(2, 1)).unwrap(), r(3, 2));
    }

    #[test]
    fn rendering() {
        let p = t(&[(3, 1), (2, -1), (0, 1), (-2, -1), (-3, 1)]);
        assert_eq!(p.to_string(), "t^3 - t^2 + 1 - t^-2 + t^-3");
        assert_eq!(t(&[(1, 2), (0, -3), (-1, 2)]).to_string(), "2t - 3 + 2t^-1");
        assert_eq!(LaurentPoly::q().to_string(), "t^(1/2) - t^(-1/2)");
        assert_eq!(zp(&[(2, 1), (0, 1)]).to_string(), "z^2 + 1");
        assert_eq!(LaurentPoly::zero(Scale::Z).to_string(), "0");
        assert_eq!((-LaurentPoly::one(Scale::HalfT)).to_string(), "-1");
    }

    #[test]
    fn json_layout() {
        let p = t(&[(1, 1), (0, -1), (-1, 1)]);
        let v = p.to_json();
        assert_eq!(v["scale"], "half_t");
        assert_eq!(v["terms"]["2"], 1);
        assert_eq!(v["terms"]["0"], -1);
        assert_eq!(LaurentPoly::from_json(&v), Some(p));
    }

    #[test]
    fn exact_division() {
        let q = LaurentPoly::q();
        let p = t(&[(2, 3), (1, -1), (-1, 5)]);
        assert_eq!((&p * &q).div_exact(&q), Some(p.clone()));
        assert_eq!(p.div_exact(&q), None);
        assert_eq!(LaurentPoly::zero(Scale::HalfT).div_exact(&q), Some(LaurentPoly::zero(Scale::HalfT)));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..6, -20i64..20), 0..6)
            .prop_map(|v| LaurentPoly::from_terms(Scale::HalfT, v))
    }

    fn arb_conway() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((0i64..6, -20i64..20), 0..5).prop_map(|v| LaurentPoly::from_terms(Scale::Z, v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn substitution_is_a_ring_homomorphism(a in arb_conway(), b in arb_conway()) {
            let phi = |p: &LaurentPoly| p.conway_to_alexander().unwrap();
            prop_assert_eq!(phi(&(&a * &b)), &phi(&a) * &phi(&b));
            prop_assert_eq!(phi(&(&a + &b)), &phi(&a) + &phi(&b));
        }

        #[test]
        fn json_round_trip(a in arb_poly()) {
            prop_assert_eq!(LaurentPoly::from_json(&a.to_json()), Some(a));
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
