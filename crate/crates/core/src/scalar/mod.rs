//! Exact coefficient field: rational functions in `t = q^{1/4}` over the
//! Gaussian rationals.
//!
//! Every power `q^{k/4}` that the realizations need is an integer power of
//! `t`, so a single Laurent ring covers all of them.

mod gauss;
mod laurent;
mod rational;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use gauss::GaussianRational;
pub use laurent::LaurentPoly;
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at t = {0}")]
    Pole(GaussianRational),
    #[error("{0}")]
    Domain(String),
}

/// A quarter-integer `k/4`, stored as the integer `k` (the exponent of `t`
/// that `q^{k/4}` becomes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quarter(pub i64);

impl Quarter {
    pub const ZERO: Quarter = Quarter(0);

    pub fn from_int(n: i64) -> Self {
        Quarter(4 * n)
    }

    /// `num / den`, rejected unless it is a multiple of 1/4.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        if (4 * num) % den != 0 {
            return Err(ScalarError::Domain(format!(
                "{num}/{den} is not a quarter-integer"
            )));
        }
        Ok(Quarter(4 * num / den))
    }

    pub fn from_rational(r: &Rational) -> Result<Self, ScalarError> {
        let four = Rational::from_int(4);
        let x = &four * r;
        match x {
            Rational::Small { num, den: 1 } => Ok(Quarter(num)),
            _ => Err(ScalarError::Domain(format!("{r} is not a quarter-integer"))),
        }
    }

    /// Exponent of `t`.
    pub fn t_units(self) -> i64 {
        self.0
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.0, 4).unwrap()
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

/// A reduced rational function `num / den` in `t`.
///
/// Canonical form: `den` has lowest exponent zero and highest coefficient
/// one, and `num` and `den` share no polynomial factor. Two scalars are
/// equal exactly when their canonical forms coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    /// `n / d`. Panics if `d == 0`; used for literal constants only.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(GaussianRational::ratio(n, d).expect("nonzero denominator"))
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    /// `t^k`.
    pub fn t_pow(k: i64) -> Self {
        Self::from_poly(LaurentPoly::t_pow(k))
    }

    /// `q = t^4`.
    pub fn q() -> Self {
        Self::t_pow(4)
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        Scalar {
            num,
            den: LaurentPoly::one(),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn from_parts(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = den.low().unwrap();
        let (mut num, mut den) = (num.shift(-shift), den.to_poly());
        if den.span() > 0 {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
            }
        }
        let lead = den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inv().unwrap();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Scalar { num, den }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is one, i.e. this is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// The value when this is a constant (no `t` dependence).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.is_zero() {
            return Some(GaussianRational::ZERO);
        }
        (self.den.is_one() && self.num.low() == Some(0) && self.num.span() == 0)
            .then(|| self.num.coeff(0))
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let a_cof = self.den.exact_div(&g).unwrap();
        let b_cof = other.den.exact_div(&g).unwrap();
        let num = self.num.mul(&b_cof).add(&other.num.mul(&a_cof));
        let den = self.den.mul(&b_cof);
        Self::reduce(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        // Cross-cancel first so the products stay small.
        let (mut an, mut ad) = (self.num.clone(), self.den.clone());
        let (mut bn, mut bd) = (other.num.clone(), other.den.clone());
        if !bd.is_one() {
            let g = an.gcd(&bd);
            if !g.is_one() {
                an = an.exact_div(&g).unwrap();
                bd = bd.exact_div(&g).unwrap();
            }
        }
        if !ad.is_one() {
            let g = bn.gcd(&ad);
            if !g.is_one() {
                bn = bn.exact_div(&g).unwrap();
                ad = ad.exact_div(&g).unwrap();
            }
        }
        let num = an.mul(&bn);
        let den = ad.mul(&bd);
        let lead = den.leading().unwrap().clone();
        if lead.is_one() {
            Scalar { num, den }
        } else {
            let inv = lead.inv().unwrap();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Result<Self, ScalarError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        if base.den.is_one() && base.num.is_monomial() {
            let e = exp.unsigned_abs() as i64;
            let c = base.num.coeff(base.num.low().unwrap());
            let c = c.pow(e).unwrap();
            return Ok(Self::from_poly(LaurentPoly::monomial(
                c,
                base.num.low().unwrap() * e,
            )));
        }
        let mut e = exp.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `q^k` for a quarter-integer `k`, i.e. `t^{4k}`.
    pub fn q_power(k: Quarter) -> Self {
        Self::t_pow(k.t_units())
    }

    /// `(x)_q = (1 - q^x) / (1 - q)`.
    pub fn qnum(x: i64) -> Self {
        if x >= 0 {
            Self::from_poly(LaurentPoly::from_terms(
                (0..x).map(|k| (4 * k, GaussianRational::ONE)),
            ))
        } else {
            // (x)_q = -q^x (-x)_q
            Self::qnum(-x).mul(&Self::t_pow(4 * x)).neg()
        }
    }

    /// `[x]_q = (q^x - q^{-x}) / (q - q^{-1})`.
    pub fn qbracket(x: i64) -> Self {
        Self::sym_bracket(Quarter::from_int(x), Quarter::from_int(1))
    }

    /// `[x]_p` with `p = q^base`, for quarter-integer `x` and `base` such
    /// that `x·base` is again a quarter-integer. Both are given in t-units
    /// (`Quarter`), so `p^x = t^{4·x·base}`.
    pub fn sym_bracket(x: Quarter, base: Quarter) -> Self {
        assert!(base.0 != 0, "bracket base must not be q^0");
        let prod = x.0 * base.0;
        assert!(prod % 4 == 0, "p^x must be an integer power of t");
        let e = prod / 4;
        if e == 0 {
            return Self::zero();
        }
        // (p^x - p^-x)/(p - p^-1) with p = t^b, p^x = t^e
        let num = LaurentPoly::from_terms([
            (e, GaussianRational::ONE),
            (-e, -GaussianRational::ONE),
        ]);
        let den = LaurentPoly::from_terms([
            (base.0, GaussianRational::ONE),
            (-base.0, -GaussianRational::ONE),
        ]);
        Self::reduce(num, den)
    }

    /// Exact value at `t = t0`.
    pub fn eval_at(&self, t0: &GaussianRational) -> Result<GaussianRational, ScalarError> {
        if t0.is_zero() {
            return Err(ScalarError::Domain(
                "evaluation at t = 0 is undefined for Laurent scalars".into(),
            ));
        }
        let d = self.den.eval(t0).unwrap();
        if d.is_zero() {
            return Err(ScalarError::Pole(t0.clone()));
        }
        let n = self.num.eval(t0).unwrap();
        Ok(&n * &d.inv().unwrap())
    }

    /// `lim_{t -> 1}`. The canonical form has no common factor left, so
    /// a vanishing denominator at `t = 1` is a genuine pole.
    pub fn limit_at_one(&self) -> Result<GaussianRational, ScalarError> {
        self.eval_at(&GaussianRational::ONE)
    }

    /// `(numerator exponent span, denominator exponent span)`.
    pub fn degree_bounds(&self) -> (i64, i64) {
        if self.is_zero() {
            return (0, 0);
        }
        (self.num.span(), self.den.span())
    }
}

/// Renders in expression-language syntax, e.g. `(t^2 + 1)/(t^4 - 1)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let multi = |p: &LaurentPoly| {
            p.terms().count() > 1
                || p.terms().next().is_some_and(|(e, c)| {
                    (e != 0 && !(c.is_one() || c.is_atomic())) || (e == 0 && !c.is_atomic())
                })
        };
        if self.den.is_one() {
            return self.num.fmt_terms(f);
        }
        if multi(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if multi(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::q()
    }

    fn one_minus_q() -> Scalar {
        Scalar::one().sub(&q())
    }

    #[test]
    fn additive_inverse() {
        let t = Scalar::t_pow(1);
        assert!(t.add(&t.neg()).is_zero());
    }

    #[test]
    fn multiplicative_inverse() {
        let a = one_minus_q().inv().unwrap();
        assert!(a.mul(&one_minus_q()).is_one());
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn inverse_is_canonical() {
        let x = Scalar::t_pow(2).add(&Scalar::one());
        let inv = x.inv().unwrap();
        assert!(inv.numerator().is_one());
        assert_eq!(inv.denominator(), x.numerator());
        assert!(x.mul(&inv).is_one());
        assert_eq!(inv.to_string(), "1/(t^2 + 1)");
    }

    #[test]
    fn denominator_normalization() {
        // 3t / (2t^3 + 4t) = (3/2) / (t^2 + 2)
        let num = LaurentPoly::monomial(GaussianRational::from_int(3), 1);
        let den = LaurentPoly::from_terms([
            (3, GaussianRational::from_int(2)),
            (1, GaussianRational::from_int(4)),
        ]);
        let s = Scalar::from_parts(num, den).unwrap();
        assert_eq!(s.denominator().low(), Some(0));
        assert!(s.denominator().leading().unwrap().is_one());
        assert_eq!(s.to_string(), "(3/2)/(t^2 + 2)");
    }

    #[test]
    fn q_power_examples() {
        assert_eq!(Scalar::q_power(Quarter::from_int(1)), Scalar::t_pow(4));
        assert_eq!(Scalar::q_power(Quarter::from_ratio(-1, 2).unwrap()), Scalar::t_pow(-2));
        assert_eq!(Scalar::q_power(Quarter::from_ratio(1, 4).unwrap()), Scalar::t_pow(1));
        assert!(matches!(Quarter::from_ratio(1, 3), Err(ScalarError::Domain(_))));
    }

    #[test]
    fn qnum_examples() {
        assert!(Scalar::qnum(0).is_zero());
        assert_eq!(Scalar::qnum(2), Scalar::one().add(&q()));
        // negative arguments follow the defining formula
        let direct = Scalar::one()
            .sub(&Scalar::t_pow(-8))
            .div(&one_minus_q())
            .unwrap();
        assert_eq!(Scalar::qnum(-2), direct);
    }

    #[test]
    fn qbracket_two_by_division() {
        // (q^2 - q^-2) / (q - q^-1) = q + q^-1
        let expected = q().add(&q().inv().unwrap());
        assert_eq!(Scalar::qbracket(2), expected);
        let num = Scalar::t_pow(8).sub(&Scalar::t_pow(-8));
        let den = Scalar::t_pow(4).sub(&Scalar::t_pow(-4));
        assert_eq!(num.div(&den).unwrap(), expected);
    }

    #[test]
    fn qbracket_is_odd() {
        for x in -6..=6 {
            assert_eq!(Scalar::qbracket(-x), Scalar::qbracket(x).neg());
        }
    }

    #[test]
    fn qnum_matches_bracket() {
        // (x)_q = [x]_{q^{1/2}} q^{(x-1)/2}
        for x in 1..=7i64 {
            let half = Quarter(2);
            let lhs = Scalar::qnum(x);
            let rhs = Scalar::sym_bracket(Quarter::from_int(x), half).mul(&Scalar::t_pow(2 * (x - 1)));
            assert_eq!(lhs, rhs, "x = {x}");
        }
        // and with the full bracket when x - 1 is even: [x]_q q^{x-1} = (x)_{q^2}
        for x in [1i64, 3, 5, 7] {
            let lhs = Scalar::qbracket(x).mul(&Scalar::t_pow(4 * (x - 1)));
            let q2num = Scalar::from_poly(LaurentPoly::from_terms(
                (0..x).map(|k| (8 * k, GaussianRational::ONE)),
            ));
            assert_eq!(lhs, q2num, "x = {x}");
        }
    }

    #[test]
    fn eval_examples() {
        let half = GaussianRational::ratio(1, 2).unwrap();
        let a = one_minus_q().inv().unwrap();
        assert_eq!(a.eval_at(&half).unwrap(), GaussianRational::ratio(16, 15).unwrap());
        assert_eq!(
            Scalar::t_pow(3).eval_at(&GaussianRational::from_int(2)).unwrap(),
            GaussianRational::from_int(8)
        );
        let pole = Scalar::t_pow(1).sub(&Scalar::one()).inv().unwrap();
        assert!(matches!(
            pole.eval_at(&GaussianRational::ONE),
            Err(ScalarError::Pole(_))
        ));
        assert!(matches!(
            Scalar::t_pow(-1).eval_at(&GaussianRational::ZERO),
            Err(ScalarError::Domain(_))
        ));
    }

    #[test]
    fn limit_examples() {
        let q2 = Scalar::t_pow(8);
        let x = one_minus_q().div(&Scalar::one().sub(&q2)).unwrap();
        assert_eq!(x.limit_at_one().unwrap(), GaussianRational::ratio(1, 2).unwrap());
        assert_eq!(Scalar::qnum(3).limit_at_one().unwrap(), GaussianRational::from_int(3));
        assert!(matches!(
            one_minus_q().inv().unwrap().limit_at_one(),
            Err(ScalarError::Pole(_))
        ));
        for x in -8..=8 {
            assert_eq!(
                Scalar::qbracket(x).limit_at_one().unwrap(),
                GaussianRational::from_int(x)
            );
        }
    }

    #[test]
    fn degree_bound_examples() {
        let a = Scalar::t_pow(3).add(&Scalar::t_pow(-1));
        assert_eq!(a.degree_bounds(), (4, 0));
        assert_eq!(one_minus_q().inv().unwrap().degree_bounds(), (0, 4));
        assert_eq!(Scalar::zero().degree_bounds(), (0, 0));
    }

    #[test]
    fn imaginary_unit_stays_imaginary_only_when_used() {
        let g = Scalar::qnum(3).mul(&q().add(&Scalar::ratio(1, 3)).inv().unwrap());
        assert!(g.is_real());
        assert!(!Scalar::i().mul(&g).is_real());
        assert!(Scalar::i().mul(&Scalar::i()).add(&Scalar::one()).is_zero());
    }
}
