//! Exact rationals with an inline machine-word fast path.
//!
//! Almost every coefficient produced by q-oscillator products is a small
//! integer, so values that fit in `i64 / i64` are kept inline and only
//! promoted to an arbitrary-precision rational on overflow. A value that fits inline is
//! always stored inline, which keeps structural equality exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use malachite_base::num::arithmetic::traits::{Reciprocal, Sign};
use malachite_nz::integer::Integer as BigInt;
use malachite_q::Rational as BigRational;
use num_integer::Integer;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    /// Reduced, `den > 0`.
    Small { num: i64, den: i64 },
    Big(BigRational),
}

impl Rational {
    pub const ZERO: Rational = Rational::Small { num: 0, den: 1 };
    pub const ONE: Rational = Rational::Small { num: 1, den: 1 };

    pub fn from_int(n: i64) -> Self {
        Rational::Small { num: n, den: 1 }
    }

    /// `num / den`; `None` when `den == 0`.
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(Self::from_i128(num as i128, den as i128))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
            if n != i64::MIN && d != i64::MIN {
                let g = (n.unsigned_abs()).gcd(&d.unsigned_abs()) as i64;
                let (n, d) = (n / g, d / g);
                return if d < 0 {
                    Rational::Small { num: -n, den: -d }
                } else {
                    Rational::Small { num: n, den: d }
                };
            }
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(num), Ok(den)) => Rational::Small { num, den },
            _ => Rational::Big(BigRational::from_integers(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(b: BigRational) -> Self {
        if let (Ok(d), Ok(n)) = (u64::try_from(b.denominator_ref()), u64::try_from(b.numerator_ref())) {
            if let (Ok(d), Ok(n)) = (i64::try_from(d), i64::try_from(n)) {
                let num = if b.sign() == Ordering::Less { -n } else { n };
                return Rational::Small { num, den: d };
            }
        }
        Rational::Big(b)
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small { num, den } => {
                BigRational::from_integers(BigInt::from(*num), BigInt::from(*den))
            }
            Rational::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rational::Small { num: 1, den: 1 })
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small { den, .. } => *den == 1,
            Rational::Big(b) => *b.denominator_ref() == 1u32,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small { num, .. } => *num < 0,
            Rational::Big(b) => b.sign() == Ordering::Less,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small { num, den } => Self::from_i128(*den as i128, *num as i128),
            Rational::Big(b) => Self::from_big(b.reciprocal()),
        })
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Rational::ONE;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Some(acc)
    }
}

/// Runs `f` on a borrowed big form, converting only inline values.
fn big_ref<T>(r: &Rational, f: impl FnOnce(&BigRational) -> T) -> T {
    match r {
        Rational::Big(b) => f(b),
        small => f(&small.to_big()),
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        if let (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) =
            (self, rhs)
        {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Rational::Small { num: s, den: 1 };
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(x), Some(y)) = (a.checked_mul(d), c.checked_mul(b)) {
                if let (Some(n), Some(m)) = (x.checked_add(y), b.checked_mul(d)) {
                    return Rational::from_i128(n, m);
                }
            }
        }
        Rational::from_big(big_ref(self, |x| big_ref(rhs, |y| x + y)))
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        if let (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) =
            (self, rhs)
        {
            if *b == 1 && *d == 1 {
                if let Some(p) = a.checked_mul(*c) {
                    return Rational::Small { num: p, den: 1 };
                }
            }
            let (n, m) = (*a as i128 * *c as i128, *b as i128 * *d as i128);
            return Rational::from_i128(n, m);
        }
        Rational::from_big(big_ref(self, |x| big_ref(rhs, |y| x * y)))
    }
}

/// Panics on division by zero; callers check with [`Rational::recip`].
impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self * &rhs.recip().expect("rational division by zero")
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small { num, den } => match num.checked_neg() {
                Some(n) => Rational::Small { num: n, den: *den },
                None => Rational::from_big(-self.to_big()),
            },
            Rational::Big(b) => Rational::from_big(-b),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => big_ref(self, |x| big_ref(other, |y| x.cmp(y))),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small { num, den: 1 } => write!(f, "{num}"),
            Rational::Small { num, den } => write!(f, "{num}/{den}"),
            Rational::Big(b) => write!(f, "{b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn reduces_and_normalizes_sign() {
        assert_eq!(r(6, -4), r(-3, 2));
        assert_eq!(r(0, -7), Rational::ZERO);
        assert!(Rational::new(1, 0).is_none());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Rational::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small { .. }));
        let neg_min = -Rational::from_int(i64::MIN);
        assert!(matches!(neg_min, Rational::Big(_)));
    }

    #[test]
    fn field_ops() {
        assert_eq!(&r(1, 2) + &r(1, 3), r(5, 6));
        assert_eq!(&r(1, 2) - &r(1, 2), Rational::ZERO);
        assert_eq!(&r(2, 3) * &r(3, 2), Rational::ONE);
        assert_eq!(r(2, 3).recip().unwrap(), r(3, 2));
        assert_eq!(r(3, 2).pow(-2).unwrap(), r(4, 9));
        assert!(r(-1, 3) < r(1, 4));
    }
}
