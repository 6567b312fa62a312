use std::fmt;

use super::gauss::GaussianRational;

/// A Laurent polynomial in `t` over Q(i).
///
/// Stored densely from the lowest exponent; both the first and the last
/// stored coefficient are nonzero, and the zero polynomial stores nothing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::ONE)
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: GaussianRational, exp: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: exp,
            coeffs: vec![c],
        }
    }

    /// `t^exp`.
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(GaussianRational::ONE, exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, GaussianRational)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![GaussianRational::ZERO; (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = &*slot + &c;
        }
        let mut p = LaurentPoly { low: lo, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// `high - low`, zero for the zero polynomial.
    pub fn span(&self) -> i64 {
        self.coeffs.len().saturating_sub(1) as i64
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &GaussianRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    pub fn coeff(&self, exp: i64) -> GaussianRational {
        let k = exp - self.low;
        if k < 0 || k >= self.coeffs.len() as i64 {
            GaussianRational::ZERO
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// The same coefficients with the lowest exponent moved to zero.
    pub fn to_poly(&self) -> Self {
        self.shift(-self.low)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(other.low);
        let hi = self.high().unwrap().max(other.high().unwrap());
        let mut coeffs = vec![GaussianRational::ZERO; (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + k] = c.clone();
        }
        let off = (other.low - lo) as usize;
        for (k, c) in other.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let slot = &mut coeffs[off + k];
                *slot = &*slot + c;
            }
        }
        let mut p = LaurentPoly { low: lo, coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.is_monomial() {
            return self.scale(&other.coeffs[0]).shift(other.low);
        }
        if self.is_monomial() {
            return other.scale(&self.coeffs[0]).shift(self.low);
        }
        let mut coeffs = vec![GaussianRational::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        let rhs: Vec<(usize, &GaussianRational)> = other
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs {
                let slot = &mut coeffs[i + j];
                *slot = &*slot + &(a * b);
            }
        }
        let mut p = LaurentPoly {
            low: self.low + other.low,
            coeffs,
        };
        p.trim();
        p
    }

    /// Evaluates at `t0`. `None` when `t0 = 0` and a negative power occurs.
    pub fn eval(&self, t0: &GaussianRational) -> Option<GaussianRational> {
        if self.is_zero() {
            return Some(GaussianRational::ZERO);
        }
        let mut acc = GaussianRational::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t0) + c;
        }
        if self.low == 0 {
            Some(acc)
        } else {
            Some(&acc * &t0.pow(self.low)?)
        }
    }

    /// Division with remainder of ordinary polynomials. Both operands are
    /// read from their lowest stored exponent upwards, i.e. `to_poly()` is
    /// applied implicitly. Panics if `divisor` is zero.
    fn poly_divrem(&self, divisor: &Self) -> (Self, Self) {
        let a = self.to_poly();
        let b = divisor.to_poly();
        assert!(!b.is_zero(), "polynomial division by zero");
        if a.coeffs.len() < b.coeffs.len() {
            return (Self::zero(), a);
        }
        let lead_inv = b.leading().unwrap().inv().expect("nonzero leading coefficient");
        let mut rem = a.coeffs;
        let db = b.coeffs.len() - 1;
        let mut quot = vec![GaussianRational::ZERO; rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    let slot = &mut rem[k + j];
                    *slot = &*slot - &(&c * bj);
                }
            }
            quot[k] = c;
        }
        let mut q = LaurentPoly { low: 0, coeffs: quot };
        q.trim();
        let mut r = LaurentPoly { low: 0, coeffs: rem };
        r.trim();
        (q, r)
    }

    /// Exact quotient `self / divisor` where `divisor` has lowest exponent
    /// zero. Returns `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.low != 0 {
            return self.exact_div(&divisor.to_poly()).map(|q| q.shift(-divisor.low));
        }
        if divisor.is_one() {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (q, r) = self.poly_divrem(divisor);
        r.is_zero().then(|| q.shift(self.low))
    }

    /// Monic gcd of the polynomial parts (powers of `t` are units and are
    /// ignored). The result has lowest exponent zero; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.to_poly();
        let mut b = other.to_poly();
        while !b.is_zero() {
            if b.span() == 0 {
                return Self::one();
            }
            let (_, r) = a.poly_divrem(&b);
            a = b;
            b = r.to_poly();
            // Keep coefficient growth in check.
            if let Some(l) = b.leading().cloned() {
                b = b.scale(&l.inv().unwrap());
            }
        }
        a.monic()
    }

    /// Scales so that the highest coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub(crate) fn fmt_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_real() && c.re.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => fmt_t_pow(f, e)?,
                _ => {
                    write!(f, "{mag}*")?;
                    fmt_t_pow(f, e)?;
                }
            }
        }
        Ok(())
    }
}

fn fmt_t_pow(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
    if e == 1 {
        write!(f, "t")
    } else {
        write!(f, "t^{e}")
    }
}

/// Terms in decreasing exponent order, e.g. `t^3 - 1/2*t + 2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, GaussianRational::from_int(c))))
    }

    #[test]
    fn trims_and_spans() {
        let x = p(&[(3, 1), (-1, 1), (0, 0)]);
        assert_eq!(x.low(), Some(-1));
        assert_eq!(x.high(), Some(3));
        assert_eq!(x.span(), 4);
        assert!(p(&[(2, 1), (2, -1)]).is_zero());
    }

    #[test]
    fn mul_and_divide() {
        // (t^2 + 1)(t - 1) = t^3 - t^2 + t - 1
        let a = p(&[(2, 1), (0, 1)]);
        let b = p(&[(1, 1), (0, -1)]);
        let prod = a.mul(&b);
        assert_eq!(prod, p(&[(3, 1), (2, -1), (1, 1), (0, -1)]));
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        assert!(a.exact_div(&b).is_none());
        // Laurent shift survives exact division.
        assert_eq!(prod.shift(-5).exact_div(&a).unwrap(), b.shift(-5));
    }

    #[test]
    fn gcd_is_monic() {
        // gcd((t-1)(t+2), 3(t-1)(t^2+1)) = t - 1
        let tm1 = p(&[(1, 1), (0, -1)]);
        let a = tm1.mul(&p(&[(1, 1), (0, 2)]));
        let b = tm1.mul(&p(&[(2, 3), (0, 3)])).shift(-4);
        assert_eq!(a.gcd(&b), tm1);
        assert!(p(&[(1, 1)]).gcd(&p(&[(0, 5)])).is_one());
    }

    #[test]
    fn display_order() {
        assert_eq!(p(&[(3, 1), (-1, -2), (0, 1)]).to_string(), "t^3 + 1 - 2*t^-1");
        assert_eq!(p(&[(1, -1)]).to_string(), "-t");
    }
}
