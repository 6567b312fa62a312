use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::scalar::{GaussianRational, Scalar, ScalarError};

/// Coefficient ring of a [`super::SparseOperator`].
pub trait Coeff: Clone + PartialEq + fmt::Display + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Whether an entry holding this value may be dropped from storage.
    ///
    /// Only symbolic zeros are prunable. A point value that happens to
    /// vanish is kept so that the stored support, and with it the taint
    /// structure, is a superset of the symbolic one.
    fn prunable(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn prunable(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Scalar::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Scalar::mul(self, other)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
}

impl Coeff for GaussianRational {
    fn zero() -> Self {
        GaussianRational::ZERO
    }
    fn one() -> Self {
        GaussianRational::ONE
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn prunable(&self) -> bool {
        false
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Maps exact scalars into a coefficient ring.
pub trait Field {
    type C: Coeff;

    fn embed(&self, s: &Scalar) -> Result<Self::C, ScalarError>;

    /// `t^k`.
    fn t_pow(&self, k: i64) -> Result<Self::C, ScalarError> {
        self.embed(&Scalar::t_pow(k))
    }
}

/// The identity embedding: operators carry exact rational functions.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Field for Exact {
    type C = Scalar;

    fn embed(&self, s: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(s.clone())
    }
}

/// Evaluation at a fixed nonzero point `t = t0`.
#[derive(Debug)]
pub struct AtPoint {
    t0: GaussianRational,
    powers: RefCell<HashMap<i64, GaussianRational>>,
}

impl AtPoint {
    pub fn new(t0: GaussianRational) -> Result<Self, ScalarError> {
        if t0.is_zero() {
            return Err(ScalarError::Domain("sample point t = 0".into()));
        }
        Ok(AtPoint {
            t0,
            powers: RefCell::new(HashMap::new()),
        })
    }

    pub fn point(&self) -> &GaussianRational {
        &self.t0
    }
}

impl Field for AtPoint {
    type C = GaussianRational;

    fn embed(&self, s: &Scalar) -> Result<GaussianRational, ScalarError> {
        if s.is_laurent() && s.numerator().is_monomial() {
            let e = s.numerator().low().unwrap();
            let c = s.numerator().coeff(e);
            return Ok(&c * &self.t_pow(e)?);
        }
        s.eval_at(&self.t0)
    }

    fn t_pow(&self, k: i64) -> Result<GaussianRational, ScalarError> {
        if let Some(v) = self.powers.borrow().get(&k) {
            return Ok(v.clone());
        }
        let v = self.t0.pow(k).expect("nonzero sample point");
        self.powers.borrow_mut().insert(k, v.clone());
        Ok(v)
    }
}
