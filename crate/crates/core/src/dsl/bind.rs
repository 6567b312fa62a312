use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use super::print::print_expr;
use super::{Expr, Relation, Suite};
use crate::fock::{Field, Fock, FockError, SparseOperator};
use crate::gens::{lookup, NameError, Realization};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum BindError {
    #[error("suite needs {needed} modes, space has {available}")]
    ConfigTooSmall { needed: usize, available: usize },
    #[error("in `{context}`: {source}")]
    Name {
        context: String,
        #[source]
        source: NameError,
    },
    #[error("in `{context}`: {message}")]
    Type { context: String, message: String },
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Both sides of a relation realized on one space.
pub struct BoundRelation<C> {
    pub relation: Relation,
    pub lhs: SparseOperator<C>,
    pub rhs: SparseOperator<C>,
}

#[derive(Clone)]
enum Value<C> {
    Scalar(Scalar),
    Op(Rc<SparseOperator<C>>),
}

/// Evaluates expressions against a suite's bindings. Let values and
/// generator lookups are cached per binder.
pub struct Binder<'a, F: Field> {
    real: Realization<'a, F>,
    lets: HashMap<String, Expr>,
    let_cache: HashMap<String, Value<F::C>>,
    name_cache: HashMap<String, Rc<SparseOperator<F::C>>>,
}

impl<'a, F: Field> Binder<'a, F> {
    pub fn new(fock: &'a Fock<F>, suite: Option<&Suite>) -> Result<Self, BindError> {
        let mut lets = HashMap::new();
        if let Some(s) = suite {
            let available = fock.config().modes();
            if s.modes > available {
                return Err(BindError::ConfigTooSmall {
                    needed: s.modes,
                    available,
                });
            }
            for b in &s.bindings {
                lets.insert(b.name.clone(), b.expr.clone());
            }
        }
        Ok(Binder {
            real: Realization::new(fock),
            lets,
            let_cache: HashMap::new(),
            name_cache: HashMap::new(),
        })
    }

    fn fock(&self) -> &'a Fock<F> {
        self.real.fock
    }

    /// Realizes an expression as an operator; scalars become multiples of 1.
    pub fn operator(&mut self, e: &Expr) -> Result<SparseOperator<F::C>, BindError> {
        let v = self.eval(e)?;
        self.to_op(v).map(|rc| Rc::try_unwrap(rc).unwrap_or_else(|rc| (*rc).clone()))
    }

    fn to_op(&self, v: Value<F::C>) -> Result<Rc<SparseOperator<F::C>>, BindError> {
        match v {
            Value::Op(o) => Ok(o),
            Value::Scalar(s) => Ok(Rc::new(self.fock().constant(&s)?)),
        }
    }

    fn type_error<T>(e: &Expr, message: &str) -> Result<T, BindError> {
        Err(BindError::Type {
            context: print_expr(e),
            message: message.to_string(),
        })
    }

    fn eval(&mut self, e: &Expr) -> Result<Value<F::C>, BindError> {
        let fock = self.fock();
        Ok(match e {
            Expr::Scalar(s) => Value::Scalar(s.clone()),
            Expr::Name { name, args, kwargs } => {
                if args.is_empty() && kwargs.is_empty() {
                    if let Some(v) = self.let_cache.get(name) {
                        return Ok(v.clone());
                    }
                    if let Some(body) = self.lets.get(name).cloned() {
                        let v = self.eval(&body)?;
                        self.let_cache.insert(name.clone(), v.clone());
                        return Ok(v);
                    }
                }
                let key = print_expr(e);
                if let Some(o) = self.name_cache.get(&key) {
                    return Ok(Value::Op(o.clone()));
                }
                let op = lookup(&self.real, name, args, kwargs).map_err(|source| {
                    BindError::Name {
                        context: key.clone(),
                        source,
                    }
                })?;
                let op = Rc::new(op);
                self.name_cache.insert(key, op.clone());
                Value::Op(op)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let add = matches!(e, Expr::Add(..));
                match (x, y) {
                    (Value::Scalar(x), Value::Scalar(y)) => {
                        Value::Scalar(if add { x.add(&y) } else { x.sub(&y) })
                    }
                    (x, y) => {
                        let (x, y) = (self.to_op(x)?, self.to_op(y)?);
                        Value::Op(Rc::new(if add { x.add(&y)? } else { x.sub(&y)? }))
                    }
                }
            }
            Expr::Neg(a) => match self.eval(a)? {
                Value::Scalar(s) => Value::Scalar(s.neg()),
                Value::Op(o) => Value::Op(Rc::new(o.neg())),
            },
            Expr::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.mul(&y)),
                (Value::Scalar(s), Value::Op(o)) | (Value::Op(o), Value::Scalar(s)) => {
                    Value::Op(Rc::new(fock.scale(&s, &o)?))
                }
                (Value::Op(x), Value::Op(y)) => Value::Op(Rc::new(x.compose(&y)?)),
            },
            Expr::Div(a, b) => {
                let Value::Scalar(d) = self.eval(b)? else {
                    return Self::type_error(e, "division by an operator");
                };
                let Ok(inv) = d.inv() else {
                    return Self::type_error(e, "division by zero");
                };
                match self.eval(a)? {
                    Value::Scalar(x) => Value::Scalar(x.mul(&inv)),
                    Value::Op(o) => Value::Op(Rc::new(fock.scale(&inv, &o)?)),
                }
            }
            Expr::Pow(a, k) => match self.eval(a)? {
                Value::Scalar(s) => match s.pow(*k) {
                    Ok(p) => Value::Scalar(p),
                    Err(_) => return Self::type_error(e, "negative power of zero"),
                },
                Value::Op(_) if *k < 0 => {
                    return Self::type_error(e, "negative power of an operator")
                }
                Value::Op(o) => Value::Op(Rc::new(o.pow(*k as u32)?)),
            },
            Expr::Comm(a, b) | Expr::AntiComm(a, b) | Expr::QComm(a, b, _) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let (x, y) = (self.to_op(x)?, self.to_op(y)?);
                Value::Op(Rc::new(match e {
                    Expr::Comm(..) => x.commutator(&y)?,
                    Expr::AntiComm(..) => x.anticommutator(&y)?,
                    Expr::QComm(_, _, q) => fock.q_commutator(&x, &y, *q)?,
                    _ => unreachable!(),
                }))
            }
        })
    }
}

/// Realizes every relation of a suite on the given space.
pub fn bind<F: Field>(
    suite: &Suite,
    fock: &Fock<F>,
) -> Result<Vec<BoundRelation<F::C>>, BindError> {
    let mut b = Binder::new(fock, Some(suite))?;
    suite
        .relations
        .iter()
        .map(|r| {
            Ok(BoundRelation {
                relation: r.clone(),
                lhs: b.operator(&r.lhs)?,
                rhs: b.operator(&r.rhs)?,
            })
        })
        .collect()
}
