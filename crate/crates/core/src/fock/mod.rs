//! Truncated multi-mode Fock space and sparse operators over it.
//!
//! Oscillators use the number gauge `A⁺|n> = |n+1>`, `A⁻|n> = (n)_q |n-1>`,
//! which keeps every matrix entry inside Q(i)(t).

mod field;
mod meta;
mod op;
mod space;

use std::cell::RefCell;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::{Quarter, Scalar, ScalarError};

pub use field::{AtPoint, Coeff, Exact, Field};
pub use meta::DegreeMeta;
pub use op::{
    equal_on_interior, first_difference, interior_states, render_vector, resolve_margin,
    Comparison, Margin, Outcome, SparseOperator, Witness,
};
pub use space::{BasisState, ModeConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("mode index {index} out of range for {modes} modes")]
    ModeIndex { index: usize, modes: usize },
    #[error("operator shapes differ: {left:?} vs {right:?}")]
    ConfigMismatch { left: ModeConfig, right: ModeConfig },
    #[error("invalid mode configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid basis state: {0}")]
    State(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Builds operators on one truncated space in one coefficient lane.
///
/// An optional gauge `D` (one nonzero constant per basis state) replaces
/// every oscillator `A` by `D A D⁻¹`; diagonal operators are unaffected.
pub struct Fock<F: Field = Exact> {
    config: ModeConfig,
    field: F,
    gauge: Option<Vec<Scalar>>,
    oscillators: RefCell<HashMap<(usize, bool), SparseOperator<F::C>>>,
}

impl Fock<Exact> {
    pub fn exact(config: ModeConfig) -> Self {
        Fock::new(config, Exact)
    }
}

impl<F: Field> Fock<F> {
    pub fn new(config: ModeConfig, field: F) -> Self {
        Fock {
            config,
            field,
            gauge: None,
            oscillators: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_gauge(mut self, gauge: Vec<Scalar>) -> Result<Self, FockError> {
        if gauge.len() != self.config.dim() {
            return Err(FockError::InvalidConfig(format!(
                "gauge has {} entries, basis has {}",
                gauge.len(),
                self.config.dim()
            )));
        }
        if gauge.iter().any(|g| g.is_zero()) {
            return Err(FockError::InvalidConfig("gauge entries must be nonzero".into()));
        }
        self.gauge = Some(gauge);
        self.oscillators.get_mut().clear();
        Ok(self)
    }

    pub fn config(&self) -> ModeConfig {
        self.config
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn embed(&self, s: &Scalar) -> Result<F::C, FockError> {
        Ok(self.field.embed(s)?)
    }

    pub fn identity(&self) -> SparseOperator<F::C> {
        SparseOperator::identity_like(self.config)
    }

    pub fn zero(&self) -> SparseOperator<F::C> {
        SparseOperator::zero(self.config)
    }

    /// `s·1`.
    pub fn constant(&self, s: &Scalar) -> Result<SparseOperator<F::C>, FockError> {
        self.scale(s, &self.identity())
    }

    /// `s·A`.
    pub fn scale(
        &self,
        s: &Scalar,
        a: &SparseOperator<F::C>,
    ) -> Result<SparseOperator<F::C>, FockError> {
        if s.is_one() {
            return Ok(a.clone());
        }
        let c = self.embed(s)?;
        Ok(a.scale_raw(&c, a.meta.scale(s)))
    }

    /// `q^e AB − q^{−e} BA`; `e = 0` gives the commutator.
    pub fn q_commutator(
        &self,
        a: &SparseOperator<F::C>,
        b: &SparseOperator<F::C>,
        e: Quarter,
    ) -> Result<SparseOperator<F::C>, FockError> {
        if e == Quarter::ZERO {
            return a.commutator(b);
        }
        let ab = self.scale(&Scalar::q_power(e), &a.compose(b)?)?;
        let ba = self.scale(&Scalar::q_power(Quarter(-e.0)), &b.compose(a)?)?;
        ab.sub(&ba)
    }

    fn gauge_factor(&self, target: usize, source: usize) -> Option<Scalar> {
        self.gauge
            .as_ref()
            .map(|g| g[target].div(&g[source]).expect("nonzero gauge"))
    }

    fn shift_operator(
        &self,
        i: usize,
        raise: bool,
    ) -> Result<SparseOperator<F::C>, FockError> {
        if let Some(op) = self.oscillators.borrow().get(&(i, raise)) {
            return Ok(op.clone());
        }
        let op = self.build_shift(i, raise)?;
        self.oscillators.borrow_mut().insert((i, raise), op.clone());
        Ok(op)
    }

    fn build_shift(&self, i: usize, raise: bool) -> Result<SparseOperator<F::C>, FockError> {
        self.config.check_mode(i)?;
        let cfg = self.config;
        let dim = cfg.dim();
        let stride = cfg.stride(i);
        let mut tainted = vec![false; dim];
        let mut entries: Vec<Option<(u32, Scalar)>> = vec![None; dim];
        for (j, slot) in entries.iter_mut().enumerate() {
            let n = cfg.occupation(j, i);
            let (target, value) = if raise {
                if n == cfg.cutoff() {
                    tainted[j] = true;
                    continue;
                }
                (j + stride, Scalar::one())
            } else {
                if n == 0 {
                    continue;
                }
                (j - stride, Scalar::qnum(n as i64))
            };
            let value = match self.gauge_factor(target, j) {
                Some(g) => value.mul(&g),
                None => value,
            };
            *slot = Some((target as u32, value));
        }
        let meta = DegreeMeta::from_columns(entries.iter().map(|e| e.iter().map(|(_, s)| s)));
        let mut columns = Vec::with_capacity(dim);
        for e in entries {
            columns.push(match e {
                Some((k, s)) => vec![(k, self.embed(&s)?)],
                None => Vec::new(),
            });
        }
        let mut max_raise = vec![0; cfg.modes()];
        max_raise[i - 1] = if raise { 1 } else { -1 };
        Ok(SparseOperator::from_parts(cfg, columns, tainted, max_raise, meta))
    }

    /// `A_i⁺|..n_i..> = |..n_i+1..>`; columns with `n_i = N` are tainted.
    pub fn osc_plus(&self, i: usize) -> Result<SparseOperator<F::C>, FockError> {
        self.shift_operator(i, true)
    }

    /// `A_i⁻|..n_i..> = (n_i)_q |..n_i−1..>`.
    pub fn osc_minus(&self, i: usize) -> Result<SparseOperator<F::C>, FockError> {
        self.shift_operator(i, false)
    }

    /// Diagonal `t^{Σ a_i n_i + c}`, i.e. `q^{Σ α_i A_i⁰ + β}` with
    /// `a_i = 4α_i`, `c = 4β`.
    pub fn diag_exp(&self, a: &[i64], c: i64) -> Result<SparseOperator<F::C>, FockError> {
        if a.len() != self.config.modes() {
            return Err(FockError::InvalidConfig(format!(
                "exponent vector has {} entries for {} modes",
                a.len(),
                self.config.modes()
            )));
        }
        let cfg = self.config;
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        let mut columns = Vec::with_capacity(cfg.dim());
        let mut spans = Vec::with_capacity(cfg.dim());
        for j in 0..cfg.dim() {
            let e: i64 = a
                .iter()
                .enumerate()
                .map(|(i, ai)| ai * cfg.occupation(j, i + 1) as i64)
                .sum::<i64>()
                + c;
            lo = lo.min(e);
            hi = hi.max(e);
            spans.push(Some((e, e)));
            columns.push(vec![(j as u32, self.field.t_pow(e)?)]);
        }
        Ok(SparseOperator::from_parts(
            cfg,
            columns,
            vec![false; cfg.dim()],
            vec![0; cfg.modes()],
            DegreeMeta::laurent(lo, hi).with_columns(spans),
        ))
    }

    /// Diagonal with entry `f(n_1, ..., n_m)`.
    pub fn diag_poly<G>(&self, f: G) -> Result<SparseOperator<F::C>, FockError>
    where
        G: Fn(&[u32]) -> Scalar,
    {
        let cfg = self.config;
        let values: Vec<Scalar> = cfg.states().map(|(_, s)| f(s.occupations())).collect();
        let meta = DegreeMeta::from_columns(values.iter().map(std::slice::from_ref));
        let mut columns = Vec::with_capacity(cfg.dim());
        for (j, v) in values.iter().enumerate() {
            columns.push(if v.is_zero() {
                Vec::new()
            } else {
                vec![(j as u32, self.embed(v)?)]
            });
        }
        Ok(SparseOperator::from_parts(
            cfg,
            columns,
            vec![false; cfg.dim()],
            vec![0; cfg.modes()],
            meta,
        ))
    }
}

/// A seeded diagonal gauge with entries `±a/b`, `1 <= a, b <= 9`.
pub fn random_gauge(config: ModeConfig, seed: u64) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..config.dim())
        .map(|_| {
            let a: i64 = rng.random_range(1..=9);
            let b: i64 = rng.random_range(1..=9);
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            Scalar::ratio(sign * a, b)
        })
        .collect()
}
