use std::fmt::Write as _;

use serde::Serialize;

use super::field::Coeff;
use super::meta::{hull, DegreeMeta, Span};
use super::space::{BasisState, ModeConfig};
use super::FockError;
use crate::scalar::Scalar;

/// A linear map on the truncated Fock space, stored by source column.
///
/// Invariants: targets in each column are strictly increasing and in range;
/// no stored value is prunable; a column whose untruncated image would leave
/// the cutoff, at any construction step, is tainted; `max_raise[i]` bounds
/// the increase of mode `i` over every stored entry.
#[derive(Clone, Debug)]
pub struct SparseOperator<C = Scalar> {
    pub(crate) config: ModeConfig,
    pub(crate) columns: Vec<Vec<(u32, C)>>,
    pub(crate) tainted: Vec<bool>,
    pub(crate) max_raise: Vec<i64>,
    pub(crate) meta: DegreeMeta,
}

pub type Column<C> = Vec<(u32, C)>;

/// Sorts by target and sums duplicates, dropping prunable results.
pub(crate) fn normalize_column<C: Coeff>(mut entries: Vec<(u32, C)>) -> Column<C> {
    if entries.len() > 1 {
        entries.sort_by_key(|(k, _)| *k);
        let mut w = 0;
        for r in 1..entries.len() {
            if entries[r].0 == entries[w].0 {
                let sum = entries[w].1.add(&entries[r].1);
                entries[w].1 = sum;
            } else {
                if !entries[w].1.prunable() {
                    w += 1;
                }
                entries.swap(w, r);
            }
        }
        if !entries[w].1.prunable() {
            w += 1;
        }
        entries.truncate(w);
    } else {
        entries.retain(|(_, c)| !c.prunable());
    }
    entries
}

impl<C: Coeff> SparseOperator<C> {
    pub(crate) fn from_parts(
        config: ModeConfig,
        columns: Vec<Column<C>>,
        tainted: Vec<bool>,
        max_raise: Vec<i64>,
        meta: DegreeMeta,
    ) -> Self {
        debug_assert_eq!(columns.len(), config.dim());
        debug_assert_eq!(tainted.len(), config.dim());
        SparseOperator {
            config,
            columns,
            tainted,
            max_raise,
            meta,
        }
    }

    pub fn zero(config: ModeConfig) -> Self {
        let dim = config.dim();
        SparseOperator {
            config,
            columns: vec![Vec::new(); dim],
            tainted: vec![false; dim],
            max_raise: vec![0; config.modes()],
            meta: DegreeMeta::zero(),
        }
    }

    pub fn config(&self) -> ModeConfig {
        self.config
    }

    pub fn max_raise(&self) -> &[i64] {
        &self.max_raise
    }

    pub fn meta(&self) -> &DegreeMeta {
        &self.meta
    }

    pub fn column(&self, idx: usize) -> &[(u32, C)] {
        &self.columns[idx]
    }

    pub fn is_tainted(&self, idx: usize) -> bool {
        self.tainted[idx]
    }

    pub fn tainted_count(&self) -> usize {
        self.tainted.iter().filter(|t| **t).count()
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().all(|(k, _)| *k as usize == j))
    }

    /// Image of a basis state as `(target, coefficient)` pairs.
    pub fn apply(&self, state: &BasisState) -> Result<Vec<(BasisState, C)>, FockError> {
        let j = self.config.encode(state)?;
        Ok(self.columns[j]
            .iter()
            .map(|(k, c)| (self.config.decode(*k as usize), c.clone()))
            .collect())
    }

    fn check_config(&self, other: &Self) -> Result<(), FockError> {
        if self.config != other.config {
            return Err(FockError::ConfigMismatch {
                left: self.config,
                right: other.config,
            });
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self, FockError> {
        self.check_config(other)?;
        let dim = self.config.dim();
        let mut columns = Vec::with_capacity(dim);
        let mut tainted = other.tainted.clone();
        let mut spans: Vec<Span> = Vec::with_capacity(dim);
        let mut buf = Vec::new();
        for (j, col) in other.columns.iter().enumerate() {
            buf.clear();
            let mut span = None;
            let bj = other.meta.column_range(j);
            for (k, b) in col {
                let k = *k as usize;
                tainted[j] |= self.tainted[k];
                if let (Some(a), Some(b)) = (self.meta.column_range(k), bj) {
                    span = hull(span, Some((a.0 + b.0, a.1 + b.1)));
                }
                for (i, a) in &self.columns[k] {
                    buf.push((*i, a.mul(b)));
                }
            }
            columns.push(normalize_column(std::mem::take(&mut buf)));
            spans.push(span);
        }
        let max_raise = self
            .max_raise
            .iter()
            .zip(&other.max_raise)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_parts(
            self.config,
            columns,
            tainted,
            max_raise,
            self.meta.compose(&other.meta).with_columns(spans),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        self.check_config(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| merge_columns(a, b, |x| x.clone()))
            .collect();
        let tainted = self
            .tainted
            .iter()
            .zip(&other.tainted)
            .map(|(a, b)| *a || *b)
            .collect();
        let max_raise = self
            .max_raise
            .iter()
            .zip(&other.max_raise)
            .map(|(a, b)| *a.max(b))
            .collect();
        Ok(Self::from_parts(
            self.config,
            columns,
            tainted,
            max_raise,
            self.meta.add(&other.meta),
        ))
    }

    pub fn neg(&self) -> Self {
        SparseOperator {
            config: self.config,
            columns: self
                .columns
                .iter()
                .map(|col| col.iter().map(|(k, c)| (*k, c.neg())).collect())
                .collect(),
            tainted: self.tainted.clone(),
            max_raise: self.max_raise.clone(),
            meta: self.meta.scale(&Scalar::from_int(-1)),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FockError> {
        self.check_config(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| merge_columns(a, b, |x| x.neg()))
            .collect();
        let tainted = self
            .tainted
            .iter()
            .zip(&other.tainted)
            .map(|(a, b)| *a || *b)
            .collect();
        let max_raise = self
            .max_raise
            .iter()
            .zip(&other.max_raise)
            .map(|(a, b)| *a.max(b))
            .collect();
        Ok(Self::from_parts(
            self.config,
            columns,
            tainted,
            max_raise,
            self.meta.add(&other.meta),
        ))
    }

    /// Multiplies every entry by an already-embedded coefficient. `meta` is
    /// the caller's responsibility.
    pub(crate) fn scale_raw(&self, c: &C, meta: DegreeMeta) -> Self {
        if c.prunable() {
            let mut z = Self::zero(self.config);
            z.tainted = self.tainted.clone();
            z.max_raise = self.max_raise.clone();
            return z;
        }
        SparseOperator {
            config: self.config,
            columns: self
                .columns
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|(k, x)| (*k, x.mul(c)))
                        .filter(|(_, x)| !x.prunable())
                        .collect()
                })
                .collect(),
            tainted: self.tainted.clone(),
            max_raise: self.max_raise.clone(),
            meta,
        }
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self, FockError> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self, FockError> {
        self.compose(other)?.add(&other.compose(self)?)
    }

    /// `A^k`; `A^0` is the identity.
    pub fn pow(&self, k: u32) -> Result<Self, FockError> {
        let mut acc = Self::identity_like(self.config);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub(crate) fn identity_like(config: ModeConfig) -> Self {
        let dim = config.dim();
        SparseOperator {
            config,
            columns: (0..dim).map(|j| vec![(j as u32, C::one())]).collect(),
            tainted: vec![false; dim],
            max_raise: vec![0; config.modes()],
            meta: DegreeMeta::laurent(0, 0).with_columns(vec![Some((0, 0)); dim]),
        }
    }

    /// Deterministic column listing, one line per nonempty or tainted
    /// column: `|n> -> c1 |m1> + c2 |m2>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (j, col) in self.columns.iter().enumerate() {
            if col.is_empty() && !self.tainted[j] {
                continue;
            }
            let src = self.config.decode(j);
            let terms: Vec<_> = col
                .iter()
                .map(|(k, c)| (self.config.decode(*k as usize), c.clone()))
                .collect();
            let _ = write!(out, "{src} -> {}", render_vector(&terms));
            if self.tainted[j] {
                out.push_str("  [tainted]");
            }
            out.push('\n');
        }
        out
    }
}

/// `c1 |m1> + c2 |m2>`, or `0` when empty.
pub fn render_vector<C: Coeff>(terms: &[(BasisState, C)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(s, c)| {
            let text = c.to_string();
            if needs_parens(&text) {
                format!("({text}) {s}")
            } else {
                format!("{text} {s}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn needs_parens(text: &str) -> bool {
    if text.starts_with('(') && text.ends_with(')') && balanced_outer(text) {
        return false;
    }
    text.contains(" + ") || text.contains(" - ") || text.contains('/')
}

fn balanced_outer(text: &str) -> bool {
    let mut depth = 0i32;
    for (k, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && k + 1 < text.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

fn merge_columns<C: Coeff>(a: &[(u32, C)], b: &[(u32, C)], f: impl Fn(&C) -> C) -> Column<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|e| e.0);
        let kb = b.get(j).map(|e| e.0);
        match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                let s = a[i].1.add(&f(&b[j].1));
                if !s.prunable() {
                    out.push((x, s));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, a[i].1.clone()));
                i += 1;
            }
            (Some(x), None) => {
                out.push((x, a[i].1.clone()));
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, f(&b[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// How many occupations to keep away from the cutoff when comparing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Margin {
    Auto,
    Fixed(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

/// A column entry where the two sides disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<C> {
    pub state: BasisState,
    pub target: BasisState,
    pub lhs: C,
    pub rhs: C,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison<C> {
    pub outcome: Outcome,
    /// Per-mode margin actually applied.
    pub margin: Vec<u32>,
    pub columns_compared: usize,
    pub witness: Option<Witness<C>>,
}

/// Per-mode margin: the requested one, or the largest raise of either side.
pub fn resolve_margin<C: Coeff>(
    a: &SparseOperator<C>,
    b: &SparseOperator<C>,
    margin: Margin,
) -> Vec<u32> {
    match margin {
        Margin::Fixed(n) => vec![n; a.config.modes()],
        Margin::Auto => a
            .max_raise
            .iter()
            .zip(&b.max_raise)
            .map(|(x, y)| (*x.max(y)).max(0) as u32)
            .collect(),
    }
}

/// Indices of states with every `n_i <= N - margin_i`.
pub fn interior_states(config: ModeConfig, margin: &[u32]) -> Vec<usize> {
    let n = config.cutoff();
    (0..config.dim())
        .filter(|&j| {
            margin
                .iter()
                .enumerate()
                .all(|(i, m)| *m <= n && config.occupation(j, i + 1) <= n - m)
        })
        .collect()
}

/// First entry in the given columns where `a` and `b` differ.
pub fn first_difference<C: Coeff>(
    a: &SparseOperator<C>,
    b: &SparseOperator<C>,
    columns: &[usize],
) -> Option<Witness<C>> {
    for &j in columns {
        let (ca, cb) = (&a.columns[j], &b.columns[j]);
        let (mut x, mut y) = (0, 0);
        while x < ca.len() || y < cb.len() {
            let ka = ca.get(x).map(|e| e.0).unwrap_or(u32::MAX);
            let kb = cb.get(y).map(|e| e.0).unwrap_or(u32::MAX);
            let (k, va, vb) = if ka == kb {
                x += 1;
                y += 1;
                (ka, ca[x - 1].1.clone(), cb[y - 1].1.clone())
            } else if ka < kb {
                x += 1;
                (ka, ca[x - 1].1.clone(), C::zero())
            } else {
                y += 1;
                (kb, C::zero(), cb[y - 1].1.clone())
            };
            if va != vb && !(va.is_zero() && vb.is_zero()) {
                return Some(Witness {
                    state: a.config.decode(j),
                    target: a.config.decode(k as usize),
                    lhs: va,
                    rhs: vb,
                });
            }
        }
    }
    None
}

/// Compares `a` and `b` on the untainted interior.
pub fn equal_on_interior<C: Coeff>(
    a: &SparseOperator<C>,
    b: &SparseOperator<C>,
    margin: Margin,
) -> Result<Comparison<C>, FockError> {
    a.check_config(b)?;
    let margin = resolve_margin(a, b, margin);
    let columns: Vec<usize> = interior_states(a.config, &margin)
        .into_iter()
        .filter(|&j| !a.tainted[j] && !b.tainted[j])
        .collect();
    if columns.is_empty() {
        return Ok(Comparison {
            outcome: Outcome::Inconclusive,
            margin,
            columns_compared: 0,
            witness: None,
        });
    }
    let witness = first_difference(a, b, &columns);
    Ok(Comparison {
        outcome: if witness.is_some() {
            Outcome::Fail
        } else {
            Outcome::Pass
        },
        margin,
        columns_compared: columns.len(),
        witness,
    })
}
