use crate::scalar::{LaurentPoly, Scalar};

pub(crate) type Span = Option<(i64, i64)>;

/// Conservative t-degree data for every entry of an operator.
///
/// There is a polynomial `D` (the product of `den` factors with their
/// multiplicities, lowest exponent zero) such that every entry, written as
/// `p / D`, has a Laurent numerator `p` with all exponents in `range`.
/// `range` is `None` only when every entry is zero. When present, `cols[j]`
/// is the same bound restricted to source column `j`, and `range` is their
/// hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMeta {
    den: Vec<(LaurentPoly, u32)>,
    range: Span,
    cols: Option<Vec<Span>>,
}

pub(crate) fn hull(a: Span, b: Span) -> Span {
    match (a, b) {
        (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
        (x, None) => x,
        (None, y) => y,
    }
}

impl DegreeMeta {
    pub fn zero() -> Self {
        DegreeMeta {
            den: Vec::new(),
            range: None,
            cols: None,
        }
    }

    /// Entries that are Laurent polynomials with exponents in `lo..=hi`.
    pub fn laurent(lo: i64, hi: i64) -> Self {
        debug_assert!(lo <= hi);
        DegreeMeta {
            den: Vec::new(),
            range: Some((lo, hi)),
            cols: None,
        }
    }

    /// Tight data for a finite set of entries.
    pub fn from_entries<'a, I: IntoIterator<Item = &'a Scalar>>(entries: I) -> Self {
        Self::from_columns(entries.into_iter().map(std::slice::from_ref)).without_columns()
    }

    /// Tight per-column data; `columns` yields the entries of each column.
    pub fn from_columns<'a, I, J>(columns: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = &'a Scalar>,
    {
        let mut den: Vec<(LaurentPoly, u32)> = Vec::new();
        let mut parts: Vec<Vec<(i64, i64, i64)>> = Vec::new();
        for col in columns {
            let mut here = Vec::new();
            for s in col {
                if s.is_zero() {
                    continue;
                }
                let d = s.denominator();
                if !d.is_one() && !den.iter().any(|(f, _)| f == d) {
                    den.push((d.clone(), 1));
                }
                let n = s.numerator();
                here.push((n.low().unwrap(), n.high().unwrap(), d.span()));
            }
            parts.push(here);
        }
        let total: i64 = den.iter().map(|(f, _)| f.span()).sum();
        let cols: Vec<Span> = parts
            .into_iter()
            .map(|col| {
                col.into_iter()
                    .map(|(lo, hi, dspan)| (lo, hi + total - dspan))
                    .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
            })
            .collect();
        DegreeMeta {
            den,
            range: None,
            cols: None,
        }
        .with_columns(cols)
    }

    /// Replaces the per-column data; `range` becomes their hull.
    pub(crate) fn with_columns(mut self, cols: Vec<Span>) -> Self {
        self.range = cols.iter().copied().fold(None, hull);
        self.cols = Some(cols);
        self
    }

    fn without_columns(mut self) -> Self {
        self.cols = None;
        self
    }

    /// The bound for entries of column `j`.
    pub fn column_range(&self, j: usize) -> Span {
        match &self.cols {
            Some(c) => c[j],
            None => self.range,
        }
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        self.range
    }

    /// Factors of the common denominator with multiplicities.
    pub fn denominator_factors(&self) -> &[(LaurentPoly, u32)] {
        &self.den
    }

    pub fn denominator_degree(&self) -> i64 {
        self.den.iter().map(|(f, m)| f.span() * *m as i64).sum()
    }

    /// Meta of a product `A∘B`.
    pub fn compose(&self, other: &Self) -> Self {
        let (Some(a), Some(b)) = (self.range, other.range) else {
            return Self::zero();
        };
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += m,
                None => den.push((f.clone(), *m)),
            }
        }
        DegreeMeta {
            den,
            range: Some((a.0 + b.0, a.1 + b.1)),
            cols: None,
        }
    }

    /// Meta of a sum `A + B`.
    pub fn add(&self, other: &Self) -> Self {
        let Some(a) = self.range else {
            return other.clone();
        };
        let Some(b) = other.range else {
            return self.clone();
        };
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*m),
                None => den.push((f.clone(), *m)),
            }
        }
        let common = DegreeMeta {
            den,
            range: None,
            cols: None,
        };
        let d = common.denominator_degree();
        let (da, db) = (d - self.denominator_degree(), d - other.denominator_degree());
        let hi = (a.1 + da).max(b.1 + db);
        let out = DegreeMeta {
            den: common.den,
            range: Some((a.0.min(b.0), hi)),
            cols: None,
        };
        let dim = match (&self.cols, &other.cols) {
            (Some(c), _) | (None, Some(c)) => c.len(),
            (None, None) => return out,
        };
        let lift = |s: Span, by: i64| s.map(|(lo, hi)| (lo, hi + by));
        let cols = (0..dim)
            .map(|j| hull(lift(self.column_range(j), da), lift(other.column_range(j), db)))
            .collect();
        out.with_columns(cols)
    }

    /// Meta of `s·A`.
    pub fn scale(&self, s: &Scalar) -> Self {
        let Some(a) = self.range else {
            return Self::zero();
        };
        if s.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        let q = s.denominator();
        if !q.is_one() {
            match den.iter_mut().find(|(g, _)| g == q) {
                Some(slot) => slot.1 += 1,
                None => den.push((q.clone(), 1)),
            }
        }
        let p = s.numerator();
        let (plo, phi) = (p.low().unwrap(), p.high().unwrap());
        let shift = |x: &Span| x.map(|(lo, hi)| (lo + plo, hi + phi));
        DegreeMeta {
            den,
            range: shift(&Some(a)),
            cols: self.cols.as_ref().map(|c| c.iter().map(shift).collect()),
        }
    }

    /// Number of distinct nonzero sample points at which a vanishing
    /// residual with this meta must vanish identically.
    pub fn required_samples(&self) -> usize {
        match self.range {
            None => 1,
            Some((lo, hi)) => (hi - lo + 1) as usize,
        }
    }

    /// [`Self::required_samples`] for entries in the given columns only.
    pub fn required_samples_on(&self, columns: &[usize]) -> usize {
        columns
            .iter()
            .filter_map(|&j| self.column_range(j))
            .map(|(lo, hi)| (hi - lo + 1) as usize)
            .max()
            .unwrap_or(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus_q_inv() -> Scalar {
        Scalar::one().sub(&Scalar::q()).inv().unwrap()
    }

    #[test]
    fn entries_are_bounded() {
        let xs = [Scalar::t_pow(3), one_minus_q_inv(), Scalar::t_pow(-2)];
        let m = DegreeMeta::from_entries(&xs);
        // D = t^4 - 1; t^3 -> t^7 - t^3, 1/(1-q) -> -1, t^-2 -> t^2 - t^-2
        assert_eq!(m.range(), Some((-2, 7)));
        assert_eq!(m.denominator_degree(), 4);
    }

    #[test]
    fn compose_adds_ranges() {
        let a = DegreeMeta::laurent(-1, 2);
        let b = DegreeMeta::laurent(0, 5);
        assert_eq!(a.compose(&b).range(), Some((-1, 7)));
        assert_eq!(a.compose(&DegreeMeta::zero()).range(), None);
    }

    #[test]
    fn add_aligns_denominators() {
        let a = DegreeMeta::laurent(0, 2);
        let b = DegreeMeta::from_entries([&one_minus_q_inv()]);
        let s = a.add(&b);
        assert_eq!(s.range(), Some((0, 6)));
        assert_eq!(s.required_samples(), 7);
        assert_eq!(DegreeMeta::zero().required_samples(), 1);
        assert_eq!(DegreeMeta::laurent(0, 0).required_samples(), 1);
    }
}
