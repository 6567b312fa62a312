use std::fmt;

use serde::{Serialize, Serializer};

use super::FockError;

/// `m` modes, each occupation in `0..=N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeConfig {
    modes: usize,
    cutoff: u32,
}

impl ModeConfig {
    pub fn new(modes: usize, cutoff: u32) -> Result<Self, FockError> {
        if modes == 0 || cutoff == 0 {
            return Err(FockError::InvalidConfig(format!(
                "need modes >= 1 and cutoff >= 1, got modes = {modes}, cutoff = {cutoff}"
            )));
        }
        let dim = (cutoff as u64 + 1).checked_pow(modes as u32);
        if dim.is_none_or(|d| d > u32::MAX as u64) {
            return Err(FockError::InvalidConfig(format!(
                "basis of ({cutoff}+1)^{modes} states is too large"
            )));
        }
        Ok(ModeConfig { modes, cutoff })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// `(N+1)^m`.
    pub fn dim(&self) -> usize {
        (self.cutoff as usize + 1).pow(self.modes as u32)
    }

    /// Index distance between neighbouring occupations of mode `i`
    /// (1-based). Mode 1 is the most significant digit, so index order is
    /// lexicographic order of occupation tuples.
    pub fn stride(&self, i: usize) -> usize {
        (self.cutoff as usize + 1).pow((self.modes - i) as u32)
    }

    pub fn check_mode(&self, i: usize) -> Result<(), FockError> {
        if i == 0 || i > self.modes {
            Err(FockError::ModeIndex {
                index: i,
                modes: self.modes,
            })
        } else {
            Ok(())
        }
    }

    /// Occupation of mode `i` (1-based) in the state with index `idx`.
    pub fn occupation(&self, idx: usize, i: usize) -> u32 {
        ((idx / self.stride(i)) % (self.cutoff as usize + 1)) as u32
    }

    pub fn decode(&self, idx: usize) -> BasisState {
        let base = self.cutoff as usize + 1;
        let mut occ = vec![0u32; self.modes];
        let mut rest = idx;
        for slot in occ.iter_mut().rev() {
            *slot = (rest % base) as u32;
            rest /= base;
        }
        BasisState(occ)
    }

    pub fn encode(&self, state: &BasisState) -> Result<usize, FockError> {
        if state.0.len() != self.modes {
            return Err(FockError::State(format!(
                "state {state} has {} modes, expected {}",
                state.0.len(),
                self.modes
            )));
        }
        let base = self.cutoff as usize + 1;
        let mut idx = 0usize;
        for &n in &state.0 {
            if n > self.cutoff {
                return Err(FockError::State(format!(
                    "state {state} exceeds cutoff {}",
                    self.cutoff
                )));
            }
            idx = idx * base + n as usize;
        }
        Ok(idx)
    }

    /// Iterates over `(index, occupations)` in basis order.
    pub fn states(&self) -> impl Iterator<Item = (usize, BasisState)> + '_ {
        (0..self.dim()).map(move |k| (k, self.decode(k)))
    }
}

/// Occupation numbers `|n_1, ..., n_m>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState(pub Vec<u32>);

impl BasisState {
    pub fn occupations(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

impl Serialize for BasisState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_indexing() {
        let c = ModeConfig::new(3, 2).unwrap();
        assert_eq!(c.dim(), 27);
        let states: Vec<_> = c.states().map(|(_, s)| s).collect();
        let mut sorted = states.clone();
        sorted.sort();
        assert_eq!(states, sorted);
        for (k, s) in c.states() {
            assert_eq!(c.encode(&s).unwrap(), k);
            for i in 1..=3 {
                assert_eq!(c.occupation(k, i), s.0[i - 1]);
            }
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ModeConfig::new(0, 3).is_err());
        assert!(ModeConfig::new(2, 0).is_err());
        assert!(ModeConfig::new(40, 8).is_err());
        let c = ModeConfig::new(2, 3).unwrap();
        assert!(c.check_mode(3).is_err());
        assert!(c.encode(&BasisState(vec![4, 0])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(BasisState(vec![1, 0, 2]).to_string(), "|1,0,2>");
    }
}
