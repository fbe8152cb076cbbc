use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, prime_power};
use crate::error::{Error, Result};

/// Largest index allowed in a non-p-typical truncation set.
pub const MAX_BIG_INDEX: u64 = 24;
/// Longest p-typical truncation set allowed.
pub const MAX_P_TYPICAL_LEN: usize = 8;

/// A finite divisor-closed set of positive integers, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct TruncationSet {
    indices: Vec<u64>,
}

impl TryFrom<Vec<u64>> for TruncationSet {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        TruncationSet::new(v)
    }
}

impl From<TruncationSet> for Vec<u64> {
    fn from(t: TruncationSet) -> Self {
        t.indices
    }
}

impl TruncationSet {
    pub fn new(mut indices: Vec<u64>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.first() == Some(&0) {
            return Err(Error::invalid("truncation indices must be positive"));
        }
        for &n in &indices {
            for d in divisors(n) {
                if indices.binary_search(&d).is_err() {
                    return Err(Error::invalid(format!(
                        "truncation set not divisor-closed: {d} divides {n}"
                    )));
                }
            }
        }
        Ok(TruncationSet { indices })
    }

    /// {1, ..., m}; `full(0)` is empty.
    pub fn full(m: u64) -> Self {
        TruncationSet {
            indices: (1..=m).collect(),
        }
    }

    /// {1, p, ..., p^{len-1}}.
    pub fn p_typical(p: u64, len: u32) -> Self {
        TruncationSet {
            indices: (0..len).map(|k| p.pow(k)).collect(),
        }
    }

    pub fn empty() -> Self {
        TruncationSet {
            indices: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.position(n).is_some()
    }

    pub fn position(&self, n: u64) -> Option<usize> {
        self.indices.binary_search(&n).ok()
    }

    pub fn max(&self) -> Option<u64> {
        self.indices.last().copied()
    }

    /// T/n = {d : nd ∈ T}.
    pub fn div(&self, n: u64) -> TruncationSet {
        TruncationSet {
            indices: self
                .indices
                .iter()
                .filter(|&&k| k % n == 0)
                .map(|&k| k / n)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &TruncationSet) -> bool {
        self.indices.iter().all(|&n| other.contains(n))
    }

    /// The prime `p` when the set is `{1, p, ..., p^k}` with `k >= 1`.
    pub fn p_typical_prime(&self) -> Option<u64> {
        let (p, _) = prime_power(*self.indices.get(1)?)?;
        let is_ptyp = self
            .indices
            .iter()
            .enumerate()
            .all(|(k, &n)| p.checked_pow(k as u32) == Some(n));
        is_ptyp.then_some(p)
    }

    /// Size cap for universal-polynomial work.
    pub fn check_cap(&self) -> Result<()> {
        let max = self.max().unwrap_or(0);
        if max <= MAX_BIG_INDEX {
            return Ok(());
        }
        if self.p_typical_prime().is_some() {
            if self.len() <= MAX_P_TYPICAL_LEN {
                return Ok(());
            }
            return Err(Error::cap(
                format!("p-typical length {}", self.len()),
                MAX_P_TYPICAL_LEN as u64,
            ));
        }
        Err(Error::cap(format!("truncation index {max}"), MAX_BIG_INDEX))
    }
}

impl fmt::Display for TruncationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
