//! Finite abelian p-groups in canonical form, and the linear algebra that produces them.

mod finite;
mod module;
mod snf;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

pub use finite::{structure_of, GroupTable};
pub use module::{Hom, Module, Submodule};
pub use snf::{snf, SmithForm, ZpMatrix};

#[derive(Deserialize)]
struct RawGroup {
    p: u64,
    exponents: Vec<u32>,
    free_rank: u32,
}

/// `Z_p^free_rank ⊕ ⊕_k Z/p^{exponents[k]}` with exponents positive and non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct AbelianPGroup {
    p: u64,
    exponents: Vec<u32>,
    free_rank: u32,
}

impl TryFrom<RawGroup> for AbelianPGroup {
    type Error = Error;
    fn try_from(raw: RawGroup) -> Result<Self> {
        AbelianPGroup::new(raw.p, raw.exponents, raw.free_rank)
    }
}

impl AbelianPGroup {
    /// Canonicalizes: zero exponents are dropped, the rest sorted non-increasing.
    pub fn new(p: u64, mut exponents: Vec<u32>, free_rank: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Ok(AbelianPGroup {
            p,
            exponents,
            free_rank,
        })
    }

    pub(crate) fn from_exponents(p: u64, exponents: Vec<u32>) -> Self {
        Self::new(p, exponents, 0).expect("prime checked by caller")
    }

    pub fn trivial(p: u64) -> Self {
        Self::from_exponents(p, Vec::new())
    }

    pub fn cyclic(p: u64, k: u32) -> Self {
        Self::from_exponents(p, vec![k])
    }

    /// `(Z/p^s)^f`, the additive group of W_s(F_{p^f}).
    pub fn homocyclic(p: u64, s: u32, f: u32) -> Self {
        Self::from_exponents(p, vec![s; f as usize])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn free_rank(&self) -> u32 {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// log_p of the torsion order.
    pub fn log_order(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite()
            .then(|| BigUint::from(self.p).pow(self.log_order() as u32))
    }

    pub fn direct_sum(&self, other: &AbelianPGroup) -> Result<AbelianPGroup> {
        if self.p != other.p {
            return Err(Error::invalid("direct sum of groups for different primes"));
        }
        let mut exps = self.exponents.clone();
        exps.extend_from_slice(&other.exponents);
        AbelianPGroup::new(self.p, exps, self.free_rank + other.free_rank)
    }

    /// Exponents truncated at `m`: the image of the group in its reduction mod p^m.
    pub fn capped(&self, m: u32) -> AbelianPGroup {
        let mut exps: Vec<u32> = self.exponents.iter().map(|&e| e.min(m)).collect();
        exps.extend(std::iter::repeat(m).take(self.free_rank as usize));
        AbelianPGroup::from_exponents(self.p, exps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

impl fmt::Display for AbelianPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(match self.free_rank {
                1 => format!("Z_{}", self.p),
                r => format!("Z_{}^{r}", self.p),
            });
        }
        let mut i = 0;
        while i < self.exponents.len() {
            let e = self.exponents[i];
            let run = self.exponents[i..].iter().take_while(|&&x| x == e).count();
            let base = if e == 1 {
                format!("Z/{}", self.p)
            } else {
                format!("Z/{}^{e}", self.p)
            };
            parts.push(if run == 1 {
                base
            } else {
                format!("({base})^{run}")
            });
            i += run;
        }
        f.write_str(&parts.join(" + "))
    }
}
