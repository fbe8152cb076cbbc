use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::cdvr::{cdvr_k_groups, CdvrData};
use crate::arith::{factorial, primes_up_to};
use crate::error::{Error, Result};

/// Completions of a number ring above one rational prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeData {
    pub p: u64,
    pub completions: Vec<CdvrData>,
}

/// Local data of the ring of integers of a number field. Primes not listed are
/// taken as unramified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberRingData {
    pub degree: u32,
    pub primes: Vec<PrimeData>,
}

impl NumberRingData {
    pub fn rationals() -> Self {
        NumberRingData {
            degree: 1,
            primes: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::InconsistentLocalData("degree must be positive".into()));
        }
        for pd in &self.primes {
            let total: u64 = pd.completions.iter().map(|c| c.e * c.f as u64).sum();
            if total != self.degree as u64 {
                return Err(Error::InconsistentLocalData(format!(
                    "sum of e*f above {} is {total}, degree is {}",
                    pd.p, self.degree
                )));
            }
            if let Some(c) = pd.completions.iter().find(|c| c.p != pd.p) {
                return Err(Error::InconsistentLocalData(format!(
                    "completion over {} listed under {}",
                    c.p, pd.p
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralOrder {
    /// Exact order of K_{2i}.
    pub order: BigUint,
    /// Rank of K_{2i+1}.
    pub rank: u64,
    /// `(p, v_p(order))` for every prime dividing the order.
    pub valuations: Vec<(u64, u64)>,
}

/// K-groups of `O_K[x]/x^n` relative to `(x)`, assembled from local p-parts.
pub fn integral_agh(n: u64, i: u64, ring: &NumberRingData) -> Result<IntegralOrder> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    ring.validate()?;
    let mut primes: Vec<u64> = primes_up_to(n * i);
    primes.extend(ring.primes.iter().map(|pd| pd.p));
    primes.sort_unstable();
    primes.dedup();
    let mut valuations = Vec::new();
    let mut order = BigUint::from(1u32);
    for p in primes {
        let local = match ring.primes.iter().find(|pd| pd.p == p) {
            Some(pd) => pd.completions.clone(),
            None => vec![CdvrData::new(p, ring.degree, 1, 0)?],
        };
        let mut v = 0;
        for c in &local {
            v += cdvr_k_groups(c, n, i)?.1.order_valuation();
        }
        if v > 0 {
            order *= BigUint::from(p).pow(v as u32);
            valuations.push((p, v));
        }
    }
    if ring.primes.is_empty() && ring.degree == 1 && n >= 2 {
        let expected = factorial(n * i) * factorial(i).pow((n - 2) as u32);
        if expected != order {
            return Err(Error::Precondition("local orders do not reassemble the factorial".into()));
        }
    }
    Ok(IntegralOrder {
        order,
        rank: (n - 1) * ring.degree as u64,
        valuations,
    })
}
