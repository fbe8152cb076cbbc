//! K-groups of `A[x]/x^n` relative to `(x)` for a complete discrete valuation
//! ring `A` of mixed characteristic with perfect residue field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::notation::j_p_enumerate;
use super::{KGroupResult, Torsion};
use crate::arith::{factorial, is_prime, vp, vp_factorial};
use crate::error::{Error, Result};

/// Largest `n` and `i` accepted by the level-by-level evaluation.
pub const RECURSION_GRID: u64 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdvrData {
    pub p: u64,
    /// Residue degree `[k : F_p]`.
    pub f: u32,
    /// Ramification index.
    pub e: u64,
    /// `v_π(E'(π))`.
    pub d_e: u64,
    #[serde(default)]
    pub from_polynomial: bool,
}

impl CdvrData {
    pub fn new(p: u64, f: u32, e: u64, d_e: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if f == 0 || e == 0 {
            return Err(Error::invalid("residue degree and ramification index must be positive"));
        }
        Ok(CdvrData {
            p,
            f,
            e,
            d_e,
            from_polynomial: false,
        })
    }

    /// `Z_p`.
    pub fn unramified(p: u64, f: u32) -> Result<Self> {
        Self::new(p, f, 1, 0)
    }
}

/// Number of `m = u p^{s-1}` with `⌊(m-1)/n⌋ = r+1` and `n ∤ m`, each taken as
/// the top weight of its chain below `n(r+2)`.
pub fn rank_count(n: u64, r: u64, p: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let bound = n * (r + 2);
    let count = j_p_enumerate(p, bound)
        .into_iter()
        .flat_map(|u| {
            std::iter::successors(Some(u), move |w| Some(w * p).filter(|&x| x <= bound))
                .filter(move |&w| w * p > bound)
        })
        .filter(|&m| (m - 1) / n == r + 1 && m % n != 0)
        .count();
    Ok(count as u64)
}

/// `v_p((ni)! (i!)^{n-2})`, with `n = 1` giving 0.
fn factorial_part(n: u64, i: u64, p: u64) -> u64 {
    let lead = vp_factorial(n * i, p) as i64;
    let tail = (n as i64 - 2) * vp_factorial(i, p) as i64;
    (lead + tail) as u64
}

fn factorial_part_exact(n: u64, i: u64, p: u64) -> u64 {
    let num = BigInt::from(factorial(n * i)) * BigInt::from(factorial(i)).pow((n.max(2) - 2) as u32);
    let den = if n == 1 { BigInt::from(factorial(i)) } else { BigInt::one() };
    let mut q = num / den;
    let pb = BigInt::from(p);
    let mut v = 0;
    while !q.is_zero() && (&q % &pb).is_zero() {
        q /= &pb;
        v += 1;
    }
    v
}

/// Odd group (degree 2i+1, free of rank n-1) and even group (degree 2i, order valuation only).
pub fn cdvr_k_groups(data: &CdvrData, n: u64, i: u64) -> Result<(KGroupResult, KGroupResult)> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let rank = rank_count(n, i, data.p)?;
    if rank != n - 1 {
        return Err(Error::Precondition(format!("rank count {rank} differs from n-1")));
    }
    let part = factorial_part(n, i, data.p);
    if n * i <= 10_000 && part != factorial_part_exact(n, i, data.p) {
        return Err(Error::Precondition("Legendre valuation disagrees with factorial".into()));
    }
    let f = data.f as u64;
    let v = data.e * f * part + f * data.d_e * (n * i - i);
    let odd = KGroupResult {
        degree: 2 * i + 1,
        free_rank: rank,
        torsion: Torsion::Group(crate::group::AbelianPGroup::trivial(data.p)),
        provenance: vec!["formula".into(), "rank_count".into()],
        notes: Vec::new(),
    };
    let even = KGroupResult {
        degree: 2 * i,
        free_rank: 0,
        torsion: Torsion::Valuation { p: data.p, v },
        provenance: vec!["formula".into(), "legendre".into()],
        notes: Vec::new(),
    };
    Ok((odd, even))
}

/// One tower level of the even-degree evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelTerm {
    pub u: u64,
    pub weight: u64,
    /// Position in the chain of `u`, from 1.
    pub level: u32,
    pub t: u64,
    /// v_p of the order contributed by this level.
    pub valuation: u64,
    /// Level with `n | weight`, where only `v_p(n)` survives.
    pub rank_factor: bool,
}

/// Level contributions: weights `w = u p^{j-1} <= ni`; below the first multiple of
/// `n`, level `j` gives `f(dE + e(j-1) + e v_p(i-t))`; from there on each level gives
/// `f e v_p(n)` and the chain keeps only its first `v_p(n)` ordinary levels.
pub fn recursive_levels(data: &CdvrData, n: u64, i: u64) -> Result<Vec<LevelTerm>> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if n > RECURSION_GRID || i > RECURSION_GRID {
        return Err(Error::invalid(format!(
            "level evaluation is validated only for n, i <= {RECURSION_GRID}"
        )));
    }
    let p = data.p;
    let (e, f) = (data.e, data.f as u64);
    let v = vp(n, p);
    let mut out = Vec::new();
    for u in j_p_enumerate(p, n * i) {
        let weights: Vec<u64> =
            std::iter::successors(Some(u), |w| Some(w * p).filter(|&x| x <= n * i)).collect();
        let k_top = weights.last().is_some_and(|w| w % n == 0);
        for (idx, &w) in weights.iter().enumerate() {
            let j = idx as u64 + 1;
            let t = (w - 1) / n;
            let (valuation, rank_factor) = if k_top && j > v as u64 {
                (f * e * v as u64, true)
            } else {
                (f * (data.d_e + e * (j - 1) + e * vp(i - t, p) as u64), false)
            };
            out.push(LevelTerm {
                u,
                weight: w,
                level: j as u32,
                t,
                valuation,
                rank_factor,
            });
        }
    }
    Ok(out)
}

/// v_p of the even group, summed over tower levels.
pub fn cdvr_even_recursive(data: &CdvrData, n: u64, i: u64) -> Result<u64> {
    Ok(recursive_levels(data, n, i)?.iter().map(|l| l.valuation).sum())
}

fn vp_big(x: &BigInt, p: &BigInt, cap: u32) -> u32 {
    let mut q = x.clone();
    let mut v = 0;
    while v < cap && (&q % p).is_zero() {
        q /= p;
        v += 1;
    }
    v
}

/// `v_π(E'(π))` in `(Z/p^M)[x]/E`, or `None` when `E'(π)` vanishes at this precision.
fn derivative_valuation(p: u64, coeffs: &[BigInt], prec: u32) -> Option<u64> {
    let e = coeffs.len() - 1;
    let pb = BigInt::from(p);
    let modulus = pb.pow(prec);
    let reduce = |x: BigInt| x.mod_floor(&modulus);
    // multiply by x, then x^e = -Σ c_k x^k
    let times_x = |a: &[BigInt]| -> Vec<BigInt> {
        let carry = a[e - 1].clone();
        let mut b = vec![BigInt::zero(); e];
        for k in (1..e).rev() {
            b[k] = a[k - 1].clone();
        }
        for (k, bk) in b.iter_mut().enumerate() {
            *bk = reduce(&*bk - &carry * &coeffs[k]);
        }
        b
    };
    let mut acc = vec![BigInt::zero(); e];
    for j in (1..=e).rev() {
        acc = times_x(&acc);
        acc[0] = reduce(&acc[0] + BigInt::from(j) * &coeffs[j]);
    }
    acc.iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(k, a)| e as u64 * vp_big(a, &pb, prec) as u64 + k as u64)
        .min()
}

/// CDVR data of `Z_{p^f}[x]/E(x)` for an Eisenstein polynomial given low degree first.
pub fn cdvr_from_polynomial(p: u64, f: u32, coeffs: &[i64], prec: u32) -> Result<CdvrData> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
    let e = c.len().saturating_sub(1);
    if e == 0 || !c[e].is_one() {
        return Err(Error::NotEisenstein("polynomial must be monic of degree >= 1".into()));
    }
    let pb = BigInt::from(p);
    if c[0].is_zero() || vp_big(&c[0].abs(), &pb, 2) != 1 {
        return Err(Error::NotEisenstein(format!("constant term must have {p}-adic valuation 1")));
    }
    if let Some(k) = (1..e).find(|&k| !(&c[k] % &pb).is_zero()) {
        return Err(Error::NotEisenstein(format!("coefficient of x^{k} is not divisible by {p}")));
    }
    if prec < 2 {
        return Err(Error::PrecisionInsufficient("need precision at least 2".into()));
    }
    let here = derivative_valuation(p, &c, prec);
    let finer = derivative_valuation(p, &c, prec + 4);
    let d_e = match (here, finer) {
        (Some(a), Some(b)) if a == b => a,
        _ => {
            return Err(Error::PrecisionInsufficient(format!(
                "v_pi(E'(pi)) is not stable from precision {prec} to {}",
                prec + 4
            )))
        }
    };
    let e = e as u64;
    if e.gcd(&p) == 1 && d_e != e - 1 {
        return Err(Error::InconsistentLocalData(format!(
            "tame extension with e = {e} has dE = {d_e}"
        )));
    }
    let mut data = CdvrData::new(p, f, e, d_e)?;
    data.from_polynomial = true;
    Ok(data)
}
