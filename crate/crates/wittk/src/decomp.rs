//! p-typical decomposition of big Witt vectors over p-local coefficients, and
//! the quotient W_{re}(k)/V_e W_r(k) computed by formula and by enumeration.

use std::collections::HashMap;

use serde::Serialize;

use crate::arith::{is_prime, vp};
use crate::error::{Error, Result};
use crate::group::{AbelianPGroup, GroupTable};
use crate::kgroup::{e_prime, j_p_enumerate};
use crate::ring::{RingDescriptor, Value};
use crate::witt::{
    enumerate_witt, frobenius_into, verschiebung, witt_add, witt_cardinality, TruncationSet,
    WittVector, DEFAULT_WITT_CAP,
};

/// The unique `s >= 1` with `u p^{s-1} <= r < u p^s`, or 0 when `u > r`.
pub fn s_fn(p: u64, r: u64, u: u64) -> Result<u32> {
    if u == 0 || u % p == 0 {
        return Err(Error::invalid(format!("{u} is not coprime to {p}")));
    }
    if u > r {
        return Ok(0);
    }
    let mut s = 1u32;
    let mut top = u as u128 * p as u128;
    while top <= r as u128 {
        top *= p as u128;
        s += 1;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompComponent {
    pub u: u64,
    pub length: u32,
    pub vector: WittVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub p: u64,
    pub m: u64,
    pub components: Vec<DecompComponent>,
}

impl DecompositionReport {
    fn key(&self) -> Vec<Vec<Value>> {
        self.components
            .iter()
            .map(|c| c.vector.values().to_vec())
            .collect()
    }
}

fn check_decomposable(w: &WittVector, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let m = w.trunc().len() as u64;
    if *w.trunc() != TruncationSet::full(m) {
        return Err(Error::invalid("decomposition needs a full truncation set {1..m}"));
    }
    if !w.ring().is_p_local(p) {
        return Err(Error::Precondition(format!(
            "integers prime to {p} must be units in {}",
            w.ring()
        )));
    }
    Ok(m)
}

/// u-component: F_u(w) restricted to the p-typical set of length s(p, m, u).
pub fn decompose(w: &WittVector, p: u64) -> Result<DecompositionReport> {
    let m = check_decomposable(w, p)?;
    let components = j_p_enumerate(p, m)
        .into_iter()
        .map(|u| {
            let length = s_fn(p, m, u)?;
            let vector = frobenius_into(u, w, &TruncationSet::p_typical(p, length))?;
            Ok(DecompComponent { u, length, vector })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionReport { p, m, components })
}

/// Componentwise Witt sum of two reports over the same parameters.
pub fn add_reports(a: &DecompositionReport, b: &DecompositionReport) -> Result<DecompositionReport> {
    if a.p != b.p || a.m != b.m {
        return Err(Error::invalid("reports for different parameters"));
    }
    let components = a
        .components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| {
            Ok(DecompComponent {
                u: x.u,
                length: x.length,
                vector: witt_add(&x.vector, &y.vector)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionReport {
        p: a.p,
        m: a.m,
        components,
    })
}

/// Inverse of `decompose` on an enumerable ring, backed by the forward table.
pub struct DecompositionInverse {
    table: HashMap<Vec<Vec<Value>>, WittVector>,
}

impl DecompositionInverse {
    pub fn build(p: u64, m: u64, ring: &RingDescriptor, cap: u64) -> Result<Self> {
        let mut table = HashMap::new();
        for w in enumerate_witt(&TruncationSet::full(m), ring, cap)? {
            let rep = decompose(&w, p)?;
            if table.insert(rep.key(), w).is_some() {
                return Err(Error::Precondition("decomposition is not injective".into()));
            }
        }
        Ok(DecompositionInverse { table })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn invert(&self, report: &DecompositionReport) -> Option<&WittVector> {
        self.table.get(&report.key())
    }
}

/// Exponent of the u-factor of W_{re}(F_q)/V_e W_r(F_q) as a p-typical length.
pub fn quotient_factor_length(p: u64, e: u64, r: u64, u: u64) -> Result<u32> {
    let big = s_fn(p, r * e, u)?;
    let ep = e_prime(e, p);
    if u % ep == 0 {
        let small = s_fn(p, r, u / ep)?;
        if small >= 1 {
            return Ok(vp(e, p));
        }
    }
    Ok(big)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientRoutes {
    pub formula: AbelianPGroup,
    /// `None` when the enumeration cap disables the oracle.
    pub oracle: Option<AbelianPGroup>,
    /// `(u, length)` per factor of the formula route.
    pub factors: Vec<(u64, u32)>,
}

fn field_params(field: &RingDescriptor) -> Result<(u64, u32)> {
    match field {
        RingDescriptor::PrimeField(p) => Ok((*p, 1)),
        RingDescriptor::FiniteField(k) => Ok((k.p(), k.degree())),
        other => Err(Error::invalid(format!("{other} is not a finite field"))),
    }
}

/// Formula route: per-u p-typical cokernels.
pub fn quotient_formula(p: u64, e: u64, r: u64, f: u32) -> Result<(AbelianPGroup, Vec<(u64, u32)>)> {
    if e == 0 || r == 0 {
        return Err(Error::invalid("e and r must be positive"));
    }
    let mut exps = Vec::new();
    let mut factors = Vec::new();
    for u in j_p_enumerate(p, r * e) {
        let len = quotient_factor_length(p, e, r, u)?;
        factors.push((u, len));
        exps.extend(std::iter::repeat(len).take(f as usize));
    }
    Ok((AbelianPGroup::new(p, exps, 0)?, factors))
}

fn unpack(idx: u64, q: u64, trunc: &TruncationSet, ring: &RingDescriptor) -> WittVector {
    let mut xs = Vec::with_capacity(trunc.len());
    let mut i = idx;
    for _ in 0..trunc.len() {
        xs.push(Value::Small(i % q));
        i /= q;
    }
    WittVector::from_values(trunc.clone(), ring.clone(), xs).expect("valid residues")
}

/// Oracle route: enumerate W_{re}(k), quotient by the enumerated image of V_e, Smith form.
pub fn quotient_oracle(e: u64, r: u64, field: &RingDescriptor, cap: u64) -> Result<AbelianPGroup> {
    let (p, _) = field_params(field)?;
    let q = field.cardinality().expect("finite field");
    let big = TruncationSet::full(r * e);
    let small = TruncationSet::full(r);
    let total = witt_cardinality(&big, field)
        .filter(|&n| n <= cap)
        .ok_or_else(|| Error::cap(format!("|W_{}({field})|", r * e), cap))?;
    let add = |a: &u64, b: &u64| {
        let s = witt_add(&unpack(*a, q, &big, field), &unpack(*b, q, &big, field))
            .expect("same space");
        s.finite_index().expect("finite ring")
    };
    let table = GroupTable::build(p, 0u64, 0..total, &add)?;
    let image = enumerate_witt(&small, field, cap)?
        .map(|w| {
            verschiebung(e, &w, &big)
                .map(|v| v.finite_index().expect("finite ring"))
        })
        .collect::<Result<Vec<_>>>()?;
    table.quotient(image, add)
}

/// Both routes; the oracle runs when |k|^{re} is within `cap`.
pub fn quotient_routes(p: u64, e: u64, r: u64, field: &RingDescriptor, cap: u64) -> Result<QuotientRoutes> {
    let (fp, f) = field_params(field)?;
    if fp != p {
        return Err(Error::invalid(format!("field characteristic {fp} differs from p = {p}")));
    }
    let (formula, factors) = quotient_formula(p, e, r, f)?;
    let oracle = match quotient_oracle(e, r, field, cap) {
        Ok(g) => Some(g),
        Err(Error::CapExceeded { .. }) => None,
        Err(other) => return Err(other),
    };
    Ok(QuotientRoutes {
        formula,
        oracle,
        factors,
    })
}

/// W_{re}(k)/V_e W_r(k) in canonical form; both routes must agree when both run.
pub fn quotient_structure(p: u64, e: u64, r: u64, field: &RingDescriptor) -> Result<AbelianPGroup> {
    let routes = quotient_routes(p, e, r, field, DEFAULT_WITT_CAP)?;
    match routes.oracle {
        Some(ref o) if *o != routes.formula => Err(Error::Precondition(format!(
            "formula route {} disagrees with enumeration {}",
            routes.formula, o
        ))),
        _ => Ok(routes.formula),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_examples() {
        assert_eq!(s_fn(2, 5, 1).unwrap(), 3);
        assert_eq!(s_fn(2, 4, 3).unwrap(), 1);
        assert_eq!(s_fn(3, 2, 5).unwrap(), 0);
        assert!(s_fn(2, 5, 4).is_err());
    }

    #[test]
    fn s_sums_to_length() {
        for p in [2u64, 3, 5] {
            for m in 1..=64u64 {
                let total: u64 = j_p_enumerate(p, m)
                    .into_iter()
                    .map(|u| s_fn(p, m, u).unwrap() as u64)
                    .sum();
                assert_eq!(total, m);
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let f2 = RingDescriptor::fp(2).unwrap();
        let f3 = RingDescriptor::fp(3).unwrap();
        assert_eq!(quotient_structure(2, 3, 1, &f2).unwrap().exponents(), &[2]);
        assert_eq!(quotient_structure(2, 2, 2, &f2).unwrap().exponents(), &[1, 1]);
        assert_eq!(quotient_structure(3, 2, 1, &f3).unwrap().exponents(), &[1]);
    }

    #[test]
    fn decompose_small() {
        let f2 = RingDescriptor::fp(2).unwrap();
        let inv = DecompositionInverse::build(2, 3, &f2, 1 << 10).unwrap();
        assert_eq!(inv.len(), 8);
        let zero = WittVector::zero(&TruncationSet::full(3), &f2);
        let rep = decompose(&zero, 2).unwrap();
        assert_eq!(
            rep.components.iter().map(|c| (c.u, c.length)).collect::<Vec<_>>(),
            vec![(1, 2), (3, 1)]
        );
        assert!(rep.components.iter().all(|c| c.vector.is_zero()));
        assert_eq!(inv.invert(&rep), Some(&zero));
        assert!(decompose(&WittVector::zero(&TruncationSet::full(2), &RingDescriptor::Integers), 2).is_err());
    }
}
