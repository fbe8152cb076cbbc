use super::factors::{assemble_factors, enumerate_gr_factors};
use super::KGroupResult;
use crate::decomp::{quotient_factor_length, quotient_routes};
use crate::error::{Error, Result};
use crate::group::{structure_of, AbelianPGroup};
use crate::ring::{RingDescriptor, Value};
use crate::witt::DEFAULT_WITT_CAP;

/// p-typical length of the u-factor of W_{re}(F_p)/V_e W_r(F_p).
pub fn h_fn(p: u64, r: u64, e: u64, u: u64) -> Result<u32> {
    if e == 0 || r == 0 {
        return Err(Error::invalid("e and r must be positive"));
    }
    quotient_factor_length(p, e, r, u)
}

fn residue_degree(field: &RingDescriptor, p: u64) -> Result<u32> {
    let (fp, f) = match field {
        RingDescriptor::PrimeField(q) => (*q, 1),
        RingDescriptor::FiniteField(k) => (k.p(), k.degree()),
        other => return Err(Error::invalid(format!("{other} is not a finite field"))),
    };
    if fp != p {
        return Err(Error::invalid(format!(
            "field characteristic {fp} differs from p = {p}"
        )));
    }
    Ok(f)
}

/// K_{2r-1}(R[x]/x^e, (x)) for a perfectoid R with residue field `field`.
pub fn k_odd_perfectoid(p: u64, e: u64, r: u64, field: &RingDescriptor) -> Result<KGroupResult> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let f = residue_degree(field, p)?;
    let routes = quotient_routes(p, e, r, field, DEFAULT_WITT_CAP)?;
    let mut provenance = vec!["formula"];
    if let Some(o) = &routes.oracle {
        if *o != routes.formula {
            return Err(Error::Precondition(format!(
                "formula {} and enumeration {o} disagree",
                routes.formula
            )));
        }
        provenance.push("oracle");
    }
    let factors = enumerate_gr_factors(p, e, r - 1)?;
    let assembled = assemble_factors(p, &factors, f);
    if assembled != routes.formula {
        return Err(Error::Precondition(format!(
            "graded factors assemble to {assembled}, quotient is {}",
            routes.formula
        )));
    }
    provenance.push("gr_factors");
    let mut out = KGroupResult::group(2 * r - 1, routes.formula, &provenance);
    if r == 1 {
        out.notes
            .push("r = 1: factor route checked only against the Witt quotient".into());
    }
    for d in factors.iter().filter(|d| d.equality_boundary) {
        out.notes.push(format!(
            "u = {} sits on the equality boundary u*p^v = e*r; strict reading applied",
            d.u
        ));
    }
    Ok(out)
}

/// Odd group in degree 2r-1 and the trivial even group in degree 2r.
pub fn perfectoid_k_groups(
    p: u64,
    e: u64,
    r: u64,
    field: &RingDescriptor,
) -> Result<(KGroupResult, KGroupResult)> {
    let odd = k_odd_perfectoid(p, e, r, field)?;
    let even = KGroupResult::group(2 * r, AbelianPGroup::trivial(p), &["formula"]);
    Ok((odd, even))
}

/// Structure of (1 + x k[x]/x^e)^× by enumeration, as an independent K_1 oracle.
pub fn k1_unit_group(e: u64, field: &RingDescriptor, cap: u64) -> Result<AbelianPGroup> {
    if e == 0 {
        return Err(Error::invalid("e must be positive"));
    }
    let q = field
        .cardinality()
        .ok_or_else(|| Error::InfiniteRing(field.to_string()))?;
    let p = field.characteristic();
    let len = (e - 1) as u32;
    let total = q
        .checked_pow(len)
        .filter(|&n| n <= cap)
        .ok_or_else(|| Error::cap(format!("|k|^{len}"), cap))?;
    let unpack = |mut idx: u64| -> Vec<Value> {
        let mut c = vec![field.one()];
        for _ in 0..len {
            c.push(Value::Small(idx % q));
            idx /= q;
        }
        c
    };
    let pack = |c: &[Value]| -> u64 { c[1..].iter().rev().fold(0, |acc, v| acc * q + v.as_small()) };
    let mul = |a: &u64, b: &u64| {
        let (x, y) = (unpack(*a), unpack(*b));
        let mut z = vec![field.zero(); e as usize];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate().take(e as usize - i) {
                z[i + j] = field.add(&z[i + j], &field.mul(xi, yj));
            }
        }
        pack(&z)
    };
    structure_of(p, 0u64, 0..total, mul)
}
