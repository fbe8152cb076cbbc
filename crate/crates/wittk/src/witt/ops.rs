//! Witt vector operations.
//!
//! Ring operations always evaluate universal polynomials; the ghost route is kept
//! only for torsion-free coefficients and as an oracle.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use super::universal::{universal_poly, UniversalOp};
use super::{GhostVector, TruncationSet, WittVector};
use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::ring::{divide_exact, RingDescriptor, RingElement, Value};

/// Universal polynomials specialized to one coefficient ring and one input layout.
struct Plan {
    ring: RingDescriptor,
    /// Distinct `(input slot, exponent)` powers needed by any term.
    powers: Vec<(usize, u64)>,
    /// Per output index: `(coefficient, indices into powers)`.
    outputs: Vec<Vec<(Value, Vec<usize>)>>,
}

impl Plan {
    fn build(
        ring: &RingDescriptor,
        input: &TruncationSet,
        op: UniversalOp,
        outputs: &TruncationSet,
    ) -> Result<Plan> {
        input.check_cap()?;
        let len = input.len();
        let mut power_ids: HashMap<(usize, u64), usize> = HashMap::new();
        let mut powers = Vec::new();
        let mut out = Vec::with_capacity(outputs.len());
        for n in outputs.iter() {
            let poly = universal_poly(op, n)?;
            let mut terms = Vec::with_capacity(poly.num_terms());
            for (mono, c) in poly.terms() {
                let coeff = ring.from_bigint(c);
                if ring.is_zero(&coeff) {
                    continue;
                }
                let mut idx = Vec::with_capacity(mono.pairs().len());
                for &(var, e) in mono.pairs() {
                    let d = (var / 2) as u64;
                    let pos = input
                        .position(d)
                        .expect("universal polynomial variables lie in the truncation set");
                    let slot = if var % 2 == 0 { pos } else { len + pos };
                    let key = (slot, e as u64);
                    let id = *power_ids.entry(key).or_insert_with(|| {
                        powers.push(key);
                        powers.len() - 1
                    });
                    idx.push(id);
                }
                terms.push((coeff, idx));
            }
            out.push(terms);
        }
        Ok(Plan {
            ring: ring.clone(),
            powers,
            outputs: out,
        })
    }

    fn eval(&self, inputs: &[&Value]) -> Vec<Value> {
        let r = &self.ring;
        let pw: Vec<Value> = self
            .powers
            .iter()
            .map(|&(slot, e)| r.pow(inputs[slot], e))
            .collect();
        let zero: Vec<bool> = pw.iter().map(|v| r.is_zero(v)).collect();
        self.outputs
            .iter()
            .map(|terms| {
                let mut acc = r.zero();
                for (c, idx) in terms {
                    if idx.iter().any(|&i| zero[i]) {
                        continue;
                    }
                    let mut t = c.clone();
                    for &i in idx {
                        t = r.mul(&t, &pw[i]);
                    }
                    acc = r.add(&acc, &t);
                }
                acc
            })
            .collect()
    }
}

type PlanKey = (RingDescriptor, TruncationSet, UniversalOp, TruncationSet);

fn plan(
    ring: &RingDescriptor,
    input: &TruncationSet,
    op: UniversalOp,
    outputs: &TruncationSet,
) -> Result<Arc<Plan>> {
    static PLANS: OnceLock<RwLock<HashMap<PlanKey, Arc<Plan>>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| RwLock::new(HashMap::new()));
    let key = (ring.clone(), input.clone(), op, outputs.clone());
    if let Some(p) = plans.read().expect("plan lock").get(&key) {
        return Ok(p.clone());
    }
    let built = Arc::new(Plan::build(ring, input, op, outputs)?);
    let mut guard = plans.write().expect("plan lock");
    Ok(guard.entry(key).or_insert(built).clone())
}

fn same_space(a: &WittVector, b: &WittVector) -> Result<()> {
    if a.ring() != b.ring() {
        return Err(Error::DescriptorMismatch(format!("{} vs {}", a.ring(), b.ring())));
    }
    if a.trunc() != b.trunc() {
        return Err(Error::DescriptorMismatch(format!(
            "truncation {} vs {}",
            a.trunc(),
            b.trunc()
        )));
    }
    Ok(())
}

fn binary(op: UniversalOp, a: &WittVector, b: &WittVector) -> Result<WittVector> {
    same_space(a, b)?;
    let pl = plan(a.ring(), a.trunc(), op, a.trunc())?;
    let inputs: Vec<&Value> = a.values().iter().chain(b.values()).collect();
    Ok(WittVector::from_parts(a.trunc().clone(), a.ring().clone(), pl.eval(&inputs)))
}

pub fn witt_add(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    binary(UniversalOp::Sum, a, b)
}

pub fn witt_mul(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    binary(UniversalOp::Product, a, b)
}

pub fn witt_neg(a: &WittVector) -> Result<WittVector> {
    let pl = plan(a.ring(), a.trunc(), UniversalOp::Negation, a.trunc())?;
    let inputs: Vec<&Value> = a.values().iter().collect();
    Ok(WittVector::from_parts(a.trunc().clone(), a.ring().clone(), pl.eval(&inputs)))
}

pub fn witt_sub(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    witt_add(a, &witt_neg(b)?)
}

/// `k · a` by double-and-add.
pub fn witt_scale(a: &WittVector, k: i64) -> Result<WittVector> {
    let base = if k < 0 { witt_neg(a)? } else { a.clone() };
    let mut m = k.unsigned_abs();
    let mut acc = WittVector::zero(a.trunc(), a.ring());
    let mut pow = base;
    while m > 0 {
        if m & 1 == 1 {
            acc = witt_add(&acc, &pow)?;
        }
        m >>= 1;
        if m > 0 {
            pow = witt_add(&pow, &pow)?;
        }
    }
    Ok(acc)
}

/// w_n = Σ_{d|n} d·x_d^{n/d}, evaluated in the coefficient ring.
pub fn ghost(w: &WittVector) -> GhostVector {
    let r = w.ring();
    let t = w.trunc();
    let comps = t
        .iter()
        .map(|n| {
            let mut acc = r.zero();
            for d in divisors(n) {
                let x = &w.values()[t.position(d).expect("divisor-closed")];
                let term = r.scale(&r.pow(x, n / d), &BigInt::from(d));
                acc = r.add(&acc, &term);
            }
            acc
        })
        .collect();
    GhostVector::from_parts(t.clone(), r.clone(), comps)
}

/// Inverse of the ghost map over Z or Z-polynomials.
pub fn from_ghost(g: &GhostVector) -> Result<WittVector> {
    let r = g.ring();
    let torsion_free = match r {
        RingDescriptor::Integers => true,
        RingDescriptor::MultivarPoly { base, .. } => **base == RingDescriptor::Integers,
        _ => false,
    };
    if !torsion_free {
        return Err(Error::Precondition(format!(
            "ghost inversion needs Z or Z-polynomial coefficients, got {r}"
        )));
    }
    let t = g.trunc();
    let mut xs: Vec<Value> = Vec::with_capacity(t.len());
    for (i, n) in t.iter().enumerate() {
        let mut rest = g.values()[i].clone();
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let x = &xs[t.position(d).expect("divisor-closed")];
            rest = r.sub(&rest, &r.scale(&r.pow(x, n / d), &BigInt::from(d)));
        }
        let q = divide_exact(&RingElement::from_parts(r.clone(), rest), n)
            .map_err(|e| match e {
                Error::NonIntegral(_) => {
                    Error::NonIntegral(format!("no integral Witt vector has this ghost (index {n})"))
                }
                other => other,
            })?;
        xs.push(q.into_value());
    }
    Ok(WittVector::from_parts(t.clone(), r.clone(), xs))
}

fn ghost_binary(a: &WittVector, b: &WittVector, mul: bool) -> Result<WittVector> {
    same_space(a, b)?;
    let (ga, gb) = (ghost(a), ghost(b));
    let r = a.ring();
    let comps = ga
        .values()
        .iter()
        .zip(gb.values())
        .map(|(x, y)| if mul { r.mul(x, y) } else { r.add(x, y) })
        .collect();
    from_ghost(&GhostVector::from_parts(a.trunc().clone(), r.clone(), comps))
}

/// Sum through the ghost map (torsion-free rings only).
pub fn witt_add_via_ghost(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    ghost_binary(a, b, false)
}

/// Product through the ghost map (torsion-free rings only).
pub fn witt_mul_via_ghost(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    ghost_binary(a, b, true)
}

/// V_n: reindex `y_{nd} = x_d` into `target`, zero elsewhere.
pub fn verschiebung(n: u64, w: &WittVector, target: &TruncationSet) -> Result<WittVector> {
    if n == 0 {
        return Err(Error::invalid("Verschiebung index must be positive"));
    }
    let r = w.ring();
    let mut ys = vec![r.zero(); target.len()];
    for (d, x) in w.trunc().iter().zip(w.values()) {
        let pos = target.position(n * d).ok_or_else(|| {
            Error::invalid(format!(
                "{n}·{} is not contained in target {target}",
                w.trunc()
            ))
        })?;
        ys[pos] = x.clone();
    }
    Ok(WittVector::from_parts(target.clone(), r.clone(), ys))
}

/// F_n: W_T → W_{T/n}, characterized by ghost_m(F_n w) = ghost_{nm}(w).
pub fn frobenius(n: u64, w: &WittVector) -> Result<WittVector> {
    frobenius_into(n, w, &w.trunc().div(n))
}

/// F_n followed by restriction to `outputs ⊆ T/n`.
pub fn frobenius_into(n: u64, w: &WittVector, outputs: &TruncationSet) -> Result<WittVector> {
    if n == 0 {
        return Err(Error::invalid("Frobenius index must be positive"));
    }
    if !outputs.is_subset_of(&w.trunc().div(n)) {
        return Err(Error::invalid(format!(
            "{outputs} is not contained in {}/{n}",
            w.trunc()
        )));
    }
    if n == 1 {
        return restriction(w, outputs);
    }
    let pl = plan(w.ring(), w.trunc(), UniversalOp::Frobenius(n), outputs)?;
    let inputs: Vec<&Value> = w.values().iter().collect();
    Ok(WittVector::from_parts(outputs.clone(), w.ring().clone(), pl.eval(&inputs)))
}

/// [a] = (a, 0, 0, ...).
pub fn teichmuller(a: &RingElement, trunc: &TruncationSet) -> WittVector {
    let r = a.ring();
    let mut xs = vec![r.zero(); trunc.len()];
    if let Some(first) = xs.first_mut() {
        *first = a.value().clone();
    }
    WittVector::from_parts(trunc.clone(), r.clone(), xs)
}

/// Forget the coefficients outside `sub`.
pub fn restriction(w: &WittVector, sub: &TruncationSet) -> Result<WittVector> {
    if !sub.is_subset_of(w.trunc()) {
        return Err(Error::invalid(format!("{sub} is not a subset of {}", w.trunc())));
    }
    let xs = sub
        .iter()
        .map(|n| w.values()[w.trunc().position(n).unwrap()].clone())
        .collect();
    Ok(WittVector::from_parts(sub.clone(), w.ring().clone(), xs))
}

/// Coefficientwise integer lift into `target` (e.g. F_p → Z, or Z → Z/m).
pub fn change_ring(w: &WittVector, target: &RingDescriptor) -> Result<WittVector> {
    let xs = w
        .values()
        .iter()
        .map(|v| {
            w.ring()
                .lift(v)
                .map(|n| target.from_bigint(&n))
                .ok_or_else(|| Error::Precondition(format!("{} has no integer lift", w.ring())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WittVector::from_parts(w.trunc().clone(), target.clone(), xs))
}
