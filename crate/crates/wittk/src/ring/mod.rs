//! Coefficient rings: descriptors, canonical values, and exact arithmetic.

mod gf;
pub(crate) mod json;
mod mpoly;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, mul_mod, prime_power};
use crate::error::{Error, Result};

pub use gf::{is_irreducible, GaloisField, MAX_FIELD_ORDER};
pub use mpoly::{IntPoly, Monomial};

/// Default bound on the number of elements `enumerate_ring` will stream.
pub const DEFAULT_RING_CAP: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    IntegersMod(u64),
    PrimeField(u64),
    FiniteField(GaloisField),
    /// Polynomials over `Integers`, `IntegersMod` or `PrimeField`; variable `i` is `vars[i]`.
    MultivarPoly {
        base: Box<RingDescriptor>,
        vars: Vec<String>,
    },
}

/// Canonical payload of a ring element. Its interpretation depends on the descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(BigInt),
    /// Residue in `[0, m)`, or a packed finite-field element.
    Small(u64),
    Poly(IntPoly),
}

impl Value {
    pub fn as_small(&self) -> u64 {
        match self {
            Value::Small(x) => *x,
            other => panic!("expected a residue, found {other:?}"),
        }
    }

    pub fn as_int(&self) -> &BigInt {
        match self {
            Value::Int(x) => x,
            other => panic!("expected an integer, found {other:?}"),
        }
    }

    pub fn as_poly(&self) -> &IntPoly {
        match self {
            Value::Poly(x) => x,
            other => panic!("expected a polynomial, found {other:?}"),
        }
    }
}

impl RingDescriptor {
    pub fn zmod(m: u64) -> Result<Self> {
        let r = RingDescriptor::IntegersMod(m);
        r.validate()?;
        Ok(r)
    }

    pub fn fp(p: u64) -> Result<Self> {
        let r = RingDescriptor::PrimeField(p);
        r.validate()?;
        Ok(r)
    }

    /// F_{p^f} with the default modulus; `f = 1` gives `PrimeField(p)`.
    pub fn gf(p: u64, f: u32) -> Result<Self> {
        if f == 1 {
            return Self::fp(p);
        }
        Ok(RingDescriptor::FiniteField(GaloisField::new(p, f)?))
    }

    pub fn gf_with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        Ok(RingDescriptor::FiniteField(GaloisField::with_modulus(
            p, modulus,
        )?))
    }

    pub fn poly(base: RingDescriptor, vars: Vec<String>) -> Result<Self> {
        let r = RingDescriptor::MultivarPoly {
            base: Box::new(base),
            vars,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingDescriptor::Integers | RingDescriptor::FiniteField(_) => Ok(()),
            RingDescriptor::IntegersMod(m) if *m >= 2 => Ok(()),
            RingDescriptor::IntegersMod(m) => {
                Err(Error::invalid(format!("Z/{m} needs modulus >= 2")))
            }
            RingDescriptor::PrimeField(p) if is_prime(*p) => Ok(()),
            RingDescriptor::PrimeField(p) => Err(Error::invalid(format!("{p} is not prime"))),
            RingDescriptor::MultivarPoly { base, vars } => {
                match base.as_ref() {
                    RingDescriptor::Integers
                    | RingDescriptor::IntegersMod(_)
                    | RingDescriptor::PrimeField(_) => base.validate()?,
                    _ => {
                        return Err(Error::invalid(
                            "polynomial base must be Z, Z/m or F_p",
                        ))
                    }
                }
                let mut seen = std::collections::BTreeSet::new();
                if vars.iter().any(|v| !seen.insert(v)) {
                    return Err(Error::invalid("duplicate variable name"));
                }
                Ok(())
            }
        }
    }

    /// Modulus of the residue representation (`Z/m`, `F_p`); `None` otherwise.
    fn residue_modulus(&self) -> Option<u64> {
        match self {
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => Some(*m),
            _ => None,
        }
    }

    /// Characteristic, with 0 for characteristic zero.
    pub fn characteristic(&self) -> u64 {
        match self {
            RingDescriptor::Integers => 0,
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => *m,
            RingDescriptor::FiniteField(k) => k.p(),
            RingDescriptor::MultivarPoly { base, .. } => base.characteristic(),
        }
    }

    pub fn cardinality(&self) -> Option<u64> {
        match self {
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => Some(*m),
            RingDescriptor::FiniteField(k) => Some(k.order()),
            _ => None,
        }
    }

    pub fn is_torsion_free(&self) -> bool {
        self.characteristic() == 0
    }

    /// Whether every integer coprime to `p` is a unit.
    pub fn is_p_local(&self, p: u64) -> bool {
        match self {
            RingDescriptor::IntegersMod(m) => prime_power(*m).map(|(q, _)| q) == Some(p),
            RingDescriptor::PrimeField(q) => *q == p,
            RingDescriptor::FiniteField(k) => k.p() == p,
            _ => false,
        }
    }

    pub fn zero(&self) -> Value {
        match self {
            RingDescriptor::Integers => Value::Int(BigInt::zero()),
            RingDescriptor::MultivarPoly { .. } => Value::Poly(IntPoly::zero()),
            _ => Value::Small(0),
        }
    }

    pub fn one(&self) -> Value {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Value {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of an integer under the unique ring map from Z.
    pub fn from_bigint(&self, n: &BigInt) -> Value {
        match self {
            RingDescriptor::Integers => Value::Int(n.clone()),
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => {
                Value::Small(n.mod_floor(&BigInt::from(*m)).to_u64().unwrap())
            }
            RingDescriptor::FiniteField(k) => {
                Value::Small(n.mod_floor(&BigInt::from(k.p())).to_u64().unwrap())
            }
            RingDescriptor::MultivarPoly { base, .. } => {
                let c = base.from_bigint(n);
                Value::Poly(IntPoly::constant(base.lift(&c).unwrap()))
            }
        }
    }

    /// Integer representative of a residue or integer; `None` for field extensions and polynomials.
    pub fn lift(&self, v: &Value) -> Option<BigInt> {
        match (self, v) {
            (RingDescriptor::Integers, Value::Int(x)) => Some(x.clone()),
            (RingDescriptor::IntegersMod(_) | RingDescriptor::PrimeField(_), Value::Small(x)) => {
                Some(BigInt::from(*x))
            }
            (RingDescriptor::FiniteField(k), Value::Small(x)) if *x < k.p() => {
                Some(BigInt::from(*x))
            }
            _ => None,
        }
    }

    /// The polynomial variable `name` as an element.
    pub fn variable(&self, name: &str) -> Result<Value> {
        match self {
            RingDescriptor::MultivarPoly { vars, .. } => vars
                .iter()
                .position(|v| v == name)
                .map(|i| Value::Poly(IntPoly::var(i as u32)))
                .ok_or_else(|| Error::invalid(format!("unknown variable {name}"))),
            _ => Err(Error::invalid("not a polynomial ring")),
        }
    }

    fn reduce_poly(&self, p: IntPoly) -> IntPoly {
        match self {
            RingDescriptor::MultivarPoly { base, .. } => match base.residue_modulus() {
                Some(m) => p.reduce_mod(&BigInt::from(m)),
                None => p,
            },
            _ => p,
        }
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Int(x) => x.is_zero(),
            Value::Small(x) => *x == 0,
            Value::Poly(p) => p.is_zero(),
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match self {
            RingDescriptor::Integers => Value::Int(a.as_int() + b.as_int()),
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => {
                let s = a.as_small() as u128 + b.as_small() as u128;
                Value::Small((s % *m as u128) as u64)
            }
            RingDescriptor::FiniteField(k) => Value::Small(k.add(a.as_small(), b.as_small())),
            RingDescriptor::MultivarPoly { .. } => {
                Value::Poly(self.reduce_poly(a.as_poly().add(b.as_poly())))
            }
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match self {
            RingDescriptor::Integers => Value::Int(-a.as_int()),
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => {
                let x = a.as_small();
                Value::Small(if x == 0 { 0 } else { m - x })
            }
            RingDescriptor::FiniteField(k) => Value::Small(k.neg(a.as_small())),
            RingDescriptor::MultivarPoly { .. } => {
                Value::Poly(self.reduce_poly(a.as_poly().neg()))
            }
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match self {
            RingDescriptor::Integers => Value::Int(a.as_int() * b.as_int()),
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => {
                Value::Small(mul_mod(a.as_small(), b.as_small(), *m))
            }
            RingDescriptor::FiniteField(k) => Value::Small(k.mul(a.as_small(), b.as_small())),
            RingDescriptor::MultivarPoly { .. } => {
                Value::Poly(self.reduce_poly(a.as_poly().mul(b.as_poly())))
            }
        }
    }

    pub fn pow(&self, a: &Value, e: u64) -> Value {
        match self {
            RingDescriptor::Integers => {
                Value::Int(num_traits::pow(a.as_int().clone(), e as usize))
            }
            RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m) => {
                Value::Small(crate::arith::pow_mod(a.as_small(), e, *m))
            }
            RingDescriptor::FiniteField(k) => Value::Small(k.pow(a.as_small(), e)),
            RingDescriptor::MultivarPoly { .. } => {
                let mut result = self.one();
                let mut base = a.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        result = self.mul(&result, &base);
                    }
                    e >>= 1;
                    if e > 0 {
                        base = self.mul(&base, &base);
                    }
                }
                result
            }
        }
    }

    /// Multiply by an integer scalar.
    pub fn scale(&self, a: &Value, n: &BigInt) -> Value {
        self.mul(a, &self.from_bigint(n))
    }

    /// Whether `v` is the canonical payload of some element of this ring.
    pub fn is_canonical(&self, v: &Value) -> bool {
        match (self, v) {
            (RingDescriptor::Integers, Value::Int(_)) => true,
            (RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m), Value::Small(x)) => {
                x < m
            }
            (RingDescriptor::FiniteField(k), Value::Small(x)) => *x < k.order(),
            (RingDescriptor::MultivarPoly { base, vars }, Value::Poly(p)) => {
                let in_range = p.max_var().map_or(true, |v| (v as usize) < vars.len());
                let reduced = match base.residue_modulus() {
                    Some(m) => {
                        let mb = BigInt::from(m);
                        p.terms().all(|(_, c)| !c.is_negative() && c < &mb)
                    }
                    None => true,
                };
                in_range && reduced
            }
            _ => false,
        }
    }

    /// The `idx`-th element in enumeration order (finite rings only).
    pub fn element_at(&self, idx: u64) -> Value {
        debug_assert!(self.cardinality().map_or(false, |c| idx < c));
        Value::Small(idx)
    }

    pub fn format_value(&self, v: &Value) -> String {
        match (self, v) {
            (RingDescriptor::FiniteField(k), Value::Small(x)) => k.format_element(*x),
            (RingDescriptor::MultivarPoly { vars, .. }, Value::Poly(p)) => {
                p.display_with(&|i| vars[i as usize].clone())
            }
            (_, Value::Int(x)) => x.to_string(),
            (_, Value::Small(x)) => x.to_string(),
            (_, Value::Poly(p)) => p.to_string(),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::IntegersMod(m) => write!(f, "Z/{m}"),
            RingDescriptor::PrimeField(p) => write!(f, "F_{p}"),
            RingDescriptor::FiniteField(k) => write!(f, "F_{}", k.order()),
            RingDescriptor::MultivarPoly { base, vars } => {
                write!(f, "{base}[{}]", vars.join(","))
            }
        }
    }
}

/// A value paired with the ring it lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingDescriptor,
    value: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl RingElement {
    /// Wrap a payload, rejecting non-canonical representatives.
    pub fn new(ring: RingDescriptor, value: Value) -> Result<Self> {
        if !ring.is_canonical(&value) {
            return Err(Error::invalid(format!(
                "{value:?} is not a canonical element of {ring}"
            )));
        }
        Ok(RingElement { ring, value })
    }

    pub(crate) fn from_parts(ring: RingDescriptor, value: Value) -> Self {
        debug_assert!(ring.is_canonical(&value));
        RingElement { ring, value }
    }

    pub fn from_int(ring: &RingDescriptor, n: i64) -> Self {
        RingElement {
            ring: ring.clone(),
            value: ring.from_i64(n),
        }
    }

    pub fn zero(ring: &RingDescriptor) -> Self {
        RingElement {
            ring: ring.clone(),
            value: ring.zero(),
        }
    }

    pub fn one(ring: &RingDescriptor) -> Self {
        Self::from_int(ring, 1)
    }

    /// Finite-field element from low-to-high coefficients over F_p.
    pub fn from_coeffs(ring: &RingDescriptor, coeffs: &[u64]) -> Result<Self> {
        match ring {
            RingDescriptor::FiniteField(k) => Ok(RingElement {
                ring: ring.clone(),
                value: Value::Small(k.from_coeffs(coeffs)),
            }),
            _ => {
                let n: BigInt = coeffs.first().copied().unwrap_or(0).into();
                if coeffs.len() > 1 {
                    return Err(Error::invalid("polynomial coefficients need a field extension"));
                }
                Ok(RingElement {
                    ring: ring.clone(),
                    value: ring.from_bigint(&n),
                })
            }
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    fn check(&self, other: &RingElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DescriptorMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn arith(&self, op: ArithOp, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        let r = &self.ring;
        let value = match op {
            ArithOp::Add => r.add(&self.value, &other.value),
            ArithOp::Sub => r.sub(&self.value, &other.value),
            ArithOp::Mul => r.mul(&self.value, &other.value),
        };
        Ok(RingElement {
            ring: r.clone(),
            value,
        })
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.arith(ArithOp::Add, other)
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.arith(ArithOp::Sub, other)
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.arith(ArithOp::Mul, other)
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            value: self.ring.neg(&self.value),
        }
    }

    pub fn pow(&self, e: u64) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            value: self.ring.pow(&self.value, e),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.value)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format_value(&self.value))
    }
}

/// `q` with `n * q = a`, over Z or Z-coefficient polynomials.
pub fn divide_exact(a: &RingElement, n: u64) -> Result<RingElement> {
    if n == 0 {
        return Err(Error::invalid("division by zero"));
    }
    let nb = BigInt::from(n);
    let value = match (&a.ring, &a.value) {
        (RingDescriptor::Integers, Value::Int(x)) => {
            let (q, r) = x.div_rem(&nb);
            if !r.is_zero() {
                return Err(Error::NonIntegral(format!("{x} / {n}")));
            }
            Value::Int(q)
        }
        (RingDescriptor::MultivarPoly { base, .. }, Value::Poly(p))
            if **base == RingDescriptor::Integers =>
        {
            Value::Poly(p.divide_exact(&nb)?)
        }
        _ => {
            return Err(Error::Precondition(format!(
                "exact division needs a torsion-free ring, got {}",
                a.ring
            )))
        }
    };
    Ok(RingElement {
        ring: a.ring.clone(),
        value,
    })
}

/// Largest `j` with `p^j | a`; `None` encodes +infinity (a = 0).
pub fn p_valuation(a: &RingElement, p: u64) -> Result<Option<u64>> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    match (&a.ring, &a.value) {
        (RingDescriptor::Integers, Value::Int(x)) => {
            if x.is_zero() {
                return Ok(None);
            }
            let pb = BigInt::from(p);
            let (mut x, mut k) = (x.abs(), 0u64);
            while (&x % &pb).is_zero() {
                x /= &pb;
                k += 1;
            }
            Ok(Some(k))
        }
        (RingDescriptor::IntegersMod(m) | RingDescriptor::PrimeField(m), Value::Small(x)) => {
            if prime_power(*m).map(|(q, _)| q) != Some(p) {
                return Err(Error::invalid(format!("modulus {m} is not a power of {p}")));
            }
            Ok((*x != 0).then(|| crate::arith::vp(*x, p) as u64))
        }
        _ => Err(Error::invalid(format!(
            "p-adic valuation undefined on {}",
            a.ring
        ))),
    }
}

/// All elements of a finite ring, each exactly once.
pub fn enumerate_ring(
    r: &RingDescriptor,
    cap: u64,
) -> Result<impl Iterator<Item = RingElement> + '_> {
    let n = r
        .cardinality()
        .ok_or_else(|| Error::InfiniteRing(r.to_string()))?;
    if n > cap {
        return Err(Error::cap(format!("|{r}| = {n}"), cap));
    }
    Ok((0..n).map(move |i| RingElement {
        ring: r.clone(),
        value: r.element_at(i),
    }))
}
