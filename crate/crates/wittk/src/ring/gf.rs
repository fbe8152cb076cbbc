//! Finite fields F_{p^f} given by an explicit monic irreducible modulus.
//!
//! Elements are packed base-p integers: the coefficient of a^i is digit i.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::arith::{inv_mod, is_prime};
use crate::error::{Error, Result};

/// Largest field order accepted.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Primitive moduli for common small fields, low-to-high coefficients.
const DEFAULT_MODULI: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    f: u32,
    q: u64,
    modulus: Vec<u64>,
    tables: OnceLock<Tables>,
}

/// The field F_p[a]/(modulus). Cheap to clone.
#[derive(Clone)]
pub struct GaloisField(Arc<Inner>);

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for GaloisField {}

impl Hash for GaloisField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.0.p, self.0.f, self.0.modulus)
    }
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
    while a.len() > db {
        let top = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        if top != 0 {
            let c = top * lead_inv % p;
            for (k, &bk) in b.iter().enumerate() {
                a[shift + k] = (a[shift + k] + p - c * bk % p) % p;
            }
        }
        a.pop();
    }
    a
}

/// Exhaustive irreducibility test: no monic divisor of degree 1..=deg/2.
pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                g.push(x % p);
                x /= p;
            }
            g.push(1);
            if poly_rem(modulus.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    /// Field with an explicit modulus (low-to-high, monic, irreducible).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(Error::invalid("modulus must have degree >= 1"));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::invalid("modulus must be monic"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::invalid("modulus coefficients must lie in [0,p)"));
        }
        let f = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(f)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::cap(format!("field order {p}^{f}"), MAX_FIELD_ORDER))?;
        if !is_irreducible(&modulus, p) {
            return Err(Error::invalid(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(GaloisField(Arc::new(Inner {
            p,
            f,
            q,
            modulus,
            tables: OnceLock::new(),
        })))
    }

    /// Field with the built-in default modulus, or the first primitive one in search order.
    pub fn new(p: u64, f: u32) -> Result<Self> {
        if f == 0 {
            return Err(Error::invalid("extension degree must be >= 1"));
        }
        if let Some((_, _, m)) = DEFAULT_MODULI
            .iter()
            .find(|(pp, ff, _)| *pp == p && *ff == f)
        {
            return Self::with_modulus(p, m.to_vec());
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let q = p
            .checked_pow(f)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::cap(format!("field order {p}^{f}"), MAX_FIELD_ORDER))?;
        if f == 1 {
            return Self::with_modulus(p, vec![0, 1]);
        }
        for low in (0..q / p * p).filter(|x| x % p != 0) {
            let mut m = Vec::with_capacity(f as usize + 1);
            let mut x = low;
            for _ in 0..f {
                m.push(x % p);
                x /= p;
            }
            m.push(1);
            if !is_irreducible(&m, p) {
                continue;
            }
            let field = Self::with_modulus(p, m)?;
            if field.is_primitive_generator() {
                return Ok(field);
            }
        }
        Err(Error::invalid(format!("no modulus found for GF({p}^{f})")))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.f
    }
    pub fn order(&self) -> u64 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    fn multiplicative_order_is_full(&self, g: u64) -> bool {
        let q1 = self.0.q - 1;
        let mut x = 1u64;
        for k in 1..=q1 {
            x = self.mul_slow(x, g);
            if x == 1 {
                return k == q1;
            }
        }
        false
    }

    /// Whether the class of `a` generates the multiplicative group.
    pub fn is_primitive_generator(&self) -> bool {
        if self.0.f == 1 {
            return true;
        }
        self.multiplicative_order_is_full(self.0.p)
    }

    fn first_generator(&self) -> u64 {
        if self.0.f > 1 && self.multiplicative_order_is_full(self.0.p) {
            return self.0.p;
        }
        (1..self.0.q)
            .find(|&g| self.multiplicative_order_is_full(g))
            .unwrap_or(1)
    }

    pub fn digits(&self, mut x: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.0.f as usize);
        for _ in 0..self.0.f {
            d.push(x % self.0.p);
            x /= self.0.p;
        }
        d
    }

    pub fn pack(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.0.p + d % self.0.p)
    }

    /// Pack an arbitrary-length coefficient list, reducing modulo the modulus.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> u64 {
        let p = self.0.p;
        let v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        if v.len() <= self.0.f as usize {
            return self.pack(&v);
        }
        self.pack(&poly_rem(v, &self.0.modulus, p))
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        self.pack(&poly_rem(prod, &self.0.modulus, p))
    }

    fn tables(&self) -> &Tables {
        self.0.tables.get_or_init(|| {
            let q = self.0.q;
            let g = self.first_generator();
            let mut exp = Vec::with_capacity((q - 1) as usize);
            let mut log = vec![0u32; q as usize];
            let mut x = 1u64;
            for k in 0..q - 1 {
                exp.push(x as u32);
                log[x as usize] = k as u32;
                x = self.mul_slow(x, g);
            }
            Tables { exp, log }
        })
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.f == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a, 0u64, 1u64);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = self.tables();
        let q1 = self.0.q - 1;
        let k = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % q1;
        t.exp[k as usize] as u64
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = self.tables();
        let q1 = self.0.q - 1;
        let k = (t.log[a as usize] as u128 * e as u128 % q1 as u128) as u64;
        t.exp[k as usize] as u64
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let t = self.tables();
        let q1 = self.0.q - 1;
        let k = (q1 - t.log[a as usize] as u64) % q1;
        Some(t.exp[k as usize] as u64)
    }

    pub fn format_element(&self, x: u64) -> String {
        let d = self.digits(x);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".into(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}
