//! Universal Witt polynomials by ghost inversion over Z[X, Y].
//!
//! Variable ids: `X_d = 2d`, `Y_d = 2d + 1`. The coordinate-`n` polynomial of an
//! operation only involves indices dividing `n`, so the memo is keyed by
//! `(operation, n)` and is shared by every truncation set containing `n`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use serde_json::{json, Value as Json};

use super::TruncationSet;
use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::ring::json::{bigint_from_json, bigint_to_json};
use crate::ring::{IntPoly, Monomial};

pub const CACHE_FORMAT_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UniversalOp {
    Sum,
    Product,
    Negation,
    /// Coordinates of F_k.
    Frobenius(u64),
}

impl UniversalOp {
    fn tag(&self) -> String {
        match self {
            UniversalOp::Sum => "sum".into(),
            UniversalOp::Product => "product".into(),
            UniversalOp::Negation => "negation".into(),
            UniversalOp::Frobenius(k) => format!("frobenius:{k}"),
        }
    }

    fn from_tag(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(UniversalOp::Sum),
            "product" => Ok(UniversalOp::Product),
            "negation" => Ok(UniversalOp::Negation),
            _ => s
                .strip_prefix("frobenius:")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k > 0)
                .map(UniversalOp::Frobenius)
                .ok_or_else(|| Error::Parse(format!("unknown operation tag '{s}'"))),
        }
    }

    /// Whether the polynomials use the `Y` variables.
    pub fn is_binary(&self) -> bool {
        matches!(self, UniversalOp::Sum | UniversalOp::Product)
    }
}

pub fn x_var(d: u64) -> u32 {
    (2 * d) as u32
}

pub fn y_var(d: u64) -> u32 {
    (2 * d + 1) as u32
}

/// Human-readable name of a universal variable id.
pub fn var_name(v: u32) -> String {
    let d = v / 2;
    if v % 2 == 0 {
        format!("X{d}")
    } else {
        format!("Y{d}")
    }
}

type Key = (UniversalOp, u64);

fn memo() -> &'static RwLock<HashMap<Key, Arc<IntPoly>>> {
    static MEMO: OnceLock<RwLock<HashMap<Key, Arc<IntPoly>>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn lookup(key: &Key) -> Option<Arc<IntPoly>> {
    memo().read().expect("memo lock").get(key).cloned()
}

/// Insert unless present; concurrent fills compute identical polynomials.
fn store(key: Key, poly: IntPoly) -> Arc<IntPoly> {
    let mut guard = memo().write().expect("memo lock");
    guard.entry(key).or_insert_with(|| Arc::new(poly)).clone()
}

/// w_n(X) = Σ_{d|n} d X_d^{n/d}, with `Y` variables when `second` is set.
pub fn ghost_poly(n: u64, second: bool) -> IntPoly {
    let mut out = IntPoly::zero();
    for d in divisors(n) {
        let v = if second { y_var(d) } else { x_var(d) };
        let term = IntPoly::monomial(
            Monomial::from_pairs(vec![(v, (n / d) as u32)]),
            BigInt::from(d),
        );
        out = out.add(&term);
    }
    out
}

fn target(op: UniversalOp, n: u64) -> IntPoly {
    match op {
        UniversalOp::Sum => ghost_poly(n, false).add(&ghost_poly(n, true)),
        UniversalOp::Product => ghost_poly(n, false).mul(&ghost_poly(n, true)),
        UniversalOp::Negation => ghost_poly(n, false).neg(),
        UniversalOp::Frobenius(k) => ghost_poly(k * n, false),
    }
}

/// Coordinate-`n` polynomial of `op`, computed on first use.
pub fn universal_poly(op: UniversalOp, n: u64) -> Result<Arc<IntPoly>> {
    if let Some(p) = lookup(&(op, n)) {
        return Ok(p);
    }
    let mut rhs = target(op, n);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let pd = universal_poly(op, d)?;
        let term = pd.pow((n / d) as u32).scale(&BigInt::from(d));
        rhs = rhs.sub(&term);
    }
    let poly = rhs.divide_exact(&BigInt::from(n))?;
    Ok(store((op, n), poly))
}

/// The polynomials `n ↦ P_n` for every index of `trunc`.
pub fn universal_polys(
    trunc: &TruncationSet,
    op: UniversalOp,
) -> Result<BTreeMap<u64, Arc<IntPoly>>> {
    trunc.check_cap()?;
    let outputs = match op {
        UniversalOp::Frobenius(k) => trunc.div(k),
        _ => trunc.clone(),
    };
    outputs
        .iter()
        .map(|n| Ok((n, universal_poly(op, n)?)))
        .collect()
}

/// Number of memoized polynomials.
pub fn cache_len() -> usize {
    memo().read().expect("memo lock").len()
}

/// Serialize the memo to a versioned JSON file.
pub fn save_cache(path: &Path) -> Result<usize> {
    let guard = memo().read().expect("memo lock");
    let mut keys: Vec<&Key> = guard.keys().collect();
    keys.sort();
    let entries: Vec<Json> = keys
        .iter()
        .map(|key| {
            let poly = &guard[*key];
            let terms: Vec<Json> = poly
                .terms()
                .map(|(m, c)| json!([bigint_to_json(c), m.pairs()]))
                .collect();
            json!({"op": key.0.tag(), "n": key.1, "terms": terms})
        })
        .collect();
    let doc = json!({"version": CACHE_FORMAT_VERSION, "entries": entries});
    std::fs::write(path, serde_json::to_string(&doc).expect("plain data"))
        .map_err(|e| Error::Parse(format!("cannot write cache: {e}")))?;
    Ok(keys.len())
}

/// Merge a cache file into the memo. Entries already present are kept.
pub fn load_cache(path: &Path) -> Result<usize> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read cache: {e}")))?;
    let doc: Json = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let version = doc.get("version").and_then(Json::as_u64);
    if version != Some(CACHE_FORMAT_VERSION) {
        return Err(Error::Parse(format!(
            "cache version {version:?}, expected {CACHE_FORMAT_VERSION}"
        )));
    }
    let entries = doc
        .get("entries")
        .and_then(Json::as_array)
        .ok_or_else(|| Error::Parse("cache has no entries".into()))?;
    let mut loaded = 0;
    for e in entries {
        let op = UniversalOp::from_tag(
            e.get("op")
                .and_then(Json::as_str)
                .ok_or_else(|| Error::Parse("entry without op".into()))?,
        )?;
        let n = e
            .get("n")
            .and_then(Json::as_u64)
            .ok_or_else(|| Error::Parse("entry without n".into()))?;
        let mut poly = IntPoly::zero();
        for t in e.get("terms").and_then(Json::as_array).into_iter().flatten() {
            let c = bigint_from_json(&t[0])?;
            let mono: Vec<(u32, u32)> =
                serde_json::from_value(t[1].clone()).map_err(|e| Error::Parse(e.to_string()))?;
            poly = poly.add(&IntPoly::monomial(Monomial::from_pairs(mono), c));
        }
        store((op, n), poly);
        loaded += 1;
    }
    Ok(loaded)
}

/// Display wrapper naming variables `X_d`, `Y_d`.
pub struct Named<'a>(pub &'a IntPoly);

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.display_with(&var_name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(d: u64, second: bool) -> IntPoly {
        IntPoly::var(if second { y_var(d) } else { x_var(d) })
    }

    #[test]
    fn sum_full_two() {
        let s1 = universal_poly(UniversalOp::Sum, 1).unwrap();
        assert_eq!(*s1, v(1, false).add(&v(1, true)));
        let s2 = universal_poly(UniversalOp::Sum, 2).unwrap();
        let expected = v(2, false)
            .add(&v(2, true))
            .sub(&v(1, false).mul(&v(1, true)));
        assert_eq!(*s2, expected);
    }

    #[test]
    fn product_full_one() {
        let p1 = universal_poly(UniversalOp::Product, 1).unwrap();
        assert_eq!(*p1, v(1, false).mul(&v(1, true)));
    }

    #[test]
    fn frobenius_two_first_coordinate() {
        // ghost_1(F_2 x) = ghost_2(x) = X1^2 + 2 X2
        let f = universal_poly(UniversalOp::Frobenius(2), 1).unwrap();
        assert_eq!(*f, v(1, false).pow(2).add(&v(2, false).scale(&BigInt::from(2))));
    }

    #[test]
    fn display_names() {
        let s2 = universal_poly(UniversalOp::Sum, 2).unwrap();
        let text = Named(&s2).to_string();
        assert!(text.contains("X2") && text.contains("X1*Y1"));
    }

    #[test]
    fn cache_round_trip() {
        universal_polys(&TruncationSet::full(4), UniversalOp::Product).unwrap();
        let dir = std::env::temp_dir().join(format!("wittk-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("memo.json");
        let saved = save_cache(&path).unwrap();
        assert!(saved >= 4);
        assert_eq!(load_cache(&path).unwrap(), saved);
        std::fs::write(&path, r#"{"version":999,"entries":[]}"#).unwrap();
        assert!(load_cache(&path).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn caps_enforced() {
        assert!(matches!(
            universal_polys(&TruncationSet::full(25), UniversalOp::Sum),
            Err(Error::CapExceeded { .. })
        ));
    }
}
