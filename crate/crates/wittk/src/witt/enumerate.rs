use super::{TruncationSet, WittVector};
use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, Value};

/// Default bound on the number of vectors `enumerate_witt` will stream.
pub const DEFAULT_WITT_CAP: u64 = 1 << 22;

/// |W_T(R)| = |R|^|T| for a finite ring, if it fits in u64.
pub fn witt_cardinality(trunc: &TruncationSet, ring: &RingDescriptor) -> Option<u64> {
    ring.cardinality()?.checked_pow(trunc.len() as u32)
}

/// Every vector of W_T(R), first coefficient varying fastest.
pub fn enumerate_witt(
    trunc: &TruncationSet,
    ring: &RingDescriptor,
    cap: u64,
) -> Result<impl Iterator<Item = WittVector>> {
    let q = ring
        .cardinality()
        .ok_or_else(|| Error::InfiniteRing(ring.to_string()))?;
    let total = witt_cardinality(trunc, ring)
        .filter(|&n| n <= cap)
        .ok_or_else(|| Error::cap(format!("|W_{trunc}({ring})|"), cap))?;
    let (trunc, ring) = (trunc.clone(), ring.clone());
    let len = trunc.len();
    Ok((0..total).map(move |mut idx| {
        let mut xs = Vec::with_capacity(len);
        for _ in 0..len {
            xs.push(Value::Small(idx % q));
            idx /= q;
        }
        WittVector::from_parts(trunc.clone(), ring.clone(), xs)
    }))
}
