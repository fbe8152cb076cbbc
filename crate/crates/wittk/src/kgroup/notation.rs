use num_integer::Integer;

use crate::arith::vp;
use crate::error::{Error, Result};

/// Integers in [1, bound] coprime to p, ascending.
pub fn j_p_enumerate(p: u64, bound: u64) -> Vec<u64> {
    (1..=bound).filter(|u| u % p != 0).collect()
}

/// The prime-to-p part of e.
pub fn e_prime(e: u64, p: u64) -> u64 {
    e / p.pow(vp(e, p))
}

/// ⌊(u p^{s-1} - 1)/e⌋ for s >= 1.
pub fn t_fn(u: u64, p: u64, s: i64, e: u64) -> Result<i64> {
    if s < 1 {
        return Err(Error::invalid(format!("t-function needs s >= 1, got {s}")));
    }
    let top = u as i128 * (p as i128).pow((s - 1) as u32) - 1;
    Ok(Integer::div_floor(&top, &(e as i128)) as i64)
}

/// ⌊(u p^{s-2} - 1)/e⌋ for s >= 1, evaluated exactly (s = 1 is a rational numerator).
pub fn t_shifted(u: u64, p: u64, s: u32, e: u64) -> i64 {
    debug_assert!(s >= 1);
    // (u p^{s-2} - 1)/e = (u p^{s-1} - p)/(p e)
    let num = u as i128 * (p as i128).pow(s - 1) - p as i128;
    Integer::div_floor(&num, &(p as i128 * e as i128)) as i64
}
