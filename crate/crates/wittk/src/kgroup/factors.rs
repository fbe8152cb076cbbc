//! Graded factors of the filtration on relative TC of `R[x]/x^e` over a perfectoid `R`.
//!
//! One factor per `u ∈ J_p` with `s = s(p, e(i+1), u) >= 1`. The factor is
//! `W_s` unless `u ∈ e'J_p` and `u p^{v_p(e)} <= e(i+1)`, where it collapses to
//! `W_{v_p(e)}`. The boundary `u p^{v_p(e)} = e(i+1)` belongs to the collapsed case.

use serde::Serialize;

use super::notation::{e_prime, j_p_enumerate, t_shifted};
use crate::arith::{is_prime, vp};
use crate::decomp::s_fn;
use crate::error::{Error, Result};
use crate::group::{AbelianPGroup, Hom, Module, ZpMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorCase {
    Generic,
    PhiPullback,
    Absent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorDescriptor {
    pub u: u64,
    pub s: u32,
    pub t: i64,
    pub case: FactorCase,
    pub twist: i64,
    /// Over F_p; see `assemble_factors` for larger residue fields.
    pub group: AbelianPGroup,
    /// `u p^{v_p(e)} = e(i+1)`: the two readings of the case split differ here.
    pub equality_boundary: bool,
}

fn check(p: u64, e: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if e == 0 {
        return Err(Error::invalid("e must be positive"));
    }
    Ok(())
}

pub fn enumerate_gr_factors(p: u64, e: u64, i: u64) -> Result<Vec<FactorDescriptor>> {
    check(p, e)?;
    let top = e * (i + 1);
    let v = vp(e, p);
    let ep = e_prime(e, p);
    let mut out = Vec::new();
    for u in j_p_enumerate(p, top) {
        let s = s_fn(p, top, u)?;
        if s == 0 {
            continue;
        }
        let weight = u as u128 * (p as u128).pow(v);
        let in_image = u % ep == 0;
        let collapsed = in_image && weight <= top as u128;
        let case = match (collapsed, v) {
            (false, _) => FactorCase::Generic,
            (true, 0) => FactorCase::Absent,
            (true, _) => FactorCase::PhiPullback,
        };
        let length = match case {
            FactorCase::Generic => s,
            FactorCase::PhiPullback => v,
            FactorCase::Absent => 0,
        };
        let t = t_shifted(u, p, s, e);
        out.push(FactorDescriptor {
            u,
            s,
            t,
            case,
            twist: t.div_euclid(p as i64),
            group: AbelianPGroup::homocyclic(p, length, 1),
            equality_boundary: in_image && weight == top as u128,
        });
    }
    Ok(out)
}

/// Direct sum of the factors over F_{p^f}: each W_s(F_{p^f}) is (Z/p^s)^f.
pub fn assemble_factors(p: u64, factors: &[FactorDescriptor], f: u32) -> AbelianPGroup {
    let exps = factors
        .iter()
        .flat_map(|d| {
            d.group
                .exponents()
                .iter()
                .flat_map(move |&x| std::iter::repeat(x).take(f as usize))
        })
        .collect();
    AbelianPGroup::new(p, exps, 0).expect("prime checked")
}

struct Level {
    weight: u64,
    src: u32,
    tgt: u32,
}

/// The u-factor over F_p computed from the weight tower: the equalizer of `can`
/// and `φ` on `⊕ Src_m → ⊕ Tgt_m`, with levels at weights `u p^m`.
pub fn tower_factor(p: u64, e: u64, i: u64, u: u64) -> Result<AbelianPGroup> {
    check(p, e)?;
    if u % p == 0 {
        return Err(Error::invalid(format!("{u} is not coprime to {p}")));
    }
    let v = vp(e, p);
    let mut levels = Vec::new();
    let mut w = u;
    let mut m = 0u32;
    while w <= e * (i + 1) {
        let k_type = w % e == 0;
        if !k_type || w <= e * i {
            let (src, tgt) = if k_type { (v, v) } else { (m + 1, m) };
            levels.push(Level { weight: w, src, tgt });
        }
        w *= p;
        m += 1;
    }
    if levels.is_empty() {
        return Ok(AbelianPGroup::trivial(p));
    }
    let prec = levels.iter().map(|l| l.src).max().unwrap_or(0) + 1;
    let src = Module::from_exponents(p, prec, &levels.iter().map(|l| l.src).collect::<Vec<_>>());
    let tgt = Module::from_exponents(p, prec, &levels.iter().map(|l| l.tgt).collect::<Vec<_>>());
    let n = levels.len();
    let mut mat = ZpMatrix::zeros(p, prec, n, n);
    let modulus = mat.modulus();
    for (k, l) in levels.iter().enumerate() {
        let t = (l.weight - 1) / e;
        let shift = (i - t) as u32;
        let can = if shift >= prec { 0 } else { p.pow(shift) % modulus };
        mat.set(k, k, can);
        if k + 1 < n {
            mat.set(k + 1, k, modulus - 1);
        }
    }
    let hom = Hom::new(src, tgt, mat)?;
    if !hom.cokernel().is_zero() {
        return Err(Error::Precondition(format!(
            "weight tower for u = {u} has a nonzero cokernel"
        )));
    }
    Ok(hom.kernel().module.structure())
}
