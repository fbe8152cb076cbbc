use std::fmt;

use serde_json::{json, Value as Json};

use super::tower::{lim_tower, solve_in, Tower};
use crate::error::{Error, Result};
use crate::group::{AbelianPGroup, Hom, Module, ZpMatrix};
use crate::ring::RingDescriptor;

/// A group computed modulo p^M; summands of exponent M stand for copies of Z_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionGroup {
    pub group: AbelianPGroup,
    pub precision: u32,
}

impl PrecisionGroup {
    /// Summands that reach the precision.
    pub fn saturated(&self) -> usize {
        self.group.exponents().iter().filter(|&&e| e >= self.precision).count()
    }

    /// Exponents strictly below the precision.
    pub fn finite_part(&self) -> Vec<u32> {
        self.group
            .exponents()
            .iter()
            .copied()
            .filter(|&e| e < self.precision)
            .collect()
    }

    /// Same saturated rank and same finite summands.
    pub fn stable_against(&self, finer: &PrecisionGroup) -> bool {
        self.saturated() == finer.saturated() && self.finite_part() == finer.finite_part()
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn to_json(&self) -> Json {
        json!({
            "group": self.group.to_json(),
            "precision": self.precision,
            "zp_rank": self.saturated(),
        })
    }
}

impl fmt::Display for PrecisionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let p = self.group.p();
        let mut parts = Vec::new();
        match self.saturated() {
            0 => {}
            1 => parts.push(format!("Z_{p}")),
            r => parts.push(format!("Z_{p}^{r}")),
        }
        let finite = AbelianPGroup::new(p, self.finite_part(), 0).expect("prime");
        if !finite.is_trivial() {
            parts.push(finite.to_string());
        }
        write!(f, "{} (mod {p}^{})", parts.join(" + "), self.precision)
    }
}

/// Cohomology of the two-term complex `W(k) → lim_n W(k)/(p^n)^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaComplex {
    pub h0: PrecisionGroup,
    pub h1: PrecisionGroup,
    pub h2: PrecisionGroup,
    pub model: String,
}

fn perfect_field(field: &RingDescriptor) -> Result<(u64, u32)> {
    match field {
        RingDescriptor::PrimeField(p) => Ok((*p, 1)),
        RingDescriptor::FiniteField(k) => Ok((k.p(), k.degree())),
        other => Err(Error::invalid(format!("{other} is not a perfect field model"))),
    }
}

pub fn theta_infty(field: &RingDescriptor, i: u64, prec: u32) -> Result<ThetaComplex> {
    let (p, f) = perfect_field(field)?;
    if prec == 0 {
        return Err(Error::invalid("precision must be positive"));
    }
    let dims = f as usize;
    let ainf = Module::free(p, prec, dims);
    let window = Tower::default_window(prec);
    // stage n is W(k)/(d_n)^i with d = p, d_n = p^n; stage 0 is the zero quotient
    let stage_exp = |n: usize| (n as u64 * i).min(prec as u64) as u32;
    let tower = Tower::from_fn(window, |n| {
        (
            Module::from_exponents(p, prec, &vec![stage_exp(n); dims]),
            ZpMatrix::identity(p, prec, dims),
        )
    })?;
    let lim = lim_tower(&tower)?;
    if !lim.lim1.is_trivial() {
        return Err(Error::Precondition("lim^1 of a Mittag-Leffler tower is nonzero".into()));
    }
    // A → lim through the top checked stage, where lim is the stable image
    let stage = tower.stage(lim.stable_stage);
    let cols = (0..dims)
        .map(|j| {
            let mut e = vec![0u64; dims];
            e[j] = 1;
            solve_in(stage, &lim.stable.inclusion, &e)
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Precondition("projection misses the stable image".into()))?;
    let to_lim = Hom::new(
        ainf.clone(),
        lim.stable.module.clone(),
        ZpMatrix::from_columns(p, prec, lim.stable.module.gens(), &cols),
    )?;
    let tag = |g: AbelianPGroup| PrecisionGroup {
        group: g,
        precision: prec,
    };
    Ok(ThetaComplex {
        h0: tag(to_lim.kernel().module.structure()),
        h1: tag(to_lim.cokernel().structure()),
        h2: tag(AbelianPGroup::trivial(p)),
        model: format!("perfect field {field}, d = p"),
    })
}

/// TR_j for 0 <= j <= degree_bound.
pub fn tr_groups(field: &RingDescriptor, degree_bound: u64, prec: u32) -> Result<Vec<(u64, PrecisionGroup)>> {
    let (p, _) = perfect_field(field)?;
    let mut thetas = Vec::new();
    let mut theta = |i: u64| -> Result<ThetaComplex> {
        while thetas.len() as u64 <= i {
            thetas.push(theta_infty(field, thetas.len() as u64, prec)?);
        }
        Ok(thetas[i as usize].clone())
    };
    let mut out = Vec::new();
    for j in 0..=degree_bound {
        let g = if j % 2 == 1 {
            theta((j + 1) / 2)?.h1
        } else {
            let i = j / 2;
            let (quot, sub) = (theta(i)?.h0, theta(i + 1)?.h2);
            if !quot.is_zero() && !sub.is_zero() {
                return Err(Error::Precondition(format!(
                    "TR_{j} is a nontrivial extension; only split cases are supported"
                )));
            }
            PrecisionGroup {
                group: quot.group.direct_sum(&sub.group)?,
                precision: prec,
            }
        };
        debug_assert_eq!(g.group.p(), p);
        out.push((j, g));
    }
    Ok(out)
}
