//! Relative K-groups of truncated polynomial algebras `R[x]/x^e` and `A[x]/x^n`.

mod cdvr;
mod factors;
mod integral;
mod notation;
mod perfectoid;

use serde_json::{json, Value as Json};

use crate::group::AbelianPGroup;

pub use cdvr::{
    cdvr_even_recursive, cdvr_from_polynomial, cdvr_k_groups, rank_count, recursive_levels, CdvrData,
    LevelTerm, RECURSION_GRID,
};
pub use factors::{assemble_factors, enumerate_gr_factors, tower_factor, FactorCase, FactorDescriptor};
pub use integral::{integral_agh, IntegralOrder, NumberRingData, PrimeData};
pub use notation::{e_prime, j_p_enumerate, t_fn, t_shifted};
pub use perfectoid::{h_fn, k1_unit_group, k_odd_perfectoid, perfectoid_k_groups};

/// Torsion part of a K-group: a full structure, or only the p-adic valuation of its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Torsion {
    Group(AbelianPGroup),
    Valuation { p: u64, v: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KGroupResult {
    pub degree: u64,
    pub free_rank: u64,
    pub torsion: Torsion,
    pub provenance: Vec<String>,
    pub notes: Vec<String>,
}

impl KGroupResult {
    pub fn group(degree: u64, g: AbelianPGroup, provenance: &[&str]) -> Self {
        KGroupResult {
            degree,
            free_rank: g.free_rank() as u64,
            torsion: Torsion::Group(g),
            provenance: provenance.iter().map(|s| s.to_string()).collect(),
            notes: Vec::new(),
        }
    }

    pub fn structure(&self) -> Option<&AbelianPGroup> {
        match &self.torsion {
            Torsion::Group(g) => Some(g),
            Torsion::Valuation { .. } => None,
        }
    }

    /// v_p of the torsion order.
    pub fn order_valuation(&self) -> u64 {
        match &self.torsion {
            Torsion::Group(g) => g.log_order(),
            Torsion::Valuation { v, .. } => *v,
        }
    }

    pub fn to_json(&self) -> Json {
        let (torsion, valuation) = match &self.torsion {
            Torsion::Group(g) => (g.to_json(), Json::Null),
            Torsion::Valuation { p, v } => (Json::Null, json!({"p": p, "v": v})),
        };
        json!({
            "degree": self.degree,
            "free_rank": self.free_rank,
            "torsion": torsion,
            "order_valuation": valuation,
            "provenance": self.provenance,
            "notes": self.notes,
        })
    }
}
