//! Limits of towers at finite precision and TR of perfect fields via θ complexes.

mod theta;
mod tower;

pub use theta::{theta_infty, tr_groups, PrecisionGroup, ThetaComplex};
pub use tower::{direct_sum, lim_tower, milnor_check, solve_in, LimResult, MilnorReport, Tower, TowerMap};
