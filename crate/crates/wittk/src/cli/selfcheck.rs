//! Seeded property suites behind `selfcheck`. Reports list checks in a fixed
//! order and carry no timings, so equal seeds give byte-identical output.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::render::Report;
use crate::decomp::{add_reports, decompose, quotient_formula, quotient_routes, DecompositionInverse};
use crate::error::Result;
use crate::group::{AbelianPGroup, Module, ZpMatrix};
use crate::kgroup::{
    cdvr_even_recursive, cdvr_from_polynomial, cdvr_k_groups, enumerate_gr_factors, h_fn,
    integral_agh, j_p_enumerate, k1_unit_group, k_odd_perfectoid, rank_count, tower_factor,
    CdvrData, FactorCase, NumberRingData,
};
use crate::ring::{RingDescriptor, Value};
use crate::tr::{lim_tower, milnor_check, theta_infty, tr_groups, Tower, TowerMap};
use crate::witt::{
    change_ring, enumerate_witt, frobenius, from_ghost, ghost, verschiebung, witt_add, witt_cardinality,
    witt_mul, witt_scale, GhostVector, TruncationSet, WittVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ghost,
    Decomp,
    Tworoute,
    Cdvr,
    Tr,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ghost => "ghost",
            Suite::Decomp => "decomp",
            Suite::Tworoute => "tworoute",
            Suite::Cdvr => "cdvr",
            Suite::Tr => "tr",
            Suite::All => "all",
        }
    }

    fn members(&self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Ghost, Suite::Decomp, Suite::Tworoute, Suite::Cdvr, Suite::Tr],
            one => vec![*one],
        }
    }
}

const MAX_LISTED_FAILURES: usize = 25;

#[derive(Clone, Debug, Default)]
pub struct SuiteResult {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.into(),
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Errors count as failures.
    fn check_with(&mut self, what: impl Fn() -> String, f: impl FnOnce() -> Result<bool>) {
        match f() {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SelfcheckReport {
    pub seed: u64,
    pub suite: Suite,
    pub results: Vec<SuiteResult>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failures.is_empty())
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            super::EXIT_OK
        } else {
            super::EXIT_SELFCHECK
        }
    }

    pub fn report(&self) -> Report {
        let results: Vec<_> = self
            .results
            .iter()
            .map(|r| {
                json!({
                    "suite": r.name,
                    "checks": r.checks,
                    "failure_count": r.failures.len(),
                    "failures": r.failures.iter().take(MAX_LISTED_FAILURES).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = json!({
            "seed": self.seed,
            "suite": self.suite.name(),
            "passed": self.passed(),
            "results": results,
        });
        let rows = self
            .results
            .iter()
            .map(|r| {
                vec![
                    r.name.clone(),
                    r.checks.to_string(),
                    r.failures.len().to_string(),
                    if r.failures.is_empty() { "pass" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        Report::new(doc, &["suite", "checks", "failures", "status"], rows)
    }
}

/// Each member suite gets its own stream derived from `seed`.
pub fn run_selfcheck(suite: Suite, seed: u64) -> SelfcheckReport {
    let results = suite
        .members()
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            match s {
                Suite::Ghost => ghost_suite(&mut rng),
                Suite::Decomp => decomp_suite(&mut rng),
                Suite::Tworoute => tworoute_suite(),
                Suite::Cdvr => cdvr_suite(&mut rng),
                Suite::Tr => tr_suite(&mut rng),
                Suite::All => unreachable!("expanded above"),
            }
        })
        .collect();
    SelfcheckReport { seed, suite, results }
}

fn random_z(rng: &mut ChaCha8Rng, m: u64, bound: i64) -> WittVector {
    let xs: Vec<i64> = (0..m).map(|_| rng.gen_range(-bound..=bound)).collect();
    WittVector::from_ints(TruncationSet::full(m), RingDescriptor::Integers, &xs).expect("valid")
}

fn ghost_combine(a: &GhostVector, b: &GhostVector, mul: bool) -> Vec<Value> {
    let r = a.ring();
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| if mul { r.mul(x, y) } else { r.add(x, y) })
        .collect()
}

fn ghost_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = SuiteResult::new("ghost");
    let z = RingDescriptor::Integers;
    for (p, m) in [(2u64, 3u64), (3, 2)] {
        let fp = RingDescriptor::fp(p).expect("prime");
        let all: Vec<WittVector> = enumerate_witt(&TruncationSet::full(m), &fp, 1 << 12)
            .expect("small")
            .collect();
        for a in &all {
            for b in &all {
                s.check_with(
                    || format!("lift F_{p} full({m}) {a} {b}"),
                    || {
                        let (az, bz) = (change_ring(a, &z)?, change_ring(b, &z)?);
                        let (sz, pz) = (witt_add(&az, &bz)?, witt_mul(&az, &bz)?);
                        let (ga, gb) = (ghost(&az), ghost(&bz));
                        Ok(ghost(&sz).values() == ghost_combine(&ga, &gb, false).as_slice()
                            && ghost(&pz).values() == ghost_combine(&ga, &gb, true).as_slice()
                            && change_ring(&sz, &fp)? == witt_add(a, b)?
                            && change_ring(&pz, &fp)? == witt_mul(a, b)?)
                    },
                );
            }
        }
    }
    for _ in 0..40 {
        let (a, b) = (random_z(rng, 8, 9), random_z(rng, 8, 9));
        s.check_with(
            || format!("random Z full(8) {a} {b}"),
            || {
                let (ga, gb) = (ghost(&a), ghost(&b));
                Ok(ghost(&witt_add(&a, &b)?).values() == ghost_combine(&ga, &gb, false).as_slice()
                    && ghost(&witt_mul(&a, &b)?).values() == ghost_combine(&ga, &gb, true).as_slice()
                    && from_ghost(&ga)? == a)
            },
        );
    }
    for _ in 0..20 {
        let (x, y) = (random_z(rng, 4, 5), random_z(rng, 4, 5));
        for n in [2u64, 3] {
            s.check_with(
                || format!("operator identities n={n} on {x}, {y}"),
                || operator_identities(n, &x, &y),
            );
        }
    }
    s
}

/// F_nV_n = n, V additivity, F ring map, projection formula, and F_2V_3 = V_3F_2.
pub fn operator_identities(n: u64, x: &WittVector, y: &WittVector) -> Result<bool> {
    let m = x.trunc().max().unwrap_or(0);
    let big = TruncationSet::full(n * m);
    let vx = verschiebung(n, x, &big)?;
    let fv = frobenius(n, &vx)?;
    let vsum = verschiebung(n, &witt_add(x, y)?, &big)?;
    let sumv = witt_add(&vx, &verschiebung(n, y, &big)?)?;
    // x' lives on full(nm) so that F_n x' is on full(m)
    let xb = witt_add(&vx, &witt_scale(&WittVector::one(&big, x.ring()), 3)?)?;
    let proj_l = witt_mul(&xb, &verschiebung(n, y, &big)?)?;
    let proj_r = verschiebung(n, &witt_mul(&frobenius(n, &xb)?, y)?, &big)?;
    let f_mul = frobenius(n, &witt_mul(&xb, &vsum)?)? == witt_mul(&frobenius(n, &xb)?, &frobenius(n, &vsum)?)?;
    let f_add = frobenius(n, &witt_add(&xb, &vsum)?)? == witt_add(&frobenius(n, &xb)?, &frobenius(n, &vsum)?)?;
    let gcd_ok = if m >= 2 {
        let (a, b) = if n == 2 { (3u64, 2u64) } else { (2u64, 3u64) };
        let sub = crate::witt::restriction(x, &TruncationSet::full(m.min(4)))?;
        let wide = TruncationSet::full(b * sub.trunc().max().unwrap_or(0));
        let lhs = frobenius(a, &verschiebung(b, &sub, &wide)?)?;
        let fa = frobenius(a, &sub)?;
        let rhs = verschiebung(b, &fa, lhs.trunc())?;
        lhs == rhs
    } else {
        true
    };
    Ok(fv == witt_scale(x, n as i64)? && vsum == sumv && proj_l == proj_r && f_mul && f_add && gcd_ok)
}

fn decomp_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = SuiteResult::new("decomp");
    for p in [2u64, 3] {
        let rings = [
            RingDescriptor::fp(p).expect("prime"),
            RingDescriptor::zmod(p * p).expect("modulus"),
        ];
        for ring in &rings {
            for m in 2..=4u64 {
                let q = ring.cardinality().expect("finite");
                let Some(total) = q.checked_pow(m as u32).filter(|&t| t <= 1 << 12) else {
                    continue;
                };
                s.check_with(
                    || format!("decompose bijective over {ring}, m={m}"),
                    || Ok(DecompositionInverse::build(p, m, ring, 1 << 12)?.len() as u64 == total),
                );
                let all: Vec<WittVector> =
                    enumerate_witt(&TruncationSet::full(m), ring, 1 << 12).expect("small").collect();
                for _ in 0..60 {
                    let a = &all[rng.gen_range(0..all.len())];
                    let b = &all[rng.gen_range(0..all.len())];
                    s.check_with(
                        || format!("decompose additive over {ring}: {a} + {b}"),
                        || Ok(decompose(&witt_add(a, b)?, p)? == add_reports(&decompose(a, p)?, &decompose(b, p)?)?),
                    );
                }
            }
        }
    }
    for q in [2u64, 3, 4, 5] {
        let (p, f) = crate::arith::prime_power(q).expect("prime power");
        let k = RingDescriptor::gf(p, f).expect("field");
        for m in 1..=8u64 {
            s.check(witt_cardinality(&TruncationSet::full(m), &k) == q.checked_pow(m as u32), || {
                format!("|W_{m}(F_{q})|")
            });
            if q.pow(m as u32) <= 1 << 12 {
                let counted = enumerate_witt(&TruncationSet::full(m), &k, 1 << 12).map(|it| it.count() as u64);
                s.check(counted.ok() == Some(q.pow(m as u32)), || format!("enumerated W_{m}(F_{q})"));
            }
        }
    }
    s
}

fn fields_of_char(p: u64) -> Vec<RingDescriptor> {
    [(2u64, 1u32), (3, 1), (2, 2)]
        .iter()
        .filter(|(q, _)| *q == p)
        .map(|&(q, f)| RingDescriptor::gf(q, f).expect("field"))
        .collect()
}

fn tworoute_suite() -> SuiteResult {
    let mut s = SuiteResult::new("tworoute");
    for p in [2u64, 3] {
        for k in fields_of_char(p) {
            let f = match &k {
                RingDescriptor::FiniteField(g) => g.degree(),
                _ => 1,
            };
            for e in 1..=6u64 {
                for r in 1..=6 / e {
                    s.check_with(
                        || format!("quotient routes p={p} e={e} r={r} {k}"),
                        || {
                            let routes = quotient_routes(p, e, r, &k, 1 << 16)?;
                            let order_ok = routes.formula.log_order() == f as u64 * (r * e - r);
                            Ok(order_ok && routes.oracle.as_ref() == Some(&routes.formula))
                        },
                    );
                    s.check_with(
                        || format!("graded factors p={p} e={e} r={r} {k}"),
                        || Ok(k_odd_perfectoid(p, e, r, &k)?.provenance.iter().any(|x| x == "gr_factors")),
                    );
                }
            }
        }
    }
    use FactorCase::*;
    let shape = |p, e, i| -> Result<Vec<(u64, FactorCase, u64)>> {
        Ok(enumerate_gr_factors(p, e, i)?
            .into_iter()
            .map(|d| (d.u, d.case, d.group.log_order()))
            .collect())
    };
    s.check_with(
        || "boundary (2,3,0)".into(),
        || Ok(shape(2, 3, 0)? == vec![(1, Generic, 2), (3, Absent, 0)]),
    );
    s.check_with(
        || "boundary (2,2,2)".into(),
        || Ok(shape(2, 2, 2)? == vec![(1, PhiPullback, 1), (3, PhiPullback, 1), (5, Generic, 1)]),
    );
    for p in [2u64, 3] {
        let k = RingDescriptor::fp(p).expect("prime");
        for e in 1..=4u64 {
            s.check_with(
                || format!("K_1 unit group p={p} e={e}"),
                || Ok(k1_unit_group(e, &k, 1 << 12)? == *k_odd_perfectoid(p, e, 1, &k)?.structure().expect("group")),
            );
        }
    }
    for p in [2u64, 3, 5] {
        for e in 1..=6u64 {
            for i in 0..=3u64 {
                s.check_with(
                    || format!("weight tower p={p} e={e} i={i}"),
                    || {
                        let factors = enumerate_gr_factors(p, e, i)?;
                        for d in &factors {
                            if tower_factor(p, e, i, d.u)? != d.group {
                                return Ok(false);
                            }
                        }
                        Ok(true)
                    },
                );
            }
        }
    }
    s
}

/// A random point (p, f, e, dE) with dE = e - 1 when tame and dE >= e otherwise.
pub fn random_cdvr(rng: &mut ChaCha8Rng) -> CdvrData {
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let f = rng.gen_range(1..=3);
    let e = rng.gen_range(1..=6u64);
    let d_e = if e % p == 0 { rng.gen_range(e..=3 * e) } else { e - 1 };
    CdvrData::new(p, f, e, d_e).expect("valid")
}

fn cdvr_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = SuiteResult::new("cdvr");
    let mut data = vec![
        CdvrData::new(2, 1, 1, 0).expect("valid"),
        CdvrData::new(2, 1, 2, 3).expect("valid"),
        CdvrData::new(3, 1, 2, 1).expect("valid"),
    ];
    data.extend((0..5).map(|_| random_cdvr(rng)));
    for d in &data {
        for n in 1..=8u64 {
            for i in 0..=8u64 {
                s.check_with(
                    || format!("recurrence {d:?} n={n} i={i}"),
                    || Ok(cdvr_even_recursive(d, n, i)? == cdvr_k_groups(d, n, i)?.1.order_valuation()),
                );
            }
        }
    }
    for p in [2u64, 3, 5] {
        for n in 1..=8u64 {
            for r in 0..=8u64 {
                s.check_with(|| format!("rank_count n={n} r={r} p={p}"), || Ok(rank_count(n, r, p)? == n - 1));
            }
            for i in 0..=6u64 {
                s.check_with(
                    || format!("h-sum p={p} n={n} i={i}"),
                    || {
                        let total: u64 = j_p_enumerate(p, n * (i + 1))
                            .into_iter()
                            .map(|u| h_fn(p, i + 1, n, u).map(u64::from))
                            .sum::<Result<u64>>()?;
                        let (g, _) = quotient_formula(p, n, i + 1, 1)?;
                        Ok(total == n * (i + 1) - (i + 1) && g.log_order() == total)
                    },
                );
            }
        }
    }
    let q = NumberRingData::rationals();
    for n in 1..=5u64 {
        for i in 1..=5u64 {
            s.check_with(|| format!("integral n={n} i={i}"), || Ok(integral_agh(n, i, &q)?.rank == n - 1));
        }
    }
    for (p, coeffs, e, d) in [(2u64, vec![-2i64, 1], 1u64, 0u64), (2, vec![-2, 0, 1], 2, 3), (3, vec![-3, 0, 1], 2, 1)] {
        s.check_with(
            || format!("Eisenstein {coeffs:?} over {p}"),
            || {
                let c = cdvr_from_polynomial(p, 1, &coeffs, 12)?;
                Ok((c.e, c.d_e) == (e, d))
            },
        );
    }
    s
}

/// Random free stages for `head` steps, then a constant tail with identity maps.
pub fn random_ml_tower(rng: &mut ChaCha8Rng, p: u64, prec: u32, head: usize, len: usize) -> Tower {
    let dims: Vec<usize> = (0..=head).map(|_| rng.gen_range(1..=6)).collect();
    let modulus = p.pow(prec);
    let mut mats: Vec<ZpMatrix> = Vec::new();
    for n in 1..len {
        let (src, tgt) = (dims[n.min(head)], dims[(n - 1).min(head)]);
        if n > head {
            mats.push(ZpMatrix::identity(p, prec, src));
        } else {
            let mut m = ZpMatrix::zeros(p, prec, tgt, src);
            for i in 0..tgt {
                for j in 0..src {
                    m.set(i, j, rng.gen_range(0..modulus));
                }
            }
            mats.push(m);
        }
    }
    Tower::from_fn(len, |n| {
        let stage = Module::free(p, prec, dims[n.min(head)]);
        let map = if n == 0 { ZpMatrix::zeros(p, prec, 0, 0) } else { mats[n - 1].clone() };
        (stage, map)
    })
    .expect("free stages accept any matrix")
}

fn tr_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = SuiteResult::new("tr");
    let fields = [
        RingDescriptor::fp(2).expect("prime"),
        RingDescriptor::fp(3).expect("prime"),
        RingDescriptor::gf(2, 2).expect("field"),
    ];
    for k in &fields {
        let (p, f) = match k {
            RingDescriptor::FiniteField(g) => (g.p(), g.degree()),
            other => (other.characteristic(), 1),
        };
        for prec in [6u32, 8] {
            for i in 0..=3u64 {
                s.check_with(
                    || format!("theta {k} i={i} M={prec}"),
                    || {
                        let t = theta_infty(k, i, prec)?;
                        let h0 = if i == 0 { AbelianPGroup::homocyclic(p, prec, f) } else { AbelianPGroup::trivial(p) };
                        Ok(t.h0.group == h0 && t.h1.is_zero() && t.h2.is_zero())
                    },
                );
            }
        }
        s.check_with(
            || format!("TR of {k} and precision doubling"),
            || {
                let coarse = tr_groups(k, 6, 6)?;
                let fine = tr_groups(k, 6, 12)?;
                let shape = coarse[0].1.group == AbelianPGroup::homocyclic(p, 6, f)
                    && coarse[1..].iter().all(|(_, g)| g.is_zero());
                let stable = coarse.iter().zip(&fine).all(|((_, a), (_, b))| a.stable_against(b));
                Ok(shape && stable)
            },
        );
    }
    for t in 0..6 {
        let p = [2u64, 3][t % 2];
        let tower = random_ml_tower(rng, p, 4, 3, 16);
        s.check_with(
            || format!("lim^1 of random Mittag-Leffler tower #{t}"),
            || Ok(lim_tower(&tower)?.lim1.is_trivial()),
        );
    }
    s.check_with(
        || "Milnor sequence for Z/p -> Z/p^M -> Z/p^(M-1)".into(),
        || {
            let (p, m, len) = (3u64, 5u32, 20usize);
            let constant = |e: u32| {
                Tower::from_fn(len, move |_| (Module::from_exponents(p, m, &[e]), ZpMatrix::identity(p, m, 1)))
            };
            let (a, b, c) = (constant(1)?, constant(m)?, constant(m - 1)?);
            let level = |x: u64| vec![ZpMatrix::from_rows(p, m, &[vec![x as i64]]); len];
            let f = TowerMap::new(&a, &b, level(p.pow(m - 1)))?;
            let g = TowerMap::new(&b, &c, level(1))?;
            Ok(milnor_check(&a, &b, &c, &f, &g)?.exact)
        },
    );
    s
}
