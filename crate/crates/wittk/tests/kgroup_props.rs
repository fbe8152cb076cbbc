use num_bigint::BigUint;
use proptest::prelude::*;

use wittk::arith::vp;
use wittk::kgroup::{
    cdvr_even_recursive, cdvr_from_polynomial, cdvr_k_groups, e_prime, enumerate_gr_factors, integral_agh,
    j_p_enumerate, k1_unit_group, k_odd_perfectoid, perfectoid_k_groups, rank_count, tower_factor, CdvrData,
    FactorCase, NumberRingData, PrimeData, Torsion,
};
use wittk::ring::RingDescriptor;
use wittk::Error;

/// v_pi(E'(pi)) for E = x^e + sum a_k x^k: the terms k a_k pi^(k-1) have distinct
/// valuations mod e, so the minimum is attained once.
fn different_oracle(p: u64, coeffs: &[i64]) -> u64 {
    let e = (coeffs.len() - 1) as u64;
    (1..coeffs.len())
        .filter(|&k| coeffs[k] != 0)
        .map(|k| {
            let term = (k as i64 * coeffs[k]).unsigned_abs();
            e * vp(term, p) as u64 + (k as u64 - 1)
        })
        .min()
        .unwrap()
}

fn eisenstein() -> impl Strategy<Value = (u64, Vec<i64>)> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..=6).prop_flat_map(|(p, e)| {
        let pi = p as i64;
        let unit = (1i64..20).prop_filter("unit", move |u| u % pi != 0);
        (Just(p), unit, prop::collection::vec(-4i64..=4, e - 1)).prop_map(move |(p, u, mids)| {
            let mut c = vec![pi * u];
            c.extend(mids.iter().map(|m| m * pi));
            c.push(1);
            (p, c)
        })
    })
}

fn cdvr_data() -> impl Strategy<Value = CdvrData> {
    (prop::sample::select(vec![2u64, 3, 5]), 1u32..=3, 1u64..=8, 0u64..=12).prop_map(|(p, f, e, extra)| {
        let d_e = if e % p == 0 { e + extra % (e * vp(e, p) as u64) } else { e - 1 };
        CdvrData::new(p, f, e, d_e).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eisenstein_data_matches_oracle((p, c) in eisenstein()) {
        let d = cdvr_from_polynomial(p, 1, &c, 16).unwrap();
        let e = (c.len() - 1) as u64;
        prop_assert_eq!(d.e, e);
        prop_assert_eq!(d.d_e, different_oracle(p, &c));
        if e % p != 0 {
            prop_assert_eq!(d.d_e, e - 1);
        } else {
            prop_assert!(d.d_e >= e && d.d_e <= e - 1 + e * vp(e, p) as u64);
        }
    }

    #[test]
    fn recurrence_matches_closed_form(d in cdvr_data(), n in 1u64..=12, i in 0u64..=12) {
        let closed = cdvr_k_groups(&d, n, i).unwrap().1.order_valuation();
        prop_assert_eq!(cdvr_even_recursive(&d, n, i).unwrap(), closed);
    }

    #[test]
    fn odd_rank_is_n_minus_one(n in 1u64..=10, r in 0u64..=10, p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assert_eq!(rank_count(n, r, p).unwrap(), n - 1);
    }

    #[test]
    fn factor_tower_matches_case_split(p in prop::sample::select(vec![2u64, 3, 5]), e in 1u64..=9, i in 0u64..=4) {
        for d in enumerate_gr_factors(p, e, i).unwrap() {
            prop_assert_eq!(tower_factor(p, e, i, d.u).unwrap(), d.group.clone());
            prop_assert_eq!(d.case == FactorCase::Absent, d.group.is_trivial());
            prop_assert!(d.s >= 1);
            let boundary = d.u % e_prime(e, p) == 0 && d.u * p.pow(vp(e, p)) == e * (i + 1);
            prop_assert_eq!(d.equality_boundary, boundary);
        }
    }
}

#[test]
fn valuation_records_carry_no_exponents() {
    let d = CdvrData::new(2, 1, 2, 3).unwrap();
    let (odd, even) = cdvr_k_groups(&d, 3, 2).unwrap();
    assert_eq!(odd.free_rank, 2);
    assert!(matches!(even.torsion, Torsion::Valuation { p: 2, .. }));
    let j = even.to_json();
    assert!(j["torsion"].is_null());
    assert_eq!(j["order_valuation"]["p"], 2);
}

#[test]
fn even_perfectoid_groups_vanish() {
    for (p, k) in [(2, RingDescriptor::fp(2).unwrap()), (3, RingDescriptor::fp(3).unwrap())] {
        for e in 1..=4 {
            for r in 1..=3 {
                let (odd, even) = perfectoid_k_groups(p, e, r, &k).unwrap();
                assert_eq!(odd.degree, 2 * r - 1);
                assert_eq!(even.degree, 2 * r);
                assert!(even.structure().unwrap().is_trivial());
            }
        }
    }
}

#[test]
fn unit_group_oracle_at_r_1() {
    for k in [RingDescriptor::fp(2).unwrap(), RingDescriptor::fp(3).unwrap()] {
        let p = k.characteristic();
        for e in 1..=4 {
            let direct = k1_unit_group(e, &k, 1 << 16).unwrap();
            let route = k_odd_perfectoid(p, e, 1, &k).unwrap();
            assert_eq!(Some(&direct), route.structure(), "e={e} over {k}");
        }
    }
}

#[test]
fn rational_table_reconstructs_factorials() {
    let q = NumberRingData::rationals();
    for n in 1..=8u64 {
        for i in 1..=6u64 {
            let r = integral_agh(n, i, &q).unwrap();
            let fact = |m: u64| (1..=m).map(BigUint::from).product::<BigUint>();
            let expect = if n == 1 { BigUint::from(1u32) } else { fact(n * i) * fact(i).pow((n - 2) as u32) };
            assert_eq!(r.order, expect, "n={n} i={i}");
            assert_eq!(r.rank, n - 1);
        }
    }
}

#[test]
fn local_data_is_validated() {
    let bad = NumberRingData {
        degree: 2,
        primes: vec![PrimeData {
            p: 3,
            completions: vec![CdvrData::new(2, 1, 2, 2).unwrap()],
        }],
    };
    assert!(matches!(integral_agh(2, 1, &bad), Err(Error::InconsistentLocalData(_))));
    assert!(matches!(cdvr_from_polynomial(2, 1, &[4, 0, 1], 10), Err(Error::NotEisenstein(_))));
    assert!(matches!(cdvr_from_polynomial(2, 1, &[2, 1, 1], 10), Err(Error::NotEisenstein(_))));
    assert!(matches!(k_odd_perfectoid(2, 2, 1, &RingDescriptor::fp(3).unwrap()), Err(Error::InvalidParameter(_))));
}

#[test]
fn index_sets() {
    assert_eq!(j_p_enumerate(3, 10), vec![1, 2, 4, 5, 7, 8, 10]);
    assert_eq!(e_prime(12, 2), 3);
    assert_eq!(e_prime(7, 7), 1);
}
