use proptest::prelude::*;

use wittk::group::{AbelianPGroup, Module, ZpMatrix};
use wittk::ring::RingDescriptor;
use wittk::tr::{lim_tower, theta_infty, tr_groups, Tower};
use wittk::Error;

fn field() -> impl Strategy<Value = RingDescriptor> {
    prop::sample::select(vec![(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
        .prop_map(|(p, f)| RingDescriptor::gf(p, f).unwrap())
}

fn field_params(k: &RingDescriptor) -> (u64, u32) {
    match k {
        RingDescriptor::FiniteField(g) => (g.p(), g.degree()),
        other => (other.characteristic(), 1),
    }
}

/// Stage exponents and raw map entries; entries are scaled into valid maps later.
fn tower_params() -> impl Strategy<Value = (u64, Vec<Vec<u32>>, Vec<u64>)> {
    (
        prop::sample::select(vec![2u64, 3]),
        prop::collection::vec(prop::collection::vec(1u32..=4, 1..=6), 2..=5),
        prop::collection::vec(any::<u64>(), 36 * 5),
    )
}

fn build_tower(p: u64, exps: &[Vec<u32>], entries: &[u64], len: usize) -> Tower {
    let prec = 4;
    let modulus = p.pow(prec);
    let head = exps.len() - 1;
    let mut it = entries.iter().cycle();
    let maps: Vec<ZpMatrix> = (1..=head)
        .map(|n| {
            let (src, tgt) = (&exps[n], &exps[n - 1]);
            let mut m = ZpMatrix::zeros(p, prec, tgt.len(), src.len());
            for (i, &b) in tgt.iter().enumerate() {
                for (j, &a) in src.iter().enumerate() {
                    // p^(b-a) makes the entry kill p^a in the target summand
                    let x = it.next().unwrap() % modulus;
                    m.set(i, j, x * p.pow(b.saturating_sub(a)) % modulus);
                }
            }
            m
        })
        .collect();
    Tower::from_fn(len, |n| {
        let e = &exps[n.min(head)];
        let map = match n {
            0 => ZpMatrix::zeros(p, prec, 0, 0),
            n if n <= head => maps[n - 1].clone(),
            _ => ZpMatrix::identity(p, prec, e.len()),
        };
        (Module::from_exponents(p, prec, e), map)
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_lives_in_degree_zero(k in field(), i in 0u64..=5, prec in prop::sample::select(vec![4u32, 6, 8])) {
        let (p, f) = field_params(&k);
        let t = theta_infty(&k, i, prec).unwrap();
        prop_assert!(t.h2.is_zero());
        prop_assert!(t.h1.is_zero());
        let expect = if i == 0 { AbelianPGroup::homocyclic(p, prec, f) } else { AbelianPGroup::trivial(p) };
        prop_assert_eq!(t.h0.group, expect);
    }

    #[test]
    fn tr_is_stable_under_precision_doubling(k in field(), d in 1u64..=8, prec in 3u32..=6) {
        let a = tr_groups(&k, d, prec).unwrap();
        let b = tr_groups(&k, d, 2 * prec).unwrap();
        prop_assert_eq!(a.len() as u64, d + 1);
        for ((ja, ga), (jb, gb)) in a.iter().zip(&b) {
            prop_assert_eq!(ja, jb);
            prop_assert!(ga.stable_against(gb));
        }
    }

    #[test]
    fn finite_towers_have_no_lim1((p, exps, entries) in tower_params()) {
        let tower = build_tower(p, &exps, &entries, 20);
        let l = lim_tower(&tower).unwrap();
        prop_assert!(l.mittag_leffler);
        prop_assert!(l.lim1.is_trivial());
        prop_assert_eq!(l.lim, tower.stage(tower.len() - 1).structure());
    }
}

#[test]
fn growing_tower_needs_a_long_window() {
    // Z/p^min(n+1, M) with reduction maps stabilizes only after M stages
    let (p, prec) = (2u64, 6u32);
    let make = |len: usize| {
        Tower::from_fn(len, |n| {
            let e = (n as u32 + 1).min(prec);
            (Module::from_exponents(p, prec, &[e]), ZpMatrix::identity(p, prec, 1))
        })
        .unwrap()
    };
    let l = lim_tower(&make(Tower::default_window(prec))).unwrap();
    assert_eq!(l.lim, AbelianPGroup::cyclic(p, prec));
    assert!(l.lim1.is_trivial());
    assert!(matches!(lim_tower(&make(6)), Err(Error::NoStabilization { .. })));
}

#[test]
fn precision_groups_are_tagged() {
    let k = RingDescriptor::fp(2).unwrap();
    let groups = tr_groups(&k, 4, 8).unwrap();
    assert_eq!(groups[0].1.to_string(), "Z_2 (mod 2^8)");
    assert_eq!(groups[0].1.to_json()["zp_rank"], 1);
    let f4 = RingDescriptor::gf(2, 2).unwrap();
    assert_eq!(tr_groups(&f4, 2, 6).unwrap()[0].1.to_string(), "Z_2^2 (mod 2^6)");
}

#[test]
fn tower_json_lists_integer_matrices() {
    let t = build_tower(3, &[vec![1, 2], vec![2]], &[5, 7, 11], 4);
    let j = t.to_json();
    let text = j.to_string();
    assert_eq!(j["stages"][0]["dimension"], 2);
    assert_eq!(j["maps"].as_array().unwrap().len(), 3, "one map per consecutive pair");
    assert!(!text.contains('.'), "numbers must be integers: {text}");
}
