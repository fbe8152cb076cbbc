//! TR of a finite field at finite precision, and the lim / lim^1 machinery on
//! towers of finite modules.

use wittk::group::{Module, ZpMatrix};
use wittk::ring::RingDescriptor;
use wittk::tr::{lim_tower, milnor_check, theta_infty, tr_groups, Tower, TowerMap};

fn main() -> wittk::Result<()> {
    let f4 = RingDescriptor::gf(2, 2)?;
    for i in 0..=2 {
        let t = theta_infty(&f4, i, 8)?;
        println!("theta({i}) over {f4}: H0 = {}, H1 = {}, H2 = {}", t.h0, t.h1, t.h2);
    }
    for (j, g) in tr_groups(&f4, 4, 8)? {
        println!("TR_{j}({f4}) = {g}");
    }

    // Z/2^min(n+1, 6) with reduction maps: the limit is Z/2^6 and nothing is lost
    let (p, m) = (2, 6);
    let reduction = Tower::from_fn(Tower::default_window(m), |n| {
        (Module::from_exponents(p, m, &[(n as u32 + 1).min(m)]), ZpMatrix::identity(p, m, 1))
    })?;
    let l = lim_tower(&reduction)?;
    println!("\nreduction tower: lim = {}, lim^1 = {}, stable from stage {}", l.lim, l.lim1, l.stable_stage);

    // multiplication by 2 on Z/2^6 kills everything in the limit
    let times_two = Tower::from_fn(24, |_| (Module::from_exponents(p, m, &[m]), ZpMatrix::from_rows(p, m, &[vec![2]])))?;
    let l = lim_tower(&times_two)?;
    println!("times-two tower: lim = {}, lim^1 = {}", l.lim, l.lim1);

    let constant = |e: u32| Tower::from_fn(24, move |_| (Module::from_exponents(p, m, &[e]), ZpMatrix::identity(p, m, 1)));
    let (a, b, c) = (constant(1)?, constant(m)?, constant(m - 1)?);
    let f = TowerMap::new(&a, &b, vec![ZpMatrix::from_rows(p, m, &[vec![32]]); 24])?;
    let g = TowerMap::new(&b, &c, vec![ZpMatrix::identity(p, m, 1); 24])?;
    let r = milnor_check(&a, &b, &c, &f, &g)?;
    println!("Milnor sequence for Z/2 -> Z/64 -> Z/32: lim orders {:?}, exact: {}", r.lim_orders, r.exact);
    Ok(())
}
