//! Splitting a big Witt vector over a p-local ring into p-typical pieces, one
//! for each u prime to p, and the quotient W_{re}(k) / V_e W_r(k).

use wittk::decomp::{decompose, quotient_routes, s_fn, DecompositionInverse};
use wittk::kgroup::j_p_enumerate;
use wittk::ring::RingDescriptor;
use wittk::witt::{witt_cardinality, TruncationSet, WittVector};

fn main() -> wittk::Result<()> {
    let (p, m) = (2, 10);
    println!("lengths s(2, {m}, u):");
    for u in j_p_enumerate(p, m) {
        println!("  u = {u}: {}", s_fn(p, m, u)?);
    }

    let ring = RingDescriptor::zmod(4)?;
    let w = WittVector::from_ints(TruncationSet::full(6), ring.clone(), &[1, 3, 2, 0, 1, 3])?;
    let report = decompose(&w, 2)?;
    println!("\n{w} over {ring} splits as");
    for c in &report.components {
        println!("  u = {}: {}", c.u, c.vector);
    }

    let inv = DecompositionInverse::build(2, 6, &ring, 1 << 13)?;
    println!("table inverse covers {} vectors; round trip ok: {}", inv.len(), inv.invert(&report) == Some(&w));

    let f4 = RingDescriptor::gf(2, 2)?;
    println!("|W_5(F_4)| = {:?}", witt_cardinality(&TruncationSet::full(5), &f4));
    for (e, r) in [(2, 2), (3, 1), (4, 2)] {
        let routes = quotient_routes(2, e, r, &f4, 1 << 16)?;
        println!(
            "W_{}(F_4)/V_{e} W_{r}(F_4) = {} (enumeration: {})",
            r * e,
            routes.formula,
            routes.oracle.map_or("skipped".into(), |g| g.to_string())
        );
    }
    Ok(())
}
