//! K-groups of A[x]/x^n for a complete discrete valuation ring A given by an
//! Eisenstein polynomial, with the level-by-level accounting behind the order.

use wittk::kgroup::{cdvr_from_polynomial, cdvr_k_groups, recursive_levels};

fn main() -> wittk::Result<()> {
    // Z_2[sqrt 2], Z_3[sqrt 3] and a tame extension of Z_5
    for (p, coeffs) in [(2, vec![-2, 0, 1]), (3, vec![3, 0, 0, 1]), (5, vec![5, 0, 1])] {
        let d = cdvr_from_polynomial(p, 1, &coeffs, 20)?;
        println!("E = {coeffs:?} over Z_{p}: e = {}, v(E'(pi)) = {}", d.e, d.d_e);
        for (n, i) in [(2, 1), (3, 2), (4, 3)] {
            let (odd, even) = cdvr_k_groups(&d, n, i)?;
            println!(
                "  n = {n}, i = {i}: K_{} has rank {}, |K_{}| = {p}^{}",
                2 * i + 1,
                odd.free_rank,
                2 * i,
                even.order_valuation()
            );
        }
    }

    let d = cdvr_from_polynomial(2, 1, &[-2, 0, 1], 20)?;
    println!("\nlevels for n = 4, i = 2 over Z_2[sqrt 2]:");
    for l in recursive_levels(&d, 4, 2)? {
        println!(
            "  u = {} level {} weight {:>2} t = {} contributes {}{}",
            l.u,
            l.level,
            l.weight,
            l.t,
            l.valuation,
            if l.rank_factor { " (rank factor)" } else { "" }
        );
    }
    Ok(())
}
