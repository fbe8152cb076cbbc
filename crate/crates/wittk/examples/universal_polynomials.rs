//! The integer polynomials that define Witt addition, multiplication and
//! Frobenius in the first few coordinates.

use wittk::witt::universal::Named;
use wittk::witt::{universal_polys, TruncationSet, UniversalOp};

fn main() -> wittk::Result<()> {
    let t = TruncationSet::full(4);
    for (label, op) in [("S", UniversalOp::Sum), ("P", UniversalOp::Product), ("N", UniversalOp::Negation)] {
        for (n, poly) in universal_polys(&t, op)? {
            if n <= 3 {
                println!("{label}_{n} = {}", Named(&poly));
            }
        }
        println!();
    }
    for (n, poly) in universal_polys(&t, UniversalOp::Frobenius(2))? {
        println!("F2_{n} = {} ({} terms)", Named(&poly), poly.num_terms());
    }
    let p = universal_polys(&TruncationSet::full(8), UniversalOp::Product)?;
    println!("\nP_8 has {} terms of total degree {}", p[&8].num_terms(), p[&8].total_degree());
    Ok(())
}
