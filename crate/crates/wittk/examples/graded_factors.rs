//! Graded pieces of the filtration for R[x]/x^e over a perfectoid base, and the
//! weight tower that each factor comes from.

use wittk::kgroup::{assemble_factors, enumerate_gr_factors, tower_factor};

fn main() -> wittk::Result<()> {
    for (p, e, i) in [(2, 3, 0), (2, 2, 2), (3, 6, 1)] {
        println!("p = {p}, e = {e}, i = {i}");
        let factors = enumerate_gr_factors(p, e, i)?;
        for d in &factors {
            let mark = if d.equality_boundary { "  <- boundary" } else { "" };
            println!(
                "  u = {:>2}  s = {}  {:<12} {}  tower: {}{mark}",
                d.u,
                d.s,
                format!("{:?}", d.case),
                d.group,
                tower_factor(p, e, i, d.u)?
            );
        }
        println!("  assembled over F_p: {}\n", assemble_factors(p, &factors, 1));
    }
    Ok(())
}
