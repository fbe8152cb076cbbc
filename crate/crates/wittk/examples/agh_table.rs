//! Orders of K_{2i}(Z[x]/x^n, (x)) and ranks of K_{2i+1}, assembled prime by prime.

use wittk::kgroup::{integral_agh, NumberRingData};

fn main() -> wittk::Result<()> {
    let q = NumberRingData::rationals();
    println!("{:>3} {:>3} {:>8} {:>4}  factorization", "n", "i", "order", "rank");
    for n in 2..=4 {
        for i in 1..=3 {
            let r = integral_agh(n, i, &q)?;
            let fac: Vec<String> = r.valuations.iter().map(|(p, v)| format!("{p}^{v}")).collect();
            println!("{n:>3} {i:>3} {:>8} {:>4}  {}", r.order, r.rank, fac.join(" * "));
        }
    }
    let big = integral_agh(6, 6, &q)?;
    println!("\nn = 6, i = 6: {} ({} digits)", big.order, big.order.to_string().len());
    Ok(())
}
