//! Orders of K_{2i}(O_K[x]/x^n, (x)) for rings of integers described by their
//! local data at the ramified primes.

use wittk::kgroup::{integral_agh, CdvrData, NumberRingData, PrimeData};

fn main() -> wittk::Result<()> {
    // Z[i]: 2 ramifies with E = x^2 + 2x + 2, so v(E'(pi)) = 2
    let gaussian = NumberRingData {
        degree: 2,
        primes: vec![PrimeData {
            p: 2,
            completions: vec![CdvrData::new(2, 1, 2, 2)?],
        }],
    };
    // Z[sqrt -2]: 2 ramifies with E = x^2 + 2, so v(E'(pi)) = 3
    let root_minus_two = NumberRingData {
        degree: 2,
        primes: vec![PrimeData {
            p: 2,
            completions: vec![CdvrData::new(2, 1, 2, 3)?],
        }],
    };
    for (name, ring) in [("Z", NumberRingData::rationals()), ("Z[i]", gaussian), ("Z[sqrt -2]", root_minus_two)] {
        println!("{name}");
        for (n, i) in [(2, 1), (2, 2), (3, 1)] {
            let r = integral_agh(n, i, &ring)?;
            println!("  n = {n}, i = {i}: order {}, rank {}", r.order, r.rank);
        }
    }
    println!("\nlocal data as JSON: {}", serde_json::to_string(&CdvrData::new(3, 2, 3, 4)?).unwrap());
    Ok(())
}
