//! Relative K-groups of R[x]/x^e over a perfectoid ring with residue field F_q,
//! tabulated for small e and r.

use wittk::kgroup::perfectoid_k_groups;
use wittk::ring::RingDescriptor;

fn main() -> wittk::Result<()> {
    for (p, field) in [(2, RingDescriptor::fp(2)?), (2, RingDescriptor::gf(2, 2)?), (3, RingDescriptor::fp(3)?)] {
        println!("residue field {field}");
        for e in 1..=4 {
            let row: Vec<String> = (1..=3)
                .map(|r| {
                    let (odd, even) = perfectoid_k_groups(p, e, r, &field).expect("valid parameters");
                    let g = odd.structure().expect("full structure");
                    assert!(even.structure().expect("full structure").is_trivial());
                    format!("K_{} = {g}", 2 * r - 1)
                })
                .collect();
            println!("  e = {e}: {}", row.join(", "));
        }
    }
    Ok(())
}
