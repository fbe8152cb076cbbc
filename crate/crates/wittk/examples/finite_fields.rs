//! Finite fields from the default modulus table or a user modulus, and the
//! Frobenius endomorphism a -> a^p.

use wittk::ring::{enumerate_ring, is_irreducible, RingDescriptor, RingElement};

fn main() -> wittk::Result<()> {
    for (p, f) in [(2, 3), (3, 2), (5, 3), (2, 16)] {
        let k = RingDescriptor::gf(p, f)?;
        println!("{k}: {} elements, json {}", k.cardinality().unwrap(), k.to_json());
    }

    let f9 = RingDescriptor::gf_with_modulus(3, vec![2, 2, 1])?;
    let a = RingElement::from_coeffs(&f9, &[1, 2])?;
    println!("\nin {f9}: a = {a}, a^2 = {}, a^8 = {}", a.pow(2), a.pow(8));

    let frob_fixed: Vec<String> = enumerate_ring(&f9, 1 << 12)?
        .filter(|x| x.pow(3) == *x)
        .map(|x| x.to_string())
        .collect();
    println!("fixed points of Frobenius: {}", frob_fixed.join(", "));

    println!("\nx^2 + 1 irreducible over F_3: {}", is_irreducible(&[1, 0, 1], 3));
    println!("x^2 + 1 irreducible over F_5: {}", is_irreducible(&[1, 0, 1], 5));
    println!("GF(2) with x^2 + 1 accepted: {}", RingDescriptor::gf_with_modulus(2, vec![1, 0, 1]).is_ok());
    Ok(())
}
