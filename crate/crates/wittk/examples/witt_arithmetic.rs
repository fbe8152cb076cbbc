//! Big Witt vectors over Z and over F_4: sums, products, ghost components,
//! Verschiebung, Frobenius and Teichmüller lifts.

use wittk::ring::{RingDescriptor, RingElement};
use wittk::witt::{
    frobenius, ghost, teichmuller, verschiebung, witt_add, witt_mul, witt_scale, TruncationSet, WittVector,
};

fn main() -> wittk::Result<()> {
    let z = RingDescriptor::Integers;
    let t = TruncationSet::full(6);
    let a = WittVector::from_ints(t.clone(), z.clone(), &[1, 2, 0, -1, 3, 1])?;
    let b = WittVector::from_ints(t.clone(), z.clone(), &[2, -1, 1, 0, 0, 4])?;

    let sum = witt_add(&a, &b)?;
    let prod = witt_mul(&a, &b)?;
    println!("a       = {a}");
    println!("b       = {b}");
    println!("a + b   = {sum}");
    println!("a * b   = {prod}");
    println!("w(a)    = {}", ghost(&a));
    println!("w(b)    = {}", ghost(&b));
    println!("w(a+b)  = {}", ghost(&sum));
    println!("w(a*b)  = {}", ghost(&prod));

    let x = WittVector::from_ints(TruncationSet::full(3), z.clone(), &[5, -2, 7])?;
    let vx = verschiebung(2, &x, &t)?;
    println!("\nV_2 x   = {vx}");
    println!("F_2 V_2 x = {}  and  2x = {}", frobenius(2, &vx)?, witt_scale(&x, 2)?);

    let f4 = RingDescriptor::gf(2, 2)?;
    let alpha = RingElement::from_coeffs(&f4, &[0, 1])?;
    let ta = teichmuller(&alpha, &TruncationSet::full(4));
    println!("\nover {f4}: [alpha] = {ta}");
    println!("[alpha]^3 = {}", witt_mul(&ta, &witt_mul(&ta, &ta)?)?);
    Ok(())
}
