//! Wedge products and conjugation over Q(i).

use hodge_invariants::scalar::{q, qi};
use hodge_invariants::{Form, Scalar};

fn main() {
    let dim = 4;
    let e = |i: usize| Form::generator(dim, i - 1);
    let phi1 = &e(1) + &e(2).scale(&Scalar::i());
    let phi2 = &e(3) + &e(4).scale(&Scalar::i());

    let a = &phi1 ^ &phi2;
    println!("phi1 ^ phi2        = {a}");
    println!("conjugate          = {}", a.conjugate());
    println!("phi1 ^ phibar1     = {}", &phi1 ^ &phi1.conjugate());

    let x = &e(1).scale(&q(3, 2)) + &e(3).scale(&qi(-1, 4));
    let y = &e(2) ^ &e(4);
    println!("x ^ y              = {}", &x ^ &y);
    println!("y ^ x (even, same) = {}", &y ^ &x);
}
