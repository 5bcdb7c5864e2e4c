//! Laurent polynomials in `u = q^(1/4)` and their evaluation at a prime.

use qgl::scalar::{evaluate, quantum_binomial, quantum_int, Scalar};

fn main() -> qgl::Result<()> {
    let three = quantum_int(3);
    println!("[3]        = {three}");
    println!("[4 choose 2] = {}", quantum_binomial(4, 2)?);

    let v = Scalar::v();
    let x = &(&v - &v.bar()) * &three;
    println!("(v - v^-1)[3] = {x}");
    println!("bar           = {}", x.bar());
    println!("v -> v^2      = {}", x.square_parameter());

    for q in [2, 3, 5] {
        println!("at q = {q}: [3] = {}", evaluate(&three, q)?);
    }
    Ok(())
}
