//! The four products on the convolution algebra K at n = 2.

use qgl::convolution::{Convolution, KElement, Product};
use qgl::flaggeo::MatrixType;

fn main() -> qgl::Result<()> {
    let q = 3;
    let k = Convolution::new(q)?;
    let e = |i, j| KElement::basis(MatrixType::unit(2, i, j), q);

    for p in [
        Product::Circ,
        Product::CircPrime,
        Product::Dot,
        Product::Bullet,
    ] {
        println!(
            "{p:?}: 1_e22 * 1_e11 = {}",
            k.k_multiply(&e(2, 2), &e(1, 1), p)?
        );
    }

    // divided powers: 1_e12 o 1_{2 e12} = [3] 1_{3 e12}
    let two = KElement::basis(MatrixType::cell(2, 1, 2, 2), q);
    println!(
        "1_e12 o 1_2e12 = {}",
        k.k_multiply(&e(1, 2), &two, Product::Circ)?
    );
    println!("{} enumerations", k.geometry().enumerations());
    Ok(())
}
