//! Coproducts on K: the raw Hall coproduct and its normalised variants.

use qgl::convolution::{k_counit, Convolution, Coproduct, KElement};
use qgl::flaggeo::MatrixType;

fn main() -> qgl::Result<()> {
    let q = 2;
    let k = Convolution::new(q)?;
    let x = KElement::basis(MatrixType::new(vec![vec![1, 1], vec![0, 1]])?, q);
    for c in [Coproduct::Plain, Coproduct::Prime, Coproduct::Tilde] {
        println!("{c:?}:");
        for ((l, r), coeff) in k.k_comultiply(&x, c)?.terms() {
            println!("  {coeff} 1_{l:?} (x) 1_{r:?}");
        }
    }
    println!("counit = {}", k_counit(&x));
    Ok(())
}
