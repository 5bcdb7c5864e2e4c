//! Coproduct, counit and antipode on the localized FRT algebra.

use qgl::qalgebra::{antipode_generator, determinant, Kind, NCPoly, Tensor};
use qgl::scalar::Scalar;

fn show(t: &Tensor, n: usize) -> String {
    let word = |w: &qgl::qalgebra::Word| NCPoly::from_word(Kind::Frt, n, w.clone(), Scalar::one());
    t.terms()
        .map(|((l, r), c)| format!("({c}) {} (x) {}", word(l), word(r)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn main() -> qgl::Result<()> {
    let n = 2;
    let e12 = NCPoly::generator(Kind::Frt, n, 1, 2)?;
    println!("Delta(E12) = {}", show(&e12.comultiply(), n));
    println!("eps(E12)   = {}", e12.counit());

    let det = determinant(Kind::Frt, n);
    println!("Delta(det) = {}", show(&det.comultiply(), n));

    for i in 1..=n {
        for j in 1..=n {
            println!("S(E{i}{j}) = {}", antipode_generator(Kind::Frt, n, i, j)?);
        }
    }

    Ok(())
}
