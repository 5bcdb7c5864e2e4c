//! The algebra maps from the quantum coordinate algebras into K.

use qgl::convolution::{Convolution, Model};
use qgl::qalgebra::{determinant, Kind, NCPoly};

fn main() -> qgl::Result<()> {
    let k = Convolution::new(2)?;
    let e11 = NCPoly::generator(Kind::Frt, 2, 1, 1)?;
    let e22 = NCPoly::generator(Kind::Frt, 2, 2, 2)?;
    let x = e22.multiply(&e11)?;
    for model in [Model::Phi, Model::Psi] {
        println!("{model:?}(E22 E11) = {}", k.embed_symbolic(&x, model)?);
    }

    let c12 = NCPoly::generator(Kind::Dd, 2, 1, 2)?;
    let c21 = NCPoly::generator(Kind::Dd, 2, 2, 1)?;
    let y = c12.multiply(&c21)?;
    for model in [Model::PsiPrime, Model::Xi] {
        println!("{model:?}(c12 c21) = {}", k.embed_symbolic(&y, model)?);
    }

    println!(
        "Psi(det) = {}",
        k.embed_symbolic(&determinant(Kind::Frt, 2), Model::Psi)?
    );
    Ok(())
}
