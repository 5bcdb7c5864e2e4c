//! Twisting the Dipper-Donkin product by a bicharacter.

use qgl::qalgebra::{
    dd_relations, transported_dd_antipode, xi_transport, Bicharacter, Kind, NCPoly,
};

fn main() -> qgl::Result<()> {
    let n = 2;
    let psi = Bicharacter::frt_twist(n);
    println!("bicharacter form: {:?}", psi.form());

    for rel in dd_relations(n) {
        let image = xi_transport(&rel.poly, &psi)?;
        println!("{} -> {}", rel.poly, image.normal_form());
    }

    let c12 = NCPoly::generator(Kind::Dd, n, 1, 2)?;
    println!("Xi(c12) = {}", xi_transport(&c12, &psi)?);
    println!("transported S(c12) = {}", transported_dd_antipode(n, 1, 2)?);
    Ok(())
}
