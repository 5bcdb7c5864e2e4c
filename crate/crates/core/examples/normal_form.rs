//! PBW normal forms in the FRT and Dipper-Donkin algebras.

use qgl::qalgebra::{
    determinant, GeneratorIndex, Kind, NCPoly, Strategy, Word, DEFAULT_STEP_LIMIT,
};
use qgl::scalar::Scalar;

fn main() -> qgl::Result<()> {
    let w = Word(vec![GeneratorIndex::new(2, 2), GeneratorIndex::new(1, 1)]);
    for kind in [Kind::Frt, Kind::Dd] {
        let p = NCPoly::from_word(kind, 2, w.clone(), Scalar::one());
        let leftmost = p.normal_form_with(Strategy::Leftmost, DEFAULT_STEP_LIMIT)?;
        let random = p.normal_form_with(Strategy::Random(42), DEFAULT_STEP_LIMIT)?;
        assert_eq!(leftmost.result, random.result);
        println!(
            "{kind:?}: {p} = {} ({} steps)",
            leftmost.result, leftmost.steps
        );
    }

    let x = NCPoly::generator(Kind::Frt, 3, 1, 3)?;
    let y = NCPoly::generator(Kind::Frt, 3, 3, 1)?;
    println!(
        "E13 E31 - E31 E13 = {}",
        x.multiply(&y)?.sub(&y.multiply(&x)?)?
    );
    println!("det_3 = {}", determinant(Kind::Frt, 3));
    Ok(())
}
