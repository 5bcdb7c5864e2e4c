//! Pairs of partial flags over F_q and their GL-orbit types.

use qgl::flaggeo::{
    enumerate_flags, flag_count, CompositionType, FlagGeometry, FlagPair, MatrixType,
};

fn main() -> qgl::Result<()> {
    let q = 2;
    let t = CompositionType::new(vec![1, 2]);
    let flags = enumerate_flags(&t, q)?;
    println!(
        "flags of type {t:?} over F_{q}: {} (formula {})",
        flags.len(),
        flag_count(&t, q)
    );

    // count pairs (V, F) by orbit type
    let mut counts = std::collections::BTreeMap::<MatrixType, usize>::new();
    for v in &flags {
        for f in &flags {
            *counts
                .entry(FlagPair::new(v.clone(), f.clone())?.orbit_type())
                .or_default() += 1;
        }
    }
    let geo = FlagGeometry::new(q)?;
    for (m, c) in &counts {
        println!(
            "{m:?}: {c} pairs, orbit size {}, dim {}",
            geo.orbit_size(m)?,
            m.orbit_dim()
        );
    }
    Ok(())
}
