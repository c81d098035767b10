//! Fixtures shared by the benchmarks.

use closedgeo::algebra::AlgebraPresentation;
use closedgeo::catalog::{lookup, CatalogBounds};
use closedgeo::spectral::E2Algebra;
use closedgeo::Prime;

/// Mod-p cohomology and loop homology of a catalog space.
pub fn catalog_pair(name: &str, p: u64) -> (AlgebraPresentation, AlgebraPresentation, u32) {
    let r = lookup(name, CatalogBounds::default()).expect("catalog name");
    let d = &r.mod_p[&Prime::new(p).expect("prime")];
    (
        d.cohomology.clone().expect("cohomology"),
        d.loop_homology.clone().expect("loop homology"),
        r.dimension.expect("dimension"),
    )
}

/// `E_2` for the sphere bundle `Q(4,e)` at a prime dividing `e`.
pub fn q4_e2(p: u64, truncation: u32) -> E2Algebra {
    let name = if p == 2 { "Q(4,2)" } else { "Q(4,3)" };
    let (h, l, n) = catalog_pair(name, p);
    E2Algebra::new(&h, &l, n, truncation, true).expect("valid fixture")
}
