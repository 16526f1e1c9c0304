//! Fixtures shared by the benchmarks.

use npw_core::{build_utility_basis, compute_structure_constants, HermitianBasis, StructureConstants};

pub fn utility(n: usize) -> (HermitianBasis, StructureConstants) {
    let basis = build_utility_basis(n).expect("n >= 1");
    let sc = compute_structure_constants(&basis, 1e-10).expect("utility basis is orthonormal");
    (basis, sc)
}
