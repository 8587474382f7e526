//! Shipped desk-scale instances used by tests, benches, and CLI demos.
//!
//! The running example is a three-party structure that no threshold scheme
//! captures: {2,3} is the only minimal authorized set, {1,2} and {3} are
//! the maximal forbidden sets, and {1,3} is deliberately in neither
//! family. The accompanying span program realizes it over F_3 with one
//! secret column, two randomness columns, and four rows (party 3 holds
//! two), for a share rate of exactly 1/4.

use crate::access::{AccessStructure, PartySet};
use crate::gf::{FieldMatrix, FieldModulus};
use crate::mmsp::Mmsp;
use crate::nss::LinearNss;
use crate::spir::{self, ProjectedLinearSpir};

/// The non-threshold three-party structure.
pub fn three_party_structure() -> AccessStructure {
    let set = |indices: &[usize]| PartySet::from_indices(indices, 3).unwrap();
    AccessStructure::new(3, vec![set(&[2, 3])], vec![set(&[1, 2]), set(&[3])])
        .unwrap()
}

/// The F_3 span program realizing [`three_party_structure`] at rate 1/4.
pub fn three_party_program() -> Mmsp {
    let q = FieldModulus::new(3).unwrap();
    let g = FieldMatrix::from_rows(
        q,
        &[vec![0, 1, 2], vec![1, 1, 1], vec![0, 1, 1], vec![1, 1, 0]],
    )
    .unwrap();
    Mmsp::new(g, 1, 2, 3, vec![1, 2, 3, 3]).unwrap()
}

/// The same program packaged as a secret-sharing scheme.
pub fn three_party_nss() -> LinearNss {
    LinearNss::from_program(three_party_program())
}

/// The same program split into a symmetric PIR protocol for f files.
pub fn three_party_spir(f: usize) -> ProjectedLinearSpir {
    spir::mmsp_to_spir(&three_party_program(), f).expect("sample program converts")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_instances_are_consistent() {
        let program = three_party_program();
        assert!(program.verify(&three_party_structure()).unwrap().is_valid());
        assert_eq!(three_party_nss().encoder(), program.matrix());
        assert_eq!(three_party_spir(2).file_count(), 2);
    }
}
