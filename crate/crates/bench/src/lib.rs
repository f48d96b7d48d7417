//! Fixtures shared by the criterion benches under `benches/`.

use pseudocycle_core::{Quandle, QuandleSpec, TriplePoint, TriplePointDataset};

pub const DPRIME_JSON: &str = include_str!("../../../data/yashiro_dprime.json");

pub fn dprime() -> TriplePointDataset {
    TriplePointDataset::from_json_str(DPRIME_JSON).expect("bundled dataset parses")
}

pub fn dihedral(n: usize) -> Quandle {
    Quandle::dihedral(n).expect("positive order")
}

/// `n` copies of the D' points with distinct ids, all over R_3.
pub fn repeated_dprime(copies: usize) -> TriplePointDataset {
    let base = dprime();
    let points = (0..copies)
        .flat_map(|k| {
            base.points()
                .iter()
                .map(move |p| TriplePoint::new(format!("{}_{k}", p.id), p.sign, p.colors))
        })
        .collect();
    TriplePointDataset::new(QuandleSpec::Dihedral { order: 3 }, points).expect("valid dataset")
}
