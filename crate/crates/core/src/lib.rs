//! Exact quandle homology and pseudo-cycles of colored triple-point data.
//!
//! The crate is organised bottom-up:
//!
//! * [`quandle`]: validated finite quandles,
//! * [`chain`]: sparse chains, rack and quandle boundaries, boundary matrices,
//! * [`linalg`]: Smith normal form and integer image membership,
//! * [`homology`]: quandle homology groups and null-homology of cycles,
//! * [`cocycle`]: `Z/m`-valued 3-cocycles and the Mochizuki family,
//! * [`pseudocycle`]: triple-point datasets, pseudo-cycle enumeration and
//!   maximum disjoint families.

pub mod chain;
pub mod cocycle;
pub mod homology;
pub mod linalg;
pub mod pseudocycle;
pub mod quandle;

pub use chain::{
    boundary_quandle, boundary_rack, matrix_of_boundary, project_quandle, Chain, ChainError,
    QuandleBasis, Tuple,
};
pub use cocycle::{
    cocycle_from_spec, mochizuki_theta, mochizuki_theta_p, Cocycle3, CocycleError,
    CocycleSpecError, CocycleViolation, MAX_MOCHIZUKI_PRIME,
};
pub use homology::{
    homology_group, is_null_homologous, HomologyContext, HomologyError, HomologyGroup,
};
pub use linalg::{snf, solve_in_image, IntMatrix, LinalgError, SmithDecomposition};
pub use pseudocycle::{
    chain_of, enumerate_pseudo_cycles, is_pseudo_cycle, max_disjoint_packing, DatasetError,
    Packing, PseudoCycleError, PseudoCycleFinder, PseudoCycleReport, Sign, TriplePoint,
    TriplePointDataset, DEFAULT_POINT_CAP,
};
pub use quandle::{
    quandles_up_to_isomorphism, Element, Quandle, QuandleError, QuandleSpec, MAX_ORDER,
};

pub use num_bigint::BigInt;
