//! Tripartite Bell-type functionals built from the l1-norm of coherence, the
//! relative entropy of coherence and Wigner–Yanase skew information, evaluated
//! exactly on three-qubit density matrices.

pub mod bell;
pub mod error;
pub mod matcore;
pub mod measures;
pub mod quantum;
pub mod verify;

pub use bell::{
    bell_l1, bell_rel_ent, bell_skew, evaluate, evaluate_all, evaluate_family, example1_settings,
    example2_settings, mabk, optimize_settings, product_bound, threshold_bisect, BellReport,
    BellSettings, Family, FamilyCurve, FunctionalKind, Optimized, PreparedState,
};
pub use error::{Error, Result};
pub use matcore::ComplexMatrix;
pub use quantum::{Basis, DensityMatrix, Ket, Observable, ProductBasis};
