//! Exact desk-scale computations: dense spectra, parity-split walk
//! distributions, and exponential-time optima. These are the ground truth
//! every tester and every lemma check is measured against. Exceeding a
//! brute-force limit is an error, never a silent approximation.

pub mod brute;
pub mod color;
pub mod matrix;
pub mod walkdp;

pub use brute::{
    dual_cheeger_2, exact_bipartiteness_ratio, exact_conductance_profile, exact_maxcut,
    exact_opt_e2lin, exact_opt_ulc, exact_rho, set_conductance,
};
pub use color::{exact_3colorable, sat_brute};
pub use matrix::{
    eigenvalues_symmetric, jacobi_eigen, normalized_laplacian, JacobiOutput, SpectralProfile,
    SymMatrix, DEFAULT_DENSE_LIMIT,
};
pub use walkdp::{exact_delta, exact_walk_distributions, signed_walk_vector, walk_norm_sq};
