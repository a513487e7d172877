//! Two-dimensional Walsh-Fourier analysis on the dyadic group at finite
//! resolution.
//!
//! Functions live on the 4^N cells of resolution N; all operators below are
//! exact on that space, so every identity can be checked to rounding (or
//! exactly, in the rational paths). The crate provides:
//!
//! - the dyadic group model ([`point`]), fast Walsh transforms and partial
//!   sums ([`transform`]), and conditional-expectation pyramids ([`pyramid`]);
//! - exact verification of the dyadic Dirichlet identity and the three-term
//!   kernel representation ([`identities`]);
//! - the maximal operators of the pointwise estimate: square, hybrid, and
//!   diagonal averages ([`maximal`]) and the hybrid square functions
//!   ([`vop`]);
//! - diagonal partial sums via an O(4^N)-per-step sweep, the strong means
//!   built from them, and convergence measurements ([`strong`]);
//! - the duality pairing, the nine-term kernel decomposition with an exact
//!   rational replay, the main-estimate ratio scan, and weak-type constant
//!   measurement ([`lab`]);
//! - a reproducible function corpus ([`corpus`]) and deterministic CSV/JSON
//!   reporting ([`report`]).
//!
//! All floating-point reductions use fixed-shape pairwise summation and all
//! parallel loops are order-preserving, so results are byte-identical across
//! thread counts.

pub mod corpus;
pub mod error;
pub mod grid;
pub mod identities;
pub mod lab;
pub mod maximal;
pub mod numeric;
pub mod point;
pub mod pyramid;
pub mod report;
pub mod spectrum;
pub mod strong;
pub mod transform;
pub mod vop;

pub use corpus::{standard_corpus, FunctionSpec};
pub use error::{Error, Result};
pub use grid::{Axis, Grid1, Grid2};
pub use identities::{verify_dyadic_dirichlet, verify_schipp_identity, IdentityReport};
pub use lab::{
    bilinear_form, default_lambda_grid, duality_check, j_terms, j_terms_exact, mainest_ratio,
    weak_type_constant, DualCoefficients, JBreakdown, JBreakdownExact, WeakTypeOperator,
    WeakTypeReport,
};
pub use maximal::{
    diagonal_average, diagonal_maximal, dyadic_maximal, dyadic_maximal_abs, hybrid_maximal, shear,
};
pub use point::{rademacher, walsh_value, DyadicPoint, MAX_RESOLUTION};
pub use report::{Cell, ExperimentReport};
pub use spectrum::{Spectrum1, Spectrum2};
pub use strong::{
    centered_strong_mean, convergence_report, diagonal_sweep, for_each_diagonal_partial_sum,
    marcinkiewicz_mean, maximal_strong, phi_strong_mean, phi_strong_mean_1d, strong_mean,
    DiagonalSweep, PhiSpec,
};
pub use transform::{
    dirichlet_kernel, fwht_forward, fwht_forward_2d, fwht_inverse, fwht_inverse_2d,
    marginal_partial_sum, partial_sum_1d, partial_sum_rect,
};
pub use vop::{v_hybrid, v_hybrid_sup, v_n, v_profile, v_sup, VProfile};
