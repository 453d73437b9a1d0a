//! Spectral laboratory for balanced random Toeplitz and Hankel matrices.
//!
//! The crate simulates empirical spectral distributions of the four patterned
//! ensembles (Toeplitz, Hankel and their balanced versions), evaluates the
//! limiting moments through pair-matched word combinatorics and singular
//! integrals, and provides exact finite-n oracles and inequality checks to
//! cross-validate the two.
//!
//! Module map:
//!
//! - [`inputs`]: seeded input sequences and the truncation-standardization map
//! - [`matgen`]: ensemble construction, occurrence counts and principal submatrices
//! - [`spectra`]: symmetric eigensolver, moments, histograms, Lévy distance
//! - [`words`]: pair-matched words, generating vertices and linear forms
//! - [`limits`]: limiting, truncated and finite-n word moments
//! - [`verify`]: quick invariant suites used by the command-line front end

pub mod error;
pub mod inputs;
pub mod io;
pub mod limits;
pub mod matgen;
pub mod seed;
pub mod spectra;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use inputs::{generate_sequence, truncate_standardize, Dist, InputSequence};
pub use limits::{
    compare_empirical_limit, finite_n_word_moment, limit_moment, limit_word_moment,
    truncated_word_moment, Evaluator, LimitMoment, Method, MomentEstimate,
};
pub use matgen::{build_matrix, phi, principal_submatrix, Ensemble, LinkKind, PatternedMatrix};
pub use spectra::{
    eigenvalues_symmetric, hoffman_wielandt_gap, levy_distance, moment, pooled_histogram,
    EmpiricalDistribution, HistogramData, Spectrum,
};
pub use words::{
    enumerate_pair_matched_words, generating_vertices, is_symmetric, linear_forms, LinearForm,
    Word,
};
