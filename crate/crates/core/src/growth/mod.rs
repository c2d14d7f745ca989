//! Exact growth series from the Markov combing of an fftp automaton.

pub mod markov;
pub mod poly;
pub mod rate;
pub mod series;

pub use markov::{
    coset_series, coset_weights, embedding_series, embedding_shifts, geodesic_series, prefix_length,
    required_radius, validate_combing, vertex_series, Check, CombingReport, SeriesPair, TransitionMatrices,
};
pub use poly::Polynomial;
pub use rate::{growth_rate, growth_rate_of, spectral_rate, GrowthRate};
pub use series::{berlekamp_massey, common_denominator, series_from_sequence, RationalSeries};
