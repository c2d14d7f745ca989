pub mod automaton;
pub mod ball;
pub mod bundled;
pub mod config;
pub mod error;
pub mod fellow;
pub mod growth;
pub mod oracle;
pub mod rewriting;
pub mod run;
pub mod scalar;
pub mod words;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type Series = growth::RationalSeries<Rational>;
pub type Poly = growth::Polynomial<Rational>;
pub type Matrices = growth::TransitionMatrices<Rational>;
