//! Exact univariate polynomial algebra over the rationals.

pub mod json;
pub mod polynomial;
pub mod rational;
pub mod spanning;
pub mod sturm;

pub use polynomial::{Polynomial, DEFAULT_DEGREE_CEILING};
pub use rational::{parse_rational, render_rational, Rational};
pub use spanning::{from_spanning_form, spanning_derivative, to_spanning_form, SpanningForm};
pub use sturm::{count_sign_changes, squarefree_part, sturm_distinct_roots, InflectionReport, SturmChain};
