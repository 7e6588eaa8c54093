//! Product specifications, inflection counting, the parameter conditions for sharp
//! complete-graph powers and the inductive construction search.

pub mod bounds;
pub mod construction;
pub mod inflect;
pub mod logderiv;
pub mod sample;
pub mod spec;
pub mod sprops;
pub mod theorem;

pub use construction::{construction_search, ConstructionState, SearchBudget};
pub use inflect::{count_inflections, inflection_summary, InflectionSummary};
pub use logderiv::{log_derivatives_at, log_second_derivative_numerator, product_reliability};
pub use sample::{sample_csv, sample_rows, sign_alternations, SampleRow, DEFAULT_SAMPLE_DIGITS};
pub use spec::{parse_spec, render_spec, ProductSpec};
pub use sprops::{verify_s_properties, SPropertiesReport};
pub use theorem::{find_theorem_params, theorem_conditions, theorem_f_g, TheoremConditions, TheoremParams};
