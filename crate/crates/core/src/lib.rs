//! Rank-one functional calculus, operator-norm enclosures and norm-equality
//! checkers on finite-dimensional normed spaces.

pub mod calculus;
pub mod error;
pub mod matrix;
pub mod opnorm;
pub mod properties;
pub mod rankone;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod spaces;

pub use calculus::{apply_calculus, oracle_truncated, EntireFunction, Named};
pub use error::{NelabError, Result};
pub use matrix::DenseMatrix;
pub use opnorm::{
    matrix_norm_oracle, norm_affine_rankone, norm_spread, spread_enclosures, NormConfig, NormEnclosure, NormSpread,
};
pub use properties::CheckOptions;
pub use rankone::{random_rankone, RankOne};
pub use report::{CheckReport, Verdict, Witness};
pub use scalar::{format_scalar, parse_scalar};
pub use spaces::{pair, real, ExtremePoints, Field, Functional, Scalar, SpaceDesc, Vector};
