//! Frobenius-eigenvalue statistics over finite fields.
//!
//! The crate computes exact point counts and character sums, symmetric-power
//! Frobenius traces on the Legendre family, hyper-Kloosterman local classes,
//! and the measures on the circle that their normalized eigenvalues
//! equidistribute toward.

use serde::{Deserialize, Serialize};

pub mod arith;
pub mod circle_measures;
pub mod error;
pub mod kloosterman;
pub mod legendre;
pub mod ffield;
pub mod local_data;
pub mod numeric;
pub mod repthy;

pub use circle_measures::{CircleMultiset, DecayFit, Density, MomentSequence, Support};
pub use error::{Error, ErrorClass, Result};
pub use ffield::{ClosedPoint, Elem, Embedding, FieldConfig, FieldTower};

/// Sign attached to the limiting moments.
///
/// `Lefschetz` is the sign produced by the trace formula (trace of Frobenius
/// on compactly supported cohomology with the alternating sign). `Printed`
/// is its negation, kept for comparison with published tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    #[default]
    Lefschetz,
    Printed,
}

impl SignConvention {
    pub fn factor(self) -> f64 {
        match self {
            SignConvention::Lefschetz => -1.0,
            SignConvention::Printed => 1.0,
        }
    }
}
