//! Exact arithmetic over a real closed valued field model (truncated Puiseux
//! series over the rationals) with integrality oracles and sum-of-squares
//! non-negativity certificates.

pub mod certificates;
pub mod error;
pub mod field;
pub mod integrality;
pub mod json;
pub mod poly;
pub mod sample;
pub mod sos;
pub mod syntax;

pub use error::{Error, Result};
pub use field::{FieldElement, Rational, Value};
pub use integrality::{AffineModuleMap, IntegralityVerdict, SetDescriptor};
pub use poly::{ConeExpr, Polynomial, RationalFunction, RingExpr, SosExpr, TElement};
pub use sample::{sample_ball, SampleConfig};
