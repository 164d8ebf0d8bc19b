//! Exact algebra for A1-curves on the complement of the degree-p strange curve
//! `sigma(x0, x1) - x2^p = 0` in characteristic p.

pub mod certificate;
pub mod curves;
pub mod dp;
pub mod error;
pub mod experiments;
pub mod field;
pub mod poly;
pub mod strange;

pub use certificate::Certificate;
pub use curves::{BuiltCurve, CurveParams, XCoords};
pub use dp::{CuspData, FamilySpec, FiberParams};
pub use error::{Error, Result};
pub use field::{Fe, FieldElement, GaloisField};
pub use poly::{MultiPoly, RingUniPoly, UniPoly};
pub use strange::{BoundarySpec, SigmaMode, StrangePoint};
