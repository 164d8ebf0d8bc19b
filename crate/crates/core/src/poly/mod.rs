//! Polynomial arithmetic over GF(p^k): dense univariate, sparse multivariate, and
//! univariate-over-multivariate for resultant elimination.

mod multi;
mod resultant;
mod uni;

pub use multi::{binary_form_root_count, Monomial, MultiPoly};
pub use resultant::{bareiss_determinant, sylvester_resultant, RingUniPoly};
pub use uni::{UniPoly, EXHAUSTIVE_ROOT_LIMIT};
