//! Exact and asymptotic machinery for the crank statistic of integer
//! partitions: exact tables M(m,n), modular transformation data, the
//! circle-method expansion of the crank generating function, and certified
//! error budgets for the resulting inequalities.

pub mod asym;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod modular;
pub mod special;
pub mod sums;
pub mod util;

pub use error::{Error, Result};
