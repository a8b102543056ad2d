//! Exact integer ground truth: p(n), the crank statistic, crank tables
//! M(m,n), and residue-class counts M(a,c;n). Everything here is the oracle
//! the asymptotic layer is tested against.

mod partition;
mod series;
mod table;

pub use partition::{
    enumerate_partitions, partition_number, partition_numbers_upto, Partition, ENUMERATION_CAP,
};
pub use series::LaurentSeries;
pub use table::{
    crank_class_count, crank_coeff_exact, crank_table, verify_congruence, CongruenceReport,
    Convention, CrankTable,
};
