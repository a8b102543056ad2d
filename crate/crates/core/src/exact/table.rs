use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::util::pairwise_sum_f64;

use super::partition::{enumerate_partitions, partition_numbers_upto, Partition};
use super::series::LaurentSeries;

/// Which definition of M(m,n) a table carries. The q-series expansion of
/// C(x;q) and the combinatorial crank agree for every n except n = 1, where
/// the series row is (1, -1, 1) on m = (-1, 0, 1) while the single
/// partition (1) has crank -1. Aggregate APIs require the caller to pick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    GeneratingFunction,
    Combinatorial,
}

/// Exact crank coefficients M(m,n) for 0 <= n <= max_n, |m| <= max_n.
#[derive(Debug, Clone)]
pub struct CrankTable {
    max_n: usize,
    convention: Convention,
    series: LaurentSeries,
    /// p(0..=max_n), kept for row-sum checks and exact contractions
    partition_numbers: Vec<BigInt>,
}

impl CrankTable {
    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn coeff(&self, m: i64, n: usize) -> BigInt {
        self.series.coeff(m, n)
    }

    pub fn partition_number(&self, n: usize) -> &BigInt {
        &self.partition_numbers[n]
    }

    /// Columnar CSV rows (n, m, coeff), zero entries skipped.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,coeff\n");
        for n in 0..=self.max_n {
            for m in -(n as i64)..=n as i64 {
                let c = self.series.coeff_ref(m, n);
                if !c.is_zero() {
                    out.push_str(&format!("{n},{m},{c}\n"));
                }
            }
        }
        out
    }
}

/// Builds the table up to q^max_n in the requested convention.
pub fn crank_table(max_n: usize, convention: Convention) -> Result<CrankTable> {
    let partition_numbers = partition_numbers_upto(max_n as u64);
    let series = match convention {
        Convention::GeneratingFunction => {
            let mut s = LaurentSeries::one(max_n);
            for j in 1..=max_n {
                s.mul_geometric_inverse(1, j);
                s.mul_geometric_inverse(-1, j);
            }
            s.mul_euler_product();
            s
        }
        Convention::Combinatorial => {
            let mut s = LaurentSeries::one(max_n);
            for n in 1..=max_n {
                enumerate_partitions(n as u64, |parts| {
                    let lambda = Partition::new(parts.to_vec()).expect("parts are positive");
                    let c = lambda.crank().expect("nonempty");
                    s.add_to_coeff(c, n, 1);
                })?;
            }
            s
        }
    };
    Ok(CrankTable { max_n, convention, series, partition_numbers })
}

/// M(a,c;n): number of partitions of n with crank congruent to a mod c,
/// read off the table.
pub fn crank_class_count(a: i64, c: i64, n: usize, table: &CrankTable) -> Result<BigInt> {
    if c < 1 || c.is_even() {
        return Err(Error::domain(format!("class count needs odd c >= 1, got {c}")));
    }
    if a < 0 || a >= c {
        return Err(Error::domain(format!("residue must satisfy 0 <= a < c, got {a}")));
    }
    if n > table.max_n {
        return Err(Error::range(format!("n={n} exceeds table max_n={}", table.max_n)));
    }
    let mut acc = BigInt::zero();
    let mut m = a - c * ((n as i64 + a) / c + 1);
    while m <= n as i64 {
        if m >= -(n as i64) {
            acc += table.coeff(m, n);
        }
        m += c;
    }
    Ok(acc)
}

/// The exact coefficient A~(a/c;n) = sum_m M(m,n) cos(2*pi*a*m/c).
///
/// Computed from class counts as (1/c) * sum_res (c*M(res,c;n) - p(n)) *
/// cos(2*pi*a*res/c): the centered counts are small, so the float dot
/// product keeps full precision even when p(n) is astronomically large,
/// and congruence rows give exactly zero.
pub fn crank_coeff_exact(a: i64, c: i64, n: usize, table: &CrankTable) -> Result<f64> {
    if c < 1 || c.is_even() || a <= 0 || a >= c || a.gcd(&c) != 1 {
        return Err(Error::domain(format!(
            "crank_coeff_exact needs 0 < a < c coprime with c odd, got ({a},{c})"
        )));
    }
    if table.convention != Convention::GeneratingFunction {
        return Err(Error::domain(
            "crank_coeff_exact is defined on the generating-function convention",
        ));
    }
    if n > table.max_n {
        return Err(Error::range(format!("n={n} exceeds table max_n={}", table.max_n)));
    }
    let p_n = table.partition_numbers[n].clone();
    let mut terms = Vec::with_capacity(c as usize);
    for res in 0..c {
        let count = crank_class_count(res, c, n, table)?;
        let centered = count * c - &p_n;
        let centered_f = centered.to_f64().ok_or_else(|| {
            Error::capacity("centered class count exceeds f64 range".to_string())
        })?;
        let angle = 2.0 * std::f64::consts::PI * (((a * res) % c) as f64) / c as f64;
        terms.push(centered_f * angle.cos());
    }
    Ok(pairwise_sum_f64(&terms) / c as f64)
}

/// Result of checking one Ramanujan congruence family up to n_max.
#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub prime: i64,
    pub shift: i64,
    pub n_max: usize,
    pub arguments_checked: usize,
    pub divisibility_ok: bool,
    pub classes_equal: bool,
    pub failures: Vec<usize>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.divisibility_ok && self.classes_equal && self.failures.is_empty()
    }
}

/// Checks p(prime*n + shift) = 0 mod prime and that the prime crank classes
/// are exactly equal at those arguments, for all arguments <= n_max.
pub fn verify_congruence(
    prime: i64,
    shift: i64,
    n_max: usize,
    table: &CrankTable,
) -> Result<CongruenceReport> {
    if !matches!((prime, shift), (5, 4) | (7, 5) | (11, 6)) {
        return Err(Error::domain(format!(
            "congruence family must be one of (5,4),(7,5),(11,6), got ({prime},{shift})"
        )));
    }
    if n_max > table.max_n {
        return Err(Error::range(format!("n_max={n_max} exceeds table max_n={}", table.max_n)));
    }
    let mut report = CongruenceReport {
        prime,
        shift,
        n_max,
        arguments_checked: 0,
        divisibility_ok: true,
        classes_equal: true,
        failures: Vec::new(),
    };
    let mut arg = shift as usize;
    while arg <= n_max {
        report.arguments_checked += 1;
        let p_arg = &table.partition_numbers[arg];
        if !(p_arg % prime).is_zero() {
            report.divisibility_ok = false;
            report.failures.push(arg);
        }
        let first = crank_class_count(0, prime, arg, table)?;
        for a in 1..prime {
            if crank_class_count(a, prime, arg, table)? != first {
                report.classes_equal = false;
                report.failures.push(arg);
                break;
            }
        }
        arg += prime as usize;
    }
    report.failures.dedup();
    Ok(report)
}
